"""Masked-prediction training data from statement corpora.

Two families of tasks are generated, both framed as sequence-to-sequence
examples whose target is wrapped in ``<START>`` ... ``<END>``:

* skip-tree: one subtree of the statement body is replaced by ``<PREDICT>``
  and becomes the target; up to k further subtrees are hidden behind
  ``<MASK>`` (every structurally equal occurrence of them is hidden, and
  they are not predicted).  The predicted subtree is drawn either uniformly
  over subtrees or weighted by token count.
* skip-sequence: a contiguous token span of the body is replaced by
  ``<PREDICT>`` regardless of tree structure, with optional caps on the span
  length (50 / 100 tokens for the short / medium variants).

Sampling is deterministic: every statement gets its own generator stream
keyed by (seed, statement index), so worker parallelism cannot change the
output.  Predicted subtrees are sampled without replacement within a
statement; a statement with fewer distinct subtrees than requested samples
simply yields each subtree at most once.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from enum import Enum
from multiprocessing import Pool
from typing import Iterable, Iterator, NamedTuple, Sequence

from .sexpr import (
    END,
    MASK,
    PREDICT,
    START,
    Atom,
    Path,
    Split,
    Statement,
    token_spans,
    tokens_of,
)


class Exhausted(Exception):
    """No unused predict candidate remains for this statement."""


class GenMode(Enum):
    SKIP_TREE_UNIFORM = "skip-tree-uniform"
    SKIP_TREE_WEIGHTED = "skip-tree-weighted"
    SKIP_SEQ_SHORT = "skip-seq-short"
    SKIP_SEQ_MEDIUM = "skip-seq-medium"
    SKIP_SEQ_LONG = "skip-seq-long"

    @property
    def is_skip_tree(self) -> bool:
        return self in (GenMode.SKIP_TREE_UNIFORM, GenMode.SKIP_TREE_WEIGHTED)


#: Maximum distance between the two sampled positions, per skip-sequence mode.
SPAN_LIMITS = {
    GenMode.SKIP_SEQ_SHORT: 50,
    GenMode.SKIP_SEQ_MEDIUM: 100,
    GenMode.SKIP_SEQ_LONG: None,
}


@dataclass(frozen=True)
class GenConfig:
    """Knobs of one generation run.

    mask_count=0 gives the no-mask ablation; samples_per_statement=20 the
    small one. Skip-sequence modes ignore mask_count.
    """

    mode: GenMode
    mask_count: int = 2
    samples_per_statement: int = 100
    max_input_tokens: int = 1024
    max_output_tokens: int = 512
    seed: int = 0


@dataclass(frozen=True)
class MaskedExample:
    input: tuple[str, ...]
    target: tuple[str, ...]
    source_id: str
    sample_index: int
    # Provenance for checkers; not part of the on-disk record.
    predict_path: Path = ()
    mask_draw_paths: tuple[Path, ...] = ()
    mask_paths: tuple[Path, ...] = ()


@dataclass
class DatasetStats:
    """Shape statistics of the emitted examples, counted before any padding."""

    example_count: int = 0
    input_token_total: int = 0
    output_token_total: int = 0

    def add(self, example: MaskedExample) -> None:
        self.example_count += 1
        self.input_token_total += len(example.input)
        self.output_token_total += len(example.target)

    @property
    def mean_input_len(self) -> float | None:
        return self.input_token_total / self.example_count if self.example_count else None

    @property
    def mean_output_len(self) -> float | None:
        return self.output_token_total / self.example_count if self.example_count else None

    def as_dict(self) -> dict:
        return {
            "example_count": self.example_count,
            "input_token_total": self.input_token_total,
            "output_token_total": self.output_token_total,
            "mean_input_len": self.mean_input_len,
            "mean_output_len": self.mean_output_len,
        }


@dataclass
class GenCounters:
    statements_used: int = 0
    statements_skipped: int = 0
    dropped_target_too_long: int = 0
    dropped_predict_truncated: int = 0

    def merge(self, other: "GenCounters") -> None:
        self.statements_used += other.statements_used
        self.statements_skipped += other.statements_skipped
        self.dropped_target_too_long += other.dropped_target_too_long
        self.dropped_predict_truncated += other.dropped_predict_truncated


class Candidate(NamedTuple):
    path: Path
    span: tuple[int, int]
    weight: int  # token count of the subtree


def substream(seed: int, index: int) -> random.Random:
    """Independent deterministic stream for statement ``index`` under ``seed``."""
    return random.Random(f"{seed}:{index}".encode("ascii"))


def paths_overlap(a: Path, b: Path) -> bool:
    """True when one path is the other or an ancestor of it."""
    shorter, longer = (a, b) if len(a) <= len(b) else (b, a)
    return longer[: len(shorter)] == shorter


class StatementPlan:
    """Per-statement precomputation shared by all samples drawn from it.

    Token spans let masking work by token splicing instead of tree rewrites,
    and the occurrence table groups body nodes by their serialized form so
    the all-occurrences rule is a lookup.
    """

    def __init__(self, stmt: Statement) -> None:
        self.statement = stmt
        sexpr = stmt.sexpr()
        self.tokens: tuple[str, ...] = tuple(tokens_of(sexpr))
        self.spans = token_spans(sexpr)
        self.body_span = self.spans[(1,)]
        body_is_atom = self.body_span[1] - self.body_span[0] == 1
        self.candidates: list[Candidate] = []
        self.occurrences: dict[tuple[str, ...], list[Candidate]] = {}
        for path, span in sorted(self.spans.items(), key=lambda item: (item[1][0], -item[1][1])):
            # Proper subtrees of the body; the lone exception is an atom-only
            # body, which is its own single candidate.
            if len(path) < 2 and not (body_is_atom and path == (1,)):
                continue
            cand = Candidate(path, span, span[1] - span[0])
            self.candidates.append(cand)
            self.occurrences.setdefault(self.tokens[span[0] : span[1]], []).append(cand)

    def subtree_tokens(self, cand: Candidate) -> tuple[str, ...]:
        return self.tokens[cand.span[0] : cand.span[1]]


def sample_predict(
    candidates: Sequence[Candidate],
    mode: GenMode,
    rng: random.Random,
    already_used: set[Path],
) -> Candidate:
    """Draw the subtree to predict; adds its path to ``already_used``."""
    unused = [c for c in candidates if c.path not in already_used]
    if not unused:
        raise Exhausted("all predict candidates already sampled")
    if mode is GenMode.SKIP_TREE_WEIGHTED:
        choice = rng.choices(unused, weights=[c.weight for c in unused])[0]
    else:
        choice = unused[rng.randrange(len(unused))]
    already_used.add(choice.path)
    return choice


def draw_mask_candidates(
    candidates: Sequence[Candidate], k: int, rng: random.Random
) -> list[Candidate]:
    """k distinct uniform draws (fewer when the statement is small)."""
    if k <= 0:
        return []
    return rng.sample(list(candidates), min(k, len(candidates)))


def resolve_mask_overlaps(draws: Iterable[Candidate], predict_path: Path) -> list[Candidate]:
    """Apply the precedence rules to raw mask draws.

    The predict subtree wins every conflict, so draws overlapping it are
    discarded outright. Survivors are ordered by decreasing token count and
    kept greedily, dropping any that overlaps an already kept one.
    """
    survivors = [c for c in draws if not paths_overlap(c.path, predict_path)]
    survivors.sort(key=lambda c: (-c.weight, c.path))
    kept: list[Candidate] = []
    for cand in survivors:
        if all(not paths_overlap(cand.path, k.path) for k in kept):
            kept.append(cand)
    return kept


def sample_masks(
    candidates: Sequence[Candidate], k: int, predict_path: Path, rng: random.Random
) -> list[Candidate]:
    """Draw k mask candidates and resolve overlaps; may return fewer than k."""
    return resolve_mask_overlaps(draw_mask_candidates(candidates, k, rng), predict_path)


def _splice(
    tokens: Sequence[str], replacements: list[tuple[tuple[int, int], str]]
) -> tuple[str, ...]:
    out: list[str] = []
    pos = 0
    for (start, end), text in sorted(replacements):
        out.extend(tokens[pos:start])
        out.append(text)
        pos = end
    out.extend(tokens[pos:])
    return tuple(out)


def apply_masking(
    plan: StatementPlan,
    predict: Candidate,
    masks: Sequence[Candidate],
    cfg: GenConfig,
    sample_index: int,
    draws: Sequence[Candidate] = (),
    counters: GenCounters | None = None,
) -> MaskedExample | None:
    """Build one skip-tree example, or None when a length limit drops it.

    Masking replaces *all occurrences* of each masked subtree, resolved
    outer-first: an occurrence is skipped when it lies inside (or contains)
    a region that was already replaced, including the predict hole.
    """
    replaced: list[tuple[tuple[int, int], str]] = [(predict.span, PREDICT)]
    applied: list[Path] = [predict.path]
    mask_paths: list[Path] = []
    for mask in masks:
        for occ in plan.occurrences[plan.subtree_tokens(mask)]:
            if any(paths_overlap(occ.path, p) for p in applied):
                continue
            applied.append(occ.path)
            mask_paths.append(occ.path)
            replaced.append((occ.span, MASK))
    target = (START,) + plan.subtree_tokens(predict) + (END,)
    if len(target) > cfg.max_output_tokens:
        if counters:
            counters.dropped_target_too_long += 1
        return None
    input_tokens = _splice(plan.tokens, replaced)
    if len(input_tokens) > cfg.max_input_tokens:
        input_tokens = input_tokens[: cfg.max_input_tokens]
        if PREDICT not in input_tokens:
            if counters:
                counters.dropped_predict_truncated += 1
            return None
    return MaskedExample(
        input=input_tokens,
        target=target,
        source_id=plan.statement.source_id,
        sample_index=sample_index,
        predict_path=predict.path,
        mask_draw_paths=tuple(d.path for d in draws),
        mask_paths=tuple(mask_paths),
    )


def generate_skip_sequence(
    plan: StatementPlan,
    mode: GenMode,
    rng: random.Random,
    cfg: GenConfig,
    sample_index: int,
    counters: GenCounters | None = None,
) -> MaskedExample | None:
    """One skip-sequence example: a nonempty token span becomes the target.

    Two positions are drawn uniformly over the body's token boundaries and
    redrawn until they are distinct (and within the mode's distance limit);
    the span between them need not be a balanced expression.
    """
    limit = SPAN_LIMITS[mode]
    body_start, body_end = plan.body_span
    length = body_end - body_start
    while True:
        p = rng.randint(0, length)
        q = rng.randint(0, length)
        if p == q:
            continue
        if limit is not None and abs(p - q) > limit:
            continue
        break
    lo, hi = min(p, q) + body_start, max(p, q) + body_start
    target = (START,) + plan.tokens[lo:hi] + (END,)
    if len(target) > cfg.max_output_tokens:
        if counters:
            counters.dropped_target_too_long += 1
        return None
    input_tokens = plan.tokens[:lo] + (PREDICT,) + plan.tokens[hi:]
    if len(input_tokens) > cfg.max_input_tokens:
        input_tokens = input_tokens[: cfg.max_input_tokens]
        if PREDICT not in input_tokens:
            if counters:
                counters.dropped_predict_truncated += 1
            return None
    return MaskedExample(
        input=input_tokens,
        target=target,
        source_id=plan.statement.source_id,
        sample_index=sample_index,
    )


def statement_examples(
    stmt: Statement, index: int, cfg: GenConfig
) -> tuple[list[MaskedExample], GenCounters]:
    """All examples drawn from one statement under its private stream."""
    rng = substream(cfg.seed, index)
    counters = GenCounters()
    plan = StatementPlan(stmt)
    examples: list[MaskedExample] = []
    if cfg.mode.is_skip_tree:
        used: set[Path] = set()
        for sample_index in range(cfg.samples_per_statement):
            try:
                predict = sample_predict(plan.candidates, cfg.mode, rng, used)
            except Exhausted:
                break
            draws = draw_mask_candidates(plan.candidates, cfg.mask_count, rng)
            masks = resolve_mask_overlaps(draws, predict.path)
            example = apply_masking(plan, predict, masks, cfg, sample_index, draws, counters)
            if example is not None:
                examples.append(example)
    else:
        for sample_index in range(cfg.samples_per_statement):
            example = generate_skip_sequence(plan, cfg.mode, rng, cfg, sample_index, counters)
            if example is not None:
                examples.append(example)
    counters.statements_used += 1
    return examples, counters


def _worker(job: tuple[int, Statement, GenConfig]) -> tuple[list[MaskedExample], GenCounters]:
    index, stmt, cfg = job
    return statement_examples(stmt, index, cfg)


def iter_batches(
    statements: Iterable[Statement], cfg: GenConfig, workers: int = 1
) -> Iterator[tuple[list[MaskedExample], GenCounters]]:
    """Per-statement example batches, in statement order regardless of workers.

    Only TRAIN statements are consumed; anything else is counted as skipped.
    Statement streams are keyed by position among the train statements, so
    the output is a pure function of (corpus order, config).
    """
    train = [s for s in statements if s.split is Split.TRAIN]
    jobs = [(i, stmt, cfg) for i, stmt in enumerate(train)]
    if workers <= 1:
        for job in jobs:
            yield _worker(job)
    else:
        with Pool(processes=workers) as pool:
            yield from pool.imap(_worker, jobs, chunksize=8)


def generate(
    statements: Sequence[Statement], cfg: GenConfig, workers: int = 1
) -> tuple[list[MaskedExample], DatasetStats, GenCounters]:
    """Generate the full dataset eagerly. Convenience wrapper over iter_batches."""
    stats = DatasetStats()
    counters = GenCounters()
    counters.statements_skipped = sum(1 for s in statements if s.split is not Split.TRAIN)
    examples: list[MaskedExample] = []
    for batch, batch_counters in iter_batches(statements, cfg, workers):
        counters.merge(batch_counters)
        for example in batch:
            stats.add(example)
            examples.append(example)
    return examples, stats, counters


def dataset_record(example: MaskedExample) -> dict:
    return {
        "format_version": 1,
        "source_id": example.source_id,
        "sample_index": example.sample_index,
        "input": list(example.input),
        "target": list(example.target),
    }
