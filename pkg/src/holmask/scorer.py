"""Scoring of beam-search predictions: exact match, parse, typecheck, novelty.

Exact match is whole-sequence token equality against the ground truth: a
single wrong token invalidates a formal statement, so there is no partial
credit. Parse and typecheck rates are fractions over (task, beam) pairs of
reconstructed statements: the prediction is spliced into the *unmasked*
source at the prompt site, because whether a completion holds is a property
of the real statement, not of the masked prompt.

Novelty asks whether a prediction is genuinely new: it must differ from the
ground truth and from everything in a training-corpus index of
alpha-normalized expressions. The index stores whole statements and, by
default, every subexpression of every training statement; a coarser
statements-only granularity is available behind a flag since the right
deduplication grain is a judgment call.
"""

from __future__ import annotations

import io
import os
import struct
import tempfile
from dataclasses import dataclass
from pathlib import Path as FsPath
from typing import Iterable, Mapping, Sequence

from .evaltasks import EvalTask
from .sexpr import (
    END,
    PREDICT,
    START,
    CorpusError,
    ParseError,
    SExpr,
    Statement,
    parse_token_strings,
    statement_from_sexpr,
    subexpressions,
    token_spans,
    tokens_of,
)
from .typecheck import (
    Abs,
    App,
    ArityTable,
    Const,
    Term,
    TypecheckError,
    Var,
    parse_term,
    term_sexpr,
    well_typed,
)


class MissingGroundTruth(Exception):
    pass


class AlignmentError(Exception):
    """Task ids and beam ids do not line up one-to-one."""


class ReconstructError(Exception):
    pass


def strip_frame(pred: Sequence[str]) -> tuple[str, ...]:
    """Drop one leading ``<START>`` and one trailing ``<END>`` if present."""
    tokens = tuple(pred)
    if tokens and tokens[0] == START:
        tokens = tokens[1:]
    if tokens and tokens[-1] == END:
        tokens = tokens[:-1]
    return tokens


def exact_match(task: EvalTask, beams: Sequence[Sequence[str]], k: int) -> bool:
    """True when any of the first k stripped beams equals the ground truth."""
    if task.ground_truth is None:
        raise MissingGroundTruth(f"task {task.task_id} has no ground truth")
    truth = tuple(task.ground_truth)
    return any(strip_frame(beam) == truth for beam in beams[:k])


def _prompt_frame(task: EvalTask) -> tuple[str, ...]:
    """The unmasked prompt: source tokens with the site replaced by <PREDICT>."""
    if task.source is None:
        return tuple(task.input)
    sexpr = parse_token_strings(task.source)
    start, end = token_spans(sexpr)[task.site_path]
    tokens = tuple(task.source)
    return tokens[:start] + (PREDICT,) + tokens[end:]


def reconstruct(task: EvalTask, pred: Sequence[str]) -> Statement:
    """Splice a stripped prediction into the unmasked source and reparse."""
    frame = _prompt_frame(task)
    hole = frame.index(PREDICT)
    spliced = frame[:hole] + strip_frame(pred) + frame[hole + 1 :]
    try:
        sexpr = parse_token_strings(spliced)
        return statement_from_sexpr(sexpr, source_id=task.source_id)
    except (ParseError, CorpusError) as exc:
        raise ReconstructError(str(exc)) from exc


def try_reconstruct(task: EvalTask, pred: Sequence[str]) -> Statement | None:
    try:
        return reconstruct(task, pred)
    except ReconstructError:
        return None


def typecheck_rate(tasks: Sequence[EvalTask], beams: Mapping[str, Sequence[Sequence[str]]]) -> float:
    """Fraction of (task, beam) pairs whose reconstruction typechecks."""
    total = 0
    good = 0
    for task in tasks:
        for beam in beams.get(task.task_id, []):
            total += 1
            stmt = try_reconstruct(task, beam)
            if stmt is not None and well_typed(stmt, ArityTable()):
                good += 1
    return good / total if total else 0.0


def _free_variable_names(term: Term) -> set[str]:
    names: set[str] = set()

    def walk(t: Term, bound: frozenset[tuple[str, object]]) -> None:
        if isinstance(t, Var):
            if (t.name, t.ty) not in bound:
                names.add(t.name)
        elif isinstance(t, App):
            walk(t.fn, bound)
            walk(t.arg, bound)
        elif isinstance(t, Abs):
            walk(t.body, bound | {(t.binder.name, t.binder.ty)})

    walk(term, frozenset())
    return names


def alpha_normalize(term: Term) -> Term:
    """Rename bound variables to b0, b1, ... in binder preorder.

    Free variables are untouched; canonical names that would collide with a
    free variable name are skipped, so alpha-equivalent terms (which share
    their free variables) still normalize identically. Idempotent.
    """
    free = _free_variable_names(term)
    counter = iter(range(10**9))

    def next_name() -> str:
        while True:
            name = f"b{next(counter)}"
            if name not in free:
                return name

    def walk(t: Term, env: dict[tuple[str, object], str]) -> Term:
        if isinstance(t, Var):
            new = env.get((t.name, t.ty))
            return Var(t.ty, new) if new is not None else t
        if isinstance(t, Const):
            return t
        if isinstance(t, App):
            return App(walk(t.fn, env), walk(t.arg, env))
        if isinstance(t, Abs):
            name = next_name()
            inner = dict(env)
            inner[(t.binder.name, t.binder.ty)] = name
            return Abs(Var(t.binder.ty, name), walk(t.body, inner))
        raise TypecheckError("cannot normalize a masked term")

    return walk(term, {})


def normalize_key(e: SExpr) -> str:
    """Canonical text used for index membership.

    Subtrees that read as terms are alpha-normalized and reprinted (which
    also canonicalizes type surface syntax); anything else (types, bare
    atoms) is compared by its canonical serialization.
    """
    try:
        term = parse_term(e, ArityTable())
    except TypecheckError:
        return " ".join(tokens_of(e))
    return " ".join(tokens_of(term_sexpr(alpha_normalize(term))))


_INDEX_MAGIC = b"HMIX"
_INDEX_VERSION = 1


@dataclass(frozen=True)
class CorpusIndex:
    """Alpha-normalized expressions a model saw during training.

    ``statements`` holds the normalized body of every training statement;
    ``expressions`` every subexpression of those bodies (empty under the
    statements-only granularity). Built exclusively from the TRAIN split.
    """

    statements: frozenset[str]
    expressions: frozenset[str]
    granularity: str = "expressions"

    @classmethod
    def build(
        cls, statements: Iterable[Statement], granularity: str = "expressions"
    ) -> "CorpusIndex":
        if granularity not in ("expressions", "statements"):
            raise ValueError(f"unknown granularity {granularity!r}")
        stmt_keys: set[str] = set()
        expr_keys: set[str] = set()
        for stmt in statements:
            if stmt.split is not None and stmt.split.value != "train":
                continue
            stmt_keys.add(normalize_key(stmt.body))
            if granularity == "expressions":
                for _, node in subexpressions(stmt.body):
                    expr_keys.add(normalize_key(node))
        return cls(frozenset(stmt_keys), frozenset(expr_keys), granularity)

    def seen_statement(self, key: str) -> bool:
        return key in self.statements

    def seen_expression(self, key: str) -> bool:
        return key in self.expressions or key in self.statements

    def save(self, path: str | FsPath) -> None:
        buf = io.BytesIO()
        buf.write(_INDEX_MAGIC)
        buf.write(struct.pack("<I", _INDEX_VERSION))
        buf.write(struct.pack("<B", 1 if self.granularity == "expressions" else 0))
        for section in (self.statements, self.expressions):
            entries = sorted(section)
            buf.write(struct.pack("<I", len(entries)))
            for entry in entries:
                raw = entry.encode("utf-8")
                buf.write(struct.pack("<I", len(raw)))
                buf.write(raw)
        # Same temp-then-rename discipline as every other output file.
        path = FsPath(path)
        fd, tmp = tempfile.mkstemp(dir=path.parent or FsPath("."), prefix=f".{path.name}.")
        try:
            with os.fdopen(fd, "wb") as handle:
                handle.write(buf.getvalue())
            os.replace(tmp, path)
        except BaseException:
            if os.path.exists(tmp):
                os.unlink(tmp)
            raise

    @classmethod
    def load(cls, path: str | FsPath) -> "CorpusIndex":
        raw = FsPath(path).read_bytes()
        buf = io.BytesIO(raw)
        if buf.read(4) != _INDEX_MAGIC:
            raise ValueError(f"{path}: not a corpus index file")
        (version,) = struct.unpack("<I", buf.read(4))
        if version != _INDEX_VERSION:
            raise ValueError(f"{path}: unsupported index version {version}")
        (gran_flag,) = struct.unpack("<B", buf.read(1))
        sections: list[frozenset[str]] = []
        for _ in range(2):
            (count,) = struct.unpack("<I", buf.read(4))
            entries = []
            for _ in range(count):
                (length,) = struct.unpack("<I", buf.read(4))
                entries.append(buf.read(length).decode("utf-8"))
            sections.append(frozenset(entries))
        return cls(sections[0], sections[1], "expressions" if gran_flag else "statements")


def novelty(task: EvalTask, pred: Sequence[str], index: CorpusIndex) -> bool:
    """True when the prediction is new relative to truth and training data.

    Requires that the prediction reconstructs (parses in context): the
    prediction must differ from the ground truth token-wise, the completed
    statement must not normalize to a training statement, and the predicted
    expression itself must not normalize to a training subexpression.
    """
    stripped = strip_frame(pred)
    if task.ground_truth is not None and stripped == tuple(task.ground_truth):
        return False
    stmt = reconstruct(task, pred)
    if index.seen_statement(normalize_key(stmt.body)):
        return False
    if index.granularity == "expressions":
        try:
            pred_sexpr = parse_token_strings(stripped)
        except ParseError:
            return False
        if index.seen_expression(normalize_key(pred_sexpr)):
            return False
    return True


@dataclass
class TaskVerdict:
    task_id: str
    kind: str
    exact_rank: int | None  # 1-based rank of the first exact beam
    parsed: list[bool]
    typechecked: list[bool]
    novel: list[bool] | None

    def as_dict(self) -> dict:
        return {
            "format_version": 1,
            "task_id": self.task_id,
            "kind": self.kind,
            "exact_rank": self.exact_rank,
            "parsed": self.parsed,
            "typechecked": self.typechecked,
            "novel": self.novel,
            # Provability needs an external prover; this toolkit never
            # fills it in, downstream tooling may.
            "provable": None,
        }


@dataclass
class ScoreReport:
    task_kind: str
    n_tasks: int = 0
    n_pairs: int = 0
    beam_width: int = 0
    _em1: int = 0
    _emw: int = 0
    _parsed: int = 0
    _typechecked: int = 0
    _novel: int = 0
    _scored_em: int = 0
    has_index: bool = False

    def as_dict(self) -> dict:
        def rate(num: int, den: int) -> float | None:
            return num / den if den else None

        return {
            "task_kind": self.task_kind,
            "n_tasks": self.n_tasks,
            "n_pairs": self.n_pairs,
            "beam_width": self.beam_width,
            "exact_match_at_1": rate(self._em1, self._scored_em),
            "exact_match_at_width": rate(self._emw, self._scored_em),
            "parse_rate": rate(self._parsed, self.n_pairs),
            "typecheck_rate": rate(self._typechecked, self.n_pairs),
            "novelty_rate": rate(self._novel, self.n_pairs) if self.has_index else None,
        }


def score(
    tasks: Sequence[EvalTask],
    beams: Mapping[str, Sequence[Sequence[str]]],
    index: CorpusIndex | None = None,
) -> tuple[dict, list[TaskVerdict]]:
    """Score every (task, beam) pair; deterministic in task order.

    Returns the aggregate report (overall plus per-kind breakdown) and the
    per-task verdict rows from which every rate can be recomputed.
    """
    task_ids = [t.task_id for t in tasks]
    if len(set(task_ids)) != len(task_ids):
        raise AlignmentError("duplicate task ids in task file")
    if set(task_ids) != set(beams.keys()):
        missing = sorted(set(task_ids) - set(beams.keys()))[:3]
        extra = sorted(set(beams.keys()) - set(task_ids))[:3]
        raise AlignmentError(f"task/beam id mismatch (missing {missing}, unexpected {extra})")

    overall = ScoreReport("all", has_index=index is not None)
    by_kind: dict[str, ScoreReport] = {}
    verdicts: list[TaskVerdict] = []
    for task in tasks:
        task_beams = beams[task.task_id]
        reports = [overall, by_kind.setdefault(task.kind.value, ScoreReport(task.kind.value, has_index=index is not None))]
        exact_rank: int | None = None
        parsed: list[bool] = []
        typechecked: list[bool] = []
        novel: list[bool] | None = [] if index is not None else None
        truth = tuple(task.ground_truth) if task.ground_truth is not None else None
        for rank, beam in enumerate(task_beams, start=1):
            stripped = strip_frame(beam)
            if truth is not None and exact_rank is None and stripped == truth:
                exact_rank = rank
            stmt = try_reconstruct(task, beam)
            parsed.append(stmt is not None)
            typechecked.append(stmt is not None and well_typed(stmt, ArityTable()))
            if novel is not None:
                novel.append(stmt is not None and novelty(task, beam, index))
        for report in reports:
            report.n_tasks += 1
            report.n_pairs += len(task_beams)
            report.beam_width = max(report.beam_width, len(task_beams))
            report._parsed += sum(parsed)
            report._typechecked += sum(typechecked)
            if novel is not None:
                report._novel += sum(novel)
            if truth is not None:
                report._scored_em += 1
                if exact_rank == 1:
                    report._em1 += 1
                if exact_rank is not None:
                    report._emw += 1
        verdicts.append(
            TaskVerdict(task.task_id, task.kind.value, exact_rank, parsed, typechecked, novel)
        )
    report_dict = {
        "format_version": 1,
        "overall": overall.as_dict(),
        "by_kind": {kind: r.as_dict() for kind, r in sorted(by_kind.items())},
    }
    return report_dict, verdicts
