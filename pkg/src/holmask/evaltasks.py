"""Extraction of the logical-reasoning evaluation tasks from validation theorems.

Five task kinds exist. Two are type prompts: replace the full type annotation
of one variable/constant occurrence by ``<PREDICT>`` (the easy variant), or
additionally hide every other annotation behind ``<MASK>`` (the hard one).
Two are completion prompts built from *top-level* connectives: predicting the
left operand of a top-level implication (missing assumptions) and predicting
either side of a top-level equality. The last is the constant free-form
prompt ``(<theorem> <PREDICT>)`` with no ground truth.

An implication or equality counts as top-level when the walk from the body
root reaches it only through universal/existential quantifier bodies, both
operands of conjunctions and disjunctions, and the *right* operand of other
top-level implications. Negation and every other constant stop the walk, so
nothing is ever extracted from a negated context.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from enum import Enum
from typing import Callable, Iterable

from .sexpr import (
    MASK,
    PREDICT,
    THEOREM_ATOM,
    Atom,
    Path,
    SExpr,
    SList,
    Split,
    Statement,
    token_spans,
    tokens_of,
)
from .typecheck import ArityTable, TypecheckError, check_statement


class NoCandidates(Exception):
    """The statement has no site for the requested task kind."""


class TaskKind(Enum):
    TYPE_INFERENCE = "type"
    HARD_TYPE_INFERENCE = "type-hard"
    ASSUMPTIONS = "assumptions"
    EQUALITIES = "equalities"
    FREE_FORM = "freeform"


@dataclass(frozen=True)
class EvalTask:
    kind: TaskKind
    input: tuple[str, ...]
    ground_truth: tuple[str, ...] | None
    source_id: str
    site_path: Path
    #: Serialization of the unmasked source statement; None for free-form.
    source: tuple[str, ...] | None

    @property
    def task_id(self) -> str:
        site = ".".join(str(i) for i in self.site_path)
        return f"{self.source_id}:{self.kind.value}:{site}"


def _is_kinded(node: SExpr, kind: str, arity: int = 3) -> bool:
    return (
        isinstance(node, SList)
        and len(node.children) == arity
        and isinstance(node.children[0], Atom)
        and node.children[0].text == kind
    )


def _const_name(node: SExpr) -> str | None:
    """The name of a ``(c TYPE name)`` node, else None."""
    if _is_kinded(node, "c") and isinstance(node.children[2], Atom):
        return node.children[2].text
    return None


def annotation_sites(stmt: Statement) -> list[Path]:
    """Paths of the full type subtree of every variable/constant, in preorder.

    Works on masked prompts too: a ``<MASK>`` annotation is still the second
    child of its ``(v ...)`` / ``(c ...)`` node.
    """
    sites: list[Path] = []
    stack: list[tuple[Path, SExpr]] = [((), stmt.sexpr())]
    while stack:
        path, node = stack.pop()
        if not isinstance(node, SList):
            continue
        if _is_kinded(node, "v") or _is_kinded(node, "c"):
            sites.append(path + (1,))
            # Types contain no terms, so only the name child could in
            # principle nest further; it is an atom, nothing to descend.
            continue
        for i in range(len(node.children) - 1, -1, -1):
            stack.append((path + (i,), node.children[i]))
    return sorted(sites)


def type_inference_task(stmt: Statement, site_path: Path, hard: bool) -> EvalTask:
    """Build the type prompt for one annotation site (pure token surgery)."""
    sexpr = stmt.sexpr()
    tokens = tuple(tokens_of(sexpr))
    spans = token_spans(sexpr)
    if site_path not in spans:
        raise NoCandidates(f"no node at {site_path}")
    replacements = [(spans[site_path], PREDICT)]
    if hard:
        for other in annotation_sites(stmt):
            if other != site_path:
                replacements.append((spans[other], MASK))
    out: list[str] = []
    pos = 0
    for (start, end), text in sorted(replacements):
        out.extend(tokens[pos:start])
        out.append(text)
        pos = end
    out.extend(tokens[pos:])
    start, end = spans[site_path]
    return EvalTask(
        kind=TaskKind.HARD_TYPE_INFERENCE if hard else TaskKind.TYPE_INFERENCE,
        input=tuple(out),
        ground_truth=tokens[start:end],
        source_id=stmt.source_id,
        site_path=site_path,
        source=tokens,
    )


def extract_type_inference(
    stmt: Statement,
    hard: bool,
    rng: random.Random,
    sites_per_statement: int | None = 1,
) -> list[EvalTask]:
    """Sample annotation sites uniformly; None means every site."""
    sites = annotation_sites(stmt)
    if not sites:
        raise NoCandidates(f"statement {stmt.source_id!r} has no variable or constant")
    if sites_per_statement is not None and sites_per_statement < len(sites):
        sites = sorted(rng.sample(sites, sites_per_statement))
    return [type_inference_task(stmt, site, hard) for site in sites]


_QUANTIFIERS = frozenset({"!", "?"})
_BRANCHING = frozenset({"/\\", "\\/"})
_IMPLIES = "==>"
_EQUALS = "="


def _top_level_walk(stmt: Statement) -> tuple[list[Path], list[Path]]:
    """Preorder paths of top-level implication and equality nodes."""
    implications: list[Path] = []
    equalities: list[Path] = []

    def walk(node: SExpr, path: Path) -> None:
        # Binary operator application: (a (a (c TY op) LEFT) RIGHT).
        if _is_kinded(node, "a") and _is_kinded(node.children[1], "a"):
            op = _const_name(node.children[1].children[1])
            if op == _IMPLIES:
                implications.append(path)
                walk(node.children[2], path + (2,))
                return
            if op in _BRANCHING:
                walk(node.children[1].children[2], path + (1, 2))
                walk(node.children[2], path + (2,))
                return
            if op == _EQUALS:
                equalities.append(path)
                return
        # Quantified body: (a (c TY !|?) (l BINDER BODY)).
        if _is_kinded(node, "a"):
            quantifier = _const_name(node.children[1])
            if quantifier in _QUANTIFIERS and _is_kinded(node.children[2], "l"):
                walk(node.children[2].children[2], path + (2, 2))
        # Everything else (negation included) stops the walk.

    walk(stmt.body, (1,))
    return implications, equalities


def top_level_implications(stmt: Statement) -> list[Path]:
    return _top_level_walk(stmt)[0]


def top_level_equalities(stmt: Statement) -> list[Path]:
    return _top_level_walk(stmt)[1]


def _site_task(stmt: Statement, kind: TaskKind, site_path: Path) -> EvalTask:
    sexpr = stmt.sexpr()
    tokens = tuple(tokens_of(sexpr))
    start, end = token_spans(sexpr)[site_path]
    return EvalTask(
        kind=kind,
        input=tokens[:start] + (PREDICT,) + tokens[end:],
        ground_truth=tokens[start:end],
        source_id=stmt.source_id,
        site_path=site_path,
        source=tokens,
    )


def extract_assumptions(stmt: Statement) -> list[EvalTask]:
    """One task per top-level implication: predict its left operand."""
    return [
        _site_task(stmt, TaskKind.ASSUMPTIONS, impl + (1, 2))
        for impl in top_level_implications(stmt)
    ]


def extract_equalities(stmt: Statement) -> list[EvalTask]:
    """Two tasks per top-level equality: predict the left, then the right side."""
    tasks: list[EvalTask] = []
    for eq in top_level_equalities(stmt):
        tasks.append(_site_task(stmt, TaskKind.EQUALITIES, eq + (1, 2)))
        tasks.append(_site_task(stmt, TaskKind.EQUALITIES, eq + (2,)))
    return tasks


def free_form_prompt() -> EvalTask:
    """The constant no-context prompt; the tag asks for a theorem, not a goal."""
    return EvalTask(
        kind=TaskKind.FREE_FORM,
        input=("(", THEOREM_ATOM, PREDICT, ")"),
        ground_truth=None,
        source_id="freeform",
        site_path=(1,),
        source=None,
    )


def extract_corpus_tasks(
    statements: Iterable[Statement],
    kind: TaskKind,
    *,
    seed: int = 0,
    sites_per_statement: int | None = 1,
    require_split: Split | None = Split.VALID,
    on_skip: Callable[[Statement, str], None] | None = None,
) -> list[EvalTask]:
    """Drive extraction over a corpus, enforcing the split discipline.

    Statements outside ``require_split`` are skipped (pass None to accept
    any split), as are statements that fail the type checker: evaluation
    ground truth must come from well-typed sources.
    """
    if kind is TaskKind.FREE_FORM:
        return [free_form_prompt()]
    tasks: list[EvalTask] = []
    for index, stmt in enumerate(statements):
        if require_split is not None and stmt.split is not require_split:
            if on_skip:
                on_skip(stmt, f"split={stmt.split.value if stmt.split else 'none'}")
            continue
        try:
            check_statement(stmt, ArityTable())
        except TypecheckError as exc:
            if on_skip:
                on_skip(stmt, f"ill-typed: {exc}")
            continue
        if kind in (TaskKind.TYPE_INFERENCE, TaskKind.HARD_TYPE_INFERENCE):
            rng = random.Random(f"{seed}:{index}".encode("ascii"))
            try:
                tasks.extend(
                    extract_type_inference(
                        stmt,
                        hard=kind is TaskKind.HARD_TYPE_INFERENCE,
                        rng=rng,
                        sites_per_statement=sites_per_statement,
                    )
                )
            except NoCandidates:
                if on_skip:
                    on_skip(stmt, "no annotation sites")
        elif kind is TaskKind.ASSUMPTIONS:
            tasks.extend(extract_assumptions(stmt))
        elif kind is TaskKind.EQUALITIES:
            tasks.extend(extract_equalities(stmt))
        else:  # pragma: no cover - enum is closed
            raise ValueError(f"unhandled task kind {kind}")
    return tasks


def task_record(task: EvalTask) -> dict:
    return {
        "format_version": 1,
        "task_id": task.task_id,
        "kind": task.kind.value,
        "source_id": task.source_id,
        "site_path": list(task.site_path),
        "input": list(task.input),
        "ground_truth": list(task.ground_truth) if task.ground_truth is not None else None,
        "source": list(task.source) if task.source is not None else None,
    }


def task_from_record(record: dict) -> EvalTask:
    return EvalTask(
        kind=TaskKind(record["kind"]),
        input=tuple(record["input"]),
        ground_truth=tuple(record["ground_truth"]) if record.get("ground_truth") else None,
        source_id=record["source_id"],
        site_path=tuple(record["site_path"]),
        source=tuple(record["source"]) if record.get("source") else None,
    )
