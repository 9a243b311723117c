"""Independent reference implementations used to cross-check the package.

Everything here deliberately avoids the code paths it verifies: token
counting scans characters, masking is re-derived with tree rewriting
instead of token splicing, and type solutions are confirmed by exhaustive
candidate enumeration plus the checker.
"""

from __future__ import annotations

import itertools
import math
import re

from holmask.sexpr import (
    Atom,
    SExpr,
    SList,
    Statement,
    node_at,
    parse_token_strings,
    replace_at_path,
    statement_from_sexpr,
    subexpressions,
    tokens_of,
)
from holmask.typecheck import (
    ArityTable,
    HType,
    TyApp,
    TyVar,
    TypecheckError,
    check_statement,
    parse_type,
    type_tokens,
)


def char_scan_token_count(text: str) -> int:
    """Count tokens by a regex character scan, independent of the lexer."""
    return len(re.findall(r"[()]|[^\s()]+", text))


def tree_counts(e: SExpr) -> tuple[int, int]:
    """(list_count, atom_count) by direct recursion."""
    if isinstance(e, Atom):
        return 0, 1
    lists, atoms = 1, 0
    for child in e.children:
        l, a = tree_counts(child)
        lists += l
        atoms += a
    return lists, atoms


def naive_subtree_tokens(e: SExpr) -> int:
    if isinstance(e, Atom):
        return 1
    return 2 + sum(naive_subtree_tokens(c) for c in e.children)


def _overlap(a: tuple[int, ...], b: tuple[int, ...]) -> bool:
    shorter, longer = (a, b) if len(a) <= len(b) else (b, a)
    return longer[: len(shorter)] == shorter


def naive_mask_resolution(
    tree: SExpr, draw_paths: list[tuple[int, ...]], predict_path: tuple[int, ...]
) -> list[tuple[int, ...]]:
    """Reference precedence rules: predict first, then big-to-small greedy."""
    survivors = [p for p in draw_paths if not _overlap(p, predict_path)]
    survivors.sort(key=lambda p: (-naive_subtree_tokens(node_at(tree, p)), p))
    kept: list[tuple[int, ...]] = []
    for path in survivors:
        if all(not _overlap(path, other) for other in kept):
            kept.append(path)
    return kept


def naive_skip_tree_input(
    stmt: Statement, predict_path: tuple[int, ...], mask_paths: list[tuple[int, ...]]
) -> tuple[list[str], list[tuple[int, ...]]]:
    """Sequential tree-rewriting semantics of masking.

    Replace the predict subtree, then for each mask subtree (in the given
    order) replace every node of the *current* tree that is structurally
    equal to the original subtree. Returns the serialized input and the
    paths actually replaced by <MASK>.
    """
    tree = stmt.sexpr()
    mask_subtrees = [node_at(tree, p) for p in mask_paths]
    current = replace_at_path(tree, predict_path, Atom("<PREDICT>"))
    applied: list[tuple[int, ...]] = []

    def replace_everywhere(node: SExpr, path: tuple[int, ...], target: SExpr) -> SExpr:
        if node == target:
            applied.append(path)
            return Atom("<MASK>")
        if isinstance(node, Atom):
            return node
        return SList(
            tuple(
                replace_everywhere(child, path + (i,), target)
                for i, child in enumerate(node.children)
            )
        )

    for subtree in mask_subtrees:
        current = replace_everywhere(current, (), subtree)
    return tokens_of(current), applied


def span_by_paren_walk(tokens: list[str], path: tuple[int, ...]) -> tuple[int, int]:
    """Token span of the node at ``path``, found by balance counting alone."""

    def child_start(start: int, index: int) -> int:
        # ``start`` points at the '(' of a list node; children follow it.
        pos = start + 1
        for _ in range(index):
            pos = skip_node(pos)
        return pos

    def skip_node(pos: int) -> int:
        if tokens[pos] != "(":
            return pos + 1
        depth = 0
        while True:
            if tokens[pos] == "(":
                depth += 1
            elif tokens[pos] == ")":
                depth -= 1
                if depth == 0:
                    return pos + 1
            pos += 1

    start = 0
    for index in path:
        start = child_start(start, index)
    return start, skip_node(start)


class MaskingChecker:
    """Masking semantics re-derived over the raw token sequence.

    Occurrences of a masked subtree are found by scanning for token slices
    that start on a node boundary and equal the subtree's serialization (a
    slice like that is balanced, hence a whole structurally equal subtree;
    every position other than a ``)`` starts a node). Replacement proceeds
    predict first, then each mask slice in the given precedence order,
    skipping occurrences that touch an earlier replacement. The span table
    comes from a single stack scan of the parens, independent of the
    package's bookkeeping. Per-statement data is precomputed once so
    checking a large sample stays cheap.
    """

    def __init__(self, statement_tokens: list[str]):
        self.tokens = list(statement_tokens)
        self.spans: dict[tuple[int, ...], tuple[int, int]] = {}
        self._atom_positions: dict[str, list[int]] = {}
        self._list_positions: dict[tuple[str, str, str], list[int]] = {}
        tokens = self.tokens
        # Scan with a virtual super-root so the single top node lands at
        # child index 0; strip that leading index from every recorded path.
        child_counts = [0]
        path: list[int] = []
        opens: list[int] = []
        for i, tok in enumerate(tokens):
            if tok == "(":
                path.append(child_counts[-1])
                child_counts.append(0)
                opens.append(i)
                self._list_positions.setdefault((tok, tokens[i + 1], tokens[i + 2]), []).append(i)
            elif tok == ")":
                self.spans[tuple(path[1:])] = (opens.pop(), i + 1)
                child_counts.pop()
                path.pop()
                child_counts[-1] += 1
            else:
                key = tuple(path[1:]) + (child_counts[-1],) if path else ()
                self.spans[key] = (i, i + 1)
                child_counts[-1] += 1
                self._atom_positions.setdefault(tok, []).append(i)

    def slice_at(self, span_path: tuple[int, ...]) -> list[str]:
        lo, hi = self.spans[span_path]
        return self.tokens[lo:hi]

    def occurrences(self, needle: list[str]) -> list[tuple[int, int]]:
        n = len(needle)
        if n == 1:
            return [(i, i + 1) for i in self._atom_positions.get(needle[0], [])]
        tokens = self.tokens
        end = len(tokens)
        mid = n // 2
        hits = []
        for i in self._list_positions.get((needle[0], needle[1], needle[2]), []):
            if (
                i + n <= end
                and tokens[i + mid] == needle[mid]
                and tokens[i + n - 1] == ")"
                and tokens[i : i + n] == needle
            ):
                hits.append((i, i + n))
        return hits

    def expected_input(
        self,
        predict_path: tuple[int, ...],
        mask_paths: list[tuple[int, ...]],
        max_input_tokens: int | None = None,
    ) -> list[str]:
        predict_span = self.spans[predict_path]
        replaced = [predict_span]
        pieces = {predict_span: "<PREDICT>"}
        needles = []
        for path in mask_paths:
            needle = self.slice_at(path)
            if needle not in needles:
                needles.append(needle)
        for needle in needles:
            for span in self.occurrences(needle):
                if any(not (span[1] <= lo or hi <= span[0]) for lo, hi in replaced):
                    continue
                replaced.append(span)
                pieces[span] = "<MASK>"
        out: list[str] = []
        pos = 0
        for lo, hi in sorted(replaced):
            out.extend(self.tokens[pos:lo])
            out.append(pieces[(lo, hi)])
            pos = hi
        out.extend(self.tokens[pos:])
        if max_input_tokens is not None:
            out = out[:max_input_tokens]
        return out


def harvest_signature(stmt: Statement) -> tuple[dict[str, int], set[str]]:
    """Constructors (with arity) and type variables occurring in a statement."""
    constructors: dict[str, int] = {}
    tyvars: set[str] = set()

    def visit(t: HType) -> None:
        if isinstance(t, TyVar):
            tyvars.add(t.name)
        elif isinstance(t, TyApp):
            constructors[t.name] = len(t.args)
            for arg in t.args:
                visit(arg)

    arities = ArityTable()
    for path, node in subexpressions(stmt.body):
        if (
            isinstance(node, SList)
            and len(node.children) == 3
            and isinstance(node.children[0], Atom)
            and node.children[0].text in ("v", "c")
        ):
            visit(parse_type(node.children[1], arities))
    return constructors, tyvars


def enumerate_types(constructors: dict[str, int], tyvars: set[str], depth: int) -> list[HType]:
    """Every type of bounded depth over the given signature."""
    level: list[HType] = [TyVar(name) for name in sorted(tyvars)]
    level += [TyApp(name) for name, arity in sorted(constructors.items()) if arity == 0]
    all_types = list(level)
    for _ in range(depth - 1):
        new: list[HType] = []
        for name, arity in sorted(constructors.items()):
            if arity == 0:
                continue
            for combo in itertools.product(all_types, repeat=arity):
                candidate = TyApp(name, combo)
                if candidate not in all_types:
                    new.append(candidate)
        all_types.extend(dict.fromkeys(new))
    return list(dict.fromkeys(all_types))


def passing_type_candidates(
    stmt: Statement, site_path: tuple[int, ...], depth: int = 3
) -> list[HType]:
    """All enumerated types that typecheck when spliced into the site."""
    constructors, tyvars = harvest_signature(stmt)
    sexpr = stmt.sexpr()
    passing = []
    for candidate in enumerate_types(constructors, tyvars, depth):
        spliced = replace_at_path(sexpr, site_path, parse_token_strings(type_tokens(candidate)))
        try:
            check_statement(statement_from_sexpr(spliced, source_id="brute"), ArityTable())
        except TypecheckError:
            continue
        passing.append(candidate)
    return passing


def binomial_3sigma(p: float, n: int) -> float:
    return 3 * math.sqrt(p * (1 - p) / n)


def _binary_op(node: SExpr) -> str | None:
    if (
        isinstance(node, SList)
        and len(node.children) == 3
        and isinstance(node.children[0], Atom)
        and node.children[0].text == "a"
    ):
        inner = node.children[1]
        if (
            isinstance(inner, SList)
            and len(inner.children) == 3
            and isinstance(inner.children[0], Atom)
            and inner.children[0].text == "a"
        ):
            cnode = inner.children[1]
            if (
                isinstance(cnode, SList)
                and len(cnode.children) == 3
                and isinstance(cnode.children[0], Atom)
                and cnode.children[0].text == "c"
                and isinstance(cnode.children[2], Atom)
            ):
                return cnode.children[2].text
    return None


def _is_quantifier_app(node: SExpr) -> bool:
    if not (
        isinstance(node, SList)
        and len(node.children) == 3
        and isinstance(node.children[0], Atom)
        and node.children[0].text == "a"
    ):
        return False
    cnode, lam = node.children[1], node.children[2]
    return (
        isinstance(cnode, SList)
        and len(cnode.children) == 3
        and isinstance(cnode.children[0], Atom)
        and cnode.children[0].text == "c"
        and isinstance(cnode.children[2], Atom)
        and cnode.children[2].text in ("!", "?")
        and isinstance(lam, SList)
        and len(lam.children) == 3
        and isinstance(lam.children[0], Atom)
        and lam.children[0].text == "l"
    )


def top_level_sites_by_definition(stmt: Statement, operator: str) -> list[tuple[int, ...]]:
    """Classify operator nodes by validating their root path edge by edge.

    Independent of the extractor's walker: enumerate every binary
    application of ``operator`` anywhere in the body, then accept it when
    its whole path decomposes into quantifier-body steps, either operand of
    a conjunction/disjunction, and right sides of implications. Paths
    returned are statement-relative (prefixed with the body index).
    """
    body = stmt.body
    accepted = []
    for path, node in subexpressions(body):
        if _binary_op(node) != operator:
            continue
        pos = 0
        ok = True
        while pos < len(path):
            here = node_at(body, path[:pos])
            rest = path[pos:]
            op = _binary_op(here)
            if op == "==>" and rest[:1] == (2,):
                pos += 1
            elif op in ("/\\", "\\/") and rest[:2] == (1, 2):
                pos += 2
            elif op in ("/\\", "\\/") and rest[:1] == (2,):
                pos += 1
            elif _is_quantifier_app(here) and rest[:2] == (2, 2):
                pos += 2
            else:
                ok = False
                break
        if ok:
            accepted.append((1,) + path)
    return accepted
