"""S-expression reading, printing, and tree surgery for HOL Light statement corpora.

The surface language is parenthesized prefix notation: each parenthesis is a
token of its own, and an atom is a maximal run of characters containing
neither whitespace nor a parenthesis.  Control atoms such as ``<PREDICT>``,
``<MASK>``, ``<START>``, ``<END>`` and the statement tags ``<theorem>`` /
``<goal>`` need no escaping; they lex like every other atom.

Trees are immutable.  A position inside a tree is a *path*: a tuple of child
indices starting at the root, so ``()`` addresses the root itself.  Paths are
stable under reserialization, unlike byte offsets.  Everything in this module
is a pure function, so nodes can be shared freely across threads.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from enum import Enum
from pathlib import Path as FsPath
from typing import Callable, Iterable, Iterator, Sequence, Union

PREDICT = "<PREDICT>"
MASK = "<MASK>"
START = "<START>"
END = "<END>"
THEOREM_ATOM = "<theorem>"
GOAL_ATOM = "<goal>"

#: Atoms that only appear in generated prompts/targets, never in corpus input.
RESERVED_ATOMS = frozenset({PREDICT, MASK, START, END})

Path = tuple[int, ...]


class SExprError(Exception):
    """Base class for everything raised by this module."""


class ParseError(SExprError):
    pass


class UnbalancedParens(ParseError):
    pass


class TrailingTokens(ParseError):
    pass


class EmptyInput(ParseError):
    pass


class EmptyList(ParseError):
    """``()`` is rejected: no construct in the corpus grammar produces it."""


class InvalidPath(SExprError):
    pass


class CorpusError(SExprError):
    """A corpus record that does not match the expected schema."""


class TokenKind(Enum):
    LPAREN = "lparen"
    RPAREN = "rparen"
    ATOM = "atom"


@dataclass(frozen=True)
class Token:
    kind: TokenKind
    text: str


_LP = Token(TokenKind.LPAREN, "(")
_RP = Token(TokenKind.RPAREN, ")")


def tokenize(text: str) -> list[Token]:
    """Lex ``text`` into tokens. The tokenizer is total: it never fails."""
    tokens: list[Token] = []
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch == "(":
            tokens.append(_LP)
            i += 1
        elif ch == ")":
            tokens.append(_RP)
            i += 1
        elif ch.isspace():
            i += 1
        else:
            j = i + 1
            while j < n and text[j] not in "()" and not text[j].isspace():
                j += 1
            tokens.append(Token(TokenKind.ATOM, text[i:j]))
            i = j
    return tokens


def token_texts(tokens: Iterable[Token]) -> list[str]:
    return [t.text for t in tokens]


@dataclass(frozen=True)
class Atom:
    text: str


@dataclass(frozen=True)
class SList:
    children: tuple["SExpr", ...]


SExpr = Union[Atom, SList]


def parse(source: str | Sequence[Token]) -> SExpr:
    """Parse exactly one S-expression from text or a token sequence."""
    tokens = tokenize(source) if isinstance(source, str) else source
    result: SExpr | None = None
    stack: list[list[SExpr]] = []
    for tok in tokens:
        if result is not None:
            raise TrailingTokens(f"tokens after the first expression, starting at {tok.text!r}")
        if tok.kind is TokenKind.LPAREN:
            stack.append([])
            continue
        if tok.kind is TokenKind.RPAREN:
            if not stack:
                raise UnbalancedParens("unmatched ')'")
            children = stack.pop()
            if not children:
                raise EmptyList("empty list '()'")
            node: SExpr = SList(tuple(children))
        else:
            node = Atom(tok.text)
        if stack:
            stack[-1].append(node)
        else:
            result = node
    if stack:
        raise UnbalancedParens(f"{len(stack)} unclosed '('")
    if result is None:
        raise EmptyInput("no expression in input")
    return result


def parse_token_strings(texts: Sequence[str]) -> SExpr:
    """Parse a sequence of token texts, the form datasets carry on disk."""
    toks = [_LP if t == "(" else _RP if t == ")" else Token(TokenKind.ATOM, t) for t in texts]
    return parse(toks)


def tokens_of(e: SExpr) -> list[str]:
    """Serialize ``e`` to its token-text sequence (iterative, any depth)."""
    out: list[str] = []
    stack: list[SExpr | None] = [e]
    while stack:
        node = stack.pop()
        if node is None:
            out.append(")")
        elif isinstance(node, Atom):
            out.append(node.text)
        else:
            out.append("(")
            stack.append(None)
            stack.extend(reversed(node.children))
    return out


def render_tokens(tokens: Iterable[str]) -> str:
    """Join token texts into the canonical single-space surface form."""
    parts: list[str] = []
    prev = ""
    for t in tokens:
        if parts and t != ")" and prev != "(":
            parts.append(" ")
        parts.append(t)
        prev = t
    return "".join(parts)


def print_sexpr(e: SExpr) -> str:
    """Canonical text of ``e``: whitespace normalized to single spaces."""
    return render_tokens(tokens_of(e))


def token_count(e: SExpr) -> int:
    return len(tokens_of(e))


def subexpressions(e: SExpr) -> Iterator[tuple[Path, SExpr]]:
    """Enumerate every node of ``e`` in preorder as ``(path, node)`` pairs.

    The root is included; it is the single entry whose path is ``()``.
    """
    stack: list[tuple[Path, SExpr]] = [((), e)]
    while stack:
        path, node = stack.pop()
        yield path, node
        if isinstance(node, SList):
            for i in range(len(node.children) - 1, -1, -1):
                stack.append((path + (i,), node.children[i]))


def node_at(e: SExpr, path: Path) -> SExpr:
    node = e
    for depth, i in enumerate(path):
        if not isinstance(node, SList) or not 0 <= i < len(node.children):
            raise InvalidPath(f"no child {i} at depth {depth} (path {path})")
        node = node.children[i]
    return node


def replace_at_path(e: SExpr, path: Path, replacement: SExpr) -> SExpr:
    """Return a copy of ``e`` with the node at ``path`` swapped for ``replacement``."""
    if not path:
        return replacement
    if not isinstance(e, SList) or not 0 <= path[0] < len(e.children):
        raise InvalidPath(f"no child {path[0]} under {type(e).__name__}")
    children = list(e.children)
    children[path[0]] = replace_at_path(children[path[0]], path[1:], replacement)
    return SList(tuple(children))


def token_spans(e: SExpr) -> dict[Path, tuple[int, int]]:
    """Half-open token index span of every node within ``tokens_of(e)``."""
    spans: dict[Path, tuple[int, int]] = {}
    pos = 0
    # Entries are either ("node", path, sexpr) or ("close", path, start).
    stack: list[tuple[str, Path, object]] = [("node", (), e)]
    while stack:
        op, path, payload = stack.pop()
        if op == "close":
            pos += 1
            spans[path] = (payload, pos)  # type: ignore[assignment]
            continue
        node = payload
        if isinstance(node, Atom):
            spans[path] = (pos, pos + 1)
            pos += 1
        else:
            assert isinstance(node, SList)
            stack.append(("close", path, pos))
            pos += 1
            for i in range(len(node.children) - 1, -1, -1):
                stack.append(("node", path + (i,), node.children[i]))
    return spans


class Split(Enum):
    TRAIN = "train"
    VALID = "valid"
    TEST = "test"


class Tag(Enum):
    THEOREM = "theorem"
    GOAL = "goal"


_TAG_ATOMS = {Tag.THEOREM: THEOREM_ATOM, Tag.GOAL: GOAL_ATOM}
_ATOM_TAGS = {v: k for k, v in _TAG_ATOMS.items()}


@dataclass(frozen=True)
class Statement:
    """A tagged top-level formula carrying its corpus split label.

    The split is whatever the corpus record said; it is never inferred.
    ``split`` may be None for ad-hoc statements (prompts, reconstructions)
    that did not come from a corpus file.
    """

    tag: Tag
    body: SExpr
    split: Split | None
    source_id: str

    def sexpr(self) -> SExpr:
        return SList((Atom(_TAG_ATOMS[self.tag]), self.body))

    def tokens(self) -> list[str]:
        return tokens_of(self.sexpr())

    def text(self) -> str:
        return print_sexpr(self.sexpr())


def statement_from_sexpr(
    e: SExpr, *, split: Split | None = None, source_id: str = ""
) -> Statement:
    if not isinstance(e, SList) or len(e.children) != 2:
        raise CorpusError("a statement is a two-element list: (<theorem>|<goal> BODY)")
    head = e.children[0]
    if not isinstance(head, Atom) or head.text not in _ATOM_TAGS:
        raise CorpusError(f"unknown statement tag {print_sexpr(head)!r}")
    return Statement(_ATOM_TAGS[head.text], e.children[1], split, source_id)


def parse_statement(text: str, *, split: Split | None = None, source_id: str = "") -> Statement:
    return statement_from_sexpr(parse(text), split=split, source_id=source_id)


def _check_no_reserved(stmt: Statement) -> None:
    for tok in tokens_of(stmt.body):
        if tok in RESERVED_ATOMS:
            raise CorpusError(f"reserved token {tok} in corpus statement {stmt.source_id!r}")


def parse_corpus_record(
    line: str, lineno: int, *, default_split: Split = Split.TRAIN
) -> Statement | None:
    """Parse one corpus line (JSON record or bare S-expression). None for blanks.

    JSON records look like
    ``{"id": ..., "split": "train"|"valid"|"test", "tag": "theorem"|"goal", "sexpr": ...}``.
    A line starting with ``(`` is treated as plain-text mode: the tag is the
    leading atom and the split defaults to ``default_split``.
    """
    stripped = line.strip()
    if not stripped:
        return None
    if stripped.startswith("("):
        try:
            stmt = parse_statement(stripped, split=default_split, source_id=f"line{lineno}")
        except ParseError as exc:
            raise CorpusError(f"line {lineno}: {exc}") from exc
        _check_no_reserved(stmt)
        return stmt
    try:
        record = json.loads(stripped)
    except json.JSONDecodeError as exc:
        raise CorpusError(f"line {lineno}: invalid JSON ({exc})") from exc
    if not isinstance(record, dict):
        raise CorpusError(f"line {lineno}: record is not an object")
    try:
        source_id = str(record["id"])
        split = Split(record["split"])
        tag = Tag(record["tag"])
        body_text = record["sexpr"]
    except KeyError as exc:
        raise CorpusError(f"line {lineno}: missing field {exc.args[0]!r}") from exc
    except ValueError as exc:
        raise CorpusError(f"line {lineno}: {exc}") from exc
    if not isinstance(body_text, str):
        raise CorpusError(f"line {lineno}: 'sexpr' must be a string")
    try:
        body = parse(body_text)
    except ParseError as exc:
        raise CorpusError(f"line {lineno} ({source_id}): {exc}") from exc
    stmt = Statement(tag, body, split, source_id)
    _check_no_reserved(stmt)
    return stmt


def iter_corpus(
    path: str | FsPath,
    *,
    default_split: Split = Split.TRAIN,
    on_error: Callable[[int, CorpusError], None] | None = None,
) -> Iterator[Statement]:
    """Stream statements from a corpus file.

    With ``on_error`` set, malformed records are reported to it and skipped;
    otherwise the first bad record raises.
    """
    with open(path, "r", encoding="utf-8") as handle:
        for lineno, line in enumerate(handle, start=1):
            try:
                stmt = parse_corpus_record(line, lineno, default_split=default_split)
            except CorpusError as exc:
                if on_error is None:
                    raise
                on_error(lineno, exc)
                continue
            if stmt is not None:
                yield stmt


def load_corpus(path: str | FsPath, *, default_split: Split = Split.TRAIN) -> list[Statement]:
    """Load a whole corpus file strictly (first malformed record raises)."""
    return list(iter_corpus(path, default_split=default_split))


def corpus_record(stmt: Statement) -> dict:
    """The JSONL representation of a statement, as written by corpus tools."""
    if stmt.split is None:
        raise CorpusError(f"statement {stmt.source_id!r} has no split label")
    return {
        "id": stmt.source_id,
        "split": stmt.split.value,
        "tag": stmt.tag.value,
        "sexpr": print_sexpr(stmt.body),
    }


def bundled_corpus_path() -> FsPath:
    """Location of the small synthetic corpus that ships with the package."""
    return FsPath(__file__).parent / "data" / "bundled_corpus.jsonl"
