"""Bottom-up simple-type reconstruction for the HOL term language.

Terms come in four S-expression shapes: ``(v TYPE name)`` for variables,
``(c TYPE name)`` for constants, ``(a FN ARG)`` for applications, and
``(l (v TYPE name) BODY)`` for abstractions.  Types are either type
variables (atoms starting with an uppercase letter or ``?``, optionally
wrapped in parentheses) or constructor applications ``(ctor ARGS...)``;
zero-argument constructors keep their parentheses, as in ``(bool)``.

Every occurrence of a variable or constant carries its full type, so
checking is purely structural: no environment, no let-polymorphism.  Type
variables are rigid (two of them are equal only if their names are equal)
because the corpus instantiates polymorphism separately at each occurrence.

On top of checking, this module solves ``<PREDICT>`` holes in type position
by first-order unification, which is the executable oracle for the type
reconstruction prompts: masked types become unification holes, constraints
flow from the application/abstraction structure plus the requirement that a
top-level statement is boolean, and the hole's solution is read back from
the most general unifier.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from enum import Enum
from typing import Union

from .sexpr import (
    MASK,
    PREDICT,
    Atom,
    SExpr,
    SList,
    Statement,
    print_sexpr,
    render_tokens,
)


class TypecheckError(Exception):
    """Base class for term/type reading and checking failures."""


class MalformedTerm(TypecheckError):
    pass


class MalformedType(TypecheckError):
    pass


class ArityViolation(TypecheckError):
    """A constructor used with a different arity than first recorded."""


class NotAFunction(TypecheckError):
    pass


class ArgMismatch(TypecheckError):
    pass


class NotBoolean(TypecheckError):
    pass


class MalformedPrompt(TypecheckError):
    """``<PREDICT>`` missing, duplicated, or outside a type position."""


class UnifyError(TypecheckError):
    pass


class ConstructorClash(UnifyError):
    pass


class ArityClash(UnifyError):
    pass


class RigidClash(UnifyError):
    """Rigid type variables unify only with themselves."""


class OccursCheck(UnifyError):
    pass


@dataclass(frozen=True)
class TyVar:
    name: str


@dataclass(frozen=True)
class TyApp:
    name: str
    args: tuple["HType", ...] = ()


@dataclass(frozen=True)
class Hole:
    ident: int


HType = Union[TyVar, TyApp, Hole]

BOOL = TyApp("bool")
Subst = dict[int, HType]


def is_type_variable_name(text: str) -> bool:
    """Type variables are named ``A``, ``N``, ``?0`` and so on; constructors are not."""
    return bool(text) and (text[0] == "?" or text[0].isupper())


class ArityTable:
    """Constructor arities, learned on first sight and enforced afterwards.

    Only ``fun`` has a fixed signature (two arguments). Everything else is
    recorded per corpus file / solving session.
    """

    def __init__(self) -> None:
        self._arity: dict[str, int] = {"fun": 2}

    def check(self, name: str, arity: int) -> None:
        seen = self._arity.setdefault(name, arity)
        if seen != arity:
            raise ArityViolation(f"constructor {name!r} used with {arity} args, previously {seen}")


class MaskPolicy(Enum):
    """How prompt readers treat ``<MASK>`` atoms.

    FRESH: every mask becomes an independent fresh hole, wherever it sits
    (masks in term position stand for opaque subterms of unknown type).
    STRICT: masks are accepted in type position only.
    """

    FRESH = "fresh"
    STRICT = "strict"


class HoleAllocator:
    def __init__(self, policy: MaskPolicy = MaskPolicy.FRESH) -> None:
        self.policy = policy
        self.predict_ident: int | None = None
        self._counter = itertools.count()

    def fresh(self) -> Hole:
        return Hole(next(self._counter))

    def predict(self) -> Hole:
        if self.predict_ident is not None:
            raise MalformedPrompt("more than one <PREDICT>")
        hole = self.fresh()
        self.predict_ident = hole.ident
        return hole


def parse_type(e: SExpr, arities: ArityTable, holes: HoleAllocator | None = None) -> HType:
    if isinstance(e, Atom):
        if e.text == PREDICT:
            if holes is None:
                raise MalformedType("<PREDICT> in corpus input")
            return holes.predict()
        if e.text == MASK:
            if holes is None:
                raise MalformedType("<MASK> in corpus input")
            return holes.fresh()
        if is_type_variable_name(e.text):
            return TyVar(e.text)
        # Bare zero-argument constructor, e.g. the type in (v bool x); the
        # same constructor as (bool).
        arities.check(e.text, 0)
        return TyApp(e.text)
    head = e.children[0]
    if not isinstance(head, Atom):
        raise MalformedType(f"type constructor must be an atom: {print_sexpr(e)}")
    if is_type_variable_name(head.text):
        # Parenthesized type variable, e.g. (A); equal to the bare form.
        if len(e.children) != 1:
            raise MalformedType(f"type variable {head.text!r} applied to arguments")
        return TyVar(head.text)
    if head.text in (PREDICT, MASK):
        raise MalformedType(f"{head.text} cannot head a constructor application")
    args = tuple(parse_type(child, arities, holes) for child in e.children[1:])
    arities.check(head.text, len(args))
    return TyApp(head.text, args)


def type_tokens(t: HType, *, nested: bool = False) -> list[str]:
    """Canonical token form: nested type variables are parenthesized.

    A type variable standing alone prints bare (``A``); inside a constructor
    application it prints as ``(A)``. Both surface forms parse back to the
    same type.
    """
    if isinstance(t, TyVar):
        return ["(", t.name, ")"] if nested else [t.name]
    if isinstance(t, Hole):
        return [f"<hole:{t.ident}>"]
    out = ["(", t.name]
    for arg in t.args:
        out.extend(type_tokens(arg, nested=True))
    out.append(")")
    return out


def type_sexpr(t: HType, *, nested: bool = False) -> SExpr:
    if isinstance(t, TyVar):
        return SList((Atom(t.name),)) if nested else Atom(t.name)
    if isinstance(t, Hole):
        return Atom(f"<hole:{t.ident}>")
    return SList((Atom(t.name),) + tuple(type_sexpr(a, nested=True) for a in t.args))


@dataclass(frozen=True)
class Var:
    ty: HType
    name: str


@dataclass(frozen=True)
class Const:
    ty: HType
    name: str


@dataclass(frozen=True)
class App:
    fn: "Term"
    arg: "Term"


@dataclass(frozen=True)
class Abs:
    binder: Var
    body: "Term"


@dataclass(frozen=True)
class Opaque:
    """A ``<MASK>``ed term subtree in a prompt: unknown shape, hole type."""

    ty: HType


Term = Union[Var, Const, App, Abs, Opaque]

_MASKED_NAME = "<MASK>"


def parse_term(e: SExpr, arities: ArityTable, holes: HoleAllocator | None = None) -> Term:
    if isinstance(e, Atom):
        if holes is not None:
            if e.text == PREDICT:
                raise MalformedPrompt("<PREDICT> in term position")
            if e.text == MASK:
                if holes.policy is MaskPolicy.FRESH:
                    return Opaque(holes.fresh())
                raise MalformedPrompt("<MASK> in term position")
        raise MalformedTerm(f"bare atom {e.text!r} where a term was expected")
    head = e.children[0]
    if not isinstance(head, Atom):
        raise MalformedTerm(f"term head must be an atom: {print_sexpr(e)}")
    kind = head.text
    if kind in ("v", "c"):
        if len(e.children) != 3:
            raise MalformedTerm(f"({kind} ...) needs exactly a type and a name")
        name_node = e.children[2]
        if not isinstance(name_node, Atom):
            raise MalformedTerm(f"({kind} ...) name must be an atom")
        name = name_node.text
        if holes is not None and name == PREDICT:
            raise MalformedPrompt("<PREDICT> in name position")
        if name == MASK:
            if holes is None:
                raise MalformedTerm("<MASK> in corpus input")
            if holes.policy is MaskPolicy.STRICT:
                raise MalformedPrompt("<MASK> in name position")
            name = _MASKED_NAME
        ty = parse_type(e.children[1], arities, holes)
        return Var(ty, name) if kind == "v" else Const(ty, name)
    if kind == "a":
        if len(e.children) != 3:
            raise MalformedTerm("(a ...) needs exactly a function and an argument")
        return App(parse_term(e.children[1], arities, holes), parse_term(e.children[2], arities, holes))
    if kind == "l":
        if len(e.children) != 3:
            raise MalformedTerm("(l ...) needs exactly a binder and a body")
        binder_node = e.children[1]
        if isinstance(binder_node, Atom) and binder_node.text == MASK and holes is not None:
            if holes.policy is MaskPolicy.STRICT:
                raise MalformedPrompt("<MASK> in binder position")
            binder = Var(holes.fresh(), _MASKED_NAME)
        else:
            binder_term = parse_term(binder_node, arities, holes)
            if not isinstance(binder_term, Var):
                raise MalformedTerm("abstraction binder must be a (v ...) node")
            binder = binder_term
        return Abs(binder, parse_term(e.children[2], arities, holes))
    if holes is not None and kind == PREDICT:
        raise MalformedPrompt("<PREDICT> in term position")
    if holes is not None and kind == MASK and holes.policy is MaskPolicy.FRESH:
        return Opaque(holes.fresh())
    raise MalformedTerm(f"unknown term kind {kind!r}")


def term_sexpr(t: Term) -> SExpr:
    if isinstance(t, Var):
        return SList((Atom("v"), type_sexpr(t.ty), Atom(t.name)))
    if isinstance(t, Const):
        return SList((Atom("c"), type_sexpr(t.ty), Atom(t.name)))
    if isinstance(t, App):
        return SList((Atom("a"), term_sexpr(t.fn), term_sexpr(t.arg)))
    if isinstance(t, Abs):
        return SList((Atom("l"), term_sexpr(t.binder), term_sexpr(t.body)))
    raise MalformedTerm("cannot serialize a masked term")


def infer_type(t: Term) -> HType:
    """The type of a hole-free term; deterministic and total on valid input."""
    if isinstance(t, (Var, Const)):
        return t.ty
    if isinstance(t, App):
        fn_ty = infer_type(t.fn)
        if not (isinstance(fn_ty, TyApp) and fn_ty.name == "fun" and len(fn_ty.args) == 2):
            raise NotAFunction(f"applied a term of type {print_type(fn_ty)}")
        arg_ty = infer_type(t.arg)
        if fn_ty.args[0] != arg_ty:
            raise ArgMismatch(
                f"argument type {print_type(arg_ty)} does not match domain {print_type(fn_ty.args[0])}"
            )
        return fn_ty.args[1]
    if isinstance(t, Abs):
        return TyApp("fun", (t.binder.ty, infer_type(t.body)))
    raise MalformedTerm("masked term outside a prompt")


def print_type(t: HType) -> str:
    return render_tokens(type_tokens(t))


def check_statement(stmt: Statement, arities: ArityTable | None = None) -> None:
    """Raise unless the statement body is a well-typed boolean term."""
    if arities is None:
        arities = ArityTable()
    ty = infer_type(parse_term(stmt.body, arities))
    if ty != BOOL:
        raise NotBoolean(f"statement {stmt.source_id!r} has type {print_type(ty)}, not (bool)")


def well_typed(stmt: Statement, arities: ArityTable | None = None) -> bool:
    try:
        check_statement(stmt, arities)
    except TypecheckError:
        return False
    return True


def resolve(t: HType, subst: Subst) -> HType:
    """Chase hole bindings at the root only."""
    while isinstance(t, Hole):
        bound = subst.get(t.ident)
        if bound is None:
            return t
        t = bound
    return t


def deep_resolve(t: HType, subst: Subst) -> HType:
    t = resolve(t, subst)
    if isinstance(t, TyApp) and t.args:
        return TyApp(t.name, tuple(deep_resolve(a, subst) for a in t.args))
    return t


def _occurs(ident: int, t: HType, subst: Subst) -> bool:
    t = resolve(t, subst)
    if isinstance(t, Hole):
        return t.ident == ident
    if isinstance(t, TyApp):
        return any(_occurs(ident, a, subst) for a in t.args)
    return False


def _unify_into(a: HType, b: HType, subst: Subst) -> None:
    a = resolve(a, subst)
    b = resolve(b, subst)
    if isinstance(a, Hole) or isinstance(b, Hole):
        if isinstance(a, Hole) and isinstance(b, Hole) and a.ident == b.ident:
            return
        hole, other = (a, b) if isinstance(a, Hole) else (b, a)
        if _occurs(hole.ident, other, subst):
            raise OccursCheck(f"hole {hole.ident} occurs in {print_type(deep_resolve(other, subst))}")
        subst[hole.ident] = other
        return
    if isinstance(a, TyVar) or isinstance(b, TyVar):
        if isinstance(a, TyVar) and isinstance(b, TyVar) and a.name == b.name:
            return
        raise RigidClash(f"cannot unify {print_type(a)} with {print_type(b)}")
    assert isinstance(a, TyApp) and isinstance(b, TyApp)
    if a.name != b.name:
        raise ConstructorClash(f"{a.name} vs {b.name}")
    if len(a.args) != len(b.args):
        raise ArityClash(f"{a.name}/{len(a.args)} vs {b.name}/{len(b.args)}")
    for x, y in zip(a.args, b.args):
        _unify_into(x, y, subst)


def unify(a: HType, b: HType, subst: Subst | None = None) -> Subst:
    """Most general unifier of ``a`` and ``b`` extending ``subst``.

    The input substitution is left untouched; holes are the only flexible
    things, type variables being rigid. Raises a UnifyError subclass on
    clash or failed occurs check.
    """
    out = dict(subst) if subst else {}
    _unify_into(a, b, out)
    return out


@dataclass(frozen=True)
class Unique:
    ty: HType


@dataclass(frozen=True)
class Ambiguous:
    free_holes: int


@dataclass(frozen=True)
class IllTyped:
    reason: str


TypeSolution = Union[Unique, Ambiguous, IllTyped]


def _constrain(t: Term, subst: Subst, alloc: HoleAllocator) -> HType:
    if isinstance(t, (Var, Const, Opaque)):
        return t.ty
    if isinstance(t, App):
        fn_ty = _constrain(t.fn, subst, alloc)
        arg_ty = _constrain(t.arg, subst, alloc)
        result = alloc.fresh()
        _unify_into(fn_ty, TyApp("fun", (arg_ty, result)), subst)
        return result
    assert isinstance(t, Abs)
    return TyApp("fun", (t.binder.ty, _constrain(t.body, subst, alloc)))


def _holes_in(t: HType) -> set[int]:
    if isinstance(t, Hole):
        return {t.ident}
    if isinstance(t, TyApp):
        out: set[int] = set()
        for a in t.args:
            out |= _holes_in(a)
        return out
    return set()


def solve_hole(
    stmt: Statement,
    mask_policy: MaskPolicy = MaskPolicy.FRESH,
    arities: ArityTable | None = None,
) -> TypeSolution:
    """Solve the single ``<PREDICT>`` type hole in a prompt statement.

    Constraint generation runs the usual application/abstraction typing
    rules with holes standing in for the masked pieces, adds the constraint
    that the whole statement is boolean, and unifies. The answer is Unique
    when the predict hole's representative is ground, Ambiguous otherwise,
    and IllTyped when the constraints cannot be satisfied. Each ``<MASK>``
    is an independent fresh hole even if the masked subtrees were equal:
    masking destroyed that identity on purpose.
    """
    alloc = HoleAllocator(mask_policy)
    if arities is None:
        arities = ArityTable()
    term = parse_term(stmt.body, arities, alloc)
    if alloc.predict_ident is None:
        raise MalformedPrompt("no <PREDICT> in prompt")
    subst: Subst = {}
    try:
        top = _constrain(term, subst, alloc)
        _unify_into(top, BOOL, subst)
    except UnifyError as exc:
        return IllTyped(str(exc))
    answer = deep_resolve(Hole(alloc.predict_ident), subst)
    free = _holes_in(answer)
    if free:
        return Ambiguous(len(free))
    return Unique(answer)
