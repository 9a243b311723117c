#!/usr/bin/env python3
"""Regenerate the bundled synthetic corpus.

The corpus is a small, hand-designed set of HOL-flavored statements, written
through a typed term DSL so every statement is well-typed by construction;
the script re-verifies each one with the package's own checker before
writing. Statements are deliberately auditable: each is a named, readable
construction below. Splits are assigned explicitly.

Usage: python scripts/make_corpus.py [--out PATH]
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from holmask.sexpr import (
    Atom,
    SExpr,
    SList,
    Split,
    Statement,
    Tag,
    print_sexpr,
    subexpressions,
    tokens_of,
)
from holmask.typecheck import BOOL, ArityTable, HType, TyApp, TyVar, check_statement, type_sexpr

NUM = TyApp("num")
REAL = TyApp("real")
A = TyVar("A")
B = TyVar("B")
Q0 = TyVar("?0")
N = TyVar("N")


def fn(dom: HType, cod: HType) -> HType:
    return TyApp("fun", (dom, cod))


def setof(t: HType) -> HType:
    return fn(t, BOOL)


def listof(t: HType) -> HType:
    return TyApp("list", (t,))


def prod(a: HType, b: HType) -> HType:
    return TyApp("prod", (a, b))


def v(name: str, ty: HType) -> SExpr:
    return SList((Atom("v"), type_sexpr(ty), Atom(name)))


def c(name: str, ty: HType) -> SExpr:
    return SList((Atom("c"), type_sexpr(ty), Atom(name)))


def a(f: SExpr, *args: SExpr) -> SExpr:
    out = f
    for arg in args:
        out = SList((Atom("a"), out, arg))
    return out


def lam(binder: SExpr, body: SExpr) -> SExpr:
    return SList((Atom("l"), binder, body))


def forall(name: str, ty: HType, body: SExpr) -> SExpr:
    return a(c("!", fn(fn(ty, BOOL), BOOL)), lam(v(name, ty), body))


def exists(name: str, ty: HType, body: SExpr) -> SExpr:
    return a(c("?", fn(fn(ty, BOOL), BOOL)), lam(v(name, ty), body))


def foralls(names: str, ty: HType, body: SExpr) -> SExpr:
    out = body
    for name in reversed(names.split()):
        out = forall(name, ty, out)
    return out


def binop(name: str, ty: HType, res: HType):
    def build(x: SExpr, y: SExpr) -> SExpr:
        return a(c(name, fn(ty, fn(ty, res))), x, y)

    return build


def eq(ty: HType):
    return binop("=", ty, BOOL)


conj = binop("/\\", BOOL, BOOL)
disj = binop("\\/", BOOL, BOOL)
imp = binop("==>", BOOL, BOOL)
plus = binop("+", NUM, NUM)
times = binop("*", NUM, NUM)
minus = binop("-", NUM, NUM)
le = binop("<=", NUM, BOOL)
lt = binop("<", NUM, BOOL)
radd = binop("real_add", REAL, REAL)
rmul = binop("real_mul", REAL, REAL)
rle = binop("real_le", REAL, BOOL)


def neg(x: SExpr) -> SExpr:
    return a(c("~", fn(BOOL, BOOL)), x)


def conjs(*xs: SExpr) -> SExpr:
    out = xs[-1]
    for x in reversed(xs[:-1]):
        out = conj(x, out)
    return out


def num_lit(n: int) -> SExpr:
    bits = c("_0", NUM)
    if n:
        digits = []
        while n:
            digits.append(n % 2)
            n //= 2
        for d in reversed(digits):
            bits = a(c("BIT1" if d else "BIT0", fn(NUM, NUM)), bits)
    return a(c("NUMERAL", fn(NUM, NUM)), bits)


def suc(x: SExpr) -> SExpr:
    return a(c("SUC", fn(NUM, NUM)), x)


def set_binop(name: str, t: HType):
    def build(x: SExpr, y: SExpr) -> SExpr:
        return a(c(name, fn(setof(t), fn(setof(t), setof(t)))), x, y)

    return build


def set_pred(name: str, t: HType):
    def build(x: SExpr, y: SExpr) -> SExpr:
        return a(c(name, fn(setof(t), fn(setof(t), BOOL))), x, y)

    return build


def member(x: SExpr, s: SExpr, t: HType) -> SExpr:
    return a(c("IN", fn(t, fn(setof(t), BOOL))), x, s)


def insert(x: SExpr, s: SExpr, t: HType) -> SExpr:
    return a(c("INSERT", fn(t, fn(setof(t), setof(t)))), x, s)


def empty(t: HType) -> SExpr:
    return c("EMPTY", setof(t))


def univ(t: HType) -> SExpr:
    return c("UNIV", setof(t))


def pair(x: SExpr, y: SExpr, tx: HType, ty_: HType) -> SExpr:
    return a(c(",", fn(tx, fn(ty_, prod(tx, ty_)))), x, y)


def list_binop(name: str, t: HType):
    def build(x: SExpr, y: SExpr) -> SExpr:
        return a(c(name, fn(listof(t), fn(listof(t), listof(t)))), x, y)

    return build


STATEMENTS: list[tuple[str, Split, Tag, SExpr]] = []


def stmt(name: str, split: Split, body: SExpr, tag: Tag = Tag.THEOREM) -> None:
    STATEMENTS.append((name, split, tag, body))


# --- generic equality -------------------------------------------------------

# The canonical reflexivity statement over an arbitrary type.
stmt("eq_refl_generic", Split.VALID, eq(A)(v("x", A), v("x", A)))
stmt("eq_refl_forall", Split.VALID, forall("p", BOOL, eq(BOOL)(v("p", BOOL), v("p", BOOL))))

# Tiny free-variable statements (HOL theorems quantify free variables
# implicitly); these keep a few bodies small enough for exhaustive checks.
stmt("not_false", Split.VALID, neg(c("F", BOOL)))
stmt("imp_refl_free", Split.VALID, imp(v("p", BOOL), v("p", BOOL)))
stmt("le_refl_free", Split.VALID, le(v("m", NUM), v("m", NUM)))
stmt("disj_true_free", Split.TEST, disj(v("p", BOOL), c("T", BOOL)))
# --- arithmetic -------------------------------------------------------------

m, n, p, q = v("m", NUM), v("n", NUM), v("p", NUM), v("q", NUM)

stmt(
    "le_trans",
    Split.VALID,
    foralls("m n p", NUM, imp(conj(le(m, n), le(n, p)), le(m, p))),
)
stmt(
    "le_antisym",
    Split.VALID,
    foralls("m n", NUM, imp(conj(le(m, n), le(n, m)), eq(NUM)(m, n))),
)
stmt(
    "suc_inj",
    Split.VALID,
    foralls("m n", NUM, imp(eq(NUM)(suc(m), suc(n)), eq(NUM)(m, n))),
)
stmt(
    "add_eq_zero",
    Split.TRAIN,
    foralls(
        "m n",
        NUM,
        eq(BOOL)(
            eq(NUM)(plus(m, n), num_lit(0)),
            conj(eq(NUM)(m, num_lit(0)), eq(NUM)(n, num_lit(0))),
        ),
    ),
)
stmt(
    "sub_add_cancel",
    Split.VALID,
    foralls("m n", NUM, imp(le(n, m), eq(NUM)(plus(minus(m, n), n), m))),
)
stmt(
    "add_cancel_left",
    Split.VALID,
    foralls(
        "x y a",
        NUM,
        imp(
            eq(NUM)(v("x", NUM), v("y", NUM)),
            eq(NUM)(plus(v("a", NUM), v("x", NUM)), plus(v("a", NUM), v("y", NUM))),
        ),
    ),
)
stmt("not_lt_zero", Split.VALID, forall("n", NUM, neg(lt(n, num_lit(0)))))
stmt(
    "arith_bundle",
    Split.TRAIN,
    foralls(
        "m n p",
        NUM,
        conjs(
            eq(NUM)(plus(m, num_lit(0)), m),
            eq(NUM)(times(m, num_lit(1)), m),
            eq(NUM)(plus(m, suc(n)), suc(plus(m, n))),
            eq(NUM)(times(suc(m), n), plus(times(m, n), n)),
            le(num_lit(0), m),
            imp(lt(m, n), le(suc(m), n)),
        ),
    ),
)
stmt(
    "numeral_laws",
    Split.TRAIN,
    foralls(
        "m n",
        NUM,
        conjs(
            eq(NUM)(times(num_lit(2), m), plus(m, m)),
            eq(NUM)(plus(times(num_lit(2), m), num_lit(1)), suc(times(num_lit(2), m))),
            eq(BOOL)(eq(NUM)(plus(m, n), plus(n, m)), c("T", BOOL)),
            le(m, plus(m, times(n, num_lit(3)))),
        ),
    ),
)
stmt(
    "even_or_odd",
    Split.TRAIN,
    forall(
        "n",
        NUM,
        disj(
            exists("m", NUM, eq(NUM)(n, times(num_lit(2), m))),
            exists("m", NUM, eq(NUM)(n, plus(times(num_lit(2), m), num_lit(1)))),
        ),
    ),
)
stmt(
    "min_le_both",
    Split.TEST,
    foralls(
        "m n",
        NUM,
        imp(le(m, n), eq(NUM)(minus(plus(m, n), n), m)),
    ),
)

# --- order / implication shapes for the assumptions task --------------------

stmt(
    "chain_impl",
    Split.VALID,
    foralls(
        "p q r",
        BOOL,
        imp(
            conj(imp(v("p", BOOL), v("q", BOOL)), imp(v("q", BOOL), v("r", BOOL))),
            imp(v("p", BOOL), v("r", BOOL)),
        ),
    ),
)
stmt(
    "bicond_from_parts",
    Split.VALID,
    foralls(
        "p q r",
        BOOL,
        imp(
            conj(v("q", BOOL), neg(v("p", BOOL))),
            imp(eq(BOOL)(v("p", BOOL), v("q", BOOL)), v("r", BOOL)),
        ),
    ),
)
# --- sets over a polymorphic element type -----------------------------------

inter = set_binop("INTER", Q0)
union = set_binop("UNION", Q0)
diff = set_binop("DIFF", Q0)
subset = set_pred("SUBSET", Q0)
s_, t_, u_ = v("s", setof(Q0)), v("t", setof(Q0)), v("u", setof(Q0))
x0 = v("x", Q0)

stmt(
    "subset_inter_absorb",
    Split.VALID,
    foralls("s t", setof(Q0), imp(subset(s_, t_), eq(setof(Q0))(inter(s_, t_), s_))),
)
stmt(
    "subset_trans",
    Split.TRAIN,
    foralls(
        "s t u",
        setof(Q0),
        imp(conj(subset(s_, t_), subset(t_, u_)), subset(s_, u_)),
    ),
)
stmt(
    "disjoint_from_diff",
    Split.VALID,
    foralls(
        "s t",
        setof(Q0),
        imp(
            subset(t_, diff(univ(Q0), s_)),
            eq(setof(Q0))(inter(s_, t_), empty(Q0)),
        ),
    ),
)
stmt(
    "insert_absorb",
    Split.VALID,
    forall(
        "x",
        Q0,
        forall(
            "s",
            setof(Q0),
            imp(
                member(x0, s_, Q0),
                eq(setof(Q0))(insert(x0, s_, Q0), s_),
            ),
        ),
    ),
)
stmt(
    "in_insert_cases",
    Split.TRAIN,
    forall(
        "x",
        Q0,
        forall(
            "y",
            Q0,
            forall(
                "s",
                setof(Q0),
                eq(BOOL)(
                    member(x0, insert(v("y", Q0), s_, Q0), Q0),
                    disj(eq(Q0)(x0, v("y", Q0)), member(x0, s_, Q0)),
                ),
            ),
        ),
    ),
)
stmt(
    "set_algebra_bundle",
    Split.TRAIN,
    foralls(
        "s t u",
        setof(Q0),
        conjs(
            eq(setof(Q0))(inter(s_, s_), s_),
            eq(setof(Q0))(union(s_, empty(Q0)), s_),
            eq(setof(Q0))(inter(s_, union(t_, u_)), union(inter(s_, t_), inter(s_, u_))),
            eq(setof(Q0))(diff(s_, empty(Q0)), s_),
            subset(inter(s_, t_), union(s_, t_)),
            imp(subset(s_, t_), subset(diff(s_, u_), t_)),
        ),
    ),
)
stmt(
    "image_union",
    Split.TRAIN,
    forall(
        "f",
        fn(Q0, B),
        foralls(
            "s t",
            setof(Q0),
            eq(setof(B))(
                a(
                    c("IMAGE", fn(fn(Q0, B), fn(setof(Q0), setof(B)))),
                    v("f", fn(Q0, B)),
                    union(s_, t_),
                ),
                a(
                    c("UNION", fn(setof(B), fn(setof(B), setof(B)))),
                    a(
                        c("IMAGE", fn(fn(Q0, B), fn(setof(Q0), setof(B)))),
                        v("f", fn(Q0, B)),
                        s_,
                    ),
                    a(
                        c("IMAGE", fn(fn(Q0, B), fn(setof(Q0), setof(B)))),
                        v("f", fn(Q0, B)),
                        t_,
                    ),
                ),
            ),
        ),
    ),
)

# --- lists -------------------------------------------------------------------

append = list_binop("APPEND", A)
l1, l2, l3 = v("l1", listof(A)), v("l2", listof(A)), v("l3", listof(A))
rev = lambda x: a(c("REVERSE", fn(listof(A), listof(A))), x)
length = lambda x: a(c("LENGTH", fn(listof(A), NUM)), x)
mem = lambda x, l: a(c("MEM", fn(A, fn(listof(A), BOOL))), x, l)

stmt(
    "reverse_append",
    Split.VALID,
    foralls(
        "l1 l2",
        listof(A),
        eq(listof(A))(rev(append(l1, l2)), append(rev(l2), rev(l1))),
    ),
)
stmt(
    "list_bundle",
    Split.TRAIN,
    foralls(
        "l1 l2",
        listof(A),
        conjs(
            eq(listof(A))(append(l1, c("NIL", listof(A))), l1),
            eq(listof(A))(append(c("NIL", listof(A)), l1), l1),
            eq(NUM)(length(rev(l1)), length(l1)),
            eq(BOOL)(
                eq(listof(A))(append(l1, l2), c("NIL", listof(A))),
                conj(
                    eq(listof(A))(l1, c("NIL", listof(A))),
                    eq(listof(A))(l2, c("NIL", listof(A))),
                ),
            ),
        ),
    ),
)

# --- pairs -------------------------------------------------------------------

fst = lambda x: a(c("FST", fn(prod(A, B), A)), x)
snd = lambda x: a(c("SND", fn(prod(A, B), B)), x)

stmt(
    "fst_pair",
    Split.TEST,
    forall("x", A, forall("y", B, eq(A)(fst(pair(v("x", A), v("y", B), A, B)), v("x", A)))),
)
stmt(
    "snd_pair",
    Split.TEST,
    forall("x", A, forall("y", B, eq(B)(snd(pair(v("x", A), v("y", B), A, B)), v("y", B)))),
)
# --- reals -------------------------------------------------------------------

rx, ry, rz = v("x", REAL), v("y", REAL), v("z", REAL)
rnum = lambda k: a(c("real_of_num", fn(NUM, REAL)), num_lit(k))

stmt(
    "real_bundle",
    Split.TRAIN,
    foralls(
        "x y z",
        REAL,
        conjs(
            eq(REAL)(radd(rx, ry), radd(ry, rx)),
            eq(REAL)(rmul(rx, rmul(ry, rz)), rmul(rmul(rx, ry), rz)),
            eq(REAL)(radd(rx, rnum(0)), rx),
            rle(rnum(0), rmul(rx, rx)),
            imp(conj(rle(rx, ry), rle(ry, rz)), rle(rx, rz)),
        ),
    ),
)
# --- vectors (multi-argument type constructors) ------------------------------

CART = TyApp("cart", (REAL, N))
vadd = binop("vector_add", CART, CART)
vx, vy = v("x", CART), v("y", CART)

stmt(
    "vector_add_comm",
    Split.VALID,
    foralls("x y", CART, eq(CART)(vadd(vx, vy), vadd(vy, vx))),
)
# --- goal-tagged intermediate steps ------------------------------------------

stmt(
    "goal_add_step",
    Split.TRAIN,
    foralls(
        "m n p",
        NUM,
        conjs(
            eq(NUM)(plus(suc(m), n), suc(plus(m, n))),
            eq(NUM)(plus(m, suc(n)), suc(plus(m, n))),
            eq(NUM)(times(suc(m), n), plus(times(m, n), n)),
            imp(eq(NUM)(m, n), eq(NUM)(plus(m, p), plus(n, p))),
            imp(le(suc(m), n), lt(m, n)),
        ),
    ),
    tag=Tag.GOAL,
)
stmt(
    "goal_subset_step",
    Split.TRAIN,
    foralls(
        "s t u",
        setof(Q0),
        conjs(
            imp(eq(setof(Q0))(s_, t_), subset(s_, t_)),
            imp(conj(subset(s_, t_), subset(t_, s_)), eq(setof(Q0))(s_, t_)),
            imp(subset(s_, t_), subset(inter(s_, u_), inter(t_, u_))),
            imp(subset(s_, t_), subset(union(s_, u_), union(t_, u_))),
        ),
    ),
    tag=Tag.GOAL,
)
# --- larger statements to give the samplers room ------------------------------

stmt(
    "arith_core_bundle",
    Split.TRAIN,
    foralls(
        "m n p",
        NUM,
        conjs(
            eq(NUM)(plus(m, n), plus(n, m)),
            eq(NUM)(plus(plus(m, n), p), plus(m, plus(n, p))),
            eq(NUM)(times(m, n), times(n, m)),
            eq(NUM)(times(m, plus(n, p)), plus(times(m, n), times(m, p))),
            eq(NUM)(times(plus(m, n), p), plus(times(m, p), times(n, p))),
            eq(NUM)(times(m, times(n, p)), times(times(m, n), p)),
        ),
    ),
)
stmt(
    "numeral_table",
    Split.TRAIN,
    conjs(
        eq(NUM)(plus(num_lit(1), num_lit(1)), num_lit(2)),
        eq(NUM)(plus(num_lit(2), num_lit(3)), num_lit(5)),
        eq(NUM)(times(num_lit(3), num_lit(4)), num_lit(12)),
        le(num_lit(7), num_lit(11)),
        eq(NUM)(suc(num_lit(9)), num_lit(10)),
        eq(NUM)(minus(num_lit(15), num_lit(6)), num_lit(9)),
        eq(NUM)(times(num_lit(2), num_lit(8)), num_lit(16)),
        le(num_lit(5), times(num_lit(5), num_lit(5))),
    ),
)

_abc = [v(ch, NUM) for ch in "abcdefgh"]
stmt(
    "add_shuffle_deep",
    Split.TRAIN,
    eq(NUM)(
        plus(
            plus(plus(_abc[0], _abc[1]), plus(_abc[2], _abc[3])),
            plus(plus(_abc[4], _abc[5]), plus(_abc[6], _abc[7])),
        ),
        plus(
            _abc[0],
            plus(
                _abc[1],
                plus(_abc[2], plus(_abc[3], plus(_abc[4], plus(_abc[5], plus(_abc[6], _abc[7]))))),
            ),
        ),
    ),
)
stmt(
    "set_lattice_bundle",
    Split.TRAIN,
    foralls(
        "s t u",
        setof(Q0),
        conjs(
            eq(setof(Q0))(inter(s_, t_), inter(t_, s_)),
            eq(setof(Q0))(union(s_, t_), union(t_, s_)),
            eq(setof(Q0))(union(union(s_, t_), u_), union(s_, union(t_, u_))),
            eq(setof(Q0))(inter(s_, union(t_, u_)), union(inter(s_, t_), inter(s_, u_))),
            eq(setof(Q0))(union(s_, inter(t_, u_)), inter(union(s_, t_), union(s_, u_))),
            eq(setof(Q0))(
                diff(univ(Q0), union(s_, t_)),
                inter(diff(univ(Q0), s_), diff(univ(Q0), t_)),
            ),
            eq(setof(Q0))(diff(s_, t_), inter(s_, diff(univ(Q0), t_))),
        ),
    ),
)
stmt(
    "list_mem_bundle",
    Split.TRAIN,
    forall(
        "x",
        A,
        foralls(
            "l1 l2 l3",
            listof(A),
            conjs(
                eq(listof(A))(append(append(l1, l2), l3), append(l1, append(l2, l3))),
                eq(BOOL)(
                    mem(v("x", A), append(l1, append(l2, l3))),
                    disj(mem(v("x", A), l1), disj(mem(v("x", A), l2), mem(v("x", A), l3))),
                ),
                eq(NUM)(length(rev(l1)), length(l1)),
                eq(BOOL)(mem(v("x", A), rev(l1)), mem(v("x", A), l1)),
            ),
        ),
    ),
)
stmt(
    "bool_algebra_bundle",
    Split.TRAIN,
    foralls(
        "p q r",
        BOOL,
        conjs(
            eq(BOOL)(conj(v("p", BOOL), v("q", BOOL)), conj(v("q", BOOL), v("p", BOOL))),
            eq(BOOL)(
                disj(v("p", BOOL), conj(v("q", BOOL), v("r", BOOL))),
                conj(disj(v("p", BOOL), v("q", BOOL)), disj(v("p", BOOL), v("r", BOOL))),
            ),
            eq(BOOL)(neg(neg(v("p", BOOL))), v("p", BOOL)),
            eq(BOOL)(imp(v("p", BOOL), v("q", BOOL)), disj(neg(v("p", BOOL)), v("q", BOOL))),
        ),
    ),
)
_chain = [v(name, NUM) for name in "abcdefghijklmnop"]


def _right_sum(terms):
    out = terms[-1]
    for term in reversed(terms[:-1]):
        out = plus(term, out)
    return out


def _left_sum(terms):
    out = terms[0]
    for term in terms[1:]:
        out = plus(out, term)
    return out


# Pure associativity shuffle over a 16-variable sum; the long spine gives the
# statement subtrees of every size between a leaf and the whole body.
stmt("assoc_tower", Split.TRAIN, eq(NUM)(_left_sum(_chain), _right_sum(_chain)))

_ladder_vars = "abcdefgh"


def _le_ladder(names: str) -> SExpr:
    first, last = names[0], names[-1]
    out = le(v(first, NUM), v(last, NUM))
    for lo, hi in reversed(list(zip(names, names[1:]))):
        out = imp(le(v(lo, NUM), v(hi, NUM)), out)
    return out


stmt(
    "le_ladder_deep",
    Split.TRAIN,
    foralls(" ".join(_ladder_vars), NUM, _le_ladder(_ladder_vars)),
)

stmt(
    "implication_ladder",
    Split.TRAIN,
    foralls(
        "p1 p2 p3 p4 p5 p6",
        BOOL,
        imp(
            conjs(
                imp(v("p1", BOOL), v("p2", BOOL)),
                imp(v("p2", BOOL), v("p3", BOOL)),
                imp(v("p3", BOOL), v("p4", BOOL)),
                imp(v("p4", BOOL), v("p5", BOOL)),
                imp(v("p5", BOOL), v("p6", BOOL)),
            ),
            imp(v("p1", BOOL), v("p6", BOOL)),
        ),
    ),
)

stmt(
    "quantifier_nest",
    Split.TRAIN,
    forall(
        "f",
        fn(NUM, NUM),
        imp(
            forall("n", NUM, le(a(v("f", fn(NUM, NUM)), n), plus(n, num_lit(1)))),
            forall(
                "m",
                NUM,
                exists(
                    "k",
                    NUM,
                    conj(
                        le(a(v("f", fn(NUM, NUM)), m), v("k", NUM)),
                        le(v("k", NUM), plus(m, num_lit(2))),
                    ),
                ),
            ),
        ),
    ),
)
stmt(
    "monotone_image_bundle",
    Split.TRAIN,
    forall(
        "f",
        fn(NUM, NUM),
        imp(
            foralls("m n", NUM, imp(le(m, n), le(a(v("f", fn(NUM, NUM)), m), a(v("f", fn(NUM, NUM)), n)))),
            foralls(
                "m n p",
                NUM,
                imp(
                    conj(le(m, n), le(n, p)),
                    conj(
                        le(a(v("f", fn(NUM, NUM)), m), a(v("f", fn(NUM, NUM)), p)),
                        le(a(v("f", fn(NUM, NUM)), m), plus(a(v("f", fn(NUM, NUM)), n), a(v("f", fn(NUM, NUM)), p))),
                    ),
                ),
            ),
        ),
    ),
)
stmt(
    "galois_pair",
    Split.TRAIN,
    foralls(
        "m n p q",
        NUM,
        imp(
            conj(
                eq(NUM)(plus(m, n), plus(p, q)),
                conj(le(m, p), le(q, n)),
            ),
            conj(
                eq(NUM)(minus(p, m), minus(n, q)),
                conj(le(minus(p, m), n), le(minus(n, q), plus(p, q))),
            ),
        ),
    ),
)
stmt(
    "set_function_mix",
    Split.TRAIN,
    forall(
        "f",
        fn(Q0, Q0),
        foralls(
            "s t",
            setof(Q0),
            imp(
                conj(
                    subset(s_, t_),
                    forall("x", Q0, imp(member(x0, s_, Q0), member(a(v("f", fn(Q0, Q0)), x0), s_, Q0))),
                ),
                forall(
                    "x",
                    Q0,
                    imp(
                        member(x0, s_, Q0),
                        conj(
                            member(a(v("f", fn(Q0, Q0)), x0), t_, Q0),
                            member(x0, union(s_, t_), Q0),
                        ),
                    ),
                ),
            ),
        ),
    ),
)
stmt(
    "pigeonhole_flavor",
    Split.TRAIN,
    foralls(
        "m n p q",
        NUM,
        imp(
            conj(
                lt(m, n),
                conj(lt(n, p), lt(p, q)),
            ),
            conjs(
                lt(m, q),
                le(suc(m), n),
                le(plus(m, num_lit(3)), q),
                neg(eq(NUM)(m, q)),
            ),
        ),
    ),
)

# valid-split equality under nested quantifiers/implications
stmt(
    "double_eq_under_forall",
    Split.VALID,
    forall(
        "x",
        BOOL,
        eq(BOOL)(v("x", BOOL), eq(BOOL)(v("x", BOOL), c("T", BOOL))),
    ),
)
stmt(
    "guarded_union_eq",
    Split.VALID,
    foralls(
        "s t",
        setof(Q0),
        imp(
            subset(s_, t_),
            eq(setof(Q0))(union(s_, t_), t_),
        ),
    ),
)


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument(
        "--out",
        default=str(Path(__file__).resolve().parent.parent / "src/holmask/data/bundled_corpus.jsonl"),
    )
    args = parser.parse_args()

    arities = ArityTable()
    lines = []
    small = 0
    for name, split, tag, body in STATEMENTS:
        statement = Statement(tag, body, split, name)
        check_statement(statement, arities)
        nodes = sum(1 for _ in subexpressions(body))
        if nodes <= 30:
            small += 1
        lines.append(
            json.dumps(
                {"id": name, "split": split.value, "tag": tag.value, "sexpr": print_sexpr(body)},
                sort_keys=True,
            )
        )
    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text("".join(line + "\n" for line in lines) + "", encoding="utf-8")

    splits = {}
    for name, split, tag, body in STATEMENTS:
        splits[split.value] = splits.get(split.value, 0) + 1
    token_counts = [len(tokens_of(body)) for _, _, _, body in STATEMENTS]
    print(f"wrote {len(STATEMENTS)} statements to {out}")
    print(f"splits: {splits}; small (<=30 nodes): {small}")
    print(f"tokens: min={min(token_counts)} mean={sum(token_counts)/len(token_counts):.0f} max={max(token_counts)}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
