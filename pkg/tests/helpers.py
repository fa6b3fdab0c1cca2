"""Brute-force oracles and generators shared by the test modules.

Nothing here calls into the library's order-theoretic algorithms: each oracle
works from a ``leq`` predicate or a raw table so that it can be used to check
the library independently.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass

from scottkit import pcf
from scottkit.domain import FinPoset
from scottkit.pcf import FIX, NAT, App, Arrow, K, S, Term
from scottkit.wtree import Signature, WTree


# posets


def random_dag_poset(rng: random.Random, n: int = 6, density: float | None = None) -> FinPoset:
    """Reflexive-transitive closure of a random DAG on ``n`` shuffled labels."""
    density = rng.random() if density is None else density
    labels = [f"x{i}" for i in range(n)]
    rng.shuffle(labels)
    pairs = [(labels[i], labels[j]) for i in range(n) for j in range(i + 1, n) if rng.random() < density]
    return FinPoset.from_relation(sorted(labels), pairs)


def all_natural_posets(n: int):
    """Every poset on ``0..n-1`` whose order extends the natural one, closed and deduplicated.

    Covers every poset of size ``n`` up to isomorphism.
    """
    slots = [(i, j) for i in range(n) for j in range(i + 1, n)]
    seen = set()
    for bits in range(1 << len(slots)):
        rel = [[i == j for j in range(n)] for i in range(n)]
        for k, (i, j) in enumerate(slots):
            if bits >> k & 1:
                rel[i][j] = True
        for m in range(n):
            for i in range(n):
                if rel[i][m]:
                    for j in range(n):
                        if rel[m][j]:
                            rel[i][j] = True
        key = tuple(map(tuple, rel))
        if key not in seen:
            seen.add(key)
            yield FinPoset([str(i) for i in range(n)], rel)


def is_directed_oracle(leq, subset) -> bool:
    s = list(subset)
    return bool(s) and all(any(leq(a, c) and leq(b, c) for c in s) for a in s for b in s)


def sup_oracle(elements, leq, subset):
    ubs = [u for u in elements if all(leq(a, u) for a in subset)]
    least = [u for u in ubs if all(leq(u, v) for v in ubs)]
    return least[0] if least else None


def way_below_oracle(elements, leq, x, y) -> bool:
    """Definition of way-below by enumerating every subset of a small poset."""
    elements = list(elements)
    for r in range(1, len(elements) + 1):
        for d in itertools.combinations(elements, r):
            if not is_directed_oracle(leq, d):
                continue
            s = sup_oracle(elements, leq, d)
            if s is not None and leq(y, s) and not any(leq(x, a) for a in d):
                return False
    return True


def count_monotone(src_elems, src_leq, tgt_elems, tgt_leq) -> int:
    """Monotone maps counted by backtracking in index order."""
    src = list(src_elems)
    tgt = list(tgt_elems)
    table: dict = {}

    def go(k: int) -> int:
        if k == len(src):
            return 1
        x = src[k]
        total = 0
        for v in tgt:
            ok = all((not src_leq(y, x) or tgt_leq(table[y], v)) and (not src_leq(x, y) or tgt_leq(v, table[y]))
                     for y in src[:k])
            if ok:
                table[x] = v
                total += go(k + 1)
                del table[x]
        return total

    return go(0)


def fixed_points(elements, table):
    return [x for x in elements if table[x] == x]


def least_fixed_point_oracle(elements, leq, table):
    fps = fixed_points(elements, table)
    least = [x for x in fps if all(leq(x, y) for y in fps)]
    return least[0] if least else None


# PCF programs built from a small lambda notation by bracket abstraction


@dataclass(frozen=True)
class Var:
    name: str
    type: pcf.PcfType


@dataclass(frozen=True)
class Lam:
    var: Var
    body: object


@dataclass(frozen=True)
class Ap:
    fun: object
    arg: object


def _type(e) -> pcf.PcfType:
    if isinstance(e, (Var, Term)):
        return e.type
    if isinstance(e, Lam):
        return Arrow(e.var.type, _type(e.body))
    return _type(e.fun).cod


def _free(e, v: Var) -> bool:
    if isinstance(e, Var):
        return e == v
    if isinstance(e, Term):
        return False
    if isinstance(e, Lam):
        return e.var != v and _free(e.body, v)
    return _free(e.fun, v) or _free(e.arg, v)


def _mk(f, *args):
    for a in args:
        f = App(f, a) if isinstance(f, Term) and isinstance(a, Term) else Ap(f, a)
    return f


def _abstract(v: Var, e):
    """``[v] e`` for ``e`` already free of lambdas; other variables may remain."""
    sigma = v.type
    if e == v:
        return S(sigma, Arrow(sigma, sigma), sigma)(K(sigma, Arrow(sigma, sigma)), K(sigma, sigma))
    if not _free(e, v):
        return _mk(K(_type(e), sigma), e)
    f, a = e.fun, e.arg
    return _mk(S(sigma, _type(a), _type(e)), _abstract(v, f), _abstract(v, a))


def _lower(e):
    if isinstance(e, Lam):
        return _abstract(e.var, _lower(e.body))
    if isinstance(e, Ap):
        return _mk(_lower(e.fun), _lower(e.arg))
    return e


def compile_lambda(e) -> Term:
    out = _lower(e)
    if not isinstance(out, Term):
        raise ValueError("expression has free variables")
    return out


def ap(f, *args):
    for a in args:
        f = Ap(f, a)
    return f


N2N = Arrow(NAT, NAT)
N3 = Arrow(NAT, N2N)
_f, _n, _m = Var("f", N2N), Var("n", NAT), Var("m", NAT)
_g = Var("g", N3)

ZERO, SUCC, PRED, IFZ = pcf.ZERO, pcf.SUCC, pcf.PRED, pcf.IFZ

# countdown n = if n = 0 then 0 else countdown (n - 1)
COUNTDOWN = compile_lambda(ap(FIX(N2N), Lam(_f, Lam(_n, ap(IFZ, ZERO, ap(_f, ap(PRED, _n)), _n)))))
# double n = if n = 0 then 0 else 2 + double (n - 1)
DOUBLE = compile_lambda(ap(FIX(N2N), Lam(_f, Lam(_n, ap(
    IFZ, ZERO, ap(SUCC, ap(SUCC, ap(_f, ap(PRED, _n)))), _n)))))
# add m n = if n = 0 then m else 1 + add m (n - 1)
ADD = compile_lambda(ap(FIX(N3), Lam(_g, Lam(_m, Lam(_n, ap(
    IFZ, _m, ap(SUCC, ap(_g, _m, ap(PRED, _n))), _n))))))

# (name, term, expected value or None for divergence)
CORPUS: list[tuple[str, Term, int | None]] = [
    ("numeral zero", pcf.compile_source("zero"), 0),
    ("numeral seven", pcf.compile_source("#7"), 7),
    ("succ/pred chain", pcf.compile_source("succ (succ (pred #3))"), 4),
    ("pred of zero", pcf.compile_source("pred zero"), 0),
    ("ifz on zero", pcf.compile_source("ifz #1 #2 zero"), 1),
    ("ifz on successor", pcf.compile_source("ifz #1 #2 #5"), 2),
    ("ifz on a computed scrutinee", pcf.compile_source("ifz #1 #2 (pred #1)"), 1),
    ("ifz with a divergent unused branch", pcf.compile_source("ifz (fix (s k k)) #3 #1"), 3),
    ("ifz taking a divergent branch", pcf.compile_source("ifz (fix (s k k)) #1 zero"), None),
    ("ifz on a divergent scrutinee", pcf.compile_source("ifz #1 #2 (fix (s k k))"), None),
    ("k discards its second argument", pcf.compile_source("k #3 (fix (s k k))"), 3),
    ("s k k is the identity", pcf.compile_source("s k k #6"), 6),
    ("fix of a constant", pcf.compile_source("fix (k zero)"), 0),
    ("fix of the identity diverges", pcf.compile_source("fix (s k k)"), None),
    ("succ of a divergent term", pcf.compile_source("succ (fix (s k k))"), None),
    ("nested fix", pcf.compile_source("fix (k (fix (k #2)))"), 2),
    ("fix at function type", pcf.compile_source("(fix (k (s k k))) #4"), 4),
    ("pred of an ifz", pcf.compile_source("pred (ifz #4 #9 #1)"), 8),
    ("countdown via fix", COUNTDOWN(pcf.numeral(5)), 0),
    ("double via fix", DOUBLE(pcf.numeral(3)), 6),
    ("addition via fix", ADD(pcf.numeral(2), pcf.numeral(3)), 5),
    ("double of a divergent argument", DOUBLE(pcf.compile_source("fix (s k k)")), None),
]


# random PCF types and terms


def random_type(rng: random.Random, depth: int) -> pcf.PcfType:
    if depth <= 1 or rng.random() < 0.4:
        return NAT
    return Arrow(random_type(rng, depth - 1), random_type(rng, depth - 1))


def random_term(rng: random.Random, ty: pcf.PcfType, depth: int) -> Term:
    """A well-typed closed term of type ``ty``, roughly ``depth`` deep."""
    if ty == NAT:
        if depth <= 0:
            return pcf.numeral(rng.randrange(3))
        c = rng.randrange(5)
        if c == 0:
            return pcf.numeral(rng.randrange(3))
        if c == 1:
            return App(rng.choice([SUCC, PRED]), random_term(rng, NAT, depth - 1))
        if c == 2:
            return IFZ(*(random_term(rng, NAT, depth - 1) for _ in range(3)))
        sigma = random_type(rng, 2)
        return App(random_term(rng, Arrow(sigma, NAT), depth - 1), random_term(rng, sigma, depth - 1))
    sigma, tau = ty.dom, ty.cod
    choices = ["k", "s"]
    if sigma == NAT and tau == NAT:
        choices += ["succ", "pred", "ifz"]
    if depth <= 0:
        choices = [c for c in choices if c in ("succ", "pred")] or ["k"]
    c = rng.choice(choices)
    if c in ("succ", "pred"):
        return SUCC if c == "succ" else PRED
    if c == "ifz":
        return IFZ(random_term(rng, NAT, depth - 1), random_term(rng, NAT, depth - 1))
    if c == "k":
        return K(tau, sigma)(random_term(rng, tau, depth - 1))
    rho = NAT
    f = random_term(rng, Arrow(sigma, Arrow(rho, tau)), depth - 1)
    g = random_term(rng, Arrow(sigma, rho), depth - 1)
    return S(sigma, rho, tau)(f, g)


# W-trees


SAMPLE_SIGNATURE = Signature(
    {"a", "b"},
    [
        ("leaf", "a", ()),
        ("nil", "b", ()),
        ("one", "b", ()),
        ("pair", "a", ("a", "b")),
        ("wrap", "b", ("a",)),
        ("tri", "b", ("b", "b", "a")),
        ("twin", "a", ("a", "a")),
    ],
)


def random_wtree(rng: random.Random, sig: Signature, sort, depth: int) -> WTree:
    cons = [c for c in sig.constructors.values() if c.target == sort]
    if depth <= 1:
        cons = [c for c in cons if not c.args]
    c = rng.choice(cons)
    return WTree(c.label, tuple(random_wtree(rng, sig, s, depth - 1) for s in c.args))


def mutate(rng: random.Random, sig: Signature, t: WTree, depth: int) -> WTree:
    """Copy of ``t`` with one random subtree replaced by a fresh tree of the same sort."""
    if not t.children or rng.random() < 0.25:
        return random_wtree(rng, sig, sig.sort_of(t), depth)
    i = rng.randrange(len(t.children))
    kids = list(t.children)
    kids[i] = mutate(rng, sig, kids[i], depth - 1)
    return WTree(t.label, tuple(kids))


def copy_tree(t: WTree) -> WTree:
    return WTree(t.label, tuple(copy_tree(c) for c in t.children))


def structural_eq(a: WTree, b: WTree) -> bool:
    return (a.label == b.label and len(a.children) == len(b.children)
            and all(structural_eq(x, y) for x, y in zip(a.children, b.children)))
