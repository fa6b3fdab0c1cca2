"""Bases of finite posets and rounded ideal completions of abstract bases.

Finite abstract bases are handled exhaustively: their ideals are enumerated
as explicit subsets.  Unbounded bases (the dyadics) only get principal
ideals, with membership decided by the basis relation itself.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Any, Callable, Hashable, Iterable, Sequence

from .domain import (
    CapExceeded,
    FinPoset,
    MonoMap,
    PosetError,
    Violation,
    is_compact,
    is_directed,
    join,
    least,
    pointwise_leq,
    sup,
)

IDEAL_ENUMERATION_CAP = 10


@dataclass
class AbstractBasis:
    """A carrier with a decidable relation ``prec`` meant to be transitive and interpolative.

    ``elements`` is the whole carrier when finite, else ``None`` and checks run
    over ``sample``.  The optional witness functions let an unbounded basis
    supply constructive interpolants instead of a search over the sample.
    ``principal_subset(a, c)`` decides ``down(a) <= down(c)`` and
    ``candidates(a, b)`` lists elements worth trying as the intermediate
    element in the way-below characterisation of principal ideals.
    """

    prec: Callable[[Any, Any], bool]
    elements: Sequence[Hashable] | None = None
    reflexive: bool = False
    sample: Sequence[Hashable] | None = None
    nullary_witness: Callable[[Any], Any] | None = None
    binary_witness: Callable[[Any, Any, Any], Any] | None = None
    principal_subset: Callable[[Any, Any], bool] | None = None
    candidates: Callable[[Any, Any], Iterable[Any]] | None = None
    show: Callable[[Any], str] = str

    @property
    def finite(self) -> bool:
        return self.elements is not None

    def carrier(self) -> Sequence[Hashable]:
        if self.elements is not None:
            return self.elements
        if self.sample is None:
            raise ValueError("an unbounded basis needs a sample to check against")
        return self.sample


def finite_basis(names: Sequence[str], pairs: Iterable[tuple[str, str]], reflexive: bool = False) -> AbstractBasis:
    """Basis on ``names`` whose relation is exactly ``pairs`` (plus the diagonal when reflexive)."""
    rel = set(pairs)
    known = set(names)
    for a, b in rel:
        if a not in known or b not in known:
            raise PosetError(f"unknown element in pair ({a}, {b})")
    if reflexive:
        rel |= {(a, a) for a in names}
    frozen = frozenset(rel)
    return AbstractBasis(prec=lambda a, b: (a, b) in frozen, elements=tuple(names), reflexive=reflexive)


def basis_of_poset(p: FinPoset) -> AbstractBasis:
    """A finite poset as a reflexive abstract basis on its element indices."""
    return AbstractBasis(prec=p.leq, elements=tuple(p), reflexive=True, show=p.name)


def parse_basis(text: str) -> AbstractBasis:
    """``elem <name>`` / ``prec <a> <b>`` lines, with an optional ``reflexive`` header line."""
    names: list[str] = []
    pairs: list[tuple[str, str]] = []
    reflexive = False
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if parts == ["reflexive"]:
            reflexive = True
        elif parts[0] == "elem" and len(parts) == 2:
            names.append(parts[1])
        elif parts[0] == "prec" and len(parts) == 3:
            pairs.append((parts[1], parts[2]))
        else:
            raise PosetError(f"line {lineno}: cannot parse {raw.strip()!r}")
    return finite_basis(names, pairs, reflexive)


@dataclass
class BasisReport:
    violations: list[Violation] = field(default_factory=list)
    nullary: dict = field(default_factory=dict)
    binary: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self) -> bool:
        return self.ok


def check_abstract_basis(b: AbstractBasis, sample: Sequence | None = None) -> BasisReport:
    """Transitivity and both interpolation axioms, exhaustively or over a sample.

    Interpolants are recorded in the report: ``nullary[a]`` is some ``c`` with
    ``c prec a`` and ``binary[(a1, a2, b)]`` some ``c`` with ``a1, a2 prec c prec b``.
    """
    xs = list(sample if sample is not None else b.carrier())
    prec = b.prec
    show = b.show
    rep = BasisReport()
    for x, y, z in itertools.product(xs, repeat=3):
        if prec(x, y) and prec(y, z) and not prec(x, z):
            rep.violations.append(Violation("transitivity", (show(x), show(y), show(z))))
    search = list(b.elements) if b.finite else xs
    for a in xs:
        w = b.nullary_witness(a) if b.nullary_witness else next((c for c in search if prec(c, a)), None)
        if w is None or not prec(w, a):
            rep.violations.append(Violation("nullary interpolation", (show(a),)))
        else:
            rep.nullary[a] = w
    for top in xs:
        below = [x for x in xs if prec(x, top)]
        for a1, a2 in itertools.product(below, repeat=2):
            if b.binary_witness:
                w = b.binary_witness(a1, a2, top)
            else:
                w = next((c for c in search if prec(a1, c) and prec(a2, c) and prec(c, top)), None)
            if w is None or not (prec(a1, w) and prec(a2, w) and prec(w, top)):
                rep.violations.append(Violation("binary interpolation", (show(a1), show(a2), show(top))))
            else:
                rep.binary[(a1, a2, top)] = w
    return rep


# ideals


def is_ideal(b: AbstractBasis, subset: frozenset) -> bool:
    """Inhabited, a lower set, and directed with respect to ``prec``."""
    if not subset:
        return False
    for x in subset:
        for a in b.elements:
            if b.prec(a, x) and a not in subset:
                return False
    for x, y in itertools.product(subset, repeat=2):
        if not any(b.prec(x, z) and b.prec(y, z) for z in subset):
            return False
    return True


def principal_set(b: AbstractBasis, x) -> frozenset:
    return frozenset(a for a in b.elements if b.prec(a, x))


def _show_set(b: AbstractBasis, s: frozenset) -> str:
    order = {e: i for i, e in enumerate(b.elements)}
    return "{" + ",".join(b.show(e) for e in sorted(s, key=order.__getitem__)) + "}"


class IdealCompletion:
    """All ideals of a finite abstract basis, as a poset under inclusion."""

    def __init__(self, basis: AbstractBasis, ideals: Sequence[frozenset]):
        self.basis = basis
        self.ideals = tuple(ideals)
        self.index = {s: i for i, s in enumerate(self.ideals)}
        names = [_show_set(basis, s) for s in self.ideals]
        self.poset = FinPoset(names, [[i <= j for j in self.ideals] for i in self.ideals])

    def __len__(self) -> int:
        return len(self.ideals)

    def principal_ideal(self, x) -> int | None:
        """Index of ``down(x)``; ``None`` if it fails to be an ideal."""
        return self.index.get(principal_set(self.basis, x))

    def principal_map(self, p: FinPoset) -> MonoMap:
        """``x |-> down(x)`` for a basis built by :func:`basis_of_poset`."""
        return MonoMap(p, self.poset, tuple(self.principal_ideal(x) for x in p))


def idl_finite(b: AbstractBasis, cap: int = IDEAL_ENUMERATION_CAP) -> IdealCompletion:
    if not b.finite:
        raise ValueError("idl_finite needs a finite basis")
    n = len(b.elements)
    if n > cap:
        raise CapExceeded(f"ideal enumeration limited to {cap} basis elements, got {n}")
    ideals = []
    for mask in range(1, 1 << n):
        s = frozenset(e for k, e in enumerate(b.elements) if mask >> k & 1)
        if is_ideal(b, s):
            ideals.append(s)
    ideals.sort(key=lambda s: (len(s), sorted(b.elements.index(e) for e in s)))
    return IdealCompletion(b, ideals)


def is_rounded(b: AbstractBasis, ideal: frozenset) -> bool:
    return all(any(b.prec(a, c) for c in ideal) for a in ideal)


@dataclass(frozen=True)
class PrincipalIdeal:
    """``down(generator)`` in a possibly unbounded basis."""

    basis: AbstractBasis = field(repr=False, compare=False)
    generator: Any

    def __contains__(self, a) -> bool:
        return self.basis.prec(a, self.generator)


def idl_way_below(b: AbstractBasis, i, j) -> bool:
    """Decide ``I << J`` as: some ``c`` in ``J`` has ``I`` contained in ``down(c)``."""
    return idl_way_below_witness(b, i, j) is not None


def idl_way_below_witness(b: AbstractBasis, i, j):
    if isinstance(i, PrincipalIdeal) and isinstance(j, PrincipalIdeal):
        if b.principal_subset is None or b.candidates is None:
            raise ValueError("basis cannot compare principal ideals")
        for c in b.candidates(i.generator, j.generator):
            if c in j and b.principal_subset(i.generator, c):
                return c
        return None
    i, j = frozenset(i), frozenset(j)
    for c in sorted(j, key=list(b.elements).index):
        if i <= principal_set(b, c):
            return c
    return None


# bases of finite posets


@dataclass
class CompactBasisReport:
    non_compact: list[int] = field(default_factory=list)
    not_directed: list[int] = field(default_factory=list)
    wrong_sup: list[int] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not (self.non_compact or self.not_directed or self.wrong_sup)

    def __bool__(self) -> bool:
        return self.ok


def check_compact_basis(p: FinPoset, beta: Sequence[int]) -> CompactBasisReport:
    """Every ``beta(b)`` compact, and each ``x`` the directed sup of the basis elements below it."""
    rep = CompactBasisReport()
    for v in sorted(set(beta)):
        if not is_compact(p, v):
            rep.non_compact.append(v)
    for x in p:
        below = {v for v in beta if p.leq(v, x)}
        if not is_directed(p, below):
            rep.not_directed.append(x)
        elif sup(p, below) != x:
            rep.wrong_sup.append(x)
    return rep


def list_to_subset(xs: Iterable[Hashable]) -> frozenset:
    out: frozenset = frozenset()
    for x in xs:
        out = out | {x}
    return out


def step_function(p: FinPoset, q: FinPoset, d: int, e: int) -> MonoMap:
    """``<d => e>``: ``x |-> e`` when ``d <= x``, else bottom."""
    bot = q.bottom
    if bot is None:
        raise PosetError("step functions need a pointed target")
    return MonoMap(p, q, tuple(e if p.leq(d, x) else bot for x in p))


def _need_join(q: FinPoset, x: int, y: int) -> int:
    j = join(q, x, y)
    if j is None:
        raise PosetError(f"no join of {q.name(x)} and {q.name(y)}")
    return j


def directify(p: FinPoset, family: Sequence[int]) -> Callable[[Sequence[int]], int]:
    """Send a list of indices into ``family`` to the join of those members (bottom for [])."""
    bot = least(p)
    if bot is None:
        raise PosetError("directification needs a least element")

    def joined(indices: Sequence[int]) -> int:
        out = bot
        for i in indices:
            out = _need_join(p, out, family[i])
        return out

    return joined


def join_maps(p: FinPoset, q: FinPoset, maps: Iterable[MonoMap]) -> MonoMap:
    """Pointwise join, starting from the constant-bottom map."""
    bot = q.bottom
    if bot is None:
        raise PosetError("pointwise joins need a pointed target")
    table = [bot] * len(p)
    for m in maps:
        table = [_need_join(q, a, b) for a, b in zip(table, m.table)]
    return MonoMap(p, q, tuple(table))


def decompose_into_step_functions(f: MonoMap) -> set[tuple[int, int]]:
    """All ``(d, e)`` whose step function lies below ``f`` pointwise."""
    p, q = f.source, f.target
    out = set()
    for d in p:
        for e in q:
            if pointwise_leq(step_function(p, q, d, e), f):
                out.add((d, e))
    return out


def is_order_isomorphism(m: MonoMap) -> bool:
    p, q = m.source, m.target
    if len(set(m.table)) != len(p) or len(p) != len(q):
        return False
    return all(p.leq(x, y) == q.leq(m(x), m(y)) for x in p for y in p)
