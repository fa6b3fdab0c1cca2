"""Finite pointed posets and the constructions on them.

Elements are referred to by integer index; names are only for display and for
the text format.  Order relations are stored as per-element bitmasks of the
up-set and down-set, so ``leq`` is a shift and a mask.

On a finite poset every directed subset has a maximum, so Scott continuity is
the same thing as monotonicity and every element is compact.  Nothing here
assumes that silently: ``way_below`` scans directed subsets by brute force and
the test-suite checks the collapse.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Iterator, Sequence

Subset = frozenset

WAY_BELOW_CAP = 12
MAP_ENUMERATION_CAP = 500_000
MATRIX_CAP = 4096
SMALL_MAP_POSET = 512


class PosetError(ValueError):
    """A relation that should be a partial order is not one."""


class NotPointed(PosetError):
    pass


class CapExceeded(RuntimeError):
    """A brute-force scan or enumeration would exceed its configured size."""


@dataclass(frozen=True)
class Violation:
    law: str
    witness: tuple

    def __str__(self) -> str:
        return f"{self.law}: {', '.join(map(str, self.witness))}"


def _bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


class FinPoset:
    """A finite set with a relation that is meant to be a partial order.

    Construction does not check the poset laws, so that :func:`validate` can
    report on broken relations; use :meth:`from_relation` or :func:`parse_poset`
    for checked construction.
    """

    def __init__(self, names: Sequence[str], leq: Sequence[Sequence[bool]] | None = None):
        self.names = tuple(str(n) for n in names)
        if len(set(self.names)) != len(self.names):
            raise PosetError("duplicate element names")
        self._index = {n: i for i, n in enumerate(self.names)}
        if leq is not None:
            n = len(self.names)
            if len(leq) != n or any(len(row) != n for row in leq):
                raise PosetError("order table has the wrong shape")
            self._up = [sum(1 << j for j in range(n) if leq[i][j]) for i in range(n)]
            self._down = [sum(1 << i for i in range(n) if leq[i][j]) for j in range(n)]

    @classmethod
    def from_relation(cls, names: Sequence[str], pairs: Iterable[tuple[str, str]]) -> "FinPoset":
        """Reflexive-transitive closure of generating pairs, checked for antisymmetry."""
        names = list(names)
        idx = {n: i for i, n in enumerate(names)}
        n = len(names)
        up = [1 << i for i in range(n)]
        for a, b in pairs:
            try:
                up[idx[a]] |= 1 << idx[b]
            except KeyError as exc:
                raise PosetError(f"unknown element {exc.args[0]!r}") from None
        changed = True
        while changed:
            changed = False
            for i in range(n):
                new = up[i]
                for j in _bits(up[i]):
                    new |= up[j]
                if new != up[i]:
                    up[i] = new
                    changed = True
        table = [[bool(up[i] >> j & 1) for j in range(n)] for i in range(n)]
        p = cls(names, table)
        bad = [v for v in validate(p) if v.law == "antisymmetry"]
        if bad:
            raise PosetError(f"not antisymmetric: {bad[0]}")
        return p

    # basic access

    def __len__(self) -> int:
        return len(self.names)

    @property
    def size(self) -> int:
        return len(self.names)

    def __iter__(self) -> Iterator[int]:
        return iter(range(len(self)))

    def __repr__(self) -> str:
        return f"<{type(self).__name__} of {len(self)} elements>"

    def idx(self, x: int | str) -> int:
        if isinstance(x, str):
            try:
                return self._index[x]
            except KeyError:
                raise KeyError(f"no element named {x!r}") from None
        return x

    def name(self, i: int) -> str:
        return self.names[i]

    def leq(self, x: int, y: int) -> bool:
        return bool(self._up[x] >> y & 1)

    def up_mask(self, x: int) -> int:
        return self._up[x]

    def down_mask(self, x: int) -> int:
        return self._down[x]

    def upper_bounds(self, subset: Iterable[int]) -> int:
        mask = (1 << len(self)) - 1
        for s in subset:
            mask &= self._up[s]
        return mask

    def matrix(self) -> list[list[bool]]:
        if len(self) > MATRIX_CAP:
            raise CapExceeded(f"refusing to materialise a {len(self)}^2 order table")
        return [[self.leq(i, j) for j in self] for i in self]

    @cached_property
    def linear_extension(self) -> tuple[int, ...]:
        # x < y implies the down-set of x is strictly smaller
        return tuple(sorted(self, key=lambda i: (self._down[i].bit_count(), i)))

    @cached_property
    def bottom(self) -> int | None:
        return least(self)

    def covers(self) -> list[tuple[int, int]]:
        out = []
        for i in self:
            for j in _bits(self._up[i] & ~(1 << i)):
                between = self._up[i] & self._down[j] & ~(1 << i) & ~(1 << j)
                if not between:
                    out.append((i, j))
        return out


class MapPoset(FinPoset):
    """Poset of monotone maps ordered pointwise, with the order computed on demand.

    Used for exponentials too large for order bitmasks (D_3 has 120549 elements).
    """

    def __init__(self, source: FinPoset, target: FinPoset, maps: Sequence[tuple[int, ...]],
                 names: Sequence[str] | None = None):
        self.source = source
        self.target = target
        self.maps = tuple(maps)
        self.table_index = {m: i for i, m in enumerate(self.maps)}
        if len(self.table_index) != len(self.maps):
            raise PosetError("duplicate maps")
        if names is None:
            if len(self.maps) <= SMALL_MAP_POSET:
                names = [_map_name(target, m) for m in self.maps]
            else:
                names = [f"f{i}" for i in range(len(self.maps))]
        super().__init__(names)
        self._small = len(self.maps) <= SMALL_MAP_POSET
        if self._small:
            n = len(self.maps)
            self._up = [0] * n
            self._down = [0] * n
            for i in range(n):
                for j in range(n):
                    if self._pointwise(i, j):
                        self._up[i] |= 1 << j
                        self._down[j] |= 1 << i

    def _pointwise(self, i: int, j: int) -> bool:
        t = self.target
        return all(t.leq(a, b) for a, b in zip(self.maps[i], self.maps[j]))

    def leq(self, x: int, y: int) -> bool:
        if self._small:
            return bool(self._up[x] >> y & 1)
        return self._pointwise(x, y)

    def up_mask(self, x: int) -> int:
        self._need_small()
        return self._up[x]

    def down_mask(self, x: int) -> int:
        self._need_small()
        return self._down[x]

    def upper_bounds(self, subset: Iterable[int]) -> int:
        self._need_small()
        return super().upper_bounds(subset)

    def _need_small(self) -> None:
        if not self._small:
            raise CapExceeded(f"order bitmasks not kept for {len(self)} maps")

    @cached_property
    def linear_extension(self) -> tuple[int, ...]:
        if self._small:
            return super().linear_extension
        t = self.target
        return tuple(sorted(self, key=lambda i: (sum(t._down[v].bit_count() for v in self.maps[i]), i)))

    @cached_property
    def bottom(self) -> int | None:
        if self._small:
            return least(self)
        tb = self.target.bottom
        if tb is None:
            return None
        return self.table_index.get(tuple([tb] * len(self.source)))

    def apply(self, f: int, x: int) -> int:
        return self.maps[f][x]

    def index_of(self, table: Sequence[int]) -> int:
        try:
            return self.table_index[tuple(table)]
        except KeyError:
            raise KeyError(f"not an element of this map poset: {tuple(table)}") from None


def _map_name(target: FinPoset, table: Sequence[int]) -> str:
    return "[" + ",".join(target.names[v] for v in table) + "]"


@dataclass(frozen=True, eq=False)
class MonoMap:
    """A map between finite posets given by its table of element indices."""

    source: FinPoset
    target: FinPoset
    table: tuple[int, ...]
    check: bool = field(default=True, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "table", tuple(self.table))
        if len(self.table) != len(self.source):
            raise ValueError("table length does not match the source poset")
        if self.check:
            bad = non_monotone_witness(self.source, self.target, self.table)
            if bad is not None:
                raise PosetError(f"map is not monotone at {bad}")

    def __call__(self, x: int) -> int:
        return self.table[x]

    def __eq__(self, other):
        if not isinstance(other, MonoMap):
            return NotImplemented
        return (self.source is other.source and self.target is other.target
                and self.table == other.table)

    def __hash__(self):
        return hash(self.table)

    def then(self, other: "MonoMap") -> "MonoMap":
        """Diagrammatic composite: first ``self``, then ``other``."""
        return MonoMap(self.source, other.target,
                       tuple(other.table[v] for v in self.table), check=False)

    def __matmul__(self, other: "MonoMap") -> "MonoMap":
        return other.then(self)

    @classmethod
    def identity(cls, p: FinPoset) -> "MonoMap":
        return cls(p, p, tuple(p), check=False)

    @classmethod
    def constant(cls, p: FinPoset, q: FinPoset, value: int) -> "MonoMap":
        return cls(p, q, (value,) * len(p), check=False)


def non_monotone_witness(p: FinPoset, q: FinPoset, table: Sequence[int]) -> tuple[int, int] | None:
    for x in p:
        for y in _bits(p.up_mask(x)):
            if not q.leq(table[x], table[y]):
                return (x, y)
    return None


def pointwise_leq(f: MonoMap, g: MonoMap) -> bool:
    return all(f.target.leq(a, b) for a, b in zip(f.table, g.table))


# checks and order-theoretic queries


def validate(p: FinPoset) -> list[Violation]:
    """All violations of reflexivity, antisymmetry and transitivity, with witnesses."""
    out = []
    names = p.names
    for x in p:
        if not p.leq(x, x):
            out.append(Violation("reflexivity", (names[x],)))
    for x in p:
        for y in p:
            if x < y and p.leq(x, y) and p.leq(y, x):
                out.append(Violation("antisymmetry", (names[x], names[y])))
    for x in p:
        for y in p:
            if not p.leq(x, y):
                continue
            for z in p:
                if p.leq(y, z) and not p.leq(x, z):
                    out.append(Violation("transitivity", (names[x], names[y], names[z])))
    return out


def is_directed(p: FinPoset, subset: Iterable[int]) -> bool:
    s = list(subset)
    if not s:
        return False
    members = sum(1 << i for i in s)
    for a, b in itertools.combinations(s, 2):
        if not p.up_mask(a) & p.up_mask(b) & members:
            return False
    return True


def least(p: FinPoset) -> int | None:
    for x in p:
        if all(p.leq(x, y) for y in p):
            return x
    return None


def _least_in_mask(p: FinPoset, mask: int) -> int | None:
    for u in _bits(mask):
        if mask & ~p.up_mask(u) == 0:
            return u
    return None


def sup(p: FinPoset, subset: Iterable[int]) -> int | None:
    """Least upper bound of ``subset`` if it exists."""
    return _least_in_mask(p, p.upper_bounds(subset))


def join(p: FinPoset, x: int, y: int) -> int | None:
    return sup(p, (x, y))


def is_lattice(p: FinPoset) -> bool:
    return least(p) is not None and all(join(p, x, y) is not None for x in p for y in p)


def directed_subsets(p: FinPoset) -> list[tuple[int, int]]:
    """Every directed subset of ``p`` as ``(mask, maximum)``; brute force over 2^n."""
    if len(p) > WAY_BELOW_CAP:
        raise CapExceeded(f"directed-subset scan limited to {WAY_BELOW_CAP} elements, got {len(p)}")
    cache = p.__dict__.get("_directed_cache")
    if cache is not None:
        return cache
    out = []
    for mask in range(1, 1 << len(p)):
        members = list(_bits(mask))
        if is_directed(p, members):
            top = sup(p, members)
            out.append((mask, top))
    p.__dict__["_directed_cache"] = out
    return out


def way_below(p: FinPoset, x: int, y: int) -> bool:
    """``x << y`` by scanning every directed subset whose supremum is above ``y``."""
    for mask, top in directed_subsets(p):
        if top is None or not p.leq(y, top):
            continue
        if not p.up_mask(x) & mask:
            return False
    return True


def is_compact(p: FinPoset, x: int) -> bool:
    return way_below(p, x, x)


def is_scott_continuous(f: MonoMap) -> bool:
    """Preservation of suprema of every directed subset of the source."""
    p, q = f.source, f.target
    for mask, top in directed_subsets(p):
        image = {f(i) for i in _bits(mask)}
        if sup(q, image) != f(top):
            return False
    return True


# constructions


class Product(FinPoset):
    """Binary product with the componentwise order.  Element ``(i, j)`` has index ``i*|right| + j``."""

    def __init__(self, left: FinPoset, right: FinPoset):
        self.left = left
        self.right = right
        m = len(right)
        names = [f"({a},{b})" for a in left.names for b in right.names]
        n = len(names)
        table = [[left.leq(i // m, k // m) and right.leq(i % m, k % m) for k in range(n)]
                 for i in range(n)]
        super().__init__(names, table)

    def pair(self, i: int, j: int) -> int:
        return i * len(self.right) + j

    def unpair(self, k: int) -> tuple[int, int]:
        return divmod(k, len(self.right))

    @property
    def fst(self) -> MonoMap:
        return MonoMap(self, self.left, tuple(k // len(self.right) for k in self), check=False)

    @property
    def snd(self) -> MonoMap:
        return MonoMap(self, self.right, tuple(k % len(self.right) for k in self), check=False)

    def pairing(self, f: MonoMap, g: MonoMap) -> MonoMap:
        if f.source is not g.source or f.target is not self.left or g.target is not self.right:
            raise ValueError("pairing needs maps out of a common source into the factors")
        return MonoMap(f.source, self, tuple(self.pair(f(x), g(x)) for x in f.source))


def product(p: FinPoset, q: FinPoset) -> Product:
    return Product(p, q)


def enumerate_monotone_maps(p: FinPoset, q: FinPoset, cap: int = MAP_ENUMERATION_CAP) -> list[tuple[int, ...]]:
    """Tables of all monotone maps ``p -> q``.

    Backtracks over a fixed linear extension of ``p``; a value for ``x`` must
    lie above the values already chosen for everything below ``x``.  Output is
    lexicographic in the order the linear extension visits elements.
    """
    order = p.linear_extension
    n, m = len(p), len(q)
    if n == 0:
        return [()]
    below = [[j for j in order[:k] if p.leq(j, order[k])] for k in range(n)]
    full = (1 << m) - 1
    ups = [q.up_mask(v) for v in range(m)]
    table = [0] * n
    out: list[tuple[int, ...]] = []

    def go(k: int) -> None:
        if k == n:
            if len(out) >= cap:
                raise CapExceeded(f"more than {cap} monotone maps")
            out.append(tuple(table))
            return
        allowed = full
        for j in below[k]:
            allowed &= ups[table[j]]
        x = order[k]
        for v in _bits(allowed):
            table[x] = v
            go(k + 1)

    go(0)
    return out


class Exponential(MapPoset):
    """All monotone maps ``source -> target`` with the pointwise order."""

    def __init__(self, source: FinPoset, target: FinPoset, cap: int = MAP_ENUMERATION_CAP,
                 names: Sequence[str] | None = None):
        if target.bottom is None:
            raise NotPointed("exponential needs a pointed target")
        super().__init__(source, target, enumerate_monotone_maps(source, target, cap), names)

    def element(self, f: MonoMap) -> int:
        return self.index_of(f.table)

    def as_map(self, i: int) -> MonoMap:
        return MonoMap(self.source, self.target, self.maps[i], check=False)

    @cached_property
    def eval_map(self) -> MonoMap:
        """``eval : [source -> target] x source -> target``."""
        dom = Product(self, self.source)
        return MonoMap(dom, self.target, tuple(self.maps[f][x] for f, x in map(dom.unpair, dom)))

    def curry(self, h: MonoMap) -> MonoMap:
        """For ``h : P x source -> target`` the map ``P -> [source -> target]``."""
        dom = h.source
        if not isinstance(dom, Product) or dom.right is not self.source or h.target is not self.target:
            raise ValueError("curry needs a map out of a product whose right factor is the source")
        return MonoMap(dom.left, self, tuple(
            self.index_of(tuple(h(dom.pair(a, b)) for b in self.source)) for a in dom.left))


def exponential(p: FinPoset, q: FinPoset, cap: int = MAP_ENUMERATION_CAP) -> Exponential:
    return Exponential(p, q, cap)


@dataclass(frozen=True)
class FixedPoint:
    element: int
    iterations: int


def lfp(f: MonoMap) -> FixedPoint:
    """Least fixed point by Kleene iteration from the bottom element."""
    p = f.source
    if f.target is not p:
        raise ValueError("lfp needs an endomap")
    x = p.bottom
    if x is None:
        raise NotPointed("lfp needs a pointed poset")
    n = 0
    while (y := f(x)) != x:
        x = y
        n += 1
        if n > len(p):
            raise AssertionError("Kleene iteration did not stabilise; map is not monotone")
    return FixedPoint(x, n)


# named posets


def chain(n: int) -> FinPoset:
    names = [str(i) for i in range(n)]
    return FinPoset(names, [[i <= j for j in range(n)] for i in range(n)])


def antichain(n: int) -> FinPoset:
    return FinPoset([f"a{i}" for i in range(n)], [[i == j for j in range(n)] for i in range(n)])


def diamond() -> FinPoset:
    return FinPoset.from_relation(["bot", "a", "b", "top"],
                                  [("bot", "a"), ("bot", "b"), ("a", "top"), ("b", "top")])


def powerset(atoms: Sequence[str]) -> FinPoset:
    """Boolean lattice of all subsets of ``atoms``, ordered by inclusion."""
    n = len(atoms)
    names = ["{" + ",".join(a for k, a in enumerate(atoms) if m >> k & 1) + "}" for m in range(1 << n)]
    size = 1 << n
    return FinPoset(names, [[i & j == i for j in range(size)] for i in range(size)])


def lift_flat(n: int) -> FinPoset:
    """Flat domain: a fresh bottom below ``n`` pairwise incomparable points."""
    names = ["bot"] + [str(i) for i in range(n)]
    return FinPoset(names, [[i == 0 or i == j for j in range(n + 1)] for i in range(n + 1)])


def one_point() -> FinPoset:
    return FinPoset(["*"], [[True]])


# text format


def parse_poset(text: str) -> FinPoset:
    """Parse ``elem <name>`` / ``le <a> <b>`` lines; ``#`` starts a comment."""
    names: list[str] = []
    pairs: list[tuple[str, str]] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if parts[0] == "elem" and len(parts) == 2:
            if parts[1] in names:
                raise PosetError(f"line {lineno}: duplicate element {parts[1]!r}")
            names.append(parts[1])
        elif parts[0] == "le" and len(parts) == 3:
            pairs.append((parts[1], parts[2]))
        else:
            raise PosetError(f"line {lineno}: cannot parse {raw.strip()!r}")
    return FinPoset.from_relation(names, pairs)


def dump_poset(p: FinPoset) -> str:
    lines = [f"elem {n}" for n in p.names]
    lines += [f"le {p.names[a]} {p.names[b]}" for a, b in p.covers()]
    return "\n".join(lines) + "\n"


def parse_map(text: str, source: FinPoset, target: FinPoset) -> MonoMap:
    """Parse ``map <x> <y>`` lines giving a total map between two posets."""
    table: dict[int, int] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if parts[0] != "map" or len(parts) != 3:
            raise PosetError(f"line {lineno}: cannot parse {raw.strip()!r}")
        table[source.idx(parts[1])] = target.idx(parts[2])
    missing = [source.names[x] for x in source if x not in table]
    if missing:
        raise PosetError(f"map undefined on {', '.join(missing)}")
    return MonoMap(source, target, tuple(table[x] for x in source))
