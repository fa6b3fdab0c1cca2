"""The tower ``D_0, D_1, ...`` with ``D_{n+1} = [D_n -> D_n]`` and its embedding-projection pairs.

``D_0`` is the Sierpinski space.  ``eps_0`` sends ``x`` to the constant map,
``pi_0`` evaluates at bottom, and higher levels conjugate:
``eps_{n+1}(f) = eps_n . f . pi_n`` and ``pi_{n+1}(g) = pi_n . g . eps_n``.

Elements of the limit are represented by an element of some finite level,
compared after embedding both sides into a common level.
"""

from __future__ import annotations

import os
import random
from dataclasses import dataclass, field
from functools import reduce

from .domain import Exponential, FinPoset, MonoMap, Violation, lift_flat

DEFAULT_RANK_CAP = 3
LAW_SAMPLE = 1000


class RankError(ValueError):
    pass


def rank_cap() -> int:
    return int(os.environ.get("SCOTT_RANK_CAP", DEFAULT_RANK_CAP))


@dataclass
class Tower:
    levels: list[FinPoset]
    eps: list[MonoMap]
    pi: list[MonoMap]
    _composites: dict = field(default_factory=dict, repr=False, compare=False)

    @property
    def rank(self) -> int:
        return len(self.levels) - 1

    def __getitem__(self, n: int) -> FinPoset:
        return self.levels[n]


def _sierpinski() -> FinPoset:
    p = lift_flat(1)
    return FinPoset(["bot", "top"], p.matrix())


def build_tower(r: int, cap: int | None = None) -> Tower:
    cap = rank_cap() if cap is None else cap
    if r < 0:
        raise RankError("rank is a natural number")
    if r > cap:
        raise RankError(f"rank {r} exceeds the cap {cap} (set SCOTT_RANK_CAP to raise it)")
    levels: list[FinPoset] = [_sierpinski()]
    for n in range(r):
        prev = levels[-1]
        levels.append(Exponential(prev, prev))
    eps: list[MonoMap] = []
    pi: list[MonoMap] = []
    for n in range(r):
        lo, hi = levels[n], levels[n + 1]
        if n == 0:
            e_table = tuple(hi.index_of((x,) * len(lo)) for x in lo)
            p_table = tuple(hi.maps[f][lo.bottom] for f in hi)
        else:
            e_prev, p_prev = eps[n - 1].table, pi[n - 1].table
            # lo = [D_{n-1} -> D_{n-1}], hi = [lo -> lo]
            e_table = tuple(
                hi.index_of(tuple(e_prev[lo.maps[f][p_prev[y]]] for y in lo)) for f in lo)
            p_table = tuple(
                lo.index_of(tuple(p_prev[hi.maps[g][e_prev[x]]] for x in levels[n - 1])) for g in hi)
        small = len(hi) <= 64
        eps.append(MonoMap(lo, hi, e_table, check=small))
        pi.append(MonoMap(hi, lo, p_table, check=small))
    tower = Tower(levels, eps, pi)
    report = verify_laws(tower, sample=LAW_SAMPLE)
    if not report.ok:
        raise AssertionError(f"tower laws fail: {report.violations[0]}")
    return tower


def eps_nm(tower: Tower, n: int, m: int) -> MonoMap:
    """``D_n -> D_m`` for ``n <= m``: identity or a composite of ``eps_n ... eps_{m-1}``."""
    if not 0 <= n <= m <= tower.rank:
        raise RankError(f"need 0 <= n <= m <= {tower.rank}, got n={n}, m={m}")
    key = ("eps", n, m)
    if key not in tower._composites:
        tower._composites[key] = reduce(MonoMap.then, tower.eps[n:m], MonoMap.identity(tower[n]))
    return tower._composites[key]


def pi_nm(tower: Tower, n: int, m: int) -> MonoMap:
    """``D_m -> D_n`` for ``n <= m``: identity or ``pi_n . ... . pi_{m-1}``."""
    if not 0 <= n <= m <= tower.rank:
        raise RankError(f"need 0 <= n <= m <= {tower.rank}, got n={n}, m={m}")
    key = ("pi", n, m)
    if key not in tower._composites:
        tower._composites[key] = reduce(MonoMap.then, reversed(tower.pi[n:m]), MonoMap.identity(tower[m]))
    return tower._composites[key]


@dataclass
class LawReport:
    checked: dict[str, int] = field(default_factory=dict)
    violations: list[Violation] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def count(self, law: str, n: int = 1) -> None:
        self.checked[law] = self.checked.get(law, 0) + n

    def lines(self) -> list[str]:
        out = [f"{law}: {'pass' if not any(v.law == law for v in self.violations) else 'fail'}"
               f" ({n} checks)" for law, n in self.checked.items()]
        out += [f"violation: {v}" for v in self.violations]
        return out


def _elements(p: FinPoset, sample: int | None, rng: random.Random) -> list[int]:
    if sample is None or len(p) <= sample:
        return list(p)
    return sorted(rng.sample(range(len(p)), sample))


def verify_laws(tower: Tower, sample: int | None = None, seed: int = 0) -> LawReport:
    """ep-pair laws, composite compatibility and the chain law.

    Levels with more than ``sample`` elements are checked on a seeded random
    sample of that size; smaller levels exhaustively.
    """
    rng = random.Random(seed)
    rep = LawReport()
    r = tower.rank
    pts = [_elements(tower[n], sample, rng) for n in range(r + 1)]
    for n in range(r):
        lo, hi = tower[n], tower[n + 1]
        e, p = tower.eps[n], tower.pi[n]
        for x in pts[n]:
            rep.count("section")
            if p(e(x)) != x:
                rep.violations.append(Violation("section", (f"level {n}", lo.name(x))))
        for y in pts[n + 1]:
            rep.count("deflation")
            if not hi.leq(e(p(y)), y):
                rep.violations.append(Violation("deflation", (f"level {n + 1}", hi.name(y))))
    for n in range(r + 1):
        for m in range(n, r + 1):
            for k in range(m, r + 1):
                e_nk, e_nm, e_mk = eps_nm(tower, n, k), eps_nm(tower, n, m), eps_nm(tower, m, k)
                for x in pts[n]:
                    rep.count("eps-composite")
                    if e_nk(x) != e_mk(e_nm(x)):
                        rep.violations.append(Violation("eps-composite", (n, m, k, tower[n].name(x))))
                p_nk, p_nm, p_mk = pi_nm(tower, n, k), pi_nm(tower, n, m), pi_nm(tower, m, k)
                for y in pts[k]:
                    rep.count("pi-composite")
                    if p_nk(y) != p_nm(p_mk(y)):
                        rep.violations.append(Violation("pi-composite", (n, m, k, tower[k].name(y))))
    top = tower[r]
    retractions = [pi_nm(tower, n, r).then(eps_nm(tower, n, r)) for n in range(r + 1)]
    for x in pts[r]:
        rep.count("chain")
        chain = [rho(x) for rho in retractions]
        ok = chain[-1] == x and all(top.leq(a, b) for a, b in zip(chain, chain[1:]))
        if not ok:
            rep.violations.append(Violation("chain", (top.name(x),)))
    return rep


@dataclass(frozen=True)
class DInftyElem:
    rank: int
    index: int


def normalize(tower: Tower, e: DInftyElem) -> DInftyElem:
    """Lowest-rank representative: project while the embedding gives the element back."""
    n, x = e.rank, e.index
    while n > 0:
        y = tower.pi[n - 1](x)
        if tower.eps[n - 1](y) != x:
            break
        n, x = n - 1, y
    return DInftyElem(n, x)


def is_normalized(tower: Tower, e: DInftyElem) -> bool:
    return normalize(tower, e) == e


def embed_to(tower: Tower, e: DInftyElem, m: int) -> DInftyElem:
    if m < e.rank:
        raise RankError(f"cannot embed rank {e.rank} into rank {m}")
    return DInftyElem(m, eps_nm(tower, e.rank, m)(e.index))


def common_rank(tower: Tower, a: DInftyElem, b: DInftyElem) -> tuple[int, int, int]:
    m = max(a.rank, b.rank)
    return m, embed_to(tower, a, m).index, embed_to(tower, b, m).index


def d_eq(tower: Tower, a: DInftyElem, b: DInftyElem) -> bool:
    _, x, y = common_rank(tower, a, b)
    return x == y


def d_leq(tower: Tower, a: DInftyElem, b: DInftyElem) -> bool:
    m, x, y = common_rank(tower, a, b)
    return tower[m].leq(x, y)


def apply(tower: Tower, f: DInftyElem, x: DInftyElem, working_rank: int) -> DInftyElem:
    """Read ``f`` at rank ``N`` as a map on ``D_{N-1}`` and apply it to ``x`` there."""
    n = working_rank
    if n > tower.rank:
        raise RankError(f"working rank {n} exceeds the tower rank {tower.rank}")
    if n < 1 or n < f.rank or n < x.rank + 1:
        raise RankError(f"working rank {n} too small for ranks {f.rank} and {x.rank}")
    g = embed_to(tower, f, n).index
    y = embed_to(tower, x, n - 1).index
    return DInftyElem(n - 1, tower[n].maps[g][y])
