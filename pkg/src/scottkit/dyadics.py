"""Dyadics: trees over ``middle``, ``left`` and ``right`` with their strict order.

Read ``middle`` as 0 and ``left``/``right`` as ``x |-> (x-1)/2`` and
``x |-> (x+1)/2`` on the open interval (-1, 1).  The numeric reading is only
used for display; every decision is made on the trees.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from itertools import product

from .ideals import AbstractBasis


@dataclass(frozen=True)
class Dyadic:
    """``path`` lists the constructors from the outside in: ``"LR"`` is ``left(right(middle))``."""

    path: str = ""

    def __post_init__(self):
        if set(self.path) - {"L", "R"}:
            raise ValueError(f"bad dyadic path {self.path!r}")

    @property
    def depth(self) -> int:
        return len(self.path)

    def __str__(self) -> str:
        return self.path + "m"

    def __repr__(self) -> str:
        return f"Dyadic({self})"


MIDDLE = Dyadic("")


def left(x: Dyadic) -> Dyadic:
    return Dyadic("L" + x.path)


def right(x: Dyadic) -> Dyadic:
    return Dyadic("R" + x.path)


def parse_dyadic(text: str) -> Dyadic:
    text = text.strip()
    if not text.endswith("m"):
        raise ValueError(f"a dyadic is a string of L/R ending in m, got {text!r}")
    return Dyadic(text[:-1])


def prec(x: Dyadic, y: Dyadic) -> bool:
    """The strict order, one table case per pair of outermost constructors."""
    a, b = x.path, y.path
    i = 0
    while True:
        cx = a[i] if i < len(a) else "m"
        cy = b[i] if i < len(b) else "m"
        if cx == "m" and cy == "m":
            return False
        if cx == "m":
            return cy == "R"
        if cx == "L":
            if cy == "L":
                i += 1
                continue
            return True
        # cx == "R"
        if cy == "R":
            i += 1
            continue
        return False


class Order(Enum):
    LT = -1
    EQ = 0
    GT = 1


def compare(x: Dyadic, y: Dyadic) -> Order:
    if x == y:
        return Order.EQ
    if prec(x, y):
        return Order.LT
    if prec(y, x):
        return Order.GT
    raise AssertionError(f"trichotomy fails for {x} and {y}")


class NotBelow(ValueError):
    pass


def interpolant(x: Dyadic, y: Dyadic) -> Dyadic:
    """Some ``z`` with ``x < z < y``, following the case split of the density argument."""
    if not prec(x, y):
        raise NotBelow(f"{x} is not below {y}")
    shared = 0
    while True:
        a, b = x.path[shared:], y.path[shared:]
        if a[:1] == b[:1] and a and b[0] in "LR":
            shared += 1
            continue
        break
    prefix = x.path[:shared]
    a, b = Dyadic(x.path[shared:]), Dyadic(y.path[shared:])
    if a == MIDDLE:                        # middle < right(b')
        z = right(left(Dyadic(b.path[1:])))
    elif b == MIDDLE:                      # left(a') < middle
        z = left(right(Dyadic(a.path[1:])))
    else:                                  # left(a') < right(b')
        z = MIDDLE
    return Dyadic(prefix + z.path)


def endpoints(x: Dyadic) -> tuple[Dyadic, Dyadic]:
    return left(x), right(x)


def enumerate_depth(d: int) -> list[Dyadic]:
    """All dyadics with at most ``d`` constructors around ``middle``; ``2^(d+1) - 1`` of them."""
    return [Dyadic("".join(p)) for n in range(d + 1) for p in product("LR", repeat=n)]


def to_fraction(x: Dyadic) -> Fraction:
    v = Fraction(0)
    for c in reversed(x.path):
        v = (v - 1) / 2 if c == "L" else (v + 1) / 2
    return v


def principal_subset(a: Dyadic, c: Dyadic) -> bool:
    """``down(a) <= down(c)``.  By density and trichotomy this is ``not c < a``."""
    return not prec(c, a)


def binary_interpolant(a1: Dyadic, a2: Dyadic, b: Dyadic) -> Dyadic:
    """Some ``c`` with ``a1, a2 < c < b``: interpolate between the larger one and ``b``."""
    hi = a2 if compare(a1, a2) is Order.LT else a1
    return interpolant(hi, b)


def _candidates(a: Dyadic, b: Dyadic) -> list[Dyadic]:
    # any c < b with down(a) <= down(c) has a <= c, so c = a is among these when one exists
    window = enumerate_depth(max(a.depth, b.depth) + 1)
    out = window
    if prec(a, b):
        out = [interpolant(a, b)] + window
    return out


def dyadic_basis(sample_depth: int = 4) -> AbstractBasis:
    return AbstractBasis(
        prec=prec,
        sample=enumerate_depth(sample_depth),
        nullary_witness=lambda a: left(a),
        binary_witness=binary_interpolant,
        principal_subset=principal_subset,
        candidates=_candidates,
    )
