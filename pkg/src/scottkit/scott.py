"""The Scott model of PCF, read through fuel.

A partial natural number is observed through approximants: ``x(k)`` is what
is known about ``x`` once every fixed point has been unrolled ``k`` times.
The approximants form an increasing chain in the flat order, so once defined
they stay defined with the same value, and their supremum is the element of
the lifting that the term denotes.

Arguments of function values are passed as memoised thunks.  At a fixed fuel
every function is total, so this changes nothing about the values computed;
it only avoids evaluating branches and arguments that are never inspected.
"""

from __future__ import annotations

import sys
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Iterable, Optional

from .opsem import Defined, OutOfFuel, RunResult, Stuck, reduces_star, run
from .pcf import NAT, App, Arrow, Const, PcfType, Term

MaybeNat = Optional[int]

DEFAULT_FUEL = 200
DEFAULT_STEPS = 10_000


class PartialNat:
    """Fuel-indexed approximants of an element of the lifting of the naturals.

    Queries are memoised with :func:`functools.lru_cache`, which is safe to
    share between threads; the approximant function must be pure.
    """

    def __init__(self, approximant: Callable[[int], MaybeNat]):
        self._at = lru_cache(maxsize=4096)(approximant)

    def __call__(self, fuel: int) -> MaybeNat:
        if fuel < 0:
            raise ValueError("fuel is a natural number")
        return self._at(fuel)

    def first_defined(self, max_fuel: int) -> tuple[int, int] | None:
        """Least fuel at which the approximant is defined, with its value."""
        for k in range(max_fuel + 1):
            v = self(k)
            if v is not None:
                return k, v
        return None

    def agrees_with(self, other: "PartialNat", fuels: Iterable[int]) -> bool:
        return all(self(k) == other(k) for k in fuels)

    def is_stable(self, fuels: Iterable[int]) -> bool:
        """Once defined, defined with the same value at every larger sampled fuel."""
        seen: MaybeNat = None
        for k in sorted(fuels):
            v = self(k)
            if seen is not None and v != seen:
                return False
            if v is not None:
                seen = v
        return True


def eta(n: int) -> PartialNat:
    return PartialNat(lambda k: n)


def bottom_pn() -> PartialNat:
    return PartialNat(lambda k: None)


def kleisli(f: Callable[[int], PartialNat], x: PartialNat) -> PartialNat:
    """Extend ``f : N -> L(N)`` to ``L(N) -> L(N)``, fuel by fuel."""

    def at(k: int) -> MaybeNat:
        v = x(k)
        return None if v is None else f(v)(k)

    return PartialNat(at)


def information_leq(a: PartialNat, b: PartialNat, fuels: Iterable[int]) -> bool:
    """``a`` is below ``b`` in the flat order at each sampled fuel."""
    return all(a(k) is None or a(k) == b(k) for k in fuels)


# denotations at a fixed fuel


class FuelDenotation:
    __slots__ = ("type",)


class BaseVal(FuelDenotation):
    __slots__ = ("value",)

    def __init__(self, value: MaybeNat):
        self.type = NAT
        self.value = value

    def __eq__(self, other):
        return isinstance(other, BaseVal) and self.value == other.value

    def __hash__(self):
        return hash(self.value)

    def __repr__(self):
        return f"BaseVal({self.value!r})"


class Delay:
    """A memoised suspended denotation."""

    __slots__ = ("_thunk", "_value")

    def __init__(self, thunk: Callable[[], FuelDenotation]):
        self._thunk = thunk
        self._value = None

    def force(self) -> FuelDenotation:
        if self._value is None:
            self._value = self._thunk()
            self._thunk = None
        return self._value

    @classmethod
    def now(cls, v: FuelDenotation) -> "Delay":
        d = cls.__new__(cls)
        d._thunk = None
        d._value = v
        return d


class FuncVal(FuelDenotation):
    """Function value at an arrow type; compared only through base-type observations."""

    __slots__ = ("fn",)

    def __init__(self, fn: Callable[[Delay], FuelDenotation], type: PcfType):
        if not isinstance(type, Arrow):
            raise TypeError("function values live at arrow types")
        self.fn = fn
        self.type = type

    def __call__(self, arg: FuelDenotation | Delay) -> FuelDenotation:
        if not isinstance(arg, Delay):
            arg = Delay.now(arg)
        return self.fn(arg)

    def __repr__(self):
        return f"<FuncVal : {self.type}>"


def bottom_at(t: PcfType) -> FuelDenotation:
    if isinstance(t, Arrow):
        cod_bot = bottom_at(t.cod)
        return FuncVal(lambda _x: cod_bot, t)
    return BaseVal(None)


def _lifted(op: Callable[[int], int]) -> FuncVal:
    def fn(x: Delay) -> BaseVal:
        v = x.force().value
        return BaseVal(None if v is None else op(v))

    return FuncVal(fn, Arrow(NAT, NAT))


def _ifz() -> FuncVal:
    ty3 = Arrow(NAT, NAT)
    ty2 = Arrow(NAT, ty3)

    def fn(x: Delay) -> FuncVal:
        def fn2(y: Delay) -> FuncVal:
            def fn3(n: Delay) -> FuelDenotation:
                v = n.force().value
                if v is None:
                    return BaseVal(None)
                return (x if v == 0 else y).force()

            return FuncVal(fn3, ty3)

        return FuncVal(fn2, ty2)

    return FuncVal(fn, Arrow(NAT, ty2))


def _k(c: Const) -> FuncVal:
    ty = c.type

    def fn(x: Delay) -> FuncVal:
        return FuncVal(lambda _y: x.force(), ty.cod)

    return FuncVal(fn, ty)


def _s(c: Const) -> FuncVal:
    ty = c.type

    def fn(f: Delay) -> FuncVal:
        def fn2(g: Delay) -> FuncVal:
            def fn3(x: Delay) -> FuelDenotation:
                gx = Delay(lambda: g.force()(x))
                return f.force()(x)(gx)

            return FuncVal(fn3, ty.cod.cod)

        return FuncVal(fn2, ty.cod)

    return FuncVal(fn, ty)


def _fix(c: Const, fuel: int) -> FuncVal:
    (sigma,) = c.params

    def fn(f: Delay) -> FuelDenotation:
        fv = f.force()
        x = bottom_at(sigma)
        for _ in range(fuel):
            x = fv(x)
        return x

    return FuncVal(fn, c.type)


_SUCC = _lifted(lambda n: n + 1)
_PRED = _lifted(lambda n: n - 1 if n else 0)
_IFZ = _ifz()


def _const(c: Const, fuel: int) -> FuelDenotation:
    name = c.name
    if name == "zero":
        return BaseVal(0)
    if name == "succ":
        return _SUCC
    if name == "pred":
        return _PRED
    if name == "ifz":
        return _IFZ
    if name == "k":
        return _k(c)
    if name == "s":
        return _s(c)
    return _fix(c, fuel)


def denote_at(t: Term, fuel: int) -> FuelDenotation:
    """Denotation of a closed term with every ``fix`` unrolled ``fuel`` times from bottom."""
    if fuel < 0:
        raise ValueError("fuel is a natural number")
    if sys.getrecursionlimit() < 20_000:
        sys.setrecursionlimit(20_000)
    return _denote(t, fuel)


def _denote(t: Term, fuel: int) -> FuelDenotation:
    if t.numeral is not None:
        return BaseVal(t.numeral)
    if isinstance(t, Const):
        return _const(t, fuel)
    if isinstance(t, App):
        f = _denote(t.fun, fuel)
        arg = t.arg
        return f(Delay(lambda: _denote(arg, fuel)))
    raise TypeError(f"not a PCF term: {t!r}")


def denote(t: Term) -> PartialNat:
    """The fuel-indexed partial natural number a base-type term denotes."""
    if t.type != NAT:
        raise TypeError(f"denote needs a term of type nat, got {t.type}")
    return PartialNat(lambda k: denote_at(t, k).value)


# soundness and adequacy


class PreconditionError(ValueError):
    pass


@dataclass(frozen=True)
class SoundnessCheck:
    agree: bool
    left: tuple[int, int] | None
    right: tuple[int, int] | None

    def __bool__(self) -> bool:
        return self.agree

    @property
    def value(self) -> int | None:
        return self.left[1] if self.left else None


def check_soundness(s: Term, t: Term, fuel: int = DEFAULT_FUEL,
                    steps: int = DEFAULT_STEPS) -> SoundnessCheck:
    """If ``s ->* t`` then both denote the same partial number.

    Compared on the definedness frontier: both undefined up to ``fuel``, or
    both defined with the same value.
    """
    if s.type != NAT or t.type != NAT:
        raise TypeError("soundness is checked at base type")
    if not reduces_star(s, t, steps):
        raise PreconditionError("the first term does not reduce to the second within the step budget")
    left = denote(s).first_defined(fuel)
    right = denote(t).first_defined(fuel)
    if left is None or right is None:
        agree = left is None and right is None
    else:
        agree = left[1] == right[1]
    return SoundnessCheck(agree, left, right)


@dataclass(frozen=True)
class AdequacyReport:
    operational: RunResult
    denotational_fuel: int | None
    denotational_value: int | None
    agree: bool

    def __bool__(self) -> bool:
        return self.agree

    def lines(self) -> list[str]:
        op = self.operational
        if isinstance(op, Defined):
            op_line = f"operational: defined {op.value} in {op.steps} steps"
        elif isinstance(op, OutOfFuel):
            op_line = f"operational: undefined within {op.fuel} steps"
        else:
            op_line = f"operational: stuck after {op.steps} steps"
        if self.denotational_fuel is None:
            den_line = "denotational: undefined"
        else:
            den_line = (f"denotational: defined {self.denotational_value}"
                        f" at fuel {self.denotational_fuel}")
        return [op_line, den_line, f"agree: {str(self.agree).lower()}"]


def check_adequacy(t: Term, fuel: int = DEFAULT_FUEL, steps: int = DEFAULT_STEPS) -> AdequacyReport:
    """Run ``t`` operationally and scan its denotation; they must agree."""
    if t.type != NAT:
        raise TypeError(f"adequacy is checked at base type, got {t.type}")
    op = run(t, steps, keep_trace=False)
    den = denote(t).first_defined(fuel)
    if isinstance(op, Defined):
        agree = den is not None and den[1] == op.value
    elif isinstance(op, OutOfFuel):
        agree = den is None
    else:
        agree = False
    return AdequacyReport(op, den[0] if den else None, den[1] if den else None, agree)
