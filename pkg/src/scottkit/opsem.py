"""Small-step operational semantics of combinatory PCF.

The reduction relation is single-valued, so its k-step and reflexive
transitive closures are decided by iterating :func:`step` and comparing
terms.  :func:`all_reducts` enumerates every rule instance directly from the
inductive definition and is kept as an independent check on :func:`step`.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

from .pcf import NAT, App, Const, IFZ, PRED, SUCC, Term, numeral, render, spine, term_eq


def _apply_all(head: Term, args) -> Term:
    for a in args:
        head = App(head, a)
    return head


def _contract(head: Const, args: list[Term]) -> Term | None:
    """Contract a redex at the head of the spine, keeping surplus arguments."""
    name = head.name
    if name == "pred" and args and args[0].numeral is not None:
        n = args[0].numeral
        return _apply_all(args[0] if n == 0 else args[0].arg, args[1:])
    if name == "ifz" and len(args) >= 3 and args[2].numeral is not None:
        return _apply_all(args[0] if args[2].numeral == 0 else args[1], args[3:])
    if name == "k" and len(args) >= 2:
        return _apply_all(args[0], args[2:])
    if name == "s" and len(args) >= 3:
        f, g, t = args[:3]
        return _apply_all(App(App(f, t), App(g, t)), args[3:])
    if name == "fix" and args:
        f = args[0]
        return _apply_all(App(f, App(head, f)), args[1:])
    return None


def step(t: Term) -> Term | None:
    """The unique ``t'`` with ``t |> t'``, or ``None`` if no rule applies.

    Redex rules are tried before the congruences for ``succ``, ``pred`` and
    the third argument of ``ifz``; the congruence for the function position
    of an application is implicit in working on the spine.
    """
    frames: list[tuple[Const, list[Term], int]] = []
    cur = t
    while True:
        head, args = spine(cur)
        if not isinstance(head, Const):
            return None
        out = _contract(head, args)
        if out is not None:
            break
        name = head.name
        if name in ("succ", "pred") and len(args) >= 1:
            pos = 0
        elif name == "ifz" and len(args) >= 3:
            pos = 2
        else:
            return None
        frames.append((head, args, pos))
        cur = args[pos]
    for head, args, pos in reversed(frames):
        new_args = list(args)
        new_args[pos] = out
        out = _apply_all(head, new_args)
    return out


@dataclass(frozen=True)
class Reduct:
    rule: str
    result: Term


def all_reducts(t: Term) -> list[Reduct]:
    """Every way a rule of the small-step relation applies to ``t``.

    A direct reading of the inductive definition on binary applications;
    independent of :func:`step`.
    """
    out: list[Reduct] = []
    if not isinstance(t, App):
        return out
    f, a = t.fun, t.arg
    if isinstance(f, Const):
        if f.name == "pred" and a.numeral is not None:
            out.append(Reduct("pred-zero" if a.numeral == 0 else "pred-succ",
                              numeral(max(a.numeral - 1, 0))))
        if f.name == "fix":
            out.append(Reduct("fix", App(a, App(f, a))))
        if f.name == "succ":
            out += [Reduct("succ-cong/" + r.rule, App(SUCC, r.result)) for r in all_reducts(a)]
        if f.name == "pred":
            out += [Reduct("pred-cong/" + r.rule, App(PRED, r.result)) for r in all_reducts(a)]
    if isinstance(f, App):
        g, b = f.fun, f.arg
        if isinstance(g, Const) and g.name == "k":
            out.append(Reduct("k", b))
        if isinstance(g, App):
            h, c = g.fun, g.arg
            if isinstance(h, Const) and h.name == "ifz":
                if a.numeral == 0:
                    out.append(Reduct("ifz-zero", c))
                elif a.numeral is not None:
                    out.append(Reduct("ifz-succ", b))
                out += [Reduct("ifz-cong/" + r.rule, App(App(App(IFZ, c), b), r.result))
                        for r in all_reducts(a)]
            if isinstance(h, Const) and h.name == "s":
                out.append(Reduct("s", App(App(c, a), App(b, a))))
    out += [Reduct("app-cong/" + r.rule, App(r.result, a)) for r in all_reducts(f)]
    return out


def _same_type(s: Term, t: Term) -> None:
    if s.type != t.type:
        raise TypeError(f"terms have different types: {s.type} and {t.type}")


def steps_to(s: Term, t: Term) -> bool:
    _same_type(s, t)
    nxt = step(s)
    return nxt is not None and term_eq(nxt, t)


def k_step_exact(s: Term, t: Term, k: int) -> bool:
    """``s`` reaches ``t`` in exactly ``k`` steps (zero steps is equality)."""
    _same_type(s, t)
    cur = s
    for _ in range(k):
        cur = step(cur)
        if cur is None:
            return False
    return term_eq(cur, t)


@dataclass
class Reach:
    reached: bool
    steps: int | None
    trace: list[Term] = field(repr=False, default_factory=list)

    def __bool__(self) -> bool:
        return self.reached


def k_step_at_most(s: Term, t: Term, k: int) -> Reach:
    """``s`` reaches ``t`` in some ``j <= k`` steps; the trace runs up to where it stopped."""
    _same_type(s, t)
    cur = s
    trace = [cur]
    for j in range(k + 1):
        if term_eq(cur, t):
            return Reach(True, j, trace)
        if j == k:
            break
        cur = step(cur)
        if cur is None:
            break
        trace.append(cur)
    return Reach(False, None, trace)


def reduces_star(s: Term, t: Term, budget: int) -> bool:
    """Semi-decision of ``s ->* t``: ``False`` only means "not within ``budget`` steps"."""
    return bool(k_step_at_most(s, t, budget))


@dataclass(frozen=True)
class Defined:
    value: int
    steps: int
    trace: tuple[Term, ...] = field(repr=False, default=())


@dataclass(frozen=True)
class OutOfFuel:
    fuel: int
    trace: tuple[Term, ...] = field(repr=False, default=())


@dataclass(frozen=True)
class Stuck:
    term: Term
    steps: int
    trace: tuple[Term, ...] = field(repr=False, default=())


RunResult = Defined | OutOfFuel | Stuck


def run(t: Term, fuel: int, keep_trace: bool = True) -> RunResult:
    """Reduce a closed base-type term until it is a numeral or ``fuel`` steps are used."""
    if t.type != NAT:
        raise TypeError(f"run needs a term of type nat, got {t.type}")
    trace = [t]
    cur = t
    steps = 0
    while True:
        if cur.numeral is not None:
            return Defined(cur.numeral, steps, tuple(trace))
        if steps >= fuel:
            return OutOfFuel(fuel, tuple(trace))
        nxt = step(cur)
        if nxt is None:
            return Stuck(cur, steps, tuple(trace))
        cur = nxt
        steps += 1
        if keep_trace:
            trace.append(cur)
        else:
            trace[0] = cur


def semidecide_defined(t: Term) -> Callable[[int], bool]:
    """A fuel predicate, true exactly when ``run(t, fuel)`` is :class:`Defined`.

    Reduction is shared between calls, so asking for increasing fuel only
    pays for the new steps.
    """
    if t.type != NAT:
        raise TypeError(f"semidecide_defined needs a term of type nat, got {t.type}")
    state = {"term": t, "steps": 0, "done": t.numeral is not None}

    def defined_within(fuel: int) -> bool:
        while not state["done"] and state["steps"] < fuel:
            nxt = step(state["term"])
            if nxt is None:
                return False
            state["term"] = nxt
            state["steps"] += 1
            state["done"] = nxt.numeral is not None
        return state["done"] and state["steps"] <= fuel

    return defined_within


def format_trace(trace, annotate: bool = False) -> str:
    """One term per line, prefixed by its step index."""
    return "\n".join(f"{i}: {render(t, annotate)}" for i, t in enumerate(trace))
