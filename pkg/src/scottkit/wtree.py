"""Finitely branching, many-sorted well-founded trees.

A :class:`Signature` lists constructors with a target sort and a finite
sequence of argument sorts.  Because every arity is finite, deciding equality
of two trees is a finite conjunction over child positions, which is all the
compactness needed for equality to be decidable.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Hashable, Sequence

Sort = Hashable


class SignatureError(ValueError):
    pass


class SortMismatch(ValueError):
    pass


@dataclass(frozen=True)
class Constructor:
    label: str
    target: Sort
    args: tuple[Sort, ...] = ()


class Signature:
    def __init__(self, sorts, constructors: Sequence[Constructor | tuple]):
        self.sorts = frozenset(sorts)
        cons = [c if isinstance(c, Constructor) else Constructor(c[0], c[1], tuple(c[2]))
                for c in constructors]
        self.constructors: dict[str, Constructor] = {}
        for c in cons:
            if c.label in self.constructors:
                raise SignatureError(f"duplicate constructor label {c.label!r}")
            for s in (c.target, *c.args):
                if s not in self.sorts:
                    raise SignatureError(f"constructor {c.label!r} mentions undeclared sort {s!r}")
            self.constructors[c.label] = c

    def __getitem__(self, label: str) -> Constructor:
        return self.constructors[label]

    def sort_of(self, t: "WTree") -> Sort:
        try:
            return self.constructors[t.label].target
        except KeyError:
            raise SortMismatch(f"unknown label {t.label!r}") from None


@dataclass(frozen=True)
class WTree:
    label: str
    children: tuple["WTree", ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "children", tuple(self.children))

    def depth(self) -> int:
        return 1 + max((c.depth() for c in self.children), default=0)

    def __str__(self) -> str:
        if not self.children:
            return self.label
        return f"{self.label}({', '.join(map(str, self.children))})"


Path = tuple[int, ...]


@dataclass(frozen=True)
class TreeCheck:
    ok: bool
    path: Path = ()
    reason: str = ""

    def __bool__(self) -> bool:
        return self.ok


def validate_tree(sig: Signature, sort: Sort, t: WTree) -> TreeCheck:
    """Well-sortedness of ``t`` at ``sort``; on failure, the path to the first bad node."""
    stack: list[tuple[WTree, Sort, Path]] = [(t, sort, ())]
    while stack:
        node, want, path = stack.pop()
        con = sig.constructors.get(node.label)
        if con is None:
            return TreeCheck(False, path, f"unknown label {node.label!r}")
        if con.target != want:
            return TreeCheck(False, path, f"{node.label} has sort {con.target!r}, expected {want!r}")
        if len(node.children) != len(con.args):
            return TreeCheck(False, path, f"{node.label} takes {len(con.args)} children, "
                                          f"got {len(node.children)}")
        for i in reversed(range(len(con.args))):
            stack.append((node.children[i], con.args[i], path + (i,)))
    return TreeCheck(True)


@dataclass(frozen=True)
class Equality:
    equal: bool
    path: Path | None = None

    def __bool__(self) -> bool:
        return self.equal


def decide_equal(sig: Signature, a: WTree, b: WTree) -> Equality:
    """Structural equality; an unequal verdict carries the pre-order-first differing path.

    Comparing trees of different sorts is an error rather than "unequal".
    """
    if sig.sort_of(a) != sig.sort_of(b):
        raise SortMismatch(f"trees have sorts {sig.sort_of(a)!r} and {sig.sort_of(b)!r}")
    stack: list[tuple[WTree, WTree, Path]] = [(a, b, ())]
    while stack:
        x, y, path = stack.pop()
        if x is y:
            continue
        if x.label != y.label:
            return Equality(False, path)
        # same label, hence same finite arity: conjunction over positions
        for i in reversed(range(len(x.children))):
            stack.append((x.children[i], y.children[i], path + (i,)))
    return Equality(True)


def subtree(t: WTree, path: Path) -> WTree:
    for i in path:
        t = t.children[i]
    return t


PCF_TYPE_SIGNATURE = Signature({"type"}, [("iota", "type", ()), ("arrow", "type", ("type", "type"))])
