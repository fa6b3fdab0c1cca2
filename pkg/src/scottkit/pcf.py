"""Combinatory PCF: types, intrinsically typed terms, parser and elaborator.

Concrete syntax::

    term  := atom | term atom
    atom  := zero | succ | pred | ifz | k | s | fix | #digits
           | ( term ) | ( term : type )
    type  := nat | type -> type | ( type )

``--`` starts a line comment.  ``#n`` is sugar for ``succ`` applied ``n``
times to ``zero`` and is expanded by the parser.

Every occurrence of ``k``, ``s`` and ``fix`` gets fresh type metavariables
which are solved by first-order unification.  Metavariables that nothing
constrains are defaulted to ``nat`` unless elaboration is run with
``strict=True``, in which case they are reported as ambiguous.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterator, Union

from .wtree import PCF_TYPE_SIGNATURE, Constructor, Signature, WTree


# types


class PcfType:
    __slots__ = ()

    def __rshift__(self, other: "PcfType") -> "Arrow":
        return Arrow(self, other)


@dataclass(frozen=True)
class Nat(PcfType):
    def __str__(self) -> str:
        return "nat"


@dataclass(frozen=True)
class Arrow(PcfType):
    dom: PcfType
    cod: PcfType

    def __str__(self) -> str:
        d = f"({self.dom})" if isinstance(self.dom, Arrow) else str(self.dom)
        return f"{d} -> {self.cod}"


NAT = Nat()


def arrows(*types: PcfType) -> PcfType:
    """``arrows(a, b, c)`` is ``a -> b -> c``."""
    out = types[-1]
    for t in reversed(types[:-1]):
        out = Arrow(t, out)
    return out


def type_eq(a: PcfType, b: PcfType) -> bool:
    return a == b


def type_depth(t: PcfType) -> int:
    if isinstance(t, Arrow):
        return 1 + max(type_depth(t.dom), type_depth(t.cod))
    return 1


# terms


class PcfTypeError(TypeError):
    def __init__(self, message: str, pos: tuple[int, int] | None = None):
        self.pos = pos
        where = f"{pos[0]}:{pos[1]}: " if pos else ""
        super().__init__(where + message)


class Term:
    """A PCF term; every term knows its type."""

    __slots__ = ("type", "_hash", "numeral")

    def __eq__(self, other):
        if not isinstance(other, Term):
            return NotImplemented
        return term_eq(self, other)

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"<{render(self, annotate=False)} : {self.type}>"

    def __call__(self, *args: "Term") -> "Term":
        out = self
        for a in args:
            out = App(out, a)
        return out


class Const(Term):
    """``zero``, ``succ``, ``pred``, ``ifz``, or ``k``/``s``/``fix`` with their type parameters."""

    __slots__ = ("name", "params")

    def __init__(self, name: str, params: tuple[PcfType, ...] = ()):
        self.name = name
        self.params = tuple(params)
        self.type = _const_type(name, self.params)
        self.numeral = 0 if name == "zero" else None
        self._hash = hash((name, self.params))


def _const_type(name: str, ps: tuple[PcfType, ...]) -> PcfType:
    arity = {"zero": 0, "succ": 0, "pred": 0, "ifz": 0, "k": 2, "s": 3, "fix": 1}
    if name not in arity:
        raise ValueError(f"unknown constant {name!r}")
    if len(ps) != arity[name]:
        raise ValueError(f"{name} takes {arity[name]} type parameters, got {len(ps)}")
    if name == "zero":
        return NAT
    if name in ("succ", "pred"):
        return Arrow(NAT, NAT)
    if name == "ifz":
        return arrows(NAT, NAT, NAT, NAT)
    if name == "k":
        s, t = ps
        return arrows(s, t, s)
    if name == "s":
        s, t, r = ps
        return arrows(arrows(s, t, r), arrows(s, t), s, r)
    (s,) = ps
    return Arrow(Arrow(s, s), s)


class App(Term):
    __slots__ = ("fun", "arg")

    def __init__(self, fun: Term, arg: Term):
        ft = fun.type
        if not isinstance(ft, Arrow):
            raise PcfTypeError(f"cannot apply a term of type {ft}")
        if ft.dom != arg.type:
            raise PcfTypeError(f"argument has type {arg.type}, expected {ft.dom}")
        self.fun = fun
        self.arg = arg
        self.type = ft.cod
        self._hash = hash(("app", fun._hash, arg._hash))
        self.numeral = (arg.numeral + 1
                        if arg.numeral is not None and isinstance(fun, Const) and fun.name == "succ"
                        else None)


ZERO = Const("zero")
SUCC = Const("succ")
PRED = Const("pred")
IFZ = Const("ifz")


def K(sigma: PcfType, tau: PcfType) -> Const:
    return Const("k", (sigma, tau))


def S(sigma: PcfType, tau: PcfType, rho: PcfType) -> Const:
    return Const("s", (sigma, tau, rho))


def FIX(sigma: PcfType) -> Const:
    return Const("fix", (sigma,))


def term_eq(a: Term, b: Term) -> bool:
    """Structural equality including the type parameters of ``k``, ``s`` and ``fix``."""
    stack = [(a, b)]
    while stack:
        x, y = stack.pop()
        if x is y:
            continue
        if x._hash != y._hash or type(x) is not type(y):
            return False
        if isinstance(x, App):
            stack.append((x.arg, y.arg))
            stack.append((x.fun, y.fun))
        elif x.name != y.name or x.params != y.params:
            return False
    return True


def numeral(n: int) -> Term:
    if n < 0:
        raise ValueError("numerals are natural numbers")
    t: Term = ZERO
    for _ in range(n):
        t = App(SUCC, t)
    return t


def as_numeral(t: Term) -> int | None:
    return t.numeral


def spine(t: Term) -> tuple[Term, list[Term]]:
    """Head and argument list of an iterated application."""
    args = []
    while isinstance(t, App):
        args.append(t.arg)
        t = t.fun
    args.reverse()
    return t, args


def subterms(t: Term) -> Iterator[Term]:
    stack = [t]
    while stack:
        x = stack.pop()
        yield x
        if isinstance(x, App):
            stack.append(x.arg)
            stack.append(x.fun)


def term_size(t: Term) -> int:
    return sum(1 for _ in subterms(t))


def _const_source(c: Const, annotate: bool) -> str:
    if annotate and c.params:
        return f"({c.name} : {c.type})"
    return c.name


def render(t: Term, annotate: bool = True) -> str:
    """Concrete syntax for ``t``.

    With ``annotate`` every ``k``/``s``/``fix`` carries an ascription of its
    full type, so parsing and elaborating the output gives back ``t``.
    """
    if t.numeral is not None:
        return "zero" if t.numeral == 0 else f"#{t.numeral}"
    if isinstance(t, Const):
        return _const_source(t, annotate)
    head, args = spine(t)
    parts = [render(head, annotate)]
    for a in args:
        s = render(a, annotate)
        parts.append(f"({s})" if isinstance(a, App) and a.numeral is None else s)
    return " ".join(parts)


# raw syntax


@dataclass(frozen=True)
class RConst:
    name: str
    pos: tuple[int, int] = (0, 0)

    def __eq__(self, other):
        return isinstance(other, RConst) and self.name == other.name

    def __hash__(self):
        return hash(self.name)


@dataclass(frozen=True)
class RApp:
    fun: "RawTerm"
    arg: "RawTerm"


@dataclass(frozen=True)
class RAsc:
    term: "RawTerm"
    type: PcfType
    pos: tuple[int, int] = (0, 0)

    def __eq__(self, other):
        return isinstance(other, RAsc) and self.term == other.term and self.type == other.type

    def __hash__(self):
        return hash((self.term, self.type))


RawTerm = Union[RConst, RApp, RAsc]


def raw_pos(r: RawTerm) -> tuple[int, int]:
    """Source position of the leftmost token of a raw term."""
    while isinstance(r, RApp):
        r = r.fun
    return r.pos


class ParseError(SyntaxError):
    def __init__(self, message: str, line: int, col: int):
        self.line = line
        self.col = col
        super().__init__(f"{line}:{col}: {message}")


_TOKEN = re.compile(r"""
    (?P<comment>--[^\n]*)
  | (?P<ws>\s+)
  | (?P<num>\#\d+)
  | (?P<arrow>->)
  | (?P<punct>[():])
  | (?P<word>[A-Za-z_][A-Za-z0-9_']*)
""", re.VERBOSE)

KEYWORDS = {"zero", "succ", "pred", "ifz", "k", "s", "fix"}


def _tokens(source: str) -> list[tuple[str, str, int, int]]:
    out = []
    pos, line, col = 0, 1, 1
    while pos < len(source):
        m = _TOKEN.match(source, pos)
        if m is None:
            raise ParseError(f"unexpected character {source[pos]!r}", line, col)
        kind, text = m.lastgroup, m.group()
        if kind not in ("comment", "ws"):
            out.append((kind, text, line, col))
        nl = text.count("\n")
        if nl:
            line += nl
            col = len(text) - text.rfind("\n")
        else:
            col += len(text)
        pos = m.end()
    out.append(("eof", "", line, col))
    return out


class _Parser:
    def __init__(self, source: str):
        self.toks = _tokens(source)
        self.i = 0

    def peek(self):
        return self.toks[self.i]

    def take(self):
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def expect(self, text: str):
        kind, t, line, col = self.take()
        if t != text:
            raise ParseError(f"expected {text!r}, found {t or 'end of input'!r}", line, col)

    def starts_atom(self) -> bool:
        kind, text, *_ = self.peek()
        return kind == "num" or text == "(" or (kind == "word" and text in KEYWORDS)

    def term(self) -> RawTerm:
        if not self.starts_atom():
            kind, text, line, col = self.peek()
            raise ParseError(f"expected a term, found {text or 'end of input'!r}", line, col)
        t = self.atom()
        while self.starts_atom():
            t = RApp(t, self.atom())
        return t

    def atom(self) -> RawTerm:
        kind, text, line, col = self.take()
        if kind == "num":
            t: RawTerm = RConst("zero", (line, col))
            for _ in range(int(text[1:])):
                t = RApp(RConst("succ", (line, col)), t)
            return t
        if kind == "word":
            return RConst(text, (line, col))
        # "("
        inner = self.term()
        if self.peek()[1] == ":":
            self.take()
            ty = self.type()
            self.expect(")")
            return RAsc(inner, ty, (line, col))
        self.expect(")")
        return inner

    def type(self) -> PcfType:
        kind, text, line, col = self.take()
        if text == "nat":
            dom: PcfType = NAT
        elif text == "(":
            dom = self.type()
            self.expect(")")
        else:
            raise ParseError(f"expected a type, found {text or 'end of input'!r}", line, col)
        if self.peek()[0] == "arrow":
            self.take()
            return Arrow(dom, self.type())
        return dom


def parse(source: str) -> RawTerm:
    p = _Parser(source)
    t = p.term()
    kind, text, line, col = p.peek()
    if kind != "eof":
        raise ParseError(f"unexpected {text!r}", line, col)
    return t


def parse_type(source: str) -> PcfType:
    p = _Parser(source)
    t = p.type()
    kind, text, line, col = p.peek()
    if kind != "eof":
        raise ParseError(f"unexpected {text!r}", line, col)
    return t


# elaboration


class AmbiguousType(PcfTypeError):
    pass


@dataclass(eq=False)
class _Meta:
    id: int
    origin: str
    pos: tuple[int, int]

    def __str__(self):
        return f"?{self.id}"


class _Unifier:
    def __init__(self):
        self.subst: dict[int, object] = {}
        self.metas: list[_Meta] = []

    def fresh(self, origin: str, pos) -> _Meta:
        m = _Meta(len(self.metas), origin, pos)
        self.metas.append(m)
        return m

    def resolve(self, t):
        while isinstance(t, _Meta) and t.id in self.subst:
            t = self.subst[t.id]
        return t

    def zonk(self, t):
        t = self.resolve(t)
        if isinstance(t, _MArrow):
            return _MArrow(self.zonk(t.dom), self.zonk(t.cod))
        if isinstance(t, Arrow):
            return _MArrow(self.zonk(t.dom), self.zonk(t.cod))
        return t

    def show(self, t) -> str:
        t = self.zonk(t)
        if isinstance(t, _MArrow):
            d = self.show(t.dom)
            return f"({d}) -> {self.show(t.cod)}" if isinstance(self.zonk(t.dom), _MArrow) \
                else f"{d} -> {self.show(t.cod)}"
        return str(t)

    def occurs(self, m: _Meta, t) -> bool:
        t = self.resolve(t)
        if t is m:
            return True
        if isinstance(t, (_MArrow, Arrow)):
            return self.occurs(m, t.dom) or self.occurs(m, t.cod)
        return False

    def unify(self, a, b, pos, what: str) -> None:
        a0, b0 = a, b
        stack = [(a, b)]
        while stack:
            x, y = stack.pop()
            x, y = self.resolve(x), self.resolve(y)
            if x is y:
                continue
            if isinstance(x, _Meta):
                if self.occurs(x, y):
                    raise PcfTypeError(f"{what}: infinite type {x} = {self.show(y)}", pos)
                self.subst[x.id] = y
            elif isinstance(y, _Meta):
                stack.append((y, x))
            elif isinstance(x, Nat) and isinstance(y, Nat):
                continue
            elif isinstance(x, (_MArrow, Arrow)) and isinstance(y, (_MArrow, Arrow)):
                stack.append((x.cod, y.cod))
                stack.append((x.dom, y.dom))
            else:
                raise PcfTypeError(
                    f"{what}: type mismatch between {self.show(a0)} and {self.show(b0)}"
                    f" ({self.show(x)} is not {self.show(y)})", pos)


@dataclass(frozen=True, eq=False)
class _MArrow:
    dom: object
    cod: object


def _m_arrows(*ts):
    out = ts[-1]
    for t in reversed(ts[:-1]):
        out = _MArrow(t, out)
    return out


@dataclass
class _Occ:
    name: str
    metas: tuple
    pos: tuple[int, int]


def elaborate(raw: RawTerm, strict: bool = False) -> Term:
    """Type a raw term, solving the type parameters of every combinator occurrence.

    Raises :class:`PcfTypeError` on a mismatch and, with ``strict``,
    :class:`AmbiguousType` when an occurrence's parameters are not determined.
    """
    u = _Unifier()

    # first pass: build a skeleton with metavariables and collect constraints
    def infer(r):
        if isinstance(r, RApp):
            # flatten long succ chains (numerals) without recursion
            n = 0
            node = r
            while isinstance(node, RApp) and isinstance(node.fun, RConst) and node.fun.name == "succ":
                n += 1
                node = node.arg
            if n:
                inner, ty = infer(node)
                u.unify(ty, NAT, raw_pos(node), "argument of succ")
                return ("succs", n, inner), NAT
            f, ft = infer(r.fun)
            a, at = infer(r.arg)
            res = u.fresh("application", None)
            u.unify(ft, _MArrow(at, res), raw_pos(r.arg), "application")
            return ("app", f, a), res
        if isinstance(r, RAsc):
            inner, ty = infer(r.term)
            u.unify(ty, r.type, r.pos, "ascription")
            return inner, ty
        name, pos = r.name, r.pos
        if name in ("zero", "succ", "pred", "ifz"):
            c = Const(name)
            return ("const", c), c.type
        if name == "k":
            s, t = u.fresh("k", pos), u.fresh("k", pos)
            occ = _Occ("k", (s, t), pos)
            return ("occ", occ), _m_arrows(s, t, s)
        if name == "s":
            s, t, q = (u.fresh("s", pos) for _ in range(3))
            occ = _Occ("s", (s, t, q), pos)
            return ("occ", occ), _m_arrows(_m_arrows(s, t, q), _m_arrows(s, t), s, q)
        if name == "fix":
            s = u.fresh("fix", pos)
            return ("occ", _Occ("fix", (s,), pos)), _MArrow(_MArrow(s, s), s)
        raise PcfTypeError(f"unknown identifier {name!r}", pos)

    skeleton, _ = infer(raw)

    def ground(t, occ: _Occ) -> PcfType:
        t = u.resolve(t)
        if isinstance(t, _Meta):
            if strict:
                raise AmbiguousType(
                    f"type parameter of this {occ.name} is not determined; add an ascription", occ.pos)
            return NAT
        if isinstance(t, (_MArrow, Arrow)):
            return Arrow(ground(t.dom, occ), ground(t.cod, occ))
        return t

    def build(sk) -> Term:
        tag = sk[0]
        if tag == "const":
            return sk[1]
        if tag == "occ":
            occ = sk[1]
            return Const(occ.name, tuple(ground(m, occ) for m in occ.metas))
        if tag == "succs":
            t = build(sk[2])
            for _ in range(sk[1]):
                t = App(SUCC, t)
            return t
        return App(build(sk[1]), build(sk[2]))

    return build(skeleton)


def compile_source(source: str, strict: bool = False) -> Term:
    return elaborate(parse(source), strict=strict)


# encodings as well-founded trees


def type_to_wtree(t: PcfType) -> WTree:
    if isinstance(t, Arrow):
        return WTree("arrow", (type_to_wtree(t.dom), type_to_wtree(t.cod)))
    return WTree("iota")


def wtree_to_type(w: WTree) -> PcfType:
    if w.label == "arrow":
        return Arrow(wtree_to_type(w.children[0]), wtree_to_type(w.children[1]))
    return NAT


def _label(c: Const) -> str:
    if c.params:
        return f"{c.name}[{';'.join(map(str, c.params))}]"
    return c.name


def term_to_wtree(t: Term) -> WTree:
    """Application at ``sigma -> tau`` becomes a binary node labelled by both types."""
    if isinstance(t, App):
        lab = f"app[{t.arg.type};{t.type}]"
        return WTree(lab, (term_to_wtree(t.fun), term_to_wtree(t.arg)))
    return WTree(_label(t))


def term_signature(*terms: Term) -> Signature:
    """The finite fragment of the PCF-term signature that the given terms use."""
    sorts: set[str] = set()
    cons: dict[str, Constructor] = {}
    for t in terms:
        for x in subterms(t):
            sorts.add(str(x.type))
            if isinstance(x, App):
                lab = f"app[{x.arg.type};{x.type}]"
                cons[lab] = Constructor(lab, str(x.type), (str(x.fun.type), str(x.arg.type)))
                sorts.add(str(x.fun.type))
                sorts.add(str(x.arg.type))
            else:
                cons[_label(x)] = Constructor(_label(x), str(x.type))
    return Signature(sorts, list(cons.values()))


__all__ = [
    "PcfType", "Nat", "Arrow", "NAT", "arrows", "type_eq", "Term", "Const", "App",
    "ZERO", "SUCC", "PRED", "IFZ", "K", "S", "FIX", "term_eq", "numeral", "as_numeral",
    "spine", "subterms", "render", "parse", "parse_type", "elaborate", "compile_source",
    "RConst", "RApp", "RAsc", "ParseError", "PcfTypeError", "AmbiguousType",
    "type_to_wtree", "wtree_to_type", "term_to_wtree", "term_signature", "PCF_TYPE_SIGNATURE",
]
