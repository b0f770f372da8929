"""Sparse multivariate polynomials over the rationals.

Everything here is exact: coefficients are :class:`fractions.Fraction`
and no floating point value is ever produced.  A polynomial lives in a
:class:`PolyRing`, which is nothing more than an ordered tuple of variable
names; arithmetic between polynomials of different rings is an error.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, Mapping, Sequence, Tuple

Monomial = Tuple[int, ...]


class ContextError(ValueError):
    """Operands live in different rings, or a point has the wrong length."""


class UnknownVariableError(ValueError):
    def __init__(self, name, position=None):
        self.name = name
        self.position = position
        where = "" if position is None else f" at position {position}"
        super().__init__(f"unknown variable {name!r}{where}")


class ParseError(ValueError):
    def __init__(self, message, position):
        self.position = position
        super().__init__(f"{message} at position {position}")


def as_rational(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    raise TypeError(f"not an exact rational: {value!r}")


# ---------------------------------------------------------------------------
# monomial orders


@dataclass(frozen=True)
class MonomialOrder:
    """A monomial order: ``degrevlex``, ``lex`` or a block ``elimination`` order.

    ``key(m)`` returns a tuple that compares like the monomial, so
    ``max(monomials, key=order.key)`` is the leading monomial.  For an
    elimination order each block is compared by degrevlex, and blocks are
    compared lexicographically from the left.
    """

    kind: str = "degrevlex"
    blocks: Tuple[int, ...] = ()

    def __post_init__(self):
        if self.kind not in ("degrevlex", "lex", "elimination"):
            raise ValueError(f"unknown monomial order {self.kind!r}")
        if self.kind == "elimination" and not self.blocks:
            raise ValueError("elimination order needs block sizes")

    def key(self, m: Monomial):
        if self.kind == "degrevlex":
            return (sum(m), tuple(-e for e in reversed(m)))
        if self.kind == "lex":
            return m
        out = []
        start = 0
        for size in self.blocks:
            part = m[start:start + size]
            out.append(sum(part))
            out.extend(-e for e in reversed(part))
            start += size
        if start != len(m):
            raise ContextError("block sizes do not cover the variables")
        return tuple(out)

    def __str__(self):
        if self.kind == "elimination":
            return "elimination(" + ",".join(map(str, self.blocks)) + ")"
        return self.kind


DEGREVLEX = MonomialOrder("degrevlex")
LEX = MonomialOrder("lex")


def elimination(*blocks: int) -> MonomialOrder:
    return MonomialOrder("elimination", tuple(blocks))


# ---------------------------------------------------------------------------
# rings


class PolyRing:
    """The polynomial ring Q[vars]. Two rings are equal iff their names agree."""

    __slots__ = ("names", "nvars", "_index")

    def __init__(self, names: Iterable[str]):
        names = tuple(names)
        if len(set(names)) != len(names):
            raise ValueError(f"repeated variable names in {names}")
        for n in names:
            if not _IDENT.fullmatch(n):
                raise ValueError(f"bad variable name {n!r}")
        self.names = names
        self.nvars = len(names)
        self._index = {n: i for i, n in enumerate(names)}

    def __eq__(self, other):
        return isinstance(other, PolyRing) and self.names == other.names

    def __hash__(self):
        return hash(("PolyRing", self.names))

    def __repr__(self):
        return f"PolyRing({list(self.names)!r})"

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise UnknownVariableError(name) from None

    @property
    def zero(self) -> "Polynomial":
        return Polynomial(self, {})

    @property
    def one(self) -> "Polynomial":
        return self.constant(1)

    def constant(self, c) -> "Polynomial":
        c = as_rational(c)
        if not c:
            return self.zero
        return Polynomial(self, {(0,) * self.nvars: c})

    def monomial(self, exps: Monomial, coeff=1) -> "Polynomial":
        coeff = as_rational(coeff)
        if len(exps) != self.nvars:
            raise ContextError("exponent vector has wrong length")
        if not coeff:
            return self.zero
        return Polynomial(self, {tuple(exps): coeff})

    def var(self, name: str) -> "Polynomial":
        i = self.index(name)
        e = [0] * self.nvars
        e[i] = 1
        return Polynomial(self, {tuple(e): Fraction(1)})

    @property
    def gens(self):
        return tuple(self.var(n) for n in self.names)

    def __call__(self, value) -> "Polynomial":
        if isinstance(value, Polynomial):
            if value.ring != self:
                raise ContextError("polynomial from another ring")
            return value
        if isinstance(value, str):
            return parse_poly(value, self)
        return self.constant(value)

    def parse(self, text: str) -> "Polynomial":
        return parse_poly(text, self)

    def extend(self, names: Sequence[str], front: bool = True) -> "PolyRing":
        """Ring with extra variables prepended (or appended)."""
        names = tuple(names)
        return PolyRing(names + self.names if front else self.names + names)


# ---------------------------------------------------------------------------
# polynomials


class Polynomial:
    """Element of a :class:`PolyRing`; immutable.

    ``terms`` maps exponent tuples to nonzero Fractions.  Treat it as
    read-only.
    """

    __slots__ = ("ring", "terms", "_hash")

    def __init__(self, ring: PolyRing, terms: Mapping[Monomial, Fraction]):
        self.ring = ring
        self.terms: Dict[Monomial, Fraction] = {m: c for m, c in terms.items() if c}
        self._hash = None

    # -- basic protocol -----------------------------------------------------

    def __bool__(self):
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other):
        if isinstance(other, Polynomial):
            return self.ring == other.ring and self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self.terms == self.ring.constant(other).terms
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.ring, frozenset(self.terms.items())))
        return self._hash

    def __repr__(self):
        return f"Polynomial({str(self)!r})"

    def __str__(self):
        return render(self)

    def _coerce(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            if other.ring != self.ring:
                raise ContextError(
                    f"ring mismatch: {self.ring.names} vs {other.ring.names}")
            return other
        if isinstance(other, (int, Fraction)):
            return self.ring.constant(other)
        raise TypeError(f"cannot combine a polynomial with {type(other).__name__}")

    # -- arithmetic ---------------------------------------------------------

    def __add__(self, other):
        other = self._coerce(other)
        if len(other.terms) > len(self.terms):
            a, b = other.terms, self.terms
        else:
            a, b = self.terms, other.terms
        out = dict(a)
        for m, c in b.items():
            s = out.get(m, 0) + c
            if s:
                out[m] = s
            else:
                out.pop(m, None)
        return Polynomial(self.ring, out)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial(self.ring, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            s = out.get(m, 0) - c
            if s:
                out[m] = s
            else:
                out.pop(m, None)
        return Polynomial(self.ring, out)

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        other = self._coerce(other)
        if not self.terms or not other.terms:
            return self.ring.zero
        out: Dict[Monomial, Fraction] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = tuple(a + b for a, b in zip(m1, m2))
                s = out.get(m, 0) + c1 * c2
                if s:
                    out[m] = s
                else:
                    del out[m]
        return Polynomial(self.ring, out)

    __rmul__ = __mul__

    def scale(self, c) -> "Polynomial":
        c = as_rational(c)
        if not c:
            return self.ring.zero
        return Polynomial(self.ring, {m: v * c for m, v in self.terms.items()})

    def mul_term(self, mono: Monomial, coeff: Fraction) -> "Polynomial":
        """Multiply by the single term ``coeff * x^mono``."""
        if not coeff:
            return self.ring.zero
        return Polynomial(self.ring, {
            tuple(a + b for a, b in zip(m, mono)): c * coeff
            for m, c in self.terms.items()})

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            raise ValueError("exponent must be a natural number")
        result = self.ring.one
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    # -- inspection ---------------------------------------------------------

    def is_constant(self) -> bool:
        return all(not any(m) for m in self.terms)

    def constant_term(self) -> Fraction:
        return self.terms.get((0,) * self.ring.nvars, Fraction(0))

    def total_degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        return max((sum(m) for m in self.terms), default=-1)

    def leading_monomial(self, order: MonomialOrder = DEGREVLEX) -> Monomial:
        return max(self.terms, key=order.key)

    def leading_term(self, order: MonomialOrder = DEGREVLEX):
        m = self.leading_monomial(order)
        return m, self.terms[m]

    def sorted_terms(self, order: MonomialOrder = DEGREVLEX):
        return sorted(self.terms.items(), key=lambda t: order.key(t[0]), reverse=True)

    def variables(self) -> set:
        """Indices of variables that occur."""
        used = set()
        for m in self.terms:
            used.update(i for i, e in enumerate(m) if e)
        return used

    # -- calculus and evaluation --------------------------------------------

    def evaluate(self, point: Sequence) -> Fraction:
        if len(point) != self.ring.nvars:
            raise ContextError(
                f"point has {len(point)} coordinates, ring has {self.ring.nvars} variables")
        pt = [as_rational(v) for v in point]
        total = Fraction(0)
        for m, c in self.terms.items():
            v = c
            for x, e in zip(pt, m):
                if e:
                    v *= x ** e
            total += v
        return total

    def diff(self, var) -> "Polynomial":
        i = self.ring.index(var) if isinstance(var, str) else int(var)
        out = {}
        for m, c in self.terms.items():
            e = m[i]
            if e:
                mm = list(m)
                mm[i] = e - 1
                out[tuple(mm)] = c * e
        return Polynomial(self.ring, out)

    def substitute(self, values: Mapping[str, "Polynomial"]) -> "Polynomial":
        """Replace named variables by polynomials of the same ring."""
        idx = {self.ring.index(k): self._coerce(v) for k, v in values.items()}
        result = self.ring.zero
        for m, c in self.terms.items():
            keep = [0 if i in idx else e for i, e in enumerate(m)]
            term = self.ring.monomial(tuple(keep), c)
            for i, e in enumerate(m):
                if e and i in idx:
                    term = term * idx[i] ** e
            result = result + term
        return result

    def embed(self, ring: PolyRing) -> "Polynomial":
        """The same polynomial viewed in a ring whose names contain ours."""
        pos = [ring.index(n) for n in self.ring.names]
        out = {}
        for m, c in self.terms.items():
            e = [0] * ring.nvars
            for p, k in zip(pos, m):
                e[p] = k
            out[tuple(e)] = c
        return Polynomial(ring, out)

    def contract(self, ring: PolyRing) -> "Polynomial":
        """Inverse of :meth:`embed`; fails if a dropped variable occurs."""
        pos = [self.ring.index(n) for n in ring.names]
        dropped = set(range(self.ring.nvars)) - set(pos)
        out = {}
        for m, c in self.terms.items():
            if any(m[d] for d in dropped):
                raise ContextError("polynomial involves variables outside the target ring")
            out[tuple(m[p] for p in pos)] = c
        return Polynomial(ring, out)


# ---------------------------------------------------------------------------
# arithmetic dispatcher


def arith(op: str, *operands):
    """Functional front end: ``add``, ``sub``, ``mul``, ``scalar_mul``, ``pow``."""
    if op == "add":
        a, b = operands
        return a + b
    if op == "sub":
        a, b = operands
        return a - b
    if op == "mul":
        a, b = operands
        return a * b
    if op == "scalar_mul":
        c, f = operands
        return f.scale(c)
    if op == "pow":
        f, n = operands
        return f ** n
    raise ValueError(f"unknown operation {op!r}")


def evaluate(f: Polynomial, point: Sequence) -> Fraction:
    return f.evaluate(point)


def partial_derivative(f: Polynomial, var: str) -> Polynomial:
    return f.diff(var)


# ---------------------------------------------------------------------------
# rendering


def format_rational(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def _render_monomial(ring: PolyRing, m: Monomial) -> str:
    parts = []
    for name, e in zip(ring.names, m):
        if e == 1:
            parts.append(name)
        elif e:
            parts.append(f"{name}^{e}")
    return "*".join(parts)


def render(f: Polynomial, order: MonomialOrder = DEGREVLEX) -> str:
    """Render in the parser's grammar, terms in decreasing ``order``."""
    if not f.terms:
        return "0"
    out = []
    for i, (m, c) in enumerate(f.sorted_terms(order)):
        mono = _render_monomial(f.ring, m)
        neg = c < 0
        a = -c if neg else c
        if not mono:
            body = format_rational(a)
        elif a == 1:
            body = mono
        else:
            body = f"{format_rational(a)}*{mono}"
        if i == 0:
            out.append(("-" if neg else "") + body)
        else:
            out.append((" - " if neg else " + ") + body)
    return "".join(out)


# ---------------------------------------------------------------------------
# parsing

_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")
_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z0-9_]*)|(.))")


def _tokenize(text: str):
    tokens = []
    pos = 0
    n = len(text)
    while pos < n:
        if text[pos].isspace():
            pos += 1
            continue
        m = _TOKEN.match(text, pos)
        start = m.start(1) if m.group(1) else m.start(2) if m.group(2) else m.start(3)
        if m.group(1):
            tokens.append(("int", int(m.group(1)), start))
        elif m.group(2):
            tokens.append(("ident", m.group(2), start))
        else:
            ch = m.group(3)
            if ch not in "+-*^()/":
                raise ParseError(f"unexpected character {ch!r}", start)
            tokens.append((ch, ch, start))
        pos = m.end()
    tokens.append(("end", None, n))
    return tokens


class _Parser:
    def __init__(self, text: str, ring: PolyRing):
        self.tokens = _tokenize(text)
        self.i = 0
        self.ring = ring

    def peek(self):
        return self.tokens[self.i]

    def take(self, kind=None):
        tok = self.tokens[self.i]
        if kind is not None and tok[0] != kind:
            expected = "end of input" if kind == "end" else repr(kind)
            found = "end of input" if tok[0] == "end" else repr(tok[1])
            raise ParseError(f"expected {expected}, found {found}", tok[2])
        self.i += 1
        return tok

    def expr(self) -> Polynomial:
        sign = 1
        if self.peek()[0] in "+-":
            sign = -1 if self.take()[0] == "-" else 1
        acc = self.term()
        if sign < 0:
            acc = -acc
        while self.peek()[0] in ("+", "-"):
            op = self.take()[0]
            t = self.term()
            acc = acc + t if op == "+" else acc - t
        return acc

    def term(self) -> Polynomial:
        acc = self.factor()
        while self.peek()[0] == "*":
            self.take()
            acc = acc * self.factor()
        return acc

    def factor(self) -> Polynomial:
        base = self.base()
        if self.peek()[0] == "^":
            self.take()
            tok = self.peek()
            if tok[0] != "int":
                raise ParseError("exponent must be a natural literal", tok[2])
            self.take()
            base = base ** tok[1]
        return base

    def base(self) -> Polynomial:
        kind, val, pos = self.peek()
        if kind == "int":
            self.take()
            if self.peek()[0] == "/":
                self.take()
                d = self.peek()
                if d[0] != "int":
                    raise ParseError("expected integer denominator", d[2])
                self.take()
                if d[1] == 0:
                    raise ParseError("zero denominator", d[2])
                return self.ring.constant(Fraction(val, d[1]))
            return self.ring.constant(val)
        if kind == "ident":
            self.take()
            if val not in self.ring._index:
                raise UnknownVariableError(val, pos)
            return self.ring.var(val)
        if kind == "(":
            self.take()
            inner = self.expr()
            self.take(")")
            return inner
        found = "end of input" if kind == "end" else repr(val)
        raise ParseError(f"unexpected {found}", pos)


def parse_poly(text: str, ring) -> Polynomial:
    """Parse ``text`` into a polynomial of ``ring``.

    ``ring`` may also be a plain list of variable names.  The grammar is
    integers, ``p/q`` literals, variables, ``+ - * ^`` and parentheses, with
    ``*`` mandatory between factors.
    """
    if not isinstance(ring, PolyRing):
        ring = PolyRing(ring)
    p = _Parser(text, ring)
    result = p.expr()
    p.take("end")
    return result
