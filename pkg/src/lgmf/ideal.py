"""Buchberger's algorithm with cofactor tracking, and the ideal operations
built on it (membership, quotients, radical membership, dimension).
"""

from __future__ import annotations

import contextlib
import heapq
import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from .expr import (DEGREVLEX, ContextError, Monomial, MonomialOrder, PolyRing,
                   Polynomial, elimination)

DEFAULT_BUDGET = 10 ** 6

_recorders: List[list] = []


@contextlib.contextmanager
def record_bases():
    """Collect every Gröbner basis computed inside the block (for audits
    such as certificate soundness)."""
    sink: list = []
    _recorders.append(sink)
    try:
        yield sink
    finally:
        _recorders.remove(sink)


class BudgetExhausted(RuntimeError):
    """A Gröbner computation exceeded its reduction-step budget."""


def _divides(a: Monomial, b: Monomial) -> bool:
    return all(x <= y for x, y in zip(a, b))


def _lcm(a: Monomial, b: Monomial) -> Monomial:
    return tuple(max(x, y) for x, y in zip(a, b))


def _quo(a: Monomial, b: Monomial) -> Monomial:
    return tuple(x - y for x, y in zip(a, b))


def fresh_names(ring: PolyRing, count: int, stem: str = "_t") -> List[str]:
    out = []
    i = 0
    while len(out) < count:
        name = f"{stem}{i}"
        if name not in ring.names:
            out.append(name)
        i += 1
    return out


class Ideal:
    """An ideal of a polynomial ring, given by generators.

    The zero ideal is stored as the single generator 0.
    """

    def __init__(self, generators: Sequence[Polynomial], ring: Optional[PolyRing] = None):
        gens = list(generators)
        if ring is None:
            if not gens:
                raise ValueError("need a ring for an ideal without generators")
            ring = gens[0].ring
        for g in gens:
            if g.ring != ring:
                raise ContextError("generators live in different rings")
        if not gens:
            gens = [ring.zero]
        self.ring = ring
        self.generators: Tuple[Polynomial, ...] = tuple(gens)

    @classmethod
    def parse(cls, texts: Sequence[str], ring: PolyRing) -> "Ideal":
        return cls([ring.parse(t) for t in texts], ring)

    def __repr__(self):
        return "Ideal<" + ", ".join(map(str, self.generators)) + ">"

    def nonzero_generators(self) -> List[Polynomial]:
        return [g for g in self.generators if g]

    def is_zero(self) -> bool:
        return not self.nonzero_generators()

    def __add__(self, other: "Ideal") -> "Ideal":
        if other.ring != self.ring:
            raise ContextError("ideals live in different rings")
        return Ideal(self.nonzero_generators() + other.nonzero_generators(), self.ring)

    def __mul__(self, other: "Ideal") -> "Ideal":
        return Ideal([a * b for a in self.nonzero_generators()
                      for b in other.nonzero_generators()], self.ring)

    def square(self) -> "Ideal":
        g = self.nonzero_generators()
        return Ideal([g[i] * g[j] for i in range(len(g)) for j in range(i, len(g))], self.ring)

    def with_generators(self, extra: Sequence[Polynomial]) -> "Ideal":
        return Ideal(self.nonzero_generators() + [e for e in extra if e], self.ring)


@dataclass(frozen=True)
class NormalForm:
    remainder: Polynomial
    quotients: Tuple[Polynomial, ...]


class GroebnerBasis:
    """Reduced Gröbner basis plus certificates.

    ``certificates[i][j]`` is the coefficient of ``generators[j]`` in an
    expression of ``elements[i]``; it is ``None`` when the basis was computed
    with ``certificates=False``.
    """

    def __init__(self, elements, order, generators, certificates, ring):
        self.elements: Tuple[Polynomial, ...] = tuple(elements)
        self.order: MonomialOrder = order
        self.generators: Tuple[Polynomial, ...] = tuple(generators)
        self.certificates = (None if certificates is None
                             else tuple(tuple(c) for c in certificates))
        self.ring = ring
        self._lead = [g.leading_term(order) for g in self.elements]

    def __repr__(self):
        return "GroebnerBasis[" + ", ".join(map(str, self.elements)) + f"; {self.order}]"

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def is_unit(self) -> bool:
        return len(self.elements) == 1 and self.elements[0].is_constant()

    def leading_monomials(self) -> List[Monomial]:
        return [m for m, _ in self._lead]

    def normal_form(self, f: Polynomial, budget: int = DEFAULT_BUDGET) -> NormalForm:
        if f.ring != self.ring:
            raise ContextError("polynomial and basis live in different rings")
        rem, quo = _reduce(f, self.elements, self._lead, self.order,
                           track=True, budget=budget)
        return NormalForm(rem, tuple(quo))

    def reduce(self, f: Polynomial) -> Polynomial:
        if f.ring != self.ring:
            raise ContextError("polynomial and basis live in different rings")
        if not f:
            return f
        rem, _ = _reduce(f, self.elements, self._lead, self.order,
                         track=False, budget=DEFAULT_BUDGET)
        return rem

    def contains(self, f: Polynomial) -> bool:
        return self.reduce(f).is_zero()

    def lift(self, f: Polynomial) -> Optional[Tuple[Polynomial, ...]]:
        """Cofactors ``c`` with ``f == sum(c[j] * generators[j])``, or None."""
        if self.certificates is None:
            raise ValueError("basis was computed without certificates")
        nf = self.normal_form(f)
        if nf.remainder:
            return None
        zero = self.ring.zero
        out = [zero] * len(self.generators)
        for q, cert in zip(nf.quotients, self.certificates):
            if q:
                for j, c in enumerate(cert):
                    if c:
                        out[j] = out[j] + q * c
        return tuple(out)

    def check_certificates(self) -> bool:
        if self.certificates is None:
            return True
        for g, cert in zip(self.elements, self.certificates):
            total = self.ring.zero
            for c, gen in zip(cert, self.generators):
                if c:
                    total = total + c * gen
            if total != g:
                return False
        return True


def _reduce(f, basis, leads, order, track, budget, cof_basis=None, ncof=0):
    """Full reduction of ``f``; returns (remainder, quotients).

    When ``cof_basis`` is given, quotients are instead folded into a cofactor
    vector of length ``ncof`` via ``cof_basis[i]`` (used inside Buchberger).
    """
    ring = f.ring
    p = dict(f.terms)
    rem = {}
    quo = [dict() for _ in basis] if track else None
    steps = 0
    key = order.key
    while p:
        m = max(p, key=key)
        c = p[m]
        for i, (lm, lc) in enumerate(leads):
            if _divides(lm, m):
                steps += 1
                if steps > budget:
                    raise BudgetExhausted(f"reduction exceeded {budget} steps")
                q = _quo(m, lm)
                coef = c / lc
                for gm, gc in basis[i].terms.items():
                    t = tuple(a + b for a, b in zip(gm, q))
                    v = p.get(t, 0) - coef * gc
                    if v:
                        p[t] = v
                    else:
                        p.pop(t, None)
                if track:
                    quo[i][q] = quo[i].get(q, 0) + coef
                break
        else:
            rem[m] = c
            del p[m]
    quotients = [Polynomial(ring, d) for d in quo] if track else None
    return Polynomial(ring, rem), quotients


class _Builder:
    """Mutable state of one Buchberger run."""

    def __init__(self, ring, order, ngen, track, budget):
        self.ring = ring
        self.order = order
        self.track = track
        self.budget = budget
        self.steps = 0
        self.ngen = ngen
        self.polys: List[Polynomial] = []
        self.leads: List[Tuple[Monomial, Fraction]] = []
        self.certs: List[Optional[List[Polynomial]]] = []
        self.alive: List[bool] = []

    def reduce(self, f: Polynomial, cert):
        """Fully reduce against the live basis, updating the certificate."""
        key = self.order.key
        p = dict(f.terms)
        rem = {}
        cert = list(cert) if cert is not None else None
        idx = [i for i, a in enumerate(self.alive) if a]
        while p:
            m = max(p, key=key)
            c = p[m]
            for i in idx:
                lm, lc = self.leads[i]
                if _divides(lm, m):
                    self.steps += 1
                    if self.steps > self.budget:
                        raise BudgetExhausted(
                            f"Gröbner computation exceeded {self.budget} reduction steps")
                    q = _quo(m, lm)
                    coef = c / lc
                    for gm, gc in self.polys[i].terms.items():
                        t = tuple(a + b for a, b in zip(gm, q))
                        v = p.get(t, 0) - coef * gc
                        if v:
                            p[t] = v
                        else:
                            p.pop(t, None)
                    if cert is not None:
                        for j, cj in enumerate(self.certs[i]):
                            if cj:
                                cert[j] = cert[j] - cj.mul_term(q, coef)
                    break
            else:
                rem[m] = c
                del p[m]
        return Polynomial(self.ring, rem), cert

    def add(self, f: Polynomial, cert) -> int:
        self.polys.append(f)
        self.leads.append(f.leading_term(self.order))
        self.certs.append(cert)
        self.alive.append(True)
        return len(self.polys) - 1


def groebner(ideal, order: MonomialOrder = DEGREVLEX, certificates: bool = True,
             budget: int = DEFAULT_BUDGET) -> GroebnerBasis:
    """Reduced Gröbner basis of ``ideal`` under ``order``.

    Buchberger with normal pair selection and both of Buchberger's criteria.
    Raises :class:`BudgetExhausted` after ``budget`` reduction steps.
    """
    if isinstance(ideal, Ideal):
        gens = ideal.generators
        ring = ideal.ring
    else:
        gens = tuple(ideal)
        ring = gens[0].ring
        ideal = Ideal(gens, ring)
    ngen = len(gens)
    zero = ring.zero
    b = _Builder(ring, order, ngen, certificates, budget)
    key = order.key

    pairs = []  # heap of (key(lcm), i, j)
    pending = set()

    def unit_cert(j):
        if not certificates:
            return None
        v = [zero] * ngen
        v[j] = ring.one
        return v

    def insert(f, cert):
        k = b.add(f, cert)
        lk = b.leads[k][0]
        for i in range(k):
            if not b.alive[i]:
                continue
            li = b.leads[i][0]
            lcm = _lcm(li, lk)
            heapq.heappush(pairs, (key(lcm), i, k))
            pending.add((i, k))
        return k

    for j, g in enumerate(gens):
        if not g:
            continue
        r, cert = b.reduce(g, unit_cert(j))
        if r:
            insert(r, cert)

    while pairs:
        _, i, j = heapq.heappop(pairs)
        if (i, j) not in pending:
            continue
        pending.discard((i, j))
        li, ci = b.leads[i]
        lj, cj = b.leads[j]
        lcm = _lcm(li, lj)
        # product criterion
        if all(not (x and y) for x, y in zip(li, lj)):
            continue
        # chain criterion
        skip = False
        for k in range(len(b.polys)):
            if k in (i, j):
                continue
            if _divides(b.leads[k][0], lcm):
                if (min(i, k), max(i, k)) not in pending and (min(j, k), max(j, k)) not in pending:
                    skip = True
                    break
        if skip:
            continue
        qi, qj = _quo(lcm, li), _quo(lcm, lj)
        s = b.polys[i].mul_term(qi, 1 / ci) - b.polys[j].mul_term(qj, 1 / cj)
        if certificates:
            cert = [b.certs[i][t].mul_term(qi, 1 / ci) - b.certs[j][t].mul_term(qj, 1 / cj)
                    for t in range(ngen)]
        else:
            cert = None
        r, cert = b.reduce(s, cert)
        if r:
            insert(r, cert)

    # minimalize
    idx = list(range(len(b.polys)))
    keep = []
    for i in idx:
        li = b.leads[i][0]
        dominated = False
        for j in idx:
            if j == i:
                continue
            lj = b.leads[j][0]
            if _divides(lj, li) and (lj != li or j < i):
                dominated = True
                break
        if not dominated:
            keep.append(i)

    # interreduce and normalize
    final = []
    for i in keep:
        b.alive = [k in keep and k != i for k in range(len(b.polys))]
        r, cert = b.reduce(b.polys[i], b.certs[i])
        lc = r.leading_term(order)[1]
        inv = 1 / lc
        r = r.scale(inv)
        if cert is not None:
            cert = [c.scale(inv) for c in cert]
        final.append((r, cert))
    final.sort(key=lambda t: key(t[0].leading_monomial(order)), reverse=True)
    elements = [f for f, _ in final]
    certs = [c for _, c in final] if certificates else None
    out = GroebnerBasis(elements, order, gens, certs, ring)
    for sink in _recorders:
        sink.append(out)
    return out


def normal_form(f: Polynomial, basis: GroebnerBasis) -> NormalForm:
    return basis.normal_form(f)


def is_groebner(basis: GroebnerBasis) -> bool:
    """Buchberger's criterion: every S-polynomial reduces to zero."""
    els = basis.elements
    for i in range(len(els)):
        for j in range(i + 1, len(els)):
            li, ci = els[i].leading_term(basis.order)
            lj, cj = els[j].leading_term(basis.order)
            lcm = _lcm(li, lj)
            s = els[i].mul_term(_quo(lcm, li), 1 / ci) - els[j].mul_term(_quo(lcm, lj), 1 / cj)
            if basis.reduce(s):
                return False
    return True


def divide_exact(a: Polynomial, b: Polynomial) -> Polynomial:
    """``a / b`` when ``b`` divides ``a``; raises ValueError otherwise."""
    if not b:
        raise ZeroDivisionError("division by the zero polynomial")
    lead = [b.leading_term(DEGREVLEX)]
    rem, quo = _reduce(a, [b], lead, DEGREVLEX, track=True, budget=DEFAULT_BUDGET)
    if rem:
        raise ValueError(f"{b} does not divide {a}")
    return quo[0]


def _as_ideal(I, ring=None) -> Ideal:
    if isinstance(I, Ideal):
        return I
    return Ideal(list(I), ring)


def ideal_quotient(I, f: Polynomial, budget: int = DEFAULT_BUDGET) -> Ideal:
    """The colon ideal ``(I : f)``, via ``I ∩ <f>`` computed by eliminating ``t``
    from ``t*I + (1 - t)*<f>``."""
    I = _as_ideal(I, f.ring)
    if not f:
        raise ValueError("ideal quotient by the zero polynomial")
    ring = I.ring
    if f.ring != ring:
        raise ContextError("ideal and divisor live in different rings")
    (tname,) = fresh_names(ring, 1)
    big = ring.extend([tname])
    t = big.var(tname)
    gens = [t * g.embed(big) for g in I.nonzero_generators()]
    fe = f.embed(big)
    gens.append(fe - t * fe)
    gb = groebner(Ideal(gens, big), elimination(1, ring.nvars),
                  certificates=False, budget=budget)
    out = []
    for g in gb.elements:
        m = g.leading_monomial(gb.order)
        if m[0] == 0:
            out.append(divide_exact(g.contract(ring), f))
    return Ideal(out, ring)


def radical_membership(f: Polynomial, I, budget: int = DEFAULT_BUDGET) -> bool:
    """Whether ``f`` lies in the radical of ``I`` (Rabinowitsch's trick)."""
    I = _as_ideal(I, f.ring)
    if not f:
        return True
    ring = I.ring
    (tname,) = fresh_names(ring, 1)
    big = ring.extend([tname])
    t = big.var(tname)
    gens = [g.embed(big) for g in I.nonzero_generators()]
    gens.append(big.one - t * f.embed(big))
    return groebner(Ideal(gens, big), certificates=False, budget=budget).is_unit()


def ideal_dimension(I, basis: Optional[GroebnerBasis] = None) -> Optional[int]:
    """Krull dimension of V(I), or None when I is the unit ideal.

    Computed as the size of a largest set of variables independent modulo the
    leading-term ideal.
    """
    I = _as_ideal(I)
    gb = basis if basis is not None else groebner(I, certificates=False)
    if gb.is_unit():
        return None
    n = I.ring.nvars
    supports = [frozenset(i for i, e in enumerate(m) if e) for m in gb.leading_monomials()
                if any(m)]
    for size in range(n, -1, -1):
        for subset in itertools.combinations(range(n), size):
            s = set(subset)
            if not any(sup <= s for sup in supports):
                return size
    return 0


def same_ideal(I, J) -> bool:
    gi = groebner(_as_ideal(I), certificates=False)
    gj = groebner(_as_ideal(J), certificates=False)
    return gi.elements == gj.elements


def module_membership(vector: Sequence[Polynomial], columns: Sequence[Sequence[Polynomial]],
                      relations: Optional[Ideal] = None, budget: int = DEFAULT_BUDGET):
    """Decide ``vector ∈ span_R(columns)`` for R = S / relations.

    Returns cofactors ``c`` with ``vector ≡ Σ c[k]·columns[k]`` modulo the
    relations, or None.  Encodes the free module as the degree-one part of
    S[e_1..e_n]/(e_i e_j), so one ideal-membership test decides it.
    """
    vector = list(vector)
    if not vector:
        return ()
    ring = vector[0].ring
    n = len(vector)
    enames = fresh_names(ring, n, stem="_e")
    big = ring.extend(enames, front=False)
    e = [big.var(nm) for nm in enames]

    def lin(col):
        acc = big.zero
        for k, entry in enumerate(col):
            if entry:
                acc = acc + entry.embed(big) * e[k]
        return acc

    gens = [lin(c) for c in columns]
    ncols = len(gens)
    if relations is not None:
        gens += [g.embed(big) for g in relations.nonzero_generators()]
    gens += [e[i] * e[j] for i in range(n) for j in range(i, n)]
    gb = groebner(Ideal(gens, big), certificates=True, budget=budget)
    cof = gb.lift(lin(vector))
    if cof is None:
        return None
    out = []
    for c in cof[:ncols]:
        # keep the e-free part: only it contributes in e-degree one
        free = {m: v for m, v in c.terms.items() if not any(m[ring.nvars:])}
        out.append(Polynomial(big, free).contract(ring))
    return tuple(out)
