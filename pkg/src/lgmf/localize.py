"""Factorizations at a point or a prime: fibers, fiber cohomology, support
tests, unit-entry trimming and homotopy decisions.

A locus is either a rational point of the model or a prime ideal P of the
ambient polynomial ring containing the relations.  Field computations over
the residue field k(P) are done in the domain S/P, with elements kept as
normal forms modulo a Gröbner basis of P.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations_with_replacement
from typing import List, Optional, Sequence, Tuple, Union

from .expr import PolyRing, Polynomial, as_rational
from .ideal import GroebnerBasis, Ideal, divide_exact, groebner, module_membership
from .linalg import rank_over_domain, rank_rational, solve_rational, solve_sparse
from .matrix import Matrix
from .mfcore import LGModel, MatrixFactorization, MFMorphism

YES = "yes"
NO = "no"
UNKNOWN = "unknown"


class LocusError(ValueError):
    """A locus does not lie on the model (or on the required subvariety)."""


class NonzeroFiberPotential(ValueError):
    pass


# ---------------------------------------------------------------------------
# loci


class RationalPoint:
    """A Q-rational point given by its coordinates."""

    kind = "point"

    def __init__(self, coords: Sequence):
        self.coords = tuple(as_rational(c) for c in coords)

    def __repr__(self):
        return f"RationalPoint({', '.join(str(c) for c in self.coords)})"

    def __eq__(self, other):
        return isinstance(other, RationalPoint) and self.coords == other.coords

    def __hash__(self):
        return hash(("point", self.coords))

    def label(self) -> str:
        return ",".join(str(c) for c in self.coords)

    def ideal(self, ring: PolyRing) -> Ideal:
        if len(self.coords) != ring.nvars:
            raise LocusError(f"point has {len(self.coords)} coordinates, ring has {ring.nvars} variables")
        return Ideal([ring.var(nm) - ring.constant(c) for nm, c in zip(ring.names, self.coords)], ring)

    def value(self, f: Polynomial) -> Fraction:
        return f.evaluate(self.coords)

    def is_zero(self, f: Polynomial) -> bool:
        return not f.evaluate(self.coords)

    def rank(self, m: Matrix) -> int:
        if m.nrows == 0 or m.ncols == 0:
            return 0
        return rank_rational(m.evaluate(self.coords))

    def check_on(self, model: LGModel):
        if len(self.coords) != model.ring.nvars:
            raise LocusError(f"point has {len(self.coords)} coordinates, "
                             f"model has {model.ring.nvars} variables")
        for g in model.relations.nonzero_generators():
            if g.evaluate(self.coords):
                raise LocusError(f"point {self.label()} does not satisfy the relation {g}")
        return self


class PrimeIdeal:
    """A prime ideal of the ambient ring, given by generators.

    Primality is trusted, not verified.
    """

    kind = "prime"

    def __init__(self, generators: Union[Ideal, Sequence[Polynomial]]):
        if not isinstance(generators, Ideal):
            generators = Ideal(list(generators))
        self.generators = generators
        self._gb: Optional[GroebnerBasis] = None

    @property
    def ring(self) -> PolyRing:
        return self.generators.ring

    @property
    def gb(self) -> GroebnerBasis:
        if self._gb is None:
            self._gb = groebner(self.generators, certificates=False)
        return self._gb

    def __repr__(self):
        return f"PrimeIdeal<{self.label()}>"

    def __eq__(self, other):
        return isinstance(other, PrimeIdeal) and self.gb.elements == other.gb.elements

    def __hash__(self):
        return hash(("prime", self.gb.elements))

    def label(self) -> str:
        return ",".join(str(g) for g in self.generators.nonzero_generators())

    def ideal(self, ring: PolyRing = None) -> Ideal:
        return self.generators

    def value(self, f: Polynomial) -> Polynomial:
        return self.gb.reduce(f)

    def is_zero(self, f: Polynomial) -> bool:
        return self.gb.reduce(f).is_zero()

    def rank(self, m: Matrix) -> int:
        if m.nrows == 0 or m.ncols == 0:
            return 0
        return rank_over_domain(m.rows, self.gb.reduce)

    def check_on(self, model: LGModel):
        if self.ring != model.ring:
            raise LocusError("prime ideal lives over a different ring")
        if self.gb.is_unit():
            raise LocusError("the unit ideal is not a prime")
        for g in model.relations.nonzero_generators():
            if not self.is_zero(g):
                raise LocusError(f"prime <{self.label()}> does not contain the relation {g}")
        return self


Locus = Union[RationalPoint, PrimeIdeal]


def parse_point(text: str) -> RationalPoint:
    parts = [t.strip() for t in text.split(",")]
    if not parts or any(not t for t in parts):
        raise ValueError(f"malformed point {text!r}")
    try:
        return RationalPoint([Fraction(t) for t in parts])
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"malformed point {text!r}: {exc}") from None


def parse_prime(text: str, ring: PolyRing) -> PrimeIdeal:
    parts = [t.strip() for t in text.split(",")]
    if not parts or any(not t for t in parts):
        raise ValueError(f"malformed prime {text!r}")
    return PrimeIdeal(Ideal([ring.parse(t) for t in parts], ring))


def point_prime(point: RationalPoint, ring: PolyRing) -> PrimeIdeal:
    """The maximal ideal of a rational point, as a PrimeIdeal locus."""
    return PrimeIdeal(point.ideal(ring))


# ---------------------------------------------------------------------------
# fibers and supports


def fiber_potential(F: MatrixFactorization, p: Locus):
    return p.value(F.potential)


def fiber_ranks(F: MatrixFactorization, p: Locus) -> Tuple[int, int]:
    """(rank phi1(p), rank phi0(p)) over the residue field."""
    return p.rank(F.phi1), p.rank(F.phi0)


def fiber_cohomology(F: MatrixFactorization, p: Locus) -> Tuple[int, int]:
    """Dimensions (h0, h1) of the cohomology of the fiber F ⊗ k(p).

    h0 = dim Ker(phi0)/Im(phi1), h1 = dim Ker(phi1)/Im(phi0); defined only
    when the potential vanishes at p.
    """
    if not p.is_zero(F.potential):
        raise NonzeroFiberPotential(f"potential {F.potential} does not vanish at {p.label()}")
    r1, r0 = fiber_ranks(F, p)
    return F.n0 - r0 - r1, F.n1 - r1 - r0


def in_support(F: MatrixFactorization, p: Locus) -> bool:
    if not p.is_zero(F.potential):
        return False
    h0, h1 = fiber_cohomology(F, p)
    return h0 + h1 > 0


def fiber_nonzero(F: MatrixFactorization, p: Locus) -> bool:
    """Whether the fiber has nonzero cohomology (False when the potential
    does not vanish at p, since then the fiber category is zero)."""
    if not p.is_zero(F.potential):
        return False
    return sum(fiber_cohomology(F, p)) > 0


# ---------------------------------------------------------------------------
# trimming


@dataclass
class LocalFactorization:
    """A factorization over the local ring at a locus.

    The structure maps are num1/den1 and num0/den0 where den1, den0 are
    units at the locus.  ``pivots`` records each elimination step as
    (matrix, row, column) in the indices current at that step.
    ``cancelled`` is the product of the exact divisors used during
    elimination (a unit at the locus); the defining relations are certified
    after multiplying through by it.
    """

    model: LGModel
    locus: object
    potential: Polynomial
    num1: Matrix
    den1: Polynomial
    num0: Matrix
    den0: Polynomial
    pivots: List[Tuple[str, int, int]] = field(default_factory=list)
    cancelled: Optional[Polynomial] = None

    @property
    def n1(self) -> int:
        return self.num1.ncols

    @property
    def n0(self) -> int:
        return self.num1.nrows

    @property
    def total_rank(self) -> int:
        return self.n0 + self.n1

    def check(self) -> bool:
        """c·(num0·num1 - V·den0·den1·Id) ≡ 0 and the same for num1·num0,
        modulo I, where c = ``cancelled``."""
        model = self.model
        c = self.cancelled if self.cancelled is not None else model.ring.one
        scale = self.potential * self.den0 * self.den1
        for prod, n in ((self.num0 @ self.num1, self.n1), (self.num1 @ self.num0, self.n0)):
            for i in range(n):
                for j in range(n):
                    want = scale if i == j else model.ring.zero
                    diff = model.reduce(prod[i, j] - want)
                    if diff and not model.is_zero(c * diff):
                        return False
        return True

    def entries_vanish(self) -> bool:
        return all(self.locus.is_zero(e) for m in (self.num1, self.num0) for r in m.rows for e in r)

    def as_factorization(self) -> MatrixFactorization:
        """Clear the (unit) denominators when they are nonzero constants."""
        if not (self.den1.is_constant() and self.den0.is_constant()):
            raise ValueError("denominators are not constants")
        c1, c0 = self.den1.constant_term(), self.den0.constant_term()
        return MatrixFactorization(self.model, self.potential,
                                   self.num1.scale(1 / c1), self.num0.scale(1 / c0))


def _exact_div(a: Polynomial, d: Polynomial) -> Polynomial:
    if d.is_constant():
        return a.scale(1 / d.constant_term())
    return divide_exact(a, d)


def _eliminate(num: Matrix, a: int, b: int, prev: Polynomial) -> Matrix:
    """One fraction-free (Bareiss) step: (u·M - c·r) / prev, exact in the
    polynomial ring."""
    u = num[a, b]
    rows = []
    for i in range(num.nrows):
        if i == a:
            continue
        row = []
        ci = num[i, b]
        for j in range(num.ncols):
            if j == b:
                continue
            e = num[i, j] * u
            if ci:
                e = e - ci * num[a, j]
            row.append(_exact_div(e, prev) if e else e)
        rows.append(row)
    return Matrix(num.ring, rows, num.ncols - 1)


def _first_unit(m: Matrix, p: Locus):
    for i, row in enumerate(m.rows):
        for j, e in enumerate(row):
            if e and not p.is_zero(e):
                return i, j
    return None


def trim_at_point(F: MatrixFactorization, p: Locus) -> LocalFactorization:
    """Split off contractible rank-(1,1) summands until every entry lies in
    the maximal ideal of p.

    Each step pivots on the first entry (phi1 row-major, then phi0) that is
    a unit at p and replaces the complementary block by its Schur
    complement; the other matrix loses the matching row and column.
    Elimination is fraction free in the ambient polynomial ring (each
    matrix is numerator/denominator, the denominator being its latest
    pivot), and numerators are reduced modulo I only at the end.
    """
    model = F.model
    ring = F.ring
    num1, num0 = F.phi1, F.phi0
    den1, den0 = ring.one, ring.one
    cancelled = ring.one
    pivots = []
    while True:
        hit = _first_unit(num1, p)
        if hit is not None:
            a, b = hit
            u = num1[a, b]
            num1 = _eliminate(num1, a, b, den1)
            num0 = num0.delete(b, a)
            cancelled = cancelled * den1
            den1 = u
            pivots.append(("phi1", a, b))
            continue
        hit = _first_unit(num0, p)
        if hit is not None:
            b, a = hit
            u = num0[b, a]
            num0 = _eliminate(num0, b, a, den0)
            num1 = num1.delete(a, b)
            cancelled = cancelled * den0
            den0 = u
            pivots.append(("phi0", b, a))
            continue
        break
    red = model.reduce
    return LocalFactorization(model, p, F.potential, model.reduce_matrix(num1), red(den1),
                              model.reduce_matrix(num0), red(den0), pivots, red(cancelled))


def trimmed_rank(F: MatrixFactorization, p: Locus) -> Tuple[int, int]:
    t = trim_at_point(F, p)
    return t.n1, t.n0


# ---------------------------------------------------------------------------
# homotopies


@dataclass(frozen=True)
class FiberAt:
    locus: object


@dataclass(frozen=True)
class RingLevel:
    degree_bound: int


@dataclass
class HomotopyResult:
    verdict: str
    h0: Optional[list] = None
    h1: Optional[list] = None

    def __bool__(self):
        return self.verdict == YES


def _homotopy_equations(f: MFMorphism):
    """Linear equations for (h0, h1) with

        f0 = phi1F·h0 + h1·phi0E   and   f1 = phi0F·h1 + h0·phi1E.

    Unknowns: h0 (F.n1 x E.n0) row-major, then h1 (F.n0 x E.n1).
    Returns (equations, nunknowns) where each equation is
    (list of (unknown, coefficient ring element), right-hand side).
    """
    E, F = f.source, f.target
    nh0 = F.n1 * E.n0
    h0 = lambda a, b: a * E.n0 + b  # noqa: E731
    h1 = lambda a, b: nh0 + a * E.n1 + b  # noqa: E731
    eqs = []
    for i in range(F.n0):
        for j in range(E.n0):
            terms = [(h0(k, j), F.phi1[i, k]) for k in range(F.n1)]
            terms += [(h1(i, k), E.phi0[k, j]) for k in range(E.n1)]
            eqs.append((terms, f.f0[i, j]))
    for i in range(F.n1):
        for j in range(E.n1):
            terms = [(h1(k, j), F.phi0[i, k]) for k in range(F.n0)]
            terms += [(h0(i, k), E.phi1[k, j]) for k in range(E.n0)]
            eqs.append((terms, f.f1[i, j]))
    return eqs, nh0 + F.n0 * E.n1


def _split_homotopy(f: MFMorphism, values):
    E, F = f.source, f.target
    nh0 = F.n1 * E.n0
    h0 = [[values[a * E.n0 + b] for b in range(E.n0)] for a in range(F.n1)]
    h1 = [[values[nh0 + a * E.n1 + b] for b in range(E.n1)] for a in range(F.n0)]
    return h0, h1


def _fiber_nullhomotopic(f: MFMorphism, p: Locus) -> HomotopyResult:
    eqs, nunk = _homotopy_equations(f)
    if not eqs:
        return HomotopyResult(YES, *_split_homotopy(f, [Fraction(0)] * nunk))
    if isinstance(p, RationalPoint):
        rows, rhs = [], []
        for terms, b in eqs:
            row = [Fraction(0)] * nunk
            for k, c in terms:
                row[k] += p.value(c)
            rows.append(row)
            rhs.append(p.value(b))
        sol = solve_rational(rows, rhs) if nunk else (None if any(rhs) else [])
        if sol is None:
            return HomotopyResult(NO)
        return HomotopyResult(YES, *_split_homotopy(f, sol))
    # prime locus: compare ranks of the system and the augmented system
    ring = f.source.ring
    rows = []
    for terms, b in eqs:
        row = [ring.zero] * nunk
        for k, c in terms:
            row[k] = row[k] + c
        rows.append(row + [b])
    plain = [r[:-1] for r in rows]
    r_plain = rank_over_domain(plain, p.gb.reduce) if nunk else 0
    r_aug = rank_over_domain(rows, p.gb.reduce)
    return HomotopyResult(YES if r_plain == r_aug else NO)


def standard_monomials(model: LGModel, degree: int) -> List[tuple]:
    """Monomials of total degree <= degree not divisible by any leading
    monomial of the relations' Gröbner basis (a basis of R in that range)."""
    n = model.ring.nvars
    leads = [] if model.relations.is_zero() else model.gb.leading_monomials()
    out = []
    for d in range(degree + 1):
        for combo in combinations_with_replacement(range(n), d):
            e = [0] * n
            for v in combo:
                e[v] += 1
            e = tuple(e)
            if not any(all(a <= b for a, b in zip(l, e)) for l in leads):
                out.append(e)
    return out


def _ring_nullhomotopic(f: MFMorphism, degree_bound: int) -> HomotopyResult:
    model = f.model
    ring = model.ring
    eqs, nunk = _homotopy_equations(f)
    monos = standard_monomials(model, degree_bound)
    columns = []  # one sparse column per (unknown, monomial)
    incidence = [[] for _ in range(nunk)]
    for e, (terms, _) in enumerate(eqs):
        for k, c in terms:
            if c:
                incidence[k].append((e, c))
    for k in range(nunk):
        for mono in monos:
            col = {}
            for e, c in incidence[k]:
                contrib = model.reduce(c.mul_term(mono, Fraction(1)))
                for m, v in contrib.terms.items():
                    col[(e, m)] = col.get((e, m), 0) + v
            columns.append(col)
    rhs = {}
    for e, (_, b) in enumerate(eqs):
        for m, v in model.reduce(b).terms.items():
            rhs[(e, m)] = v
    rows = {}
    for j, col in enumerate(columns):
        for key, v in col.items():
            rows.setdefault(key, {})[j] = Fraction(v)
    for key, v in rhs.items():
        rows.setdefault(key, {})[len(columns)] = Fraction(v)
    sol = solve_sparse([rows[k] for k in sorted(rows)], len(columns))
    if sol is None:
        return HomotopyResult(UNKNOWN)
    values = []
    for k in range(nunk):
        acc = ring.zero
        for t, mono in enumerate(monos):
            c = sol[k * len(monos) + t]
            if c:
                acc = acc + ring.monomial(mono, c)
        values.append(acc)
    return HomotopyResult(YES, *_split_homotopy(f, values))


def is_nullhomotopic(f: MFMorphism, locus) -> HomotopyResult:
    """Decide whether f is null-homotopic.

    FiberAt(p): exact yes/no over the residue field at p.
    RingLevel(d): yes (with a homotopy of entry degree <= d) or unknown;
    never answers no.
    """
    if isinstance(locus, FiberAt):
        return _fiber_nullhomotopic(f, locus.locus)
    if isinstance(locus, RingLevel):
        return _ring_nullhomotopic(f, locus.degree_bound)
    raise TypeError(f"unsupported locus {locus!r}")


def check_homotopy(f: MFMorphism, h0, h1) -> bool:
    """Re-substitute a ring-level homotopy (matrices of polynomials)."""
    E, F = f.source, f.target
    ring = F.ring
    H0 = Matrix.of(ring, h0, F.n1, E.n0) if not isinstance(h0, Matrix) else h0
    H1 = Matrix.of(ring, h1, F.n0, E.n1) if not isinstance(h1, Matrix) else h1
    a = f.model.reduce_matrix(F.phi1 @ H0 + H1 @ E.phi0 - f.f0)
    b = f.model.reduce_matrix(F.phi0 @ H1 + H0 @ E.phi1 - f.f1)
    return a.is_zero() and b.is_zero()


@dataclass
class H0Class:
    is_zero: bool
    cofactors: Optional[tuple]


def h0_class(f: MFMorphism) -> H0Class:
    """Whether the class of f0 in H0(F) = Ker(phi0)/Im(phi1) vanishes, for a
    morphism f from the unit object into a potential-zero F.

    Decided exactly by submodule membership of f0 in the column span of
    phi1 over R; cofactors are returned when it does.
    """
    E, F = f.source, f.target
    if E.n1 != 0 or E.n0 != 1:
        raise ValueError("source must be the unit object")
    if F.potential:
        raise ValueError("target must have potential zero")
    column = [f.f0[i, 0] for i in range(F.n0)]
    if not any(column):
        return H0Class(True, tuple(F.ring.zero for _ in range(F.n1)))
    cols = [[F.phi1[i, j] for i in range(F.n0)] for j in range(F.n1)]
    rel = None if f.model.relations.is_zero() else f.model.relations
    cof = module_membership(column, cols, rel)
    return H0Class(cof is not None, cof)
