"""Relative singular loci of the zero fiber X0 = {W = 0} inside X = Spec R.

A locus p of X0 lies in the locally relative singular locus exactly when
W_p ∈ m_p², i.e. when s·W ∈ P² + I for some s ∉ P.  This module decides
that condition, produces explicit witnesses r·W = Σ m_i·n_i, builds
factorizations whose support contains a given point, and cross-checks
against Jacobian and critical-point criteria.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

from .expr import Polynomial, format_rational
from .ideal import Ideal, groebner, ideal_dimension, ideal_quotient
from .localize import (Locus, PrimeIdeal, RationalPoint, in_support, point_prime)
from .matrix import Matrix
from .mfcore import (LGModel, MatrixFactorization, direct_sum_all, koszul,
                     mf_with_support_zero_potential, tensor, tensor_all)


class NotOnZeroFiber(ValueError):
    """The locus does not contain W, so it is not a point of X0."""


class NotInSingLoc(ValueError):
    pass


class WitnessAssemblyError(RuntimeError):
    """A certificate did not re-verify; indicates an internal bug."""


def as_prime(model: LGModel, p: Locus) -> PrimeIdeal:
    if isinstance(p, RationalPoint):
        p.check_on(model)
        return point_prime(p, model.ring)
    p.check_on(model)
    return p


def _setup(model: LGModel, p: Locus):
    P = as_prime(model, p)
    if not P.is_zero(model.potential):
        raise NotOnZeroFiber(f"W = {model.potential} is not in <{P.label()}>")
    return P


def _square_plus_relations(model: LGModel, P: PrimeIdeal):
    """Generators p_i·p_j (i <= j) followed by the generators of I, and the
    index pairs of the products."""
    pg = P.generators.nonzero_generators()
    gens, index = [], []
    for i in range(len(pg)):
        for j in range(i, len(pg)):
            gens.append(pg[i] * pg[j])
            index.append((i, j))
    gens += model.relations.nonzero_generators()
    return pg, gens, index


def quotient_ideal(model: LGModel, p: Locus) -> Ideal:
    """J = ((P² + I) : W) in the ambient polynomial ring."""
    P = _setup(model, p)
    _, gens, _ = _square_plus_relations(model, P)
    return ideal_quotient(Ideal(gens, model.ring), model.potential)


def _first_unit_multiplier(model: LGModel, P: PrimeIdeal) -> Optional[Polynomial]:
    if not model.potential:
        return model.ring.one
    J = quotient_ideal(model, P)
    for g in J.nonzero_generators():
        if not P.is_zero(g):
            return g
    return None


def in_singloc(model: LGModel, p: Locus) -> bool:
    """Whether W_p ∈ m_p², decided as ((P² + I) : W) ⊄ P."""
    P = _setup(model, p)
    return _first_unit_multiplier(model, P) is not None


def critical_point_check(model: LGModel, p: RationalPoint) -> bool:
    """W(p) = 0 and every partial derivative of W vanishes at p (smooth
    ambient space only)."""
    if not model.relations.is_zero():
        raise ValueError("critical-point check needs a model without relations")
    if not isinstance(p, RationalPoint):
        raise TypeError("critical-point check needs a rational point")
    p.check_on(model)
    W = model.potential
    if W.evaluate(p.coords):
        return False
    return all(not W.diff(v).evaluate(p.coords) for v in model.ring.names)


def jacobian_rank(model: LGModel, gens: Sequence[Polynomial], p: Locus) -> int:
    gens = [g for g in gens if g]
    if not gens:
        return 0
    ring = model.ring
    jac = Matrix(ring, [[g.diff(v) for v in ring.names] for g in gens], ring.nvars)
    return p.rank(jac)


@dataclass
class JacobianNumbers:
    emb_dim_X: int
    dim_X: Optional[int]
    emb_dim_X0: int
    dim_X0: Optional[int]

    @property
    def codim_X(self):
        return None if self.dim_X is None else self.emb_dim_X - self.dim_X

    @property
    def codim_X0(self):
        return None if self.dim_X0 is None else self.emb_dim_X0 - self.dim_X0

    @property
    def codim_excess(self) -> bool:
        return (self.codim_X is not None and self.codim_X0 is not None
                and self.codim_X0 > self.codim_X)

    @property
    def sing_X0(self) -> bool:
        return self.dim_X0 is not None and self.emb_dim_X0 > self.dim_X0

    def as_dict(self):
        return {"emb_dim_X": self.emb_dim_X, "dim_X": self.dim_X, "codim_X": self.codim_X,
                "emb_dim_X0": self.emb_dim_X0, "dim_X0": self.dim_X0,
                "codim_X0": self.codim_X0, "codim_excess": self.codim_excess,
                "sing_X0": self.sing_X0}


def jacobian_numbers(model: LGModel, p: Locus) -> JacobianNumbers:
    """Jacobian-rank data of X and X0 at p.

    emb_dim = n - rank Jac(p), dim = global Krull dimension (the variety is
    assumed equidimensional).  For a non-closed prime the rank is taken over
    its residue field, which still decides smoothness but is not a local
    embedding dimension.  Points of X off the zero fiber are accepted; the
    X0 numbers are then those of the Jacobian matrix alone.
    """
    P = as_prime(model, p)
    locus = p if isinstance(p, RationalPoint) else P
    n = model.ring.nvars
    rel = model.relations.nonzero_generators()
    rel0 = rel + [model.potential]
    dim_X = ideal_dimension(model.relations)
    dim_X0 = ideal_dimension(Ideal(rel0, model.ring))
    return JacobianNumbers(n - jacobian_rank(model, rel, locus), dim_X,
                           n - jacobian_rank(model, rel0, locus), dim_X0)


@dataclass
class WitnessDecomposition:
    """r·W ≡ Σ m_i·n_i mod I with r ∉ P and m_i, n_i ∈ P.

    ``a`` is 1/r(p) at a rational point (so 1 - a·r vanishes at p) and None
    at a non-closed prime.
    """

    r: Polynomial
    pairs: List[Tuple[Polynomial, Polynomial]]
    a: Optional[Polynomial] = None

    def verify(self, model: LGModel, p: Locus) -> bool:
        P = as_prime(model, p)
        total = self.r * model.potential
        for m, n in self.pairs:
            total = total - m * n
        if not model.is_zero(total):
            return False
        if P.is_zero(self.r):
            return False
        if not all(P.is_zero(m) and P.is_zero(n) for m, n in self.pairs):
            return False
        if self.a is not None and isinstance(p, RationalPoint):
            if (model.ring.one - self.a * self.r).evaluate(p.coords):
                return False
        return True

    def as_dict(self):
        return {"r": str(self.r),
                "a": None if self.a is None else str(self.a),
                "pairs": [[str(m), str(n)] for m, n in self.pairs]}


def witness_decomposition(model: LGModel, p: Locus) -> WitnessDecomposition:
    """Explicit r·W = Σ m_i·n_i from the membership certificate of s·W in
    P² + I, where s is the first generator of ((P² + I) : W) outside P."""
    P = _setup(model, p)
    s = _first_unit_multiplier(model, P)
    if s is None:
        raise NotInSingLoc(f"<{P.label()}> is not in the locally relative singular locus")
    ring = model.ring
    pg, gens, index = _square_plus_relations(model, P)
    pairs = []
    if model.potential:
        gb = groebner(Ideal(gens, ring), certificates=True)
        cof = gb.lift(s * model.potential)
        if cof is None:
            raise WitnessAssemblyError("s·W has no certificate over P² + I")
        for (i, j), c in zip(index, cof):
            if c:
                m = model.reduce(c * pg[i])
                n = model.reduce(pg[j])
                if m and n:
                    pairs.append((m, n))
    r = model.reduce(s)
    a = None
    if isinstance(p, RationalPoint):
        a = ring.constant(1 / r.evaluate(p.coords))
    w = WitnessDecomposition(r, pairs, a)
    if not w.verify(model, p):
        raise WitnessAssemblyError("witness decomposition failed re-verification")
    return w


def build_nonvanishing_mf(model: LGModel, p: RationalPoint,
                          witness: WitnessDecomposition = None) -> MatrixFactorization:
    """koszul(W, 1 - a·r) ⊗ ⊗_i koszul(a·m_i, n_i): potential W, and p lies
    in its support."""
    if not isinstance(p, RationalPoint):
        raise TypeError("build_nonvanishing_mf needs a rational point")
    w = witness if witness is not None else witness_decomposition(model, p)
    ring = model.ring
    factors = [koszul(model, model.potential, ring.one - w.a * w.r)]
    factors += [koszul(model, w.a * m, n) for m, n in w.pairs]
    return tensor_all(factors)


def realize_support(model: LGModel, components: Sequence[Tuple[Sequence, RationalPoint]]
                    ) -> MatrixFactorization:
    """⊕_j (⊗_i koszul(f_ij, 0)) ⊗ K(p_j).

    Each component is (f-list, base point) with the f's vanishing at the
    point and the point in the locally relative singular locus.
    """
    components = list(components)
    if not components:
        raise ValueError("need at least one component")
    parts = []
    for fs, pt in components:
        fs = [model.ring(f) for f in fs]
        if not fs:
            raise ValueError("each component needs a nonempty list of functions")
        for f in fs:
            if f.evaluate(pt.coords):
                raise ValueError(f"{f} does not vanish at {pt.label()}")
        parts.append(tensor(mf_with_support_zero_potential(model, fs),
                            build_nonvanishing_mf(model, pt)))
    return direct_sum_all(parts)


@dataclass
class SingLocReport:
    locus: object
    in_singloc: bool
    in_sing_X0: Optional[bool]
    in_crit: Optional[bool] = None
    jacobian: Optional[JacobianNumbers] = None
    witness: Optional[WitnessDecomposition] = None

    @property
    def chain_holds(self) -> bool:
        return not self.in_singloc or self.in_sing_X0 is not False

    def as_dict(self):
        loc = self.locus
        out = {"locus": {"kind": loc.kind,
                         "value": ([format_rational(c) for c in loc.coords]
                                   if isinstance(loc, RationalPoint)
                                   else [str(g) for g in loc.generators.nonzero_generators()])},
               "in_singloc": self.in_singloc, "in_sing_X0": self.in_sing_X0,
               "in_crit": self.in_crit, "chain_holds": self.chain_holds}
        if self.jacobian is not None:
            out["jacobian"] = self.jacobian.as_dict()
        if self.witness is not None:
            out["witness"] = self.witness.as_dict()
        return out


def singloc_report(model: LGModel, p: Locus, witness: bool = False) -> SingLocReport:
    flag = in_singloc(model, p)
    jac = jacobian_numbers(model, p)
    crit = None
    if model.relations.is_zero() and isinstance(p, RationalPoint):
        crit = critical_point_check(model, p)
    wit = witness_decomposition(model, p) if (witness and flag) else None
    return SingLocReport(p, flag, jac.sing_X0, crit, jac, wit)


def sample_singloc(model: LGModel, loci: Sequence[Locus], witness: bool = False
                   ) -> List[SingLocReport]:
    return [singloc_report(model, p, witness) for p in loci]
