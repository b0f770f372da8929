"""Matrix factorizations of an affine Landau-Ginzburg model R = Q[x]/I, W ∈ R.

A factorization is a pair of matrices over R

    phi1 : R^n1 -> R^n0        (an n0 x n1 matrix)
    phi0 : R^n0 -> R^n1        (an n1 x n0 matrix)

with phi0·phi1 = V·Id and phi1·phi0 = V·Id modulo I.  Entries are always
kept as normal forms modulo a Gröbner basis of I, so equality is literal.

Index conventions for tensor products: Kronecker products with the left
factor's index varying slowest.  For sheaf-Hom the component Hom(A, B) of
homomorphisms between free modules of ranks a, b is flattened row-major
from the b x a matrix, so the target index varies slowest.
"""

from __future__ import annotations

from typing import List, Optional, Sequence

from .expr import DEGREVLEX, PolyRing, Polynomial, as_rational
from .ideal import GroebnerBasis, Ideal, groebner, ideal_quotient, same_ideal
from .matrix import Matrix, block, diagonal_blocks, kron


class FactorizationError(ValueError):
    """A pair of matrices violates phi0·phi1 = V·Id (or phi1·phi0)."""

    def __init__(self, message, product=None, row=None, col=None, value=None):
        self.product = product
        self.row = row
        self.col = col
        self.value = value
        super().__init__(message)


class ModelMismatch(ValueError):
    pass


class PotentialMismatch(ValueError):
    pass


class MorphismError(ValueError):
    """A pair (f1, f0) does not commute with the structure maps."""


class LGModel:
    """An affine LG model: ring variables, relations I and potential W.

    W is stored as its normal form modulo I.
    """

    def __init__(self, ring: PolyRing, relations=(), potential=0):
        if not isinstance(ring, PolyRing):
            ring = PolyRing(ring)
        self.ring = ring
        if isinstance(relations, Ideal):
            rel = relations
        else:
            rel = Ideal([ring(r) for r in relations], ring)
        self.relations = rel
        self.gb: GroebnerBasis = groebner(rel, DEGREVLEX)
        self.potential = self.reduce(ring(potential))

    @classmethod
    def parse(cls, variables: Sequence[str], relations: Sequence[str], potential: str):
        ring = PolyRing(variables)
        return cls(ring, [ring.parse(r) for r in relations], ring.parse(potential))

    def __repr__(self):
        rel = ", ".join(str(g) for g in self.relations.nonzero_generators())
        return f"LGModel(Q[{','.join(self.ring.names)}]/<{rel}>, W={self.potential})"

    @property
    def is_smooth_ambient(self) -> bool:
        return self.relations.is_zero()

    def reduce(self, f: Polynomial) -> Polynomial:
        if not f:
            return f
        return self.gb.reduce(f) if not self.relations.is_zero() else f

    def reduce_matrix(self, m: Matrix) -> Matrix:
        if self.relations.is_zero():
            return m
        return m.map(self.reduce)

    def is_zero(self, f: Polynomial) -> bool:
        return self.reduce(f).is_zero()

    def same_ring(self, other: "LGModel") -> bool:
        return self is other or (self.ring == other.ring
                                 and self.gb.elements == other.gb.elements)

    def __eq__(self, other):
        return (isinstance(other, LGModel) and self.same_ring(other)
                and self.potential == other.potential)

    def __hash__(self):
        return hash((self.ring, self.gb.elements, self.potential))

    def with_potential(self, W) -> "LGModel":
        return LGModel(self.ring, self.relations, self.ring(W))

    def potential_is_nonzerodivisor(self) -> bool:
        """Whether (I : W) = I, i.e. W is a non-zero-divisor of R."""
        if not self.potential:
            return False
        return same_ideal(ideal_quotient(self.relations, self.potential), self.relations)

    def matrix(self, rows, nrows=None, ncols=None) -> Matrix:
        return Matrix.of(self.ring, rows, nrows, ncols)


def _check_same_model(a, b):
    if not a.same_ring(b):
        raise ModelMismatch("objects live over different rings")


class MatrixFactorization:
    """A validated matrix factorization of potential ``potential``."""

    __slots__ = ("model", "potential", "phi1", "phi0", "n1", "n0")

    def __init__(self, model: LGModel, potential, phi1: Matrix, phi0: Matrix,
                 validate: bool = True):
        ring = model.ring
        V = model.reduce(ring(potential))
        n0, n1 = phi1.shape
        if phi0.shape != (n1, n0):
            raise FactorizationError(
                f"phi0 has shape {phi0.shape}, expected {(n1, n0)} for phi1 of shape {phi1.shape}")
        self.model = model
        self.potential = V
        self.phi1 = model.reduce_matrix(phi1)
        self.phi0 = model.reduce_matrix(phi0)
        self.n1 = n1
        self.n0 = n0
        if validate:
            self.validate()

    @property
    def ring(self) -> PolyRing:
        return self.model.ring

    @property
    def ranks(self):
        return (self.n1, self.n0)

    def validate(self):
        for name, prod, n in (("phi0*phi1", self.phi0 @ self.phi1, self.n1),
                              ("phi1*phi0", self.phi1 @ self.phi0, self.n0)):
            for i in range(n):
                for j in range(n):
                    diff = prod[i, j] - self.potential if i == j else prod[i, j]
                    if diff:
                        diff = self.model.reduce(diff)
                    if diff:
                        raise FactorizationError(
                            f"{name} - V*Id is nonzero at entry ({i}, {j}): {diff}",
                            product=name, row=i, col=j, value=diff)
        return self

    def __eq__(self, other):
        return (isinstance(other, MatrixFactorization)
                and self.model.same_ring(other.model)
                and self.potential == other.potential
                and self.phi1 == other.phi1 and self.phi0 == other.phi0)

    def __hash__(self):
        return hash((self.potential, self.phi1, self.phi0))

    def __repr__(self):
        return (f"MatrixFactorization(ranks=({self.n1},{self.n0}), V={self.potential}, "
                f"phi1={self.phi1.tolist()}, phi0={self.phi0.tolist()})")

    def is_zero_object(self) -> bool:
        return self.n1 == 0 and self.n0 == 0


def mf_new(model: LGModel, V, phi1, phi0, n1: int = None, n0: int = None) -> MatrixFactorization:
    """Build and validate a factorization from nested lists (or Matrices).

    ``n1``/``n0`` are needed only when a matrix has no rows.
    """
    ring = model.ring
    if not isinstance(phi1, Matrix):
        rows = list(phi1)
        if n0 is None:
            n0 = len(rows)
        if n1 is None:
            n1 = len(rows[0]) if rows else (len(phi0) if phi0 is not None else 0)
        phi1 = Matrix.of(ring, rows, n0, n1)
    if not isinstance(phi0, Matrix):
        rows = list(phi0)
        phi0 = Matrix.of(ring, rows, phi1.ncols, phi1.nrows)
    return MatrixFactorization(model, ring(V), phi1, phi0)


def zero_object(model: LGModel, V=0) -> MatrixFactorization:
    ring = model.ring
    return MatrixFactorization(model, ring(V), Matrix.zeros(ring, 0, 0), Matrix.zeros(ring, 0, 0))


def unit_object(model: LGModel) -> MatrixFactorization:
    """The potential-zero object (0 -> R -> 0)."""
    ring = model.ring
    return MatrixFactorization(model, ring.zero, Matrix.zeros(ring, 1, 0), Matrix.zeros(ring, 0, 1))


def koszul(model: LGModel, f, g) -> MatrixFactorization:
    """(R --f--> R --g--> R), potential f·g."""
    ring = model.ring
    f, g = ring(f), ring(g)
    return MatrixFactorization(model, f * g, Matrix(ring, [[f]]), Matrix(ring, [[g]]))


def _same_potential(E, F):
    _check_same_model(E.model, F.model)
    if E.potential != F.potential:
        raise PotentialMismatch(f"potentials differ: {E.potential} vs {F.potential}")


def direct_sum(E: MatrixFactorization, F: MatrixFactorization) -> MatrixFactorization:
    _same_potential(E, F)
    ring = E.ring
    return MatrixFactorization(E.model, E.potential,
                               diagonal_blocks([E.phi1, F.phi1], ring),
                               diagonal_blocks([E.phi0, F.phi0], ring), validate=False)


def direct_sum_all(objects: Sequence[MatrixFactorization]) -> MatrixFactorization:
    objects = list(objects)
    out = objects[0]
    for o in objects[1:]:
        out = direct_sum(out, o)
    return out


def shift(F: MatrixFactorization) -> MatrixFactorization:
    """T(F) = (F0 --(-phi0)--> F1 --(-phi1)--> F0)."""
    return MatrixFactorization(F.model, F.potential, -F.phi0, -F.phi1, validate=False)


def tensor(E: MatrixFactorization, F: MatrixFactorization) -> MatrixFactorization:
    """E ⊗ F over potential V + W.

    (E⊗F)_1 = E1⊗F0 ⊕ E0⊗F1 and (E⊗F)_0 = E0⊗F0 ⊕ E1⊗F1, with

        phi1 = [[phi1E⊗1,  1⊗phi1F], [-1⊗phi0F, phi0E⊗1]]
        phi0 = [[phi0E⊗1, -1⊗phi1F], [ 1⊗phi0F, phi1E⊗1]]
    """
    _check_same_model(E.model, F.model)
    ring = E.ring
    e1, e0, f1, f0 = E.n1, E.n0, F.n1, F.n0
    I = lambda n: Matrix.identity(ring, n)  # noqa: E731
    phi1 = block([[kron(E.phi1, I(f0)), kron(I(e0), F.phi1)],
                  [-kron(I(e1), F.phi0), kron(E.phi0, I(f1))]],
                 [e0 * f0, e1 * f1], [e1 * f0, e0 * f1], ring)
    phi0 = block([[kron(E.phi0, I(f0)), -kron(I(e1), F.phi1)],
                  [kron(I(e0), F.phi0), kron(E.phi1, I(f1))]],
                 [e1 * f0, e0 * f1], [e0 * f0, e1 * f1], ring)
    return MatrixFactorization(E.model, E.potential + F.potential, phi1, phi0)


def tensor_all(objects: Sequence[MatrixFactorization]) -> MatrixFactorization:
    objects = list(objects)
    out = objects[0]
    for o in objects[1:]:
        out = tensor(out, o)
    return out


def _post(A: Matrix, n: int) -> Matrix:
    # g |-> A∘g on row-major flattened homomorphisms with n source columns
    return kron(A, Matrix.identity(A.ring, n))


def _pre(B: Matrix, m: int) -> Matrix:
    # g |-> g∘B, g having m rows
    return kron(Matrix.identity(B.ring, m), B.transpose())


def sheaf_hom(E: MatrixFactorization, F: MatrixFactorization) -> MatrixFactorization:
    """Hom(E, F) over potential W - V.

    Hom_1 = Hom(E1,F0) ⊕ Hom(E0,F1), Hom_0 = Hom(E0,F0) ⊕ Hom(E1,F1), with

        phi1 = [[(-)∘phi0E, phi1F∘(-)], [phi0F∘(-),  (-)∘phi1E]]
        phi0 = [[-(-)∘phi1E, phi1F∘(-)], [phi0F∘(-), -(-)∘phi0E]]
    """
    _check_same_model(E.model, F.model)
    ring = E.ring
    e1, e0, f1, f0 = E.n1, E.n0, F.n1, F.n0
    phi1 = block([[_pre(E.phi0, f0), _post(F.phi1, e0)],
                  [_post(F.phi0, e1), _pre(E.phi1, f1)]],
                 [f0 * e0, f1 * e1], [f0 * e1, f1 * e0], ring)
    phi0 = block([[-_pre(E.phi1, f0), _post(F.phi1, e1)],
                  [_post(F.phi0, e0), -_pre(E.phi0, f1)]],
                 [f0 * e1, f1 * e0], [f0 * e0, f1 * e1], ring)
    return MatrixFactorization(E.model, F.potential - E.potential, phi1, phi0)


def dual(F: MatrixFactorization) -> MatrixFactorization:
    """Hom(F, R): (phi0ᵀ, -phi1ᵀ), potential -W."""
    return sheaf_hom(F, unit_object(F.model))


def scale(lam, F: MatrixFactorization) -> MatrixFactorization:
    """The twist λ(F) = (phi1, λ·phi0) of potential λW; λ must be nonzero."""
    lam = as_rational(lam)
    if not lam:
        raise ValueError("scaling factor must be nonzero")
    return MatrixFactorization(F.model, F.potential.scale(lam), F.phi1, F.phi0.scale(lam),
                               validate=False)


def half_tensor(E: MatrixFactorization, F: MatrixFactorization) -> MatrixFactorization:
    """E ⊗^{1/2} F = ½(E ⊗ F), back in the common potential W."""
    _same_potential(E, F)
    return scale(as_rational("1/2"), tensor(E, F))


def mf_with_support_zero_potential(model: LGModel, fs: Sequence) -> MatrixFactorization:
    """⊗_i (R --f_i--> R --0--> R), potential 0, supported on the common zeros of fs."""
    fs = list(fs)
    if not fs:
        raise ValueError("need at least one function")
    return tensor_all([koszul(model, f, 0) for f in fs])


def is_nonzerodivisor(model: LGModel) -> bool:
    return model.potential_is_nonzerodivisor()


# ---------------------------------------------------------------------------
# morphisms


class MFMorphism:
    """A pair (f1, f0) commuting with the structure maps, modulo I."""

    __slots__ = ("source", "target", "f1", "f0")

    def __init__(self, source: MatrixFactorization, target: MatrixFactorization,
                 f1: Matrix, f0: Matrix, validate: bool = True):
        _same_potential(source, target)
        if f1.shape != (target.n1, source.n1) or f0.shape != (target.n0, source.n0):
            raise MorphismError(
                f"shapes {f1.shape}, {f0.shape} do not match "
                f"{(target.n1, source.n1)}, {(target.n0, source.n0)}")
        model = source.model
        self.source = source
        self.target = target
        self.f1 = model.reduce_matrix(f1)
        self.f0 = model.reduce_matrix(f0)
        if validate:
            self.validate()

    def validate(self):
        model = self.source.model
        s, t = self.source, self.target
        a = model.reduce_matrix(self.f0 @ s.phi1 - t.phi1 @ self.f1)
        if not a.is_zero():
            raise MorphismError("f0·phi1(source) != phi1(target)·f1")
        b = model.reduce_matrix(self.f1 @ s.phi0 - t.phi0 @ self.f0)
        if not b.is_zero():
            raise MorphismError("f1·phi0(source) != phi0(target)·f0")
        return self

    @property
    def model(self):
        return self.source.model

    def is_zero(self) -> bool:
        return self.f1.is_zero() and self.f0.is_zero()

    def __eq__(self, other):
        return (isinstance(other, MFMorphism) and self.source == other.source
                and self.target == other.target and self.f1 == other.f1 and self.f0 == other.f0)

    def __hash__(self):
        return hash((self.f1, self.f0))

    def __repr__(self):
        return f"MFMorphism(f1={self.f1.tolist()}, f0={self.f0.tolist()})"

    def __add__(self, other: "MFMorphism") -> "MFMorphism":
        return MFMorphism(self.source, self.target, self.f1 + other.f1, self.f0 + other.f0,
                          validate=False)

    def scale(self, c) -> "MFMorphism":
        return MFMorphism(self.source, self.target, self.f1.scale(c), self.f0.scale(c),
                          validate=False)


def make_morphism(source, target, f1, f0) -> MFMorphism:
    ring = source.ring
    if not isinstance(f1, Matrix):
        f1 = Matrix.of(ring, f1, target.n1, source.n1)
    if not isinstance(f0, Matrix):
        f0 = Matrix.of(ring, f0, target.n0, source.n0)
    return MFMorphism(source, target, f1, f0)


def identity(F: MatrixFactorization) -> MFMorphism:
    ring = F.ring
    return MFMorphism(F, F, Matrix.identity(ring, F.n1), Matrix.identity(ring, F.n0),
                      validate=False)


def zero_morphism(E: MatrixFactorization, F: MatrixFactorization) -> MFMorphism:
    ring = E.ring
    return MFMorphism(E, F, Matrix.zeros(ring, F.n1, E.n1), Matrix.zeros(ring, F.n0, E.n0),
                      validate=False)


def compose(g: MFMorphism, f: MFMorphism) -> MFMorphism:
    """g ∘ f."""
    if f.target != g.source:
        raise MorphismError("morphisms are not composable")
    return MFMorphism(f.source, g.target, g.f1 @ f.f1, g.f0 @ f.f0, validate=False)


def shift_morphism(f: MFMorphism) -> MFMorphism:
    return MFMorphism(shift(f.source), shift(f.target), f.f0, f.f1, validate=False)


def tensor_morphism(f: MFMorphism, g: MFMorphism) -> MFMorphism:
    """f ⊗ g : E⊗F -> E'⊗F', block diagonal in the tensor decomposition."""
    ring = f.source.ring
    src = tensor(f.source, g.source)
    tgt = tensor(f.target, g.target)
    m1 = diagonal_blocks([kron(f.f1, g.f0), kron(f.f0, g.f1)], ring)
    m0 = diagonal_blocks([kron(f.f0, g.f0), kron(f.f1, g.f1)], ring)
    return MFMorphism(src, tgt, m1, m0)


def tensor_power(f: MFMorphism, n: int) -> MFMorphism:
    if n < 1:
        raise ValueError("tensor power must be positive")
    out = f
    for _ in range(n - 1):
        out = tensor_morphism(out, f)
    return out


# ---------------------------------------------------------------------------
# complexes, totalization, cones


class MFComplex:
    """Bounded complex F^start -> F^(start+1) -> ... of factorizations."""

    def __init__(self, entries: Sequence[MatrixFactorization],
                 differentials: Sequence[MFMorphism], start: int = 0):
        entries = list(entries)
        differentials = list(differentials)
        if not entries:
            raise ValueError("empty complex")
        if len(differentials) != len(entries) - 1:
            raise ValueError("need one differential between each pair of consecutive entries")
        for k, d in enumerate(differentials):
            if d.source != entries[k] or d.target != entries[k + 1]:
                raise MorphismError(f"differential {k} does not connect entries {k} and {k + 1}")
        for k in range(len(differentials) - 1):
            c = compose(differentials[k + 1], differentials[k])
            if not (entries[0].model.reduce_matrix(c.f1).is_zero()
                    and entries[0].model.reduce_matrix(c.f0).is_zero()):
                raise MorphismError(f"differentials {k} and {k + 1} do not compose to zero")
        self.entries = entries
        self.differentials = differentials
        self.start = start

    def degree(self, k: int) -> int:
        return self.start + k


def totalize(C: MFComplex) -> MatrixFactorization:
    """Totalization with T_l = ⊕_{i+j=-l} F^i_{j mod 2} and
    t_l = δ + (-1)^i φ on each summand.  Summands are ordered by
    decreasing degree i."""
    ring = C.entries[0].ring
    model = C.entries[0].model
    order = list(range(len(C.entries)))[::-1]

    def comp(k, l):
        return (-l - C.degree(k)) % 2

    def rank(k, c):
        F = C.entries[k]
        return F.n1 if c == 1 else F.n0

    def t(l):
        src = [(k, comp(k, l)) for k in order]
        tgt = [(k, comp(k, 1 - l)) for k in order]
        grid = [[None] * len(src) for _ in tgt]
        for si, (k, c) in enumerate(src):
            F = C.entries[k]
            sign = -1 if C.degree(k) % 2 else 1
            phi = F.phi1 if c == 1 else F.phi0
            ti = tgt.index((k, (c - 1) % 2))
            grid[ti][si] = phi if sign > 0 else -phi
            if k + 1 < len(C.entries):
                d = C.differentials[k]
                ti = tgt.index((k + 1, c))
                grid[ti][si] = d.f1 if c == 1 else d.f0
        return block(grid, [rank(k, c) for k, c in tgt], [rank(k, c) for k, c in src], ring)

    return MatrixFactorization(model, C.entries[0].potential, t(1), t(0))


def cone(f: MFMorphism) -> MatrixFactorization:
    """Cone(f) = Tot(E --f--> F) with F in degree 0:
    Cone_1 = F1 ⊕ E0, Cone_0 = F0 ⊕ E1,
    phi1 = [[phi1F, f0], [0, -phi0E]], phi0 = [[phi0F, f1], [0, -phi1E]]."""
    return totalize(MFComplex([f.source, f.target], [f], start=-1))


def dual_dual_isomorphism(F: MatrixFactorization) -> MFMorphism:
    """The isomorphism F -> dual(dual(F)) = (-phi1, -phi0), given by
    (-id on F1, id on F0)."""
    ring = F.ring
    return MFMorphism(F, dual(dual(F)), -Matrix.identity(ring, F.n1),
                      Matrix.identity(ring, F.n0))


def rescale(lam, F: MatrixFactorization) -> MatrixFactorization:
    """(λ·phi1, phi0/λ): isomorphic to F via (id, λ·id), same potential."""
    lam = as_rational(lam)
    if not lam:
        raise ValueError("scaling factor must be nonzero")
    return MatrixFactorization(F.model, F.potential, F.phi1.scale(lam), F.phi0.scale(1 / lam),
                               validate=False)


def multiplication_morphism(F: MatrixFactorization, c) -> MFMorphism:
    """Multiplication by the ring element c, an endomorphism of F."""
    ring = F.ring
    c = ring(c)
    return MFMorphism(F, F, Matrix.identity(ring, F.n1, c), Matrix.identity(ring, F.n0, c),
                      validate=False)
