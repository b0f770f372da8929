"""Sampling harnesses for supports, tensor submodules and support-data
axioms, plus tensor-nilpotence search for morphisms.

Everything here evaluates supports pointwise at finitely many sampled loci;
the verdicts are exact at those loci and say nothing elsewhere.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence

from .expr import Polynomial
from .linalg import nullspace_sparse
from .localize import (FiberAt, RationalPoint, RingLevel, YES, in_support,
                       is_nullhomotopic, standard_monomials)
from .matrix import Matrix
from .mfcore import (LGModel, MatrixFactorization, MFMorphism, cone, direct_sum,
                     half_tensor, koszul, multiplication_morphism, rescale, scale,
                     shift, tensor, tensor_power, zero_morphism, zero_object)
from .singloc import build_nonvanishing_mf, in_singloc

LAMBDAS = (Fraction(1), Fraction(-1), Fraction(1, 2), Fraction(3))


def _point_label(p) -> str:
    return p.label()


# ---------------------------------------------------------------------------
# tensor submodule expressions


@dataclass
class ModuleExpression:
    """Construction tree of an object of the thick tensor submodule
    generated by ``generators``.

    kind is one of: "generator" (payload = index), "shift",
    "direct_sum", "cone_of_zero" (cone of the zero map from the first child
    to the second), "tensor_by" (payload = potential-zero factorization)
    and "scale" (payload = λ; the isomorphic copy (λ·phi1, phi0/λ)).
    """

    kind: str
    children: List["ModuleExpression"] = field(default_factory=list)
    payload: object = None

    def evaluate(self, generators: Sequence[MatrixFactorization]) -> MatrixFactorization:
        k = self.kind
        if k == "generator":
            return generators[self.payload]
        vals = [c.evaluate(generators) for c in self.children]
        if k == "shift":
            return shift(vals[0])
        if k == "direct_sum":
            return direct_sum(vals[0], vals[1])
        if k == "cone_of_zero":
            return cone(zero_morphism(vals[0], vals[1]))
        if k == "tensor_by":
            return tensor(self.payload, vals[0])
        if k == "scale":
            return rescale(self.payload, vals[0])
        raise ValueError(f"unknown node kind {k!r}")

    def describe(self) -> str:
        if self.kind == "generator":
            return f"G{self.payload}"
        inner = ", ".join(c.describe() for c in self.children)
        if self.kind == "tensor_by":
            return f"tensor_by({inner})"
        if self.kind == "scale":
            return f"scale[{self.payload}]({inner})"
        return f"{self.kind}({inner})"


def default_tensor_pool(model: LGModel) -> List[MatrixFactorization]:
    """Potential-zero factorizations koszul(v - c, 0) for every variable v
    and c in {0, 1, 2}, plus koszul(0, 0) (full support)."""
    ring = model.ring
    pool = [koszul(model, ring.zero, ring.zero)]
    for v in ring.names:
        for c in (0, 1, 2):
            pool.append(koszul(model, ring.var(v) - c, ring.zero))
    return pool


def random_expression(ngenerators: int, rng: random.Random, depth: int,
                      pool: Sequence[MatrixFactorization]) -> ModuleExpression:
    if depth <= 0:
        return ModuleExpression("generator", [], rng.randrange(ngenerators))
    kind = rng.choice(["shift", "direct_sum", "cone_of_zero", "tensor_by", "scale"])
    first = random_expression(ngenerators, rng, depth - 1, pool)
    if kind in ("direct_sum", "cone_of_zero"):
        second = random_expression(ngenerators, rng, rng.randrange(depth), pool)
        return ModuleExpression(kind, [first, second])
    if kind == "tensor_by":
        return ModuleExpression(kind, [first], rng.choice(list(pool)))
    if kind == "scale":
        return ModuleExpression(kind, [first], rng.choice(LAMBDAS))
    return ModuleExpression(kind, [first])


def sample_submodule_expression(generators: Sequence[MatrixFactorization], seed: int,
                                depth: int, pool: Sequence[MatrixFactorization] = None):
    """Evaluate a random construction tree of the given depth.

    Returns (object, expression).
    """
    generators = list(generators)
    if not generators:
        raise ValueError("need at least one generator")
    W = generators[0].potential
    if any(g.potential != W for g in generators):
        raise ValueError("generators must share one potential")
    if pool is None:
        pool = default_tensor_pool(generators[0].model)
    rng = random.Random(seed)
    expr = random_expression(len(generators), rng, depth, pool)
    return expr.evaluate(generators), expr


@dataclass
class ContainmentReport:
    passed: bool
    checked: int
    witness: Optional[object] = None

    def as_dict(self):
        return {"passed": self.passed, "checked": self.checked,
                "witness": None if self.witness is None else _point_label(self.witness)}


def check_support_containment(obj: MatrixFactorization, generators: Sequence[MatrixFactorization],
                              points: Sequence) -> ContainmentReport:
    """in_support(obj, p) implies p in the support of some generator, at
    every sampled p."""
    for p in points:
        if in_support(obj, p) and not any(in_support(g, p) for g in generators):
            return ContainmentReport(False, len(points), p)
    return ContainmentReport(True, len(points))


# ---------------------------------------------------------------------------
# morphisms from a degree-bounded ansatz


def morphism_space(A: MatrixFactorization, B: MatrixFactorization, degree: int = 1
                   ) -> List[MFMorphism]:
    """A basis of the morphisms A -> B whose entries are combinations of
    standard monomials of degree <= ``degree``."""
    model = A.model
    ring = model.ring
    monos = standard_monomials(model, degree)
    n_f1 = B.n1 * A.n1
    n_f0 = B.n0 * A.n0
    f1 = lambda a, b: a * A.n1 + b  # noqa: E731
    f0 = lambda a, b: n_f1 + a * A.n0 + b  # noqa: E731
    eqs = []
    for i in range(B.n0):
        for j in range(A.n1):
            terms = [(f0(i, k), A.phi1[k, j]) for k in range(A.n0)]
            terms += [(f1(k, j), -B.phi1[i, k]) for k in range(B.n1)]
            eqs.append(terms)
    for i in range(B.n1):
        for j in range(A.n0):
            terms = [(f1(i, k), A.phi0[k, j]) for k in range(A.n1)]
            terms += [(f0(k, j), -B.phi0[i, k]) for k in range(B.n0)]
            eqs.append(terms)
    nunk = n_f1 + n_f0
    incidence = [[] for _ in range(nunk)]
    for e, terms in enumerate(eqs):
        for k, c in terms:
            if c:
                incidence[k].append((e, c))
    columns = []
    for k in range(nunk):
        for mono in monos:
            col = {}
            for e, c in incidence[k]:
                for m, v in model.reduce(c.mul_term(mono, Fraction(1))).terms.items():
                    col[(e, m)] = col.get((e, m), 0) + v
            columns.append(col)
    rows = {}
    for j, col in enumerate(columns):
        for key, v in col.items():
            rows.setdefault(key, {})[j] = Fraction(v)
    basis = nullspace_sparse([rows[k] for k in sorted(rows)], len(columns))
    out = []
    for vec in basis:
        entries = []
        for k in range(nunk):
            acc = ring.zero
            for t, mono in enumerate(monos):
                c = vec[k * len(monos) + t]
                if c:
                    acc = acc + ring.monomial(mono, c)
            entries.append(acc)
        m1 = Matrix(ring, [[entries[f1(a, b)] for b in range(A.n1)] for a in range(B.n1)], A.n1)
        m0 = Matrix(ring, [[entries[f0(a, b)] for b in range(A.n0)] for a in range(B.n0)], A.n0)
        out.append(MFMorphism(A, B, m1, m0))
    return out


def random_morphism(A: MatrixFactorization, B: MatrixFactorization, rng: random.Random,
                    degree: int = 1) -> MFMorphism:
    """A random small-integer combination of the degree-bounded morphism
    basis; the zero morphism when that space is zero."""
    basis = morphism_space(A, B, degree)
    out = zero_morphism(A, B)
    for m in basis:
        c = rng.randint(-2, 2)
        if c:
            out = out + m.scale(c)
    out.validate()
    return out


# ---------------------------------------------------------------------------
# support-data axioms


@dataclass
class AxiomReport:
    """Per-axiom failures; each failure is (point, description)."""

    failures: Dict[str, List[tuple]]
    covered: Dict[str, bool] = field(default_factory=dict)
    checks: Dict[str, int] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return not any(self.failures.values())

    def axiom_passed(self, name: str) -> bool:
        return not self.failures.get(name)

    def as_dict(self):
        return {"passed": self.passed,
                "axioms": {k: {"passed": not v, "checks": self.checks.get(k, 0),
                               "failures": [[_point_label(p), d] for p, d in v]}
                           for k, v in sorted(self.failures.items())},
                "covered": dict(sorted(self.covered.items()))}


def _supp(obj, points):
    return tuple(in_support(obj, p) for p in points)


def check_support_data_axioms(objects: Sequence[MatrixFactorization], points: Sequence[RationalPoint],
                              seed: int = 1, morphism_degree: int = 1,
                              lambdas: Sequence = LAMBDAS) -> AxiomReport:
    """Evaluate the five support-data axioms for Supp with the half tensor
    product, pointwise at ``points``.

    (1) Supp(0) is empty and every sampled point of the locally relative
        singular locus is covered (by an object built for that point);
        points outside it are covered by nothing.
    (2) Supp(A ⊕ B) = Supp(A) ∪ Supp(B).
    (3) Supp(A[1]) = Supp(A).
    (4) each vertex of A -> B -> Cone(f) -> A[1] is supported inside the
        union of the other two, for random ansatz morphisms f and f = 0.
    (5) Supp(A ⊗½ B) = Supp(A) ∩ Supp(B).
    Also records λ-invariance of supports under the twist λ(-).
    """
    objects = list(objects)
    rng = random.Random(seed)
    model = objects[0].model
    W = objects[0].potential
    fails = {k: [] for k in ("1", "2", "3", "4", "5", "lambda")}
    checks = {k: 0 for k in fails}
    supp = [_supp(o, points) for o in objects]

    zero = zero_object(model, W)
    for p in points:
        checks["1"] += 1
        if in_support(zero, p):
            fails["1"].append((p, "zero object supported"))
    covered = {}
    for idx, p in enumerate(points):
        checks["1"] += 1
        rel = in_singloc(model, p)
        hit = any(s[idx] for s in supp)
        if rel and not hit:
            hit = in_support(build_nonvanishing_mf(model, p), p)
        covered[p.label()] = hit
        if rel != hit:
            fails["1"].append((p, "covered" if hit else "not covered"))

    for i, A in enumerate(objects):
        sA = supp[i]
        s_shift = _supp(shift(A), points)
        for idx, p in enumerate(points):
            checks["3"] += 1
            if s_shift[idx] != sA[idx]:
                fails["3"].append((p, f"shift of object {i}"))
        for lam in lambdas:
            s_lam = _supp(scale(lam, A), points)
            for idx, p in enumerate(points):
                checks["lambda"] += 1
                if s_lam[idx] != sA[idx]:
                    fails["lambda"].append((p, f"twist {lam} of object {i}"))
        for j, B in enumerate(objects):
            if j < i:
                continue
            sB = supp[j]
            s_sum = _supp(direct_sum(A, B), points)
            s_half = _supp(half_tensor(A, B), points)
            for idx, p in enumerate(points):
                checks["2"] += 1
                checks["5"] += 1
                if s_sum[idx] != (sA[idx] or sB[idx]):
                    fails["2"].append((p, f"objects {i}, {j}"))
                if s_half[idx] != (sA[idx] and sB[idx]):
                    fails["5"].append((p, f"objects {i}, {j}"))
            maps = [zero_morphism(A, B), random_morphism(A, B, rng, morphism_degree)]
            for f in maps:
                sC = _supp(cone(f), points)
                for idx, p in enumerate(points):
                    checks["4"] += 1
                    a, b, c = sA[idx], sB[idx], sC[idx]
                    if (a and not (b or c)) or (b and not (a or c)) or (c and not (a or b)):
                        fails["4"].append((p, f"cone of a map {i} -> {j}"))
    return AxiomReport(fails, covered, checks)


# ---------------------------------------------------------------------------
# nilpotence and generator probes


class FiberPreconditionError(ValueError):
    def __init__(self, point):
        self.point = point
        super().__init__(f"morphism is not zero on the fiber at {point.label()}")


@dataclass
class NilpotenceResult:
    n: Optional[int]
    h0: Optional[list] = None
    h1: Optional[list] = None

    @property
    def found(self) -> bool:
        return self.n is not None


def nilpotence_search(f: MFMorphism, probes: Sequence, max_n: int = 8,
                      degree_bound: int = 4, max_unknowns: int = 4000) -> NilpotenceResult:
    """Smallest n <= max_n for which f^{⊗n} is null-homotopic with a
    homotopy of degree <= degree_bound, or n = None (unknown).

    Requires f to vanish on the fiber at every probe point.  Tensor powers
    grow exponentially in rank; once the homotopy system would exceed
    ``max_unknowns`` unknowns the search stops with an unknown verdict.
    """
    for p in probes:
        if not is_nullhomotopic(f, FiberAt(p)):
            raise FiberPreconditionError(p)
    nmonos = len(standard_monomials(f.model, degree_bound))
    for n in range(1, max_n + 1):
        g = tensor_power(f, n)
        E, F = g.source, g.target
        if (F.n1 * E.n0 + F.n0 * E.n1) * nmonos > max_unknowns:
            break
        res = is_nullhomotopic(g, RingLevel(degree_bound))
        if res.verdict == YES:
            return NilpotenceResult(n, res.h0, res.h1)
    return NilpotenceResult(None)


@dataclass
class GeneratorProbe:
    supported: Dict[str, bool]
    singloc: Dict[str, bool]
    flagged: List[str]

    @property
    def refuted(self) -> bool:
        """True when some probe certifies that G is not a tensor generator."""
        return bool(self.flagged)

    def as_dict(self):
        return {"supported": dict(sorted(self.supported.items())),
                "in_singloc": dict(sorted(self.singloc.items())),
                "flagged": list(self.flagged), "not_a_generator": self.refuted}


def generator_probe(model: LGModel, G: MatrixFactorization, probes: Sequence) -> GeneratorProbe:
    """Flag probe points in the locally relative singular locus that lie
    outside Supp(G); each flag certifies that G does not generate.  Probes
    off the zero fiber of W lie outside the locus and are never flagged."""
    supported, rel, flagged = {}, {}, []
    for p in probes:
        s = in_support(G, p)
        r = p.is_zero(model.potential) and in_singloc(model, p)
        supported[p.label()] = s
        rel[p.label()] = r
        if r and not s:
            flagged.append(p.label())
    return GeneratorProbe(supported, rel, flagged)


# ---------------------------------------------------------------------------
# random corpora


def random_factorization(model: LGModel, rng: random.Random, pool: Sequence[Polynomial],
                         depth: int = 2) -> MatrixFactorization:
    """A random object assembled from koszul factors with entries drawn
    from ``pool`` by tensor, shift, direct sum and cones of
    multiplication maps."""
    if depth <= 0:
        return koszul(model, rng.choice(pool), rng.choice(pool))
    kind = rng.choice(["koszul", "tensor", "shift", "sum", "cone"])
    if kind == "koszul":
        return random_factorization(model, rng, pool, 0)
    A = random_factorization(model, rng, pool, depth - 1)
    if kind == "tensor":
        return tensor(A, random_factorization(model, rng, pool, 0))
    if kind == "shift":
        return shift(A)
    if kind == "sum":
        B = rng.choice([A, shift(A)])
        return direct_sum(A, B)
    return cone(multiplication_morphism(A, rng.choice(pool)))
