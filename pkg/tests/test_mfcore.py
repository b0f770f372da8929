import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from lgmf.localize import in_support, parse_point, trim_at_point
from lgmf.matrix import Matrix
from lgmf.mfcore import (FactorizationError, LGModel, MFComplex, MorphismError,
                         PotentialMismatch, compose, cone, direct_sum, dual,
                         dual_dual_isomorphism, half_tensor, identity, koszul, make_morphism,
                         mf_new, mf_with_support_zero_potential, multiplication_morphism,
                         rescale, scale, sheaf_hom, shift, tensor, tensor_morphism, tensor_power,
                         totalize, unit_object, zero_morphism, zero_object)
from lgmf.tensorgeom import random_factorization
from lgmf.verify import cone_model, cone_points, cone_pool

GRID2 = [parse_point(f"{a},{b}") for a in range(-1, 3) for b in range(-1, 3)]


@pytest.fixture
def line():
    return LGModel.parse(["x"], [], "x^2")


def supported(F, pts):
    return [in_support(F, p) for p in pts]


def contractible_everywhere(F, pts):
    return all(trim_at_point(F, p).total_rank == 0 for p in pts
               if p.is_zero(F.potential))


class TestConstructor:
    def test_valid_rank_one(self, line):
        F = mf_new(line, "x^2", [["x"]], [["x"]])
        assert F.ranks == (1, 1)

    def test_invalid_reports_entry(self, line):
        M = LGModel.parse(["x", "y"], [], "x^2")
        with pytest.raises(FactorizationError) as info:
            mf_new(M, "x^2", [["x"]], [["y"]])
        assert (info.value.row, info.value.col) == (0, 0)
        assert str(info.value.value) == str(M.ring.parse("x*y - x^2"))

    def test_unit_object(self, plane):
        U = unit_object(plane)
        assert U.ranks == (0, 1) and U.potential.is_zero()
        assert U == mf_new(plane, "0", [], [], n1=0, n0=1)

    def test_entries_reduced_modulo_relations(self, cone_lg):
        F = koszul(cone_lg, "x*y", "1")
        assert F.phi1[0, 0] == cone_lg.ring.parse("z*w")


class TestDirectSumShift:
    def test_zero_summand(self, plane):
        E = koszul(plane, "x", "y")
        assert direct_sum(E, zero_object(plane, E.potential)) == E

    def test_ranks_add(self, plane):
        E = koszul(plane, "x", "y")
        assert direct_sum(E, E).ranks == (2, 2)

    def test_potential_mismatch(self, plane):
        with pytest.raises(PotentialMismatch):
            direct_sum(koszul(plane, "x", "y"), koszul(plane, "x", "x"))

    def test_shift_twice(self, plane):
        E = koszul(plane, "x+1", "y^2")
        assert shift(shift(E)) == E

    def test_shift_signs(self, line):
        F = shift(mf_new(line, "x^2", [["x"]], [["x"]]))
        assert F.phi1[0, 0] == line.ring.parse("-x") == F.phi0[0, 0]

    def test_shift_zero(self, plane):
        Z = zero_object(plane)
        assert shift(Z) == Z


class TestTensor:
    def test_unit_action_preserves_support(self, plane):
        E = koszul(plane, "x", "y")
        T = tensor(E, unit_object(plane))
        assert T.ranks == (1, 1)
        assert supported(T, GRID2) == supported(E, GRID2)

    def test_potentials_add(self, plane):
        T = tensor(koszul(plane, "x", "y"), koszul(plane, "y", "x"))
        assert T.ranks == (2, 2)
        assert T.potential == plane.ring.parse("2*x*y")

    def test_block_layout(self, plane):
        T = tensor(koszul(plane, "x", "y"), koszul(plane, "x-1", "y+1"))
        # rows: E0⊗F0 then E1⊗F1; columns: E1⊗F0 then E0⊗F1
        r = plane.ring
        assert T.phi1.tolist() == [[r.parse("x"), r.parse("x-1")],
                                   [r.parse("-y-1"), r.parse("y")]]


class TestHomDual:
    def test_dual_of_koszul(self, plane):
        D = dual(koszul(plane, "x", "y"))
        assert D.ranks == (1, 1)
        assert D.potential == plane.ring.parse("-x*y")

    def test_dual_twice_is_sign_conjugate(self, plane):
        F = koszul(plane, "x", "y")
        DD = dual(dual(F))
        assert DD.phi1 == -F.phi1 and DD.phi0 == -F.phi0
        iso = dual_dual_isomorphism(F)
        assert iso.target == DD

    def test_hom_from_unit(self, plane):
        F = koszul(plane, "x", "y^2")
        H = sheaf_hom(unit_object(plane), F)
        assert H.ranks == F.ranks and H.potential == F.potential
        assert supported(H, GRID2) == supported(F, GRID2)


class TestKoszul:
    def test_potential(self, plane):
        assert koszul(plane, "x", "y").potential == plane.ring.parse("x*y")

    def test_unit_entry_is_contractible(self, cone_lg):
        F = koszul(cone_lg, 1, "w")
        assert contractible_everywhere(F, cone_points(12))

    def test_zero_zero(self, plane):
        F = koszul(plane, 0, 0)
        assert F.potential.is_zero()
        assert all(supported(F, GRID2))


class TestTotalizeCone:
    def test_one_term(self, plane):
        F = koszul(plane, "x", "y")
        assert totalize(MFComplex([F], [])) == F

    def test_identity_complex_is_contractible(self, cone_lg):
        F = tensor(koszul(cone_lg, "w", "1-z"), koszul(cone_lg, "x", "y"))
        T = totalize(MFComplex([F, F], [identity(F)]))
        assert contractible_everywhere(T, cone_points(10))

    def test_two_term_shape(self, plane):
        E, F = koszul(plane, "x", "y"), koszul(plane, "x*y", "1")
        f = make_morphism(E, F, [["1"]], [["y"]])
        T = totalize(MFComplex([E, F], [f]))
        assert T.ranks == (E.n0 + F.n1, E.n1 + F.n0)

    def test_three_term_complex(self, plane):
        E = koszul(plane, "x", "y")
        Z = zero_object(plane, E.potential)
        C = MFComplex([E, Z, E], [zero_morphism(E, Z), zero_morphism(Z, E)])
        assert totalize(C).ranks == (2, 2)

    def test_bad_complex(self, plane):
        E = koszul(plane, "x", "y")
        with pytest.raises(MorphismError):
            MFComplex([E, E, E], [identity(E), identity(E)])

    def test_cone_of_identity(self, cone_lg):
        F = tensor(koszul(cone_lg, "w", "1-z"), koszul(cone_lg, "x", "y"))
        assert contractible_everywhere(cone(identity(F)), cone_points(10))

    def test_cone_of_zero(self, plane):
        E, F = koszul(plane, "x", "y"), koszul(plane, "y", "x")
        assert cone(zero_morphism(E, F)) == direct_sum(F, shift(E))

    def test_cone_of_multiplication_map(self, cone_lg):
        K = koszul(cone_lg, "w", "1-z")
        C = cone(multiplication_morphism(K, "y"))
        assert C.ranks == (2, 2)
        C.validate()


class TestScale:
    def test_scale_one(self, plane):
        F = koszul(plane, "x", "y")
        assert scale(1, F) == F

    def test_half_tensor_potential(self, plane):
        F = koszul(plane, "x", "y")
        assert half_tensor(F, F).potential == F.potential

    def test_support_invariant(self, cone_lg):
        K = tensor(koszul(cone_lg, "w", "1-z"), koszul(cone_lg, "x", "y"))
        pts = cone_points(15)
        for lam in (1, -1, Fraction(1, 2), 3):
            assert supported(scale(lam, K), pts) == supported(K, pts)
            assert rescale(lam, K).potential == K.potential

    def test_zero_factor(self, plane):
        with pytest.raises(ValueError):
            scale(0, koszul(plane, "x", "y"))


class TestMorphisms:
    def test_compose_identity(self, plane):
        E = koszul(plane, "x", "y")
        f = multiplication_morphism(E, "x+y")
        assert compose(f, identity(E)) == f

    def test_tensor_of_identities(self, plane):
        E, F = koszul(plane, "x", "y"), koszul(plane, "y", "x^2")
        assert tensor_morphism(identity(E), identity(F)) == identity(tensor(E, F))

    def test_square_of_nilpotent_multiplication(self):
        M = LGModel.parse(["x"], ["x^2"], "0")
        Z = koszul(M, 0, 0)
        f = make_morphism(Z, Z, [["x"]], [["x"]])
        sq = tensor_power(f, 2)
        assert sq.is_zero()

    def test_invalid_morphism(self, plane):
        E = koszul(plane, "x", "y")
        with pytest.raises(MorphismError):
            make_morphism(E, E, [["1"]], [["0"]])


class TestZeroPotentialSupport:
    def test_single_function(self, plane):
        F = mf_with_support_zero_potential(plane, [plane.ring.var("x")])
        assert F == koszul(plane, "x", 0)
        assert supported(F, GRID2) == [p.coords[0] == 0 for p in GRID2]

    def test_two_functions(self, plane):
        F = mf_with_support_zero_potential(plane, ["x", "y"])
        assert in_support(F, parse_point("0,0"))
        assert not in_support(F, parse_point("1,0"))

    def test_unit_function(self, plane):
        F = mf_with_support_zero_potential(plane, [1])
        assert not any(supported(F, GRID2))

    def test_empty_list(self, plane):
        with pytest.raises(ValueError):
            mf_with_support_zero_potential(plane, [])


# ---------------------------------------------------------------------------
# properties over the randomized corpus

MODEL = cone_model()
POOL = cone_pool(MODEL)
POINTS = cone_points(12)
seeds = st.integers(0, 10 ** 6)


def corpus_object(seed, depth=2):
    rng = random.Random(seed)
    return random_factorization(MODEL, rng, POOL, depth=rng.randint(0, depth))


class TestCorpusProperties:
    @settings(max_examples=30)
    @given(seeds, seeds)
    def test_invariant_after_every_operation(self, a, b):
        E, F = corpus_object(a), corpus_object(b, 1)
        G = koszul(MODEL, E.potential, 1)
        for out in (shift(E), dual(E), tensor(E, F), sheaf_hom(E, F), direct_sum(E, G),
                    scale(3, E), cone(zero_morphism(E, G)), half_tensor(E, G),
                    cone(multiplication_morphism(E, "x"))):
            out.validate()

    @settings(max_examples=30)
    @given(seeds, seeds)
    def test_potential_bookkeeping(self, a, b):
        E, F = corpus_object(a), corpus_object(b, 1)
        r = MODEL.reduce
        assert tensor(E, F).potential == r(E.potential + F.potential)
        assert dual(F).potential == r(-F.potential)
        assert sheaf_hom(E, F).potential == r(F.potential - E.potential)
        assert scale(Fraction(2, 3), F).potential == r(F.potential.scale(Fraction(2, 3)))

    @settings(max_examples=30)
    @given(seeds, seeds)
    def test_shift_and_cone_identities(self, a, b):
        E = corpus_object(a)
        G = corpus_object(b, 1)
        G = koszul(MODEL, E.potential, 1) if G.potential != E.potential else G
        assert shift(shift(E)) == E
        assert cone(zero_morphism(G, E)) == direct_sum(E, shift(G))
        iso = dual_dual_isomorphism(E)
        assert iso.target.phi1 == -E.phi1 and iso.target.phi0 == -E.phi0

    @settings(max_examples=20)
    @given(seeds, seeds, seeds)
    def test_hom_tensor_adjunction_shadow(self, a, b, c):
        E, F, G = corpus_object(a, 1), corpus_object(b, 0), corpus_object(c, 1)
        lhs = sheaf_hom(G, tensor(E, F))
        rhs = tensor(sheaf_hom(G, E), F)
        assert lhs.ranks == rhs.ranks
        assert lhs.potential == rhs.potential

    @settings(max_examples=20)
    @given(seeds, seeds)
    def test_support_laws(self, a, b):
        E, F = corpus_object(a, 1), corpus_object(b, 1)
        T = tensor(E, F)
        for p in POINTS:
            if p.is_zero(E.potential) and p.is_zero(F.potential):
                assert in_support(T, p) == (in_support(E, p) and in_support(F, p))
            if p.is_zero(E.potential):
                assert in_support(shift(E), p) == in_support(E, p)
                assert in_support(direct_sum(E, shift(E)), p) == in_support(E, p)
