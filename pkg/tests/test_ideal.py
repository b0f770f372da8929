import random
from itertools import product

import pytest
import sympy
from hypothesis import given, settings, strategies as st

from lgmf.expr import DEGREVLEX, LEX, PolyRing
from lgmf.ideal import (BudgetExhausted, Ideal, groebner, ideal_dimension, ideal_quotient,
                        is_groebner, module_membership, normal_form, radical_membership,
                        record_bases, same_ideal)

from conftest import polynomials
from test_expr import to_sympy

R4 = PolyRing(["x", "y", "z", "w"])
R2 = PolyRing(["x", "y"])


def ideal(ring, *texts):
    return Ideal.parse(list(texts), ring)


def monic_sympy(basis):
    out = set()
    for g in basis:
        e = to_sympy(g)
        lc = sympy.Poly(e, *sympy.symbols(g.ring.names)).LC(order="grevlex")
        out.add(sympy.expand(e / lc))
    return out


class TestGroebnerExamples:
    def test_principal_ideal_is_its_own_basis(self):
        gb = groebner(ideal(R4, "x*y - z*w"))
        assert [str(g) for g in gb] == [str(R4.parse("x*y - z*w"))]

    def test_duplicate_generators(self):
        assert list(groebner(ideal(R2, "x", "x"))) == [R2.var("x")]

    @pytest.mark.parametrize("n", [2, 3, 4])
    def test_square_of_maximal_ideal(self, n):
        gb = groebner(ideal(R2, "x^2", "x*y", "y^2", f"x^{n}"))
        assert set(gb) == {R2.parse("x^2"), R2.parse("x*y"), R2.parse("y^2")}

    def test_unit_ideal(self):
        assert groebner(ideal(R2, "x", "x - 1")).is_unit()

    def test_budget(self):
        with pytest.raises(BudgetExhausted):
            groebner(ideal(R4, "x^2*y - z", "x*y^2 - w", "x*y*z - 1"), budget=3)


class TestNormalForm:
    def test_single_division_step_lex(self):
        gb = groebner(ideal(R4, "x*y - z*w"), LEX)
        nf = normal_form(R4.parse("x*y"), gb)
        assert nf.remainder == R4.parse("z*w")
        assert nf.quotients == (R4.one,)

    def test_generator_reduces_to_zero(self):
        gb = groebner(ideal(R2, "x^2 - y", "x*y"))
        for g in gb.generators:
            assert normal_form(g, gb).remainder.is_zero()

    def test_irreducible_remainder(self):
        gb = groebner(ideal(R2, "x^2", "x*y", "y^2"))
        assert normal_form(R2.var("y"), gb).remainder == R2.var("y")


class TestQuotient:
    def test_colon_by_x(self):
        assert same_ideal(ideal_quotient(ideal(R2, "x^2"), R2.var("x")), ideal(R2, "x"))

    def test_colon_by_one(self):
        I = ideal(R4, "x*y - z*w", "x^2")
        assert same_ideal(ideal_quotient(I, R4.one), I)

    def test_cone_colon_contains_element_outside_prime(self):
        P = ideal(R4, "x", "y", "z - 1", "w")
        I = P.square().with_generators([R4.parse("x*y - z*w")])
        Q = ideal_quotient(I, R4.var("w"))
        gbQ = groebner(Q)
        assert gbQ.contains(R4.var("z"))
        assert groebner(I).contains(R4.parse("z*w"))
        gbP = groebner(P)
        assert any(not gbP.contains(q) for q in Q.nonzero_generators())

    def test_zero_divisor_rejected(self):
        with pytest.raises(ValueError):
            ideal_quotient(ideal(R2, "x"), R2.zero)


class TestRadical:
    def test_x_in_radical(self):
        assert radical_membership(R2.var("x"), ideal(R2, "x^2"))

    def test_y_not_in_radical(self):
        assert not radical_membership(R2.var("y"), ideal(R2, "x^2"))

    def test_zero_in_every_radical(self):
        assert radical_membership(R2.zero, ideal(R2, "x^2 + y"))


class TestDimension:
    def test_hypersurface(self):
        assert ideal_dimension(ideal(R4, "x*y - z*w")) == 3

    def test_unit_ideal_is_empty(self):
        assert ideal_dimension(ideal(R2, "1")) is None

    def test_point(self):
        assert ideal_dimension(ideal(R2, "x", "y")) == 0

    def test_zero_ideal(self):
        assert ideal_dimension(Ideal([], R2)) == 2


class TestModuleMembership:
    def test_column_combination(self):
        cols = [[R2.var("x"), R2.zero], [R2.zero, R2.var("y")]]
        cof = module_membership([R2.parse("x^2"), R2.parse("x*y")], cols)
        assert cof is not None
        assert cof[0] * R2.var("x") == R2.parse("x^2")

    def test_non_member(self):
        cols = [[R2.var("x"), R2.var("y")]]
        assert module_membership([R2.one, R2.zero], cols) is None

    def test_relations_count(self):
        cols = [[R2.var("x")]]
        assert module_membership([R2.var("y")], cols, ideal(R2, "y - x^2")) is not None


small = polynomials(R2, max_terms=3, max_exp=2)


class TestProperties:
    @settings(max_examples=40)
    @given(st.lists(small, min_size=1, max_size=3))
    def test_basis_matches_sympy_oracle(self, gens):
        gens = [g for g in gens if g]
        if not gens:
            return
        gb = groebner(Ideal(gens, R2))
        oracle = sympy.groebner([to_sympy(g) for g in gens], *sympy.symbols("x y"),
                                order="grevlex")
        assert monic_sympy(gb) == monic_sympy_list(oracle.exprs)

    @settings(max_examples=40)
    @given(st.lists(small, min_size=1, max_size=3))
    def test_certificates_and_buchberger_criterion(self, gens):
        with record_bases() as seen:
            gb = groebner(Ideal(gens, R2))
            groebner(Ideal(gens, R2), LEX)
        assert len(seen) == 2
        assert all(b.check_certificates() for b in seen)
        assert all(is_groebner(b) for b in seen)
        for g in gens:
            assert gb.contains(g)

    @settings(max_examples=40)
    @given(st.lists(small, min_size=1, max_size=2), small, small, small)
    def test_membership_closed_under_sum_and_multiple(self, gens, a, b, h):
        I = Ideal(gens, R2)
        gb = groebner(I)
        f = sum((c * g for c, g in zip([a, b], gens)), R2.zero)
        g = gens[0] * h
        assert normal_form(f + g, gb).remainder.is_zero()
        assert normal_form(h * f, gb).remainder.is_zero()
        cof = gb.lift(f + g)
        assert sum((c * q for c, q in zip(cof, gb.generators)), R2.zero) == f + g

    @settings(max_examples=25)
    @given(st.lists(small, min_size=1, max_size=2), small)
    def test_quotient_sound_and_degree_complete(self, gens, f):
        if not f:
            return
        I = Ideal(gens, R2)
        gbI = groebner(I)
        Q = ideal_quotient(I, f)
        for q in Q.nonzero_generators():
            assert gbI.contains(q * f)
        gbQ = groebner(Q)
        # brute force: every monomial m of degree <= 2 with m*f in I lies in (I:f)
        for e in product(range(3), repeat=2):
            if sum(e) <= 2:
                m = R2.monomial(e)
                if gbI.contains(m * f):
                    assert gbQ.contains(m)

    @settings(max_examples=30)
    @given(st.lists(small, min_size=1, max_size=2), small)
    def test_radical_contains_ideal(self, gens, h):
        I = Ideal(gens, R2)
        f = gens[0] * h
        assert groebner(I).contains(f)
        assert radical_membership(f, I)


def monic_sympy_list(exprs):
    out = set()
    x, y = sympy.symbols("x y")
    for e in exprs:
        lc = sympy.Poly(e, x, y).LC(order="grevlex")
        out.add(sympy.expand(e / lc))
    return out


def test_random_ideals_budget_not_hit():
    rng = random.Random(3)
    for _ in range(20):
        gens = [R2.monomial((rng.randint(0, 3), rng.randint(0, 3)), rng.randint(-3, 3))
                + R2.constant(rng.randint(-2, 2)) for _ in range(2)]
        gb = groebner(Ideal(gens, R2))
        assert is_groebner(gb)
