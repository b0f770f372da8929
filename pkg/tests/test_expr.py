from fractions import Fraction

import pytest
import sympy
from hypothesis import given

from lgmf.expr import (LEX, ParseError, PolyRing, UnknownVariableError, arith, evaluate,
                       parse_poly, partial_derivative, render)

from conftest import RING3, points, polynomials

R4 = PolyRing(["x", "y", "z", "w"])
X = PolyRing(["x"])


def to_sympy(f):
    syms = sympy.symbols(f.ring.names)
    return sympy.expand(sum(sympy.Rational(c.numerator, c.denominator)
                            * sympy.prod([s ** e for s, e in zip(syms, m)])
                            for m, c in f.terms.items()))


class TestParse:
    def test_cone_equation_has_two_terms(self):
        f = parse_poly("x*y - z*w", ["x", "y", "z", "w"])
        assert f.terms == {(1, 1, 0, 0): 1, (0, 0, 1, 1): -1}

    def test_zero_has_empty_term_map(self):
        assert parse_poly("0", ["x"]).terms == {}

    def test_expansion_cancels_to_one(self):
        f = parse_poly("(x+1)^2 - x^2 - 2*x", ["x"])
        assert f == X.one
        assert to_sympy(f) == sympy.expand(sympy.sympify("(x+1)**2 - x**2 - 2*x"))

    def test_rational_literals(self):
        assert parse_poly("3/4*x", X) == X.var("x").scale(Fraction(3, 4))

    @pytest.mark.parametrize("text,pos", [("x +* y", 3), ("x^y", 2), ("(x", 2), ("x $ 1", 2),
                                          ("1/0", 2)])
    def test_syntax_errors_carry_position(self, text, pos):
        with pytest.raises(ParseError) as info:
            parse_poly(text, ["x", "y"])
        assert info.value.position == pos

    def test_unknown_variable(self):
        with pytest.raises(UnknownVariableError):
            parse_poly("x + q", ["x"])


class TestArith:
    def test_additive_inverse(self):
        xy = R4.parse("x*y")
        assert arith("add", xy, -xy).is_zero()

    def test_difference_of_squares(self):
        x, y = R4.var("x"), R4.var("y")
        assert arith("mul", x + y, x - y) == R4.parse("x^2 - y^2")

    def test_scalar_half(self):
        assert arith("scalar_mul", Fraction(1, 2), R4.parse("2*x")) == R4.var("x")

    def test_pow(self):
        assert arith("pow", R4.parse("x+1"), 3) == R4.parse("x^3 + 3*x^2 + 3*x + 1")

    def test_unknown_op(self):
        with pytest.raises(ValueError):
            arith("div", R4.one, R4.one)


class TestEvaluate:
    def test_point_on_cone(self):
        assert evaluate(R4.parse("x*y - z*w"), [1, 1, 1, 1]) == 0

    def test_w_vanishes_on_zero_fiber_point(self):
        assert evaluate(R4.var("w"), [0, 0, 1, 0]) == 0

    def test_rational_point(self):
        assert evaluate(X.parse("x^2"), [Fraction(1, 2)]) == Fraction(1, 4)


class TestDerivative:
    def test_cone_equation(self):
        assert partial_derivative(R4.parse("x*y - z*w"), "x") == R4.var("y")

    def test_constant(self):
        assert partial_derivative(X.constant(7), "x").is_zero()

    def test_square(self):
        assert partial_derivative(X.parse("x^2"), "x") == X.parse("2*x")


class TestProperties:
    @given(polynomials(), polynomials(), polynomials())
    def test_ring_axioms(self, f, g, h):
        assert (f + g) * h == f * h + g * h
        assert f * g == g * f
        assert f * RING3.one == f
        assert (f * g) * h == f * (g * h)

    @given(polynomials(), polynomials())
    def test_products_match_sympy(self, f, g):
        assert to_sympy(f * g) == sympy.expand(to_sympy(f) * to_sympy(g))

    @given(polynomials(), polynomials(), points())
    def test_evaluation_is_a_homomorphism(self, f, g, p):
        assert evaluate(f * g, p) == evaluate(f, p) * evaluate(g, p)
        assert evaluate(f + g, p) == evaluate(f, p) + evaluate(g, p)

    @given(polynomials())
    def test_render_parse_round_trip(self, f):
        assert parse_poly(render(f), RING3) == f
        assert parse_poly(render(f, LEX), RING3) == f
        assert render(parse_poly(render(f), RING3)) == render(f)

    @given(polynomials(), polynomials())
    def test_leibniz_rule(self, f, g):
        for v in RING3.names:
            assert (f * g).diff(v) == f * g.diff(v) + g * f.diff(v)

    @given(polynomials())
    def test_derivative_matches_sympy(self, f):
        sym = sympy.Symbol("y")
        assert to_sympy(f.diff("y")) == sympy.expand(sympy.diff(to_sympy(f), sym))

    @given(polynomials())
    def test_equal_polynomials_hash_equal(self, f):
        g = parse_poly(render(f), RING3)
        assert hash(f) == hash(g)
