import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from eulerint.laurent import (IntegrandSpec, LaurentPoly, OutsideDomainError,
                              ParseError, format_poly, omega_components,
                              parse_poly, poly_from_json, poly_to_json)


# -- construction and arithmetic -------------------------------------------

def test_zero_and_constant():
    z = LaurentPoly.zero(2)
    assert z.is_zero()
    c = LaurentPoly.constant(2, 5)
    assert c.terms == {(0, 0): 5}
    assert (z + c).terms == c.terms


def test_monomial_negative_exponents():
    m = LaurentPoly.monomial((-1, 2), 3)
    assert m.has_negative_exponents()
    assert m.is_monomial()


def test_addition_cancels_exactly():
    p = parse_poly("x + y")
    q = parse_poly("-x + y")
    assert (p + q).terms == {(0, 1): 2}


def test_product_known():
    # (x - 1)(x - 2) = x^2 - 3x + 2
    p = parse_poly("x - 1") * parse_poly("x - 2")
    assert p == parse_poly("x^2 - 3*x + 2")


def test_partial_derivative():
    p = parse_poly("x^2*y + 3*y^2")
    assert p.partial(1) == parse_poly("2*x*y")
    assert p.partial(2) == parse_poly("x^2 + 6*y")


def test_partial_of_negative_exponent():
    p = LaurentPoly.monomial((-2,), 1)
    assert p.partial(1) == LaurentPoly.monomial((-3,), -2)


def test_evaluate_rational_exact_scalar():
    p = parse_poly("1/2*x^2 - 1/3")
    v = p.evaluate([2.0])
    assert abs(v - (2 - Fraction(1, 3))) < 1e-12


def test_total_degree_and_support():
    p = parse_poly("x^3*y - x*y^2")
    assert p.total_degree() == 4
    assert set(p.support()) == {(3, 1), (1, 2)}


# -- parser ----------------------------------------------------------------

def test_parse_fraction_coefficient():
    p = parse_poly("1/3*x*y + x^2*y^2")
    assert p.terms[(1, 1)] == Fraction(1, 3)


def test_parse_complex_coefficient():
    p = parse_poly("(1+2j)*x")
    assert p.terms[(1,)] == complex(1, 2)


def test_parse_negative_exponent():
    p = parse_poly("x^-2 + 1")
    assert (-2,) in p.terms


def test_parse_x1_x2_aliases():
    assert parse_poly("x1*x2") == parse_poly("x*y")


def test_parse_error_position():
    with pytest.raises(ParseError):
        parse_poly("x + $")


def test_parse_empty_rejected():
    with pytest.raises(ParseError):
        parse_poly("")


def test_format_round_trip_hexagon(hexagon_poly):
    assert parse_poly(format_poly(hexagon_poly)) == hexagon_poly


# -- integrand spec --------------------------------------------------------

def test_spec_validation_rejects_monomials():
    with pytest.raises(ValueError):
        IntegrandSpec([parse_poly("x")], (1,), (1,))
    with pytest.raises(ValueError):
        IntegrandSpec([LaurentPoly.zero(1)], (1,), (1,))


def test_spec_length_checks():
    f = [parse_poly("x - 1")]
    with pytest.raises(ValueError):
        IntegrandSpec(f, (1, 2), (1,))
    with pytest.raises(ValueError):
        IntegrandSpec(f, (1,), (1, 2))


def test_omega_simple_pole_structure():
    # [DERIVED] f = x-1, s=1, nu=1: omega = 1/(x-1) + 1/x; at x=3: 1/2+1/3
    spec = IntegrandSpec([parse_poly("x - 1")], (1,), (1,))
    w = omega_components(spec, [3.0])
    assert abs(w[0] - (Fraction(1, 2) + Fraction(1, 3))) < 1e-12


def test_omega_example_value(two_point_spec):
    # [DERIVED] s=(1/2,1/2), nu=1/2 at x=3: (1/2)(1/2) + (1/2)(1) + (1/2)/3
    w = omega_components(two_point_spec, [3.0])
    assert abs(w[0] - Fraction(11, 12)) < 1e-12


def test_omega_outside_domain(two_point_spec):
    with pytest.raises(OutsideDomainError):
        omega_components(two_point_spec, [1.0])
    with pytest.raises(OutsideDomainError):
        omega_components(two_point_spec, [0.0])


# -- JSON ------------------------------------------------------------------

def test_json_round_trip(hexagon_poly):
    assert poly_from_json(poly_to_json(hexagon_poly)) == hexagon_poly


# -- property-based --------------------------------------------------------

coeffs = st.integers(min_value=-20, max_value=20)
exps = st.tuples(st.integers(-4, 4), st.integers(-4, 4))
polys = st.dictionaries(exps, coeffs, min_size=0, max_size=6).map(
    lambda d: LaurentPoly(2, d))


@given(polys, polys)
@settings(max_examples=60, deadline=None)
def test_addition_commutes(p, q):
    assert p + q == q + p


@given(polys, polys, polys)
@settings(max_examples=40, deadline=None)
def test_multiplication_distributes(p, q, r):
    assert p * (q + r) == p * q + p * r


@given(polys, polys)
@settings(max_examples=40, deadline=None)
def test_evaluation_is_ring_hom(p, q):
    x = np.array([0.7 + 0.3j, -1.2 + 0.1j])
    lhs = (p * q).evaluate(x)
    rhs = p.evaluate(x) * q.evaluate(x)
    scale = max(1.0, abs(lhs), abs(rhs))
    assert abs(lhs - rhs) <= 1e-9 * scale


@given(polys)
@settings(max_examples=40, deadline=None)
def test_derivative_of_product_with_x(p):
    # d/dx (x * p) = p + x * dp/dx
    x = LaurentPoly.monomial((1, 0), 1)
    assert (x * p).partial(1) == p + x * p.partial(1)


@given(polys)
@settings(max_examples=40, deadline=None)
def test_format_parse_round_trip(p):
    if p.is_zero():
        return
    assert parse_poly(format_poly(p), 2) == p
