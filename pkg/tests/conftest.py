from fractions import Fraction

import pytest

from eulerint.laurent import IntegrandSpec, parse_poly

# Hexagonal-support sextic plane curve: its support spans a hexagon, so the
# critical-point count, the volume bound, and the GKZ rank all equal 6.
HEXAGON_TEXT = "-x*y^2 + 2*x*y^3 + 3*x^2*y - x^2*y^3 - 2*x^3*y + 3*x^3*y^2"

# Same support with coefficients that factor the curve into a product of
# lines, x*y*(x-1)*(y-1)*(x-y); the complement then has only 2 critical
# points while the support polytope is unchanged.
LINES_TEXT = "-x*y^2 + x*y^3 + x^2*y - x^2*y^3 - x^3*y + x^3*y^2"


@pytest.fixture(scope="session")
def hexagon_poly():
    return parse_poly(HEXAGON_TEXT)


@pytest.fixture(scope="session")
def lines_poly():
    return parse_poly(LINES_TEXT)


@pytest.fixture(scope="session")
def two_point_spec():
    """f = (x-1, x-2) with s = (1/2, 1/2), nu = 1/2: the punctured line."""
    return IntegrandSpec([parse_poly("x - 1"), parse_poly("x - 2")],
                         (Fraction(1, 2), Fraction(1, 2)), (Fraction(1, 2),))


@pytest.fixture(scope="session")
def quadratic_spec():
    """Single f = (x-1)(x-2) with s = 1/2, nu = 1/2."""
    return IntegrandSpec([parse_poly("x^2 - 3*x + 2")],
                         (Fraction(1, 2),), (Fraction(1, 2),))
