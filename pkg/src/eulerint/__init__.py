"""Dimension counts and linear relations for generalized Euler integrals.

The integrals I_{a,b} = int_Gamma f^{s+a} x^{nu+b} dx/x span a
finite-dimensional vector space.  This package computes its dimension three
ways (critical points, polytope volume, numerical pairing) and produces and
verifies linear relations among the integrals.
"""

from .laurent import (IntegrandSpec, LaurentPoly, OutsideDomainError,
                      ParseError, format_poly, omega_components, parse_poly)
from .critical import (PolySystem, SolutionSet, TrackerSettings, build_system,
                       euler_characteristic, solve)
from .polytope import (LatticePointSet, VolumeReport, cayley_support, facets,
                       normalized_volume)
from .twisted import (BranchCurve, Cocycle, PairingMatrix, TwistedCycle,
                      integrate_loop, nullspace, pairing_matrix,
                      principal_branch_value)
from .relations import (AnnOperator, LogForm, Relation, mellin_relation,
                        nabla_apply, operator_form, relations_agree,
                        verify_numeric)
from .gkz import (CayleyConfig, cayley_matrix, euler_operators,
                  is_nonresonant, lattice_kernel, rank_bound)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
