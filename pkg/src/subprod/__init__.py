"""Standard subproduct systems, their Fock spaces, representations and cp-semigroups."""
from .kernel import InvalidInput, NumericalFailure, Subspace
from .ncpoly import HomogeneousIdeal, NCPolynomial, parse_poly
from .systems import SubproductSystem

__all__ = [
    "InvalidInput",
    "NumericalFailure",
    "Subspace",
    "HomogeneousIdeal",
    "NCPolynomial",
    "parse_poly",
    "SubproductSystem",
]
