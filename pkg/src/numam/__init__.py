"""Exact computation of numerical and toric Amitsur groups.

The package computes, over exact integer arithmetic, the invariants
Am^chi(X, J) and Am^T(X, J) of smooth projective varieties together
with the divisibility bounds on Amitsur periods that come from the
Euler characteristic.
"""

from numam.intlin import FiniteAbelianGroup, IntegerMatrix, Sublattice
from numam.numpoly import NumericalPolynomial
from numam.latgroup import LatticeGroupAction, Orbit
from numam.amitsur import AmitsurComputation, VarietySpec

__version__ = "0.1.0"

__all__ = [
    "AmitsurComputation",
    "FiniteAbelianGroup",
    "IntegerMatrix",
    "LatticeGroupAction",
    "NumericalPolynomial",
    "Orbit",
    "Sublattice",
    "VarietySpec",
    "__version__",
]
