"""Exact computer algebra for free nilpotent Lie algebras of step <= 4:
Casimir functions, coadjoint-orbit classification, and numeric verification
of invariance along vertical Hamiltonian flows."""

from .errors import (
    CarnotError,
    DimensionInequalityError,
    InputError,
    IntegrationError,
    InternalInconsistencyError,
    ParseError,
    StratumError,
    UnsupportedStepError,
)
from .lie import (
    GradedAlgebra,
    HallWord,
    LieElement,
    basis_records,
    bracket,
    build_algebra,
    graded_dimension,
    iterated_bracket,
)

__version__ = "0.1.0"

__all__ = [
    "CarnotError",
    "DimensionInequalityError",
    "GradedAlgebra",
    "HallWord",
    "InputError",
    "IntegrationError",
    "InternalInconsistencyError",
    "LieElement",
    "ParseError",
    "StratumError",
    "UnsupportedStepError",
    "basis_records",
    "bracket",
    "build_algebra",
    "graded_dimension",
    "iterated_bracket",
]
