# src/utils/errors.py

from typing import Optional


class PsaKitError(Exception):
    """Base class for every error raised by psakit. `code` is stable and machine-readable."""
    code = "psakit"

    def __init__(self, message: str):
        super().__init__(message)
        self.message = message


class DimensionError(PsaKitError):
    code = "dimension"


class NumericalError(PsaKitError):
    code = "numerical"


class NotHermitianError(PsaKitError):
    code = "not_hermitian"

    def __init__(self, defect: float):
        super().__init__(f"hermiticity_defect={defect:.12g}")
        self.defect = defect


class InvalidStateError(PsaKitError):
    code = "invalid_state"


class InvalidPowerError(PsaKitError):
    """Raised when an input to the power graph is not a projector"""
    code = "invalid_power"

    def __init__(self, index: int, defect: float):
        super().__init__(f"input {index} is not a projector (idempotence defect={defect:.12g})")
        self.index = index
        self.defect = defect


class InvalidBasisError(PsaKitError):
    code = "invalid_basis"

    def __init__(self, index: int, defect: float):
        super().__init__(f"basis {index} is not orthonormal (defect={defect:.12g})")
        self.index = index
        self.defect = defect


class GraphError(PsaKitError):
    code = "graph"


class CombinatorialBlowupError(PsaKitError):
    code = "combinatorial_blowup"

    def __init__(self, cap: int):
        super().__init__(f"maximal clique count exceeds cap of {cap}")
        self.cap = cap


class InvalidPSAError(PsaKitError):
    code = "invalid_psa"


class NotTomographicallyCompleteError(PsaKitError):
    code = "not_tomographically_complete"

    def __init__(self, rank: int, needed: int):
        super().__init__(f"projectors span rank {rank}, reconstruction needs {needed}")
        self.rank = rank
        self.needed = needed


class InconsistentPSAError(PsaKitError):
    code = "inconsistent_psa"

    def __init__(self, message: str, residual: Optional[float] = None):
        super().__init__(message)
        self.residual = residual


class NonExhaustiveContextError(PsaKitError):
    code = "non_exhaustive_context"


class SearchBudgetError(PsaKitError):
    code = "search_budget"

    def __init__(self, branches: int):
        super().__init__(f"binary valuation search exceeded budget after {branches} branches")
        self.branches = branches


class SamplingError(PsaKitError):
    code = "sampling"


class SchemaError(PsaKitError):
    code = "schema"

    def __init__(self, field: str, reason: str):
        super().__init__(f"{field}: {reason}")
        self.field = field
        self.reason = reason


class ValidationError(PsaKitError):
    code = "validation"
