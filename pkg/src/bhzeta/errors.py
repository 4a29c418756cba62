"""Error types shared across the pipeline.

Every error carries a module-qualified ``code`` so that batch output and the
service layer can surface machine-readable failure origins.
"""

from __future__ import annotations


class BhzetaError(Exception):
    code = "bhzeta:Error"


class InputError(BhzetaError):
    code = "pipeline:InvalidInput"


class NonSquareError(BhzetaError):
    code = "matrix-core:NonSquare"


class ZeroDeterminantError(BhzetaError):
    code = "matrix-core:ZeroDeterminant"


class NegativeEntryError(BhzetaError):
    code = "matrix-core:NegativeEntry"


class NotIsolatedError(BhzetaError):
    code = "milnor:NotIsolated"


class PrecisionExhaustedError(BhzetaError):
    code = "padic:PrecisionExhausted"


class DenominatorMismatchError(BhzetaError):
    code = "padic:DenominatorMismatch"


class DegenerateTupleError(BhzetaError):
    code = "charsum:DegenerateTuple"


class InsufficientPrecisionError(BhzetaError):
    code = "spectrum:InsufficientPrecision"

    def __init__(self, message: str, needed_precision: int | None = None):
        super().__init__(message)
        self.needed_precision = needed_precision


class NonDivisibleError(BhzetaError):
    code = "counting:NonDivisible"


class BudgetExceededError(BhzetaError):
    code = "counting:BudgetExceeded"

    def __init__(self, message: str, estimate: int | None = None):
        super().__init__(message)
        self.estimate = estimate


class NotHomogeneousError(BhzetaError):
    code = "mw:NotHomogeneous"


class UnpairedTermError(BhzetaError):
    code = "mw:UnpairedTerm"


class UnknownFixtureError(BhzetaError):
    code = "fixtures:UnknownFixture"
