"""Exception types shared across the package."""


class RepbasisError(Exception):
    """Base class for all package errors."""

    code = "ERROR"


class EmptySetError(RepbasisError):
    code = "EMPTY_SET"


class InputTooSmallError(RepbasisError):
    code = "INPUT_TOO_SMALL"


class DensityUnreachableError(RepbasisError):
    code = "DENSITY_UNREACHABLE"


class PhiTooSlowError(RepbasisError):
    """The admissible-x scan exhausted the search cap without a success."""

    code = "PHI_TOO_SLOW"

    def __init__(self, message: str, *, cap: int | None = None):
        super().__init__(message)
        self.cap = cap


class PreconditionViolatedError(RepbasisError):
    """Caller handed in data that breaks a documented precondition."""

    code = "PRECONDITION_VIOLATED"

    def __init__(self, message: str, *, witness: int | None = None):
        super().__init__(message)
        self.witness = witness


class MalformedTraceError(RepbasisError):
    code = "MALFORMED_TRACE"
