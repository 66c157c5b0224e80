"""Exception types shared across the package."""


class CarnotError(Exception):
    """Base class for all errors raised by this package."""


class InputError(CarnotError):
    """Operands outside the contract: unknown basis words, mixed algebras,
    indices out of range, missing coordinates."""


class UnsupportedStepError(CarnotError):
    """Step outside the supported range 2..4."""


class DimensionInequalityError(CarnotError):
    """A construction needs dim g_{s-1} >= dim g_1 and the algebra fails it."""

    def __init__(self, r: int, s: int, dim_prev: int):
        self.r, self.s, self.dim_prev = r, s, dim_prev
        super().__init__(
            f"construction requires dim g_{s - 1} >= dim g_1 = {r}, "
            f"but dim g_{s - 1} = {dim_prev} for rank {r}, step {s}"
        )


class ParseError(CarnotError):
    """Syntax or symbol error in polynomial text, with 0-based position."""

    def __init__(self, message: str, position: int):
        self.position = position
        super().__init__(f"{message} (at position {position})")


class StratumError(CarnotError):
    """Inconsistent stratum constraints or an unusable witness point."""


class IntegrationError(CarnotError):
    """Numeric integration left the finite range; carries the last valid index."""

    def __init__(self, message: str, last_valid_index: int):
        self.last_valid_index = last_valid_index
        super().__init__(f"{message} (last valid step index {last_valid_index})")


class InternalInconsistencyError(CarnotError):
    """A situation the theory rules out; carries a certificate for debugging."""

    def __init__(self, message: str, certificate=None):
        self.certificate = certificate
        super().__init__(message)
