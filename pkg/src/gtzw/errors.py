"""Exception types raised by the library."""


class GtzwError(Exception):
    """Base class for all library errors."""


class PoleError(GtzwError, ValueError):
    """Argument sits on a pole of the Gamma function."""


class DomainError(GtzwError, ValueError):
    """Parameters outside the domain where a quantity is defined."""


class LevelMismatchError(GtzwError, ValueError):
    """Signatures (or tables) are not on adjacent levels as required."""


class NonAdmissibleError(GtzwError, ValueError):
    """zw-parameters are not admissible; ``reason`` says which condition failed."""

    def __init__(self, message, reason=None):
        super().__init__(message)
        self.reason = reason or message


class GrowthLimitError(GtzwError, RuntimeError):
    """Adaptive support box hit its cap before reaching the mass target."""


class OmegaError(GtzwError, ValueError):
    """A point violates the constraints defining the boundary set Omega."""


class SingularCayleyError(GtzwError, ValueError):
    """1 + U is (numerically) singular, so the Cayley transform is undefined."""

    def __init__(self, message, condition=None):
        super().__init__(message)
        self.condition = condition
