"""Exception hierarchy.

``ValueError`` subclasses signal bad arguments. :class:`PhysicsError` marks
inputs that are well formed but physically impossible (Pauli exclusion,
sectors that do not exist); the CLI maps it to its own exit code.
"""


class PhysicsError(ValueError):
    """Input violates a physical constraint rather than a usage rule."""


class PauliExclusionError(PhysicsError):
    """More fermions than available cells."""


class NonexistentSectorError(PhysicsError):
    """The requested total-spin sector has no states for these parameters."""


class EmptySystemError(ValueError):
    """A computation was requested for zero particles."""


class ResourceError(RuntimeError):
    """A brute-force computation would exceed the configured size cap."""


class ConsistencyError(RuntimeError):
    """An internal cross-check failed. Always indicates a bug."""
