"""Exception types shared across the package."""


class MultiportError(ValueError):
    """Base class for all errors raised by this package."""


class DimensionError(MultiportError):
    """Invalid matrix or mode dimension (e.g. m = 0, non-square input)."""


class PortError(MultiportError):
    """Port index out of range, duplicate input port, or length mismatch."""


class ParticleClassError(MultiportError):
    """Particle class not admissible for the requested operation."""


class NumericalConsistencyError(MultiportError):
    """A computed quantity violates a bound it must satisfy by more than the
    documented slack (e.g. a probability outside [0, 1] by more than 1e-12)."""


class SizeLimitError(MultiportError):
    """Requested computation exceeds a documented cost cap."""
