"""Exception types shared across the package."""


class SimulationError(Exception):
    """Base class for numerical-domain errors raised by this package."""


class ZeroNormError(SimulationError):
    """State has (numerically) zero norm and cannot be normalized."""


class FamilyMismatchError(SimulationError):
    """A single-particle label was used with the wrong particle."""


class NotNormalizedError(SimulationError):
    """Operation requires a unit-norm state."""


class OutOfRangeError(SimulationError):
    """Overlap scalar outside the physical range [-1, 1]."""


class ExcitedInputError(SimulationError):
    """Absorption channel applied to an already-excited factor."""


class WrongKindError(SimulationError):
    """Operation defined only for a different initial-state kind."""


class ComplexAmplitudesError(SimulationError):
    """Real-amplitude route invoked with complex channel amplitudes."""


class DegenerateSpectrumError(SimulationError):
    """Eigenvalue route undefined: the nonzero eigenvalue pair vanishes."""


class NotADistributionError(SimulationError):
    """Values do not form a probability distribution."""
