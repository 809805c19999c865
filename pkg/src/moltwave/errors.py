"""Exception types raised by the solver."""


class MoltWaveError(Exception):
    """Base class for all solver errors."""


class NonPositiveStep(MoltWaveError):
    """Wave speed or time step is not strictly positive."""


class BetaOutOfRange(MoltWaveError):
    """beta violates the A-stability bound of the chosen scheme variant."""


class NonPositiveNu(MoltWaveError):
    """Quadrature parameter nu = alpha * dx must be positive."""


class DegenerateLine(MoltWaveError):
    """Line too short for the closure solve: 1 - mu (or 1 - mu^2) underflows."""


class SingularOutflowSystem(MoltWaveError):
    """Outflow 2x2 system is singular to round-off."""


class SourceOutsideLine(MoltWaveError):
    """Source location does not lie inside the line/domain."""


class NoInteriorNodes(MoltWaveError):
    """Mesh construction found no usable interior nodes."""


class TangentIntersection(MoltWaveError):
    """A boundary/grid-line intersection could not be bracketed cleanly."""


class StencilNotInterior(MoltWaveError):
    """A ghost interpolation cell touches non-interior nodes."""


class PointOutsideCell(MoltWaveError):
    """Bilinear interpolation point lies outside the given cell."""


class IllConditioned(MoltWaveError):
    """Ghost closed-form denominator 1 - K is below tolerance."""


class MaxIterExceeded(MoltWaveError):
    """Boundary-correction iteration failed to converge within max_iter."""


class EmptyInterior(MoltWaveError):
    """Error norm requested over an empty interior node set."""


class NonPositiveError(MoltWaveError):
    """Convergence orders need strictly positive error values."""


class UnknownReference(MoltWaveError):
    """Unknown reference-solution name."""


class InsufficientSteps(MoltWaveError):
    """Damping measurement needs more time steps."""


class ConfigError(MoltWaveError):
    """Base class for configuration errors (CLI exit code 2)."""


class UnknownKey(ConfigError):
    """Unrecognized configuration key."""


class InvalidValue(ConfigError):
    """Configuration value failed validation."""


class MissingScenario(ConfigError):
    """Configuration does not name a scenario."""


class IncompatibleBC(ConfigError):
    """Boundary-condition choice incompatible with the scheme variant."""


class NumericalFailure(MoltWaveError):
    """Blow-up or other runtime numerical failure (CLI exit code 3)."""
