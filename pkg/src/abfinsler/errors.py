"""Exception types shared across the package."""


class GeometryError(Exception):
    """Base class for all numerical-geometry failures."""


class JetDomainError(GeometryError):
    """A smooth primitive was evaluated outside its domain.

    Carries the name of the offending primitive (``sqrt``, ``log``,
    ``divide``, ``power``) and the value that triggered the failure.
    """

    def __init__(self, primitive, value=None):
        self.primitive = primitive
        self.value = value
        super().__init__(f"domain error in primitive '{primitive}' at value {value!r}")


class PhiDomainError(GeometryError):
    """s = beta/alpha fell outside the declared domain of the phi family."""

    def __init__(self, kind, s):
        self.kind = kind
        self.s = s
        super().__init__(f"s={s!r} outside the declared domain of phi kind '{kind}'")


class SingularQError(GeometryError):
    """phi - s*phi' vanished, so Q = phi'/(phi - s*phi') is undefined."""

    def __init__(self, s):
        self.s = s
        super().__init__(f"phi - s*phi' below singularity guard at s={s!r}")


class SingularPhiError(GeometryError):
    """The regularity expression vanished where Theta/Psi are required."""

    def __init__(self, s):
        self.s = s
        super().__init__(f"degenerate phi family (regularity expression ~ 0) at s={s!r}")


class DegenerateMetricError(GeometryError):
    """A metric tensor (a_ij or the fundamental tensor) is numerically singular."""


class DegenerateDirectionError(GeometryError):
    """alpha(x, y) = 0; the direction y is inadmissible."""


class DegenerateFlagError(GeometryError):
    """The flag (y, u) spans a g_y-degenerate plane."""


class OutOfChartError(GeometryError):
    """A chart point left the coordinate patch (|v| >= 1 on the hemisphere chart)."""


class FiberPositivityError(GeometryError):
    """F is not positive on the whole fiber sphere, so the volume form is undefined."""
