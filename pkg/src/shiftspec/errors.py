"""Exception hierarchy.

Every error raised on purpose by the package derives from
:class:`ShiftSpecError`, which is itself a ``ValueError`` so that callers
who only care about "bad input" can catch that.
"""


class ShiftSpecError(ValueError):
    pass


class ZeroFunctionError(ShiftSpecError):
    """The generator (or density) is identically zero."""


class GridMismatchError(ShiftSpecError):
    """Two sampled objects do not live on the same grid."""


class DomainTooSmallError(ShiftSpecError):
    """A sampled function does not cover the requested lattice shells."""


class AliasingError(ShiftSpecError):
    """Requested Fourier index is at or beyond the Nyquist limit."""


class NotPositiveSemidefiniteError(ShiftSpecError):
    def __init__(self, message, min_eigenvalue=None):
        super().__init__(message)
        self.min_eigenvalue = min_eigenvalue


class NotHermitianError(ShiftSpecError):
    pass


class EmptySetError(ShiftSpecError):
    pass


class DegenerateModeError(ShiftSpecError):
    pass
