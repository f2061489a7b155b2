"""Exception and warning types raised across the package."""


class LcwtError(Exception):
    """Base class for all errors raised by :mod:`lcwt`."""


class GridMismatch(LcwtError):
    """Two sampled objects do not live on the same (or a compatible) grid."""


class InvalidMatrix(LcwtError):
    """Matrix parameters violate the unit-determinant constraint."""


class DegenerateBranch(LcwtError):
    """The kernel form of the transform was requested with B == 0."""


class InvalidScale(LcwtError):
    """A dilation parameter is not strictly positive."""


class DivergentAdmissibility(LcwtError):
    """The admissibility integrand is not integrable near the origin."""


class NotAdmissible(LcwtError):
    """Half-line admissibility constants disagree or vanish."""


class NotAPair(LcwtError):
    """Two wavelets do not form an admissible pair."""


class ZeroCentre(LcwtError):
    """Q-factor requested for a window centred at the origin."""


class ZeroSignal(LcwtError):
    """An operation needs nonzero energy but got none."""


class NotConcentrated(LcwtError):
    """A concentration precondition of an uncertainty bound fails."""


class OutOfRange(LcwtError):
    """A parameter lies outside the domain where a bound is stated."""


class BoundaryMass(LcwtError):
    """A sampled basis function carries too much energy at the grid edges."""


class MeasureTooLarge(LcwtError):
    """The set is too large for the projection lower bound to apply."""


class ParseError(LcwtError):
    """Malformed input file; ``row`` is the 1-based line when known."""

    def __init__(self, message: str, row: int | None = None):
        super().__init__(message)
        self.row = row


class NonUniformGrid(ParseError):
    """Sample times are not uniformly spaced."""


class UnsupportedEncoding(ParseError):
    """Audio encoding not handled by the reader."""


class ConfigError(LcwtError):
    """Invalid run configuration."""


class GridTooCoarse(UserWarning):
    """The scale range misses part of the admissibility mass."""
