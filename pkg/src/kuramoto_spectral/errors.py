"""Exception types shared across the package."""


class KuramotoSpectralError(Exception):
    """Base class for all package errors."""


class UnsupportedContinuation(KuramotoSpectralError):
    """The density has no analytic continuation off the real axis."""


class PoleHit(KuramotoSpectralError):
    """Evaluation requested within 1e-12 of a declared pole."""


class BreakpointHit(KuramotoSpectralError):
    """Evaluation requested at a discontinuity of a piecewise density."""


class QuadratureDivergence(KuramotoSpectralError):
    """Resolution doubling changed a quadrature value beyond tolerance."""


class ContourThroughZero(KuramotoSpectralError):
    """A counting contour could not be nudged off a zero."""


class NewtonDivergence(KuramotoSpectralError):
    """Newton iteration failed to converge from a seed."""


class CountMismatch(KuramotoSpectralError):
    """Located roots disagree with the argument-principle count."""


class NotARoot(KuramotoSpectralError):
    """A residue coefficient was requested at a non-root."""


class LostRoot(KuramotoSpectralError):
    """Continuation in K lost the root despite step halving."""


class PoleOnStripBoundary(KuramotoSpectralError):
    """A resonance pole sits on the requested strip boundary."""


class StepTooLarge(KuramotoSpectralError):
    """Requested integrator step violates the stability bound."""


class ModeBoundViolation(KuramotoSpectralError):
    """A Galerkin mode exceeded the unit-modulus bound; closure artifact."""


class NoTransition(KuramotoSpectralError):
    """No critical ordinates were found."""


class NotEvenUnimodal(KuramotoSpectralError):
    """The operation requires an even unimodal density."""


class ZeroCurvature(KuramotoSpectralError):
    """The density curvature at the center is numerically zero."""


class ConfigError(KuramotoSpectralError):
    """Malformed run configuration; message names the offending field."""


class SubcriticalWarning(UserWarning):
    """Positive center curvature: the synchronous branch bends backward."""
