"""Exception types shared across the package."""

from __future__ import annotations


class SuperAffineError(Exception):
    """Base class for all errors raised by this package."""


class UnknownLabel(SuperAffineError, KeyError):
    """A basis label is not part of the algebra or module it was used with."""


class InvalidInput(SuperAffineError, ValueError):
    """Malformed input value (labels, scalars, parameters)."""


class PreconditionViolated(SuperAffineError):
    """An operation was called on data that does not satisfy its hypotheses."""


class WindowExhausted(SuperAffineError):
    """A procedure needed degrees beyond the available window."""


class NotSimple(SuperAffineError):
    """A superalgebra is not simple, so it has no M(r|s) or Q(r) type."""


class NonSplitForm(SuperAffineError):
    """The form does not split over the Gaussian rationals."""


class NoPhiSolution(SuperAffineError):
    """The linear system for the s-family action has no solution."""


class PhiNotCompatible(SuperAffineError):
    """A functional is incompatible with the chosen degree subgroup."""


class InvalidConfig(SuperAffineError):
    """Bad run configuration (CLI exit code 2)."""


class WindowTooSmall(InvalidInput):
    """The requested window cannot hold the structure being built."""


class ParamOutOfWindow(SuperAffineError):
    """A parameter choice needs products outside the window."""


class HypothesesNotMet(SuperAffineError):
    """The hypotheses of a checked statement fail on the given input."""


class NotParabolic(SuperAffineError):
    """A root subset fails the parabolic axioms."""


class EmptyTop(SuperAffineError):
    """No nonzero top vector exists inside the window."""


class NotNilpotent(SuperAffineError):
    """A root vector failed to act nilpotently within the allowed number of steps."""


class WrongType(InvalidInput):
    """The operation applies only to a different affine type."""
