"""Exception types shared across the package."""

from __future__ import annotations


class EqcolError(Exception):
    """Base class for all package-specific errors."""


class ConductorOverflow(EqcolError):
    """A cyclotomic operation would exceed the conductor cap."""


class NotInvertible(EqcolError):
    """Attempt to invert a singular matrix."""


class OrderCapExceeded(EqcolError):
    """Group closure grew past the configured order cap."""


class InvalidParameter(EqcolError):
    """A constructor or operation received an unusable parameter."""


class GroupMismatch(EqcolError):
    """Objects built over different groups were mixed."""


class NegativeDegree(EqcolError):
    """A graded construction was asked for a negative degree."""


class BasisMismatch(EqcolError):
    """A vector does not lie in the span of the basis it was expressed in."""


class WindowViolation(EqcolError):
    """Twist spread of a Hom computation exceeds the safe window."""


class NonConcentratedHom(EqcolError):
    """Mutation requires Hom concentrated in degree zero."""


class NotADivisor(EqcolError):
    """A Veronese parameter must divide the number of coordinates."""


class OrthogonalityFailure(EqcolError):
    """A claimed orthogonal decomposition has a nonzero cross Ext."""


class NotStrong(EqcolError):
    """Operation requires a strong exceptional collection."""


class ScenarioError(EqcolError):
    """A scenario file failed to parse or validate."""


class ParseError(ScenarioError):
    """Scenario text is not valid JSON; message carries line and column."""


class ValidationError(ScenarioError):
    """Scenario parsed but violates an invariant named in the message."""
