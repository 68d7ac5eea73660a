"""Exception hierarchy shared by all qpsl modules."""

from __future__ import annotations


class QPSLError(Exception):
    """Base class for every error raised by qpsl."""


class InvalidSurface(QPSLError):
    """Surface parameters or a triangulation fail validation."""


class UnknownArc(QPSLError, KeyError):
    """An arc label does not belong to the triangulation."""


class FoldedSideFlip(QPSLError):
    """Ideal flip requested at the folded side of a self-folded triangle."""


class BudgetExceeded(QPSLError):
    """A bounded computation hit its limit before finishing."""


class TwoCycleAtVertex(QPSLError):
    """Mutation requested at a vertex lying on a 2-cycle."""


class RotationImpossible(QPSLError):
    """A cycle cannot be rotated to avoid starting at a vertex."""


class NormalFormViolation(QPSLError):
    """A potential is not in the shape required by the splitting procedure."""


class NonTrivialDegree2(QPSLError):
    """Degree-two terms cannot be paired into disjoint trivial 2-cycles."""


class MissingWeight(QPSLError, KeyError):
    """A puncture has no weight assigned."""


class LaurentViolation(QPSLError):
    """An exchange relation did not divide exactly."""


class NonHomogeneous(QPSLError):
    """A principal-coefficient variable is not homogeneous."""


class PreconditionViolation(QPSLError):
    """Inputs do not satisfy the documented precondition."""


class NotInSpan(QPSLError):
    """An element is not a linear combination of the given dictionary."""


class NotThin(QPSLError):
    """A representation has a vertex of dimension at least two."""


__all__ = [
    "QPSLError",
    "InvalidSurface",
    "UnknownArc",
    "FoldedSideFlip",
    "BudgetExceeded",
    "TwoCycleAtVertex",
    "RotationImpossible",
    "NormalFormViolation",
    "NonTrivialDegree2",
    "MissingWeight",
    "LaurentViolation",
    "NonHomogeneous",
    "PreconditionViolation",
    "NotInSpan",
    "NotThin",
]
