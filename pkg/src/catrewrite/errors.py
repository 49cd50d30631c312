"""Exception hierarchy for the rewriting engine."""

from __future__ import annotations


class RewritingError(Exception):
    """Base class; ``witness`` names the offending element, rule or step."""

    def __init__(self, message: str, witness: object = None):
        super().__init__(message)
        self.witness = witness


class KindMismatch(RewritingError):
    pass


class DomainMismatch(RewritingError):
    pass


class CodomainMismatch(RewritingError):
    pass


class NotParallel(RewritingError):
    pass


class BaseMismatch(RewritingError):
    pass


class NotComposable(RewritingError):
    pass


class NotAMorphism(RewritingError):
    pass


class StructureError(RewritingError):
    """A graph lacks the reflexive/symmetric/transitive structure asked for."""


class BoundExceeded(RewritingError):
    pass


class FiltrationError(RewritingError):
    pass


class NotTerminating(RewritingError):
    pass


class NotDecreasing(RewritingError):
    pass


class NotWellFormedStep(RewritingError):
    pass


class DecompositionMismatch(RewritingError):
    pass


class StrategyError(RewritingError):
    """A local strategy failed verification; ``report`` holds the details."""

    def __init__(self, message: str, report: object = None, witness: object = None):
        super().__init__(message, witness)
        self.report = report


class NotConfluent(RewritingError):
    pass


class Exhausted(RewritingError):
    """Conversion search found no lc-structure; ``witness`` is the stuck rule."""


class InvalidLc(RewritingError):
    def __init__(self, message: str, report: object = None, witness: object = None):
        super().__init__(message, witness)
        self.report = report


class InvariantViolation(RewritingError):
    """An identity that must hold by construction failed: an engine bug."""
