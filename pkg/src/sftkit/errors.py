"""Exception types shared across the toolkit.

Budget exceptions are caught by the checking layer and turned into
inconclusive verdicts; they never surface as a wrong answer.
"""

from __future__ import annotations


class SftkitError(Exception):
    """Base class for all toolkit errors."""


class PreconditionViolated(SftkitError):
    """An operation's stated precondition does not hold.

    `clause` names the first violated clause, in the documented order.
    """

    def __init__(self, clause: str, message: str = ""):
        self.clause = clause
        text = f"precondition violated: {clause}"
        super().__init__(f"{text} ({message})" if message else text)


class CompositionMismatch(SftkitError):
    """Multinomial arguments do not sum to the required total."""


class SearchBudgetExceeded(SftkitError):
    """Membership search ran out of nodes. Reported as inconclusive."""

    def __init__(self, nodes: int):
        self.nodes = nodes
        super().__init__(f"membership search exceeded {nodes} nodes")


class CombinatorialBudgetExceeded(SftkitError):
    """Product enumeration would exceed the multiset cap."""


class DegreeBudgetExceeded(SftkitError):
    """Polynomial degree grew past the configured truncation."""


class TruncationTooSmall(SftkitError):
    """The request needs more generators than the truncation provides."""


class UnsupportedIdeal(SftkitError):
    """The integer-coefficient model only knows its catalog ideals."""


class UnsupportedModel(SftkitError):
    """Operation not defined for this model kind."""


class NoCertificateApplicable(SftkitError):
    """No all-elements certificate rule matches; caller falls back to sampling."""


class UnknownExample(SftkitError):
    def __init__(self, name: str, available: list[str]):
        self.available = available
        super().__init__(f"unknown example {name!r}; available: {', '.join(available)}")


class SchemaError(SftkitError):
    """A model, claim, or report file failed validation."""

    def __init__(self, location: str, message: str):
        self.location = location
        super().__init__(f"{location}: {message}")
