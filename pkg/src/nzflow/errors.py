"""Exception hierarchy shared by every module."""


class NZFlowError(Exception):
    """Base class for all package errors."""


class GroupError(NZFlowError):
    """Malformed group table or invalid group operation."""


class FlowError(NZFlowError):
    """A flow does not match its graph, or a flow operation received bad input."""


class PreconditionError(NZFlowError):
    """A construction was called outside the hypotheses it is valid for."""


class HypothesisError(PreconditionError):
    """The group or connection multiset fails the main existence hypotheses."""


class DisconnectedError(PreconditionError):
    """The connection multiset does not generate the group."""


class InternalAssertion(NZFlowError):
    """A step that must succeed by construction did not; always a bug report."""


class OracleRefusal(NZFlowError):
    """The exhaustive oracle refused an instance above its cycle-rank cap."""


class ParseError(NZFlowError):
    """Input document could not be parsed."""
