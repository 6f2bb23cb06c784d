"""Constructive nowhere-zero 3-flows on Cayley graphs of supersolvable groups."""

from .errors import (
    DisconnectedError,
    FlowError,
    GroupError,
    HypothesisError,
    InternalAssertion,
    OracleRefusal,
    ParseError,
    PreconditionError,
)
from .groups import FiniteGroup, Subgroup, build_group
from .flows import FlowAssignment, MultiGraph, Subgraph, verify_flow
from .cayley import CayleyGraph, ConnectionMultiset, build_cayley, validate_connection
from .synth import Certificate, hypothesis_report, synthesize

__version__ = "0.1.0"

__all__ = [
    "CayleyGraph",
    "Certificate",
    "ConnectionMultiset",
    "DisconnectedError",
    "FiniteGroup",
    "FlowAssignment",
    "FlowError",
    "GroupError",
    "HypothesisError",
    "InternalAssertion",
    "MultiGraph",
    "OracleRefusal",
    "ParseError",
    "PreconditionError",
    "Subgraph",
    "Subgroup",
    "build_cayley",
    "build_group",
    "hypothesis_report",
    "synthesize",
    "validate_connection",
    "verify_flow",
]
