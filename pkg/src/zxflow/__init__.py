"""Pauli webs, ZX-flow and circuit extraction for ZX-diagrams."""

from .circuit import Gate, GateList, dense, emit_qasm, parse_qasm
from .diagram import Diagram, End, NodeType, OpenGraph, from_open_graph, is_graph_like, to_open_graph, validate
from .extract import ExtractedCircuit, PauliExp, StabTableau, extract, lower_pauli_exp, synthesize_clifford, verify_extraction
from .flow import (
    PauliFlow,
    ZXFlow,
    find_pauli_flow,
    find_zx_flow,
    focus,
    is_focused,
    pauli_flow_from_strong,
    strong_flow_from_pauli_flow,
    verify_pauli_flow,
    verify_zx_flow,
)
from .oracle import equal_up_to_scalar, evaluate, verify_firing
from .pauli import Pauli, PauliSupport
from .rewrite import Direction, RewriteStep, Rule, apply_step, transport_flow
from .simplify import make_graph_like, skeletonize
from .webs import classify, defects, firing_sign, is_pauli_web, is_semiweb, web_basis, web_class_counts

__all__ = [
    "Diagram",
    "Direction",
    "End",
    "ExtractedCircuit",
    "Gate",
    "GateList",
    "NodeType",
    "OpenGraph",
    "Pauli",
    "PauliExp",
    "PauliFlow",
    "PauliSupport",
    "RewriteStep",
    "Rule",
    "StabTableau",
    "ZXFlow",
    "apply_step",
    "classify",
    "defects",
    "dense",
    "emit_qasm",
    "equal_up_to_scalar",
    "evaluate",
    "extract",
    "find_pauli_flow",
    "find_zx_flow",
    "firing_sign",
    "focus",
    "from_open_graph",
    "is_focused",
    "is_graph_like",
    "is_pauli_web",
    "is_semiweb",
    "lower_pauli_exp",
    "make_graph_like",
    "parse_qasm",
    "pauli_flow_from_strong",
    "skeletonize",
    "strong_flow_from_pauli_flow",
    "synthesize_clifford",
    "to_open_graph",
    "transport_flow",
    "validate",
    "verify_extraction",
    "verify_firing",
    "verify_pauli_flow",
    "verify_zx_flow",
    "web_basis",
    "web_class_counts",
]
