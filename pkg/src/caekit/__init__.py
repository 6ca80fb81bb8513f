"""Workbench for claims-argument-evidence safety cases.

The package splits into the case model (`model`, `dsl`, `interchange`,
`dot`, `templates`) and the quantitative side (`metrics`, `confidence`,
`reliability`) used to back claims with numbers.  The `cae` console
script fronts both.
"""

from .model import (
    BlockKind,
    BlockNode,
    CaseDiff,
    CaseGraph,
    ClaimKind,
    ClaimNode,
    Confidence,
    Defeater,
    DefeaterKind,
    DefeaterState,
    Diagnostic,
    Edge,
    EdgeKind,
    EvidenceNode,
    HealthReport,
    Severity,
    StructuralError,
    build_graph,
    diff_cases,
    health,
    propagate_confidence,
    transition_defeater,
    validate,
    weakest_link,
)
from .dsl import ParseError, PrintError, parse_case, print_case
from .interchange import InterchangeError, dump_case, load_case
from .dot import render_dot

__version__ = "0.1.0"

__all__ = [
    "BlockKind",
    "BlockNode",
    "CaseDiff",
    "CaseGraph",
    "ClaimKind",
    "ClaimNode",
    "Confidence",
    "Defeater",
    "DefeaterKind",
    "DefeaterState",
    "Diagnostic",
    "Edge",
    "EdgeKind",
    "EvidenceNode",
    "HealthReport",
    "InterchangeError",
    "ParseError",
    "PrintError",
    "Severity",
    "StructuralError",
    "build_graph",
    "diff_cases",
    "dump_case",
    "health",
    "load_case",
    "parse_case",
    "print_case",
    "propagate_confidence",
    "render_dot",
    "transition_defeater",
    "validate",
    "weakest_link",
    "__version__",
]
