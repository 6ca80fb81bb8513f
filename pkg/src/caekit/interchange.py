"""JSON interchange format for case graphs.

The document mirrors the model types directly: a flat node list (each
entry tagged with "type"), an edge list of {"from", "to", "kind"}
objects and the root claim ids.  `dump_case` always emits the canonical
form: sorted keys, two-space indentation, nodes ordered by id and edges
by their (from, to, kind) triple, so equal graphs serialize to equal
bytes.
"""

from __future__ import annotations

import json
from typing import Any

from .model import (
    BlockKind,
    BlockNode,
    CaseGraph,
    ClaimKind,
    ClaimNode,
    Confidence,
    Defeater,
    DefeaterKind,
    DefeaterState,
    Edge,
    EdgeKind,
    EvidenceNode,
    Node,
)


class InterchangeError(ValueError):
    """A document that does not follow the interchange schema.

    The message starts with the path of the offending element, e.g.
    ``nodes[3].kind``.
    """

    def __init__(self, path: str, problem: str):
        self.path = path
        super().__init__(f"{path}: {problem}")


# -- dumping ----------------------------------------------------------------


def _node_to_obj(node: Node) -> dict[str, Any]:
    if isinstance(node, ClaimNode):
        obj: dict[str, Any] = {
            "type": "claim",
            "id": node.id,
            "statement": node.statement,
            "kind": node.kind.value,
        }
        if node.intrinsic_confidence is not None:
            obj["intrinsic_confidence"] = node.intrinsic_confidence.label
        return obj
    if isinstance(node, BlockNode):
        obj = {
            "type": "block",
            "id": node.id,
            "kind": node.kind.value,
            "description": node.description,
        }
        if node.side_claim is not None:
            obj["side_claim"] = node.side_claim
        return obj
    if isinstance(node, EvidenceNode):
        obj = {
            "type": "evidence",
            "id": node.id,
            "description": node.description,
        }
        if node.trustworthiness_subcase is not None:
            obj["trustworthiness_subcase"] = node.trustworthiness_subcase
        return obj
    obj = {
        "type": "defeater",
        "id": node.id,
        "kind": node.kind.value,
        "target": node.target,
        "statement": node.statement,
        "state": node.state.value,
    }
    if node.resolution_ref is not None:
        obj["resolution_ref"] = node.resolution_ref
    if node.hidden:
        obj["hidden"] = True
    return obj


def case_to_obj(graph: CaseGraph) -> dict[str, Any]:
    return {
        "title": graph.title,
        "nodes": [
            _node_to_obj(graph.nodes[node_id]) for node_id in sorted(graph.nodes)
        ],
        "edges": [
            {"from": e.source, "to": e.target, "kind": e.kind.value}
            for e in sorted(
                graph.edges, key=lambda e: (e.source, e.target, e.kind.value)
            )
        ],
        "roots": list(graph.roots),
    }


def dump_case(graph: CaseGraph) -> str:
    """Serialize a graph to canonical interchange JSON."""
    return json.dumps(case_to_obj(graph), sort_keys=True, indent=2) + "\n"


# -- loading ----------------------------------------------------------------


def _expect_str(obj: Any, path: str) -> str:
    if not isinstance(obj, str):
        raise InterchangeError(path, f"expected a string, got {type(obj).__name__}")
    return obj


def _expect_opt_str(obj: Any, path: str) -> str | None:
    if obj is None:
        return None
    return _expect_str(obj, path)


def _check_keys(obj: dict[str, Any], path: str, required: set[str], optional: set[str]) -> None:
    for key in required:
        if key not in obj:
            raise InterchangeError(f"{path}.{key}", "required field is missing")
    for key in obj:
        if key not in required and key not in optional:
            raise InterchangeError(f"{path}.{key}", "unknown field")


def _enum_value(enum_cls: Any, raw: Any, path: str) -> Any:
    value = _expect_str(raw, path)
    try:
        return enum_cls(value)
    except ValueError:
        allowed = ", ".join(m.value for m in enum_cls)
        raise InterchangeError(path, f"must be one of: {allowed}") from None


def _node_from_obj(obj: Any, path: str) -> Node:
    if not isinstance(obj, dict):
        raise InterchangeError(path, f"expected an object, got {type(obj).__name__}")
    node_type = obj.get("type")
    if node_type == "claim":
        _check_keys(obj, path, {"type", "id", "statement"},
                    {"kind", "intrinsic_confidence"})
        confidence = None
        if obj.get("intrinsic_confidence") is not None:
            raw = _expect_str(
                obj["intrinsic_confidence"], f"{path}.intrinsic_confidence"
            )
            try:
                confidence = Confidence.from_label(raw)
            except ValueError:
                raise InterchangeError(
                    f"{path}.intrinsic_confidence",
                    "must be one of: insufficient, adequate, high",
                ) from None
        return ClaimNode(
            id=_expect_str(obj["id"], f"{path}.id"),
            statement=_expect_str(obj["statement"], f"{path}.statement"),
            kind=_enum_value(ClaimKind, obj.get("kind", "normal"), f"{path}.kind"),
            intrinsic_confidence=confidence,
        )
    if node_type == "block":
        _check_keys(obj, path, {"type", "id", "kind", "description"}, {"side_claim"})
        return BlockNode(
            id=_expect_str(obj["id"], f"{path}.id"),
            kind=_enum_value(BlockKind, obj["kind"], f"{path}.kind"),
            description=_expect_str(obj["description"], f"{path}.description"),
            side_claim=_expect_opt_str(obj.get("side_claim"), f"{path}.side_claim"),
        )
    if node_type == "evidence":
        _check_keys(obj, path, {"type", "id", "description"},
                    {"trustworthiness_subcase"})
        return EvidenceNode(
            id=_expect_str(obj["id"], f"{path}.id"),
            description=_expect_str(obj["description"], f"{path}.description"),
            trustworthiness_subcase=_expect_opt_str(
                obj.get("trustworthiness_subcase"),
                f"{path}.trustworthiness_subcase",
            ),
        )
    if node_type == "defeater":
        _check_keys(
            obj,
            path,
            {"type", "id", "kind", "target", "statement", "state"},
            {"resolution_ref", "hidden"},
        )
        hidden = obj.get("hidden", False)
        if not isinstance(hidden, bool):
            raise InterchangeError(f"{path}.hidden", "must be a boolean")
        return Defeater(
            id=_expect_str(obj["id"], f"{path}.id"),
            kind=_enum_value(DefeaterKind, obj["kind"], f"{path}.kind"),
            target=_expect_str(obj["target"], f"{path}.target"),
            statement=_expect_str(obj["statement"], f"{path}.statement"),
            state=_enum_value(DefeaterState, obj["state"], f"{path}.state"),
            resolution_ref=_expect_opt_str(
                obj.get("resolution_ref"), f"{path}.resolution_ref"
            ),
            hidden=hidden,
        )
    raise InterchangeError(
        f"{path}.type", "must be one of: claim, block, evidence, defeater"
    )


def case_from_obj(obj: Any) -> CaseGraph:
    if not isinstance(obj, dict):
        raise InterchangeError("$", f"expected an object, got {type(obj).__name__}")
    _check_keys(obj, "$", {"title", "nodes", "edges", "roots"}, set())
    title = _expect_str(obj["title"], "$.title")

    raw_nodes = obj["nodes"]
    if not isinstance(raw_nodes, list):
        raise InterchangeError("nodes", "expected an array")
    nodes: dict[str, Node] = {}
    for i, raw in enumerate(raw_nodes):
        node = _node_from_obj(raw, f"nodes[{i}]")
        if node.id in nodes:
            raise InterchangeError(f"nodes[{i}].id", f"duplicate node id {node.id!r}")
        nodes[node.id] = node

    raw_edges = obj["edges"]
    if not isinstance(raw_edges, list):
        raise InterchangeError("edges", "expected an array")
    edges: list[Edge] = []
    for i, raw in enumerate(raw_edges):
        path = f"edges[{i}]"
        if not isinstance(raw, dict):
            raise InterchangeError(path, "expected an object")
        _check_keys(raw, path, {"from", "to", "kind"}, set())
        edges.append(
            Edge(
                source=_expect_str(raw["from"], f"{path}.from"),
                target=_expect_str(raw["to"], f"{path}.to"),
                kind=_enum_value(EdgeKind, raw["kind"], f"{path}.kind"),
            )
        )

    raw_roots = obj["roots"]
    if not isinstance(raw_roots, list):
        raise InterchangeError("roots", "expected an array")
    roots = tuple(
        _expect_str(raw, f"roots[{i}]") for i, raw in enumerate(raw_roots)
    )

    return CaseGraph(title, nodes, tuple(edges), roots)


def load_case(text: str) -> CaseGraph:
    """Parse interchange JSON into a graph.

    Raises:
        InterchangeError: When the document strays from the schema.
        StructuralError: When the fields are well-typed but the graph
            they describe is incoherent (dangling edges and the like).
    """
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InterchangeError("$", f"not valid JSON ({exc.msg})") from None
    return case_from_obj(obj)
