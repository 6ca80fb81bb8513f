"""Graphviz DOT rendering of case graphs.

Shape conventions: claims are rounded boxes, argument blocks ellipses
and evidence note-shaped. Side claims get a dashed border. Defeaters
are red ovals attached by a dashed edge labelled "defeats"; a hidden
defeater fades to grey instead of disappearing, so reviewers can still
see that a doubt was raised and withdrawn.

Output is deterministic: nodes print sorted by id, then edges sorted by
endpoint pair.
"""

from __future__ import annotations

from .model import (
    BlockNode,
    CaseGraph,
    ClaimNode,
    Defeater,
    EdgeKind,
    EvidenceNode,
)


def _quote(value: str) -> str:
    escaped = value.replace("\\", "\\\\").replace('"', '\\"').replace("\n", "\\n")
    return f'"{escaped}"'


def _wrap(text: str, width: int = 32) -> str:
    ## crude label wrapping; dot has no native soft wrap
    words = text.split()
    lines: list[str] = []
    current = ""
    for word in words:
        if current and len(current) + 1 + len(word) > width:
            lines.append(current)
            current = word
        else:
            current = f"{current} {word}" if current else word
    if current:
        lines.append(current)
    return "\n".join(lines)


def render_dot(graph: CaseGraph) -> str:
    """Render the case as a Graphviz digraph."""
    side_claims = {
        b.side_claim for b in graph.blocks() if b.side_claim is not None
    }
    lines = [f"digraph {_quote(graph.title)} {{", "  rankdir=BT;"]

    for node_id in sorted(graph.nodes):
        node = graph.nodes[node_id]
        if isinstance(node, ClaimNode):
            label = f"{node.id}\n{_wrap(node.statement)}"
            style = "rounded,dashed" if node.id in side_claims else "rounded"
            attrs = f"shape=box, style={_quote(style)}, label={_quote(label)}"
        elif isinstance(node, BlockNode):
            label = f"{node.id}\n{_wrap(node.description)}"
            attrs = f"shape=ellipse, label={_quote(label)}"
        elif isinstance(node, EvidenceNode):
            label = f"{node.id}\n{_wrap(node.description)}"
            attrs = f"shape=note, label={_quote(label)}"
        else:
            assert isinstance(node, Defeater)
            label = f"{node.id} [{node.state.value}]\n{_wrap(node.statement)}"
            colour = "grey" if node.hidden else "red"
            attrs = (
                f"shape=oval, color={colour}, fontcolor={colour}, "
                f"label={_quote(label)}"
            )
        lines.append(f"  {_quote(node_id)} [{attrs}];")

    for edge in sorted(graph.edges, key=lambda e: (e.source, e.target, e.kind.value)):
        if edge.kind is EdgeKind.DEFEATS:
            source = graph.nodes[edge.source]
            grey = isinstance(source, Defeater) and source.hidden
            colour = "grey" if grey else "red"
            extra = (
                f' [style=dashed, color={colour}, fontcolor={colour}, '
                f'label="defeats"]'
            )
        elif edge.kind is EdgeKind.JUSTIFIES:
            extra = " [style=dotted]"
        else:
            extra = ""
        lines.append(f"  {_quote(edge.source)} -> {_quote(edge.target)}{extra};")

    lines.append("}")
    return "\n".join(lines) + "\n"
