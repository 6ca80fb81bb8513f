"""Core graph model for claims-argument-evidence safety cases.

A case is a directed graph of claims, argument blocks, evidence and
defeaters.  Support flows upward: evidence and child claims support a
block, the block supports its parent claim.  Side claims justify blocks.
Defeaters attack any of the above.

The model layer owns structural integrity (a graph that cannot be
represented at all is rejected at construction) while `validate` reports
rule violations as diagnostics that renderers and the CLI can surface
without halting.
"""

from __future__ import annotations

import enum
from collections.abc import Callable, Iterable, Mapping, Sequence
from dataclasses import dataclass, field, replace
from functools import cached_property
from graphlib import TopologicalSorter

NodeId = str


class StructuralError(ValueError):
    """Raised when a graph cannot be assembled at all.

    Covers dangling edge endpoints, duplicate ids, roots that do not
    name claims and node/edge inconsistencies.  Rule violations that
    leave the graph representable are reported by `validate` instead.
    """


class ClaimKind(enum.Enum):
    NORMAL = "normal"
    ASSUMPTION = "assumption"
    ASSERTION = "assertion"


class BlockKind(enum.Enum):
    DECOMPOSITION = "decomposition"
    SUBSTITUTION = "substitution"
    EVIDENCE_INCORPORATION = "evidence_incorporation"
    CONCRETION = "concretion"
    CALCULATION = "calculation"


class DefeaterKind(enum.Enum):
    REBUTTING = "rebutting"
    UNDERCUTTING = "undercutting"


class DefeaterState(enum.Enum):
    OPEN = "open"
    MITIGATED = "mitigated"
    WITHDRAWN = "withdrawn"
    RESIDUAL_ACCEPTED = "residual_accepted"


class Confidence(enum.IntEnum):
    """Ordinal confidence scale used by propagation.

    IntEnum so that `min` over children is the default weakest-link
    calculus and arithmetic capping stays trivial.
    """

    INSUFFICIENT = 0
    ADEQUATE = 1
    HIGH = 2

    @property
    def label(self) -> str:
        return self.name.lower()

    @classmethod
    def from_label(cls, label: str) -> "Confidence":
        try:
            return cls[label.upper()]
        except KeyError:
            raise ValueError(f"unknown confidence level {label!r}") from None


class EdgeKind(enum.Enum):
    SUPPORTS = "supports"
    DEFEATS = "defeats"
    JUSTIFIES = "justifies"


@dataclass(frozen=True, slots=True)
class ClaimNode:
    """A claim: a statement whose truth the case argues for.

    Args:
        id: Unique node id.
        statement: The claim text.
        kind: NORMAL claims expect support; ASSUMPTION and ASSERTION
            claims stand without it.
        intrinsic_confidence: Confidence assigned directly to a leaf
            claim.  Ignored during propagation when the claim has
            supporting blocks.
    """

    id: NodeId
    statement: str
    kind: ClaimKind = ClaimKind.NORMAL
    intrinsic_confidence: Confidence | None = None

    def __post_init__(self) -> None:
        if not self.id:
            raise StructuralError("claim id must be non-empty")


@dataclass(frozen=True, slots=True)
class BlockNode:
    """An argument block linking child claims and evidence to a parent claim.

    `side_claim` holds the id of the claim justifying the block's
    reasoning step; the graph also carries a matching justifies edge.
    """

    id: NodeId
    kind: BlockKind
    description: str
    side_claim: NodeId | None = None

    def __post_init__(self) -> None:
        if not self.id:
            raise StructuralError("block id must be non-empty")


@dataclass(frozen=True, slots=True)
class EvidenceNode:
    """Evidence backing an argument block.

    `trustworthiness_subcase` optionally names the claim arguing that
    the evidence itself can be trusted.
    """

    id: NodeId
    description: str
    trustworthiness_subcase: NodeId | None = None

    def __post_init__(self) -> None:
        if not self.id:
            raise StructuralError("evidence id must be non-empty")


@dataclass(frozen=True, slots=True)
class Defeater:
    """A recorded doubt attacking a claim, block or evidence node.

    Rebutting defeaters contradict the target directly; undercutting
    defeaters attack the inference it participates in.  `hidden` tucks a
    withdrawn defeater out of rendered views while keeping the record.
    """

    id: NodeId
    kind: DefeaterKind
    target: NodeId
    statement: str
    state: DefeaterState = DefeaterState.OPEN
    resolution_ref: NodeId | None = None
    hidden: bool = False

    def __post_init__(self) -> None:
        if not self.id:
            raise StructuralError("defeater id must be non-empty")
        if self.hidden and self.state is not DefeaterState.WITHDRAWN:
            raise StructuralError(
                f"defeater {self.id}: only withdrawn defeaters can be hidden"
            )


Node = ClaimNode | BlockNode | EvidenceNode | Defeater


@dataclass(frozen=True, slots=True)
class Edge:
    source: NodeId
    target: NodeId
    kind: EdgeKind


@dataclass(frozen=True)
class CaseGraph:
    """An assembled case: nodes, edges and the designated root claims.

    Construction performs structural checks only.  A structurally sound
    graph may still violate argumentation rules; run `validate` for
    those.
    """

    title: str
    nodes: Mapping[NodeId, Node]
    edges: tuple[Edge, ...]
    roots: tuple[NodeId, ...]

    def __post_init__(self) -> None:
        # Edges carry no semantic order; store them sorted so that two
        # graphs assembled from differently ordered sources compare equal.
        object.__setattr__(
            self,
            "edges",
            tuple(sorted(self.edges, key=lambda e: (e.source, e.target, e.kind.value))),
        )
        for node_id, node in self.nodes.items():
            if node_id != node.id:
                raise StructuralError(
                    f"node key {node_id!r} does not match node id {node.id!r}"
                )
        seen: set[Edge] = set()
        for edge in self.edges:
            if edge.source not in self.nodes:
                raise StructuralError(f"edge references unknown node {edge.source!r}")
            if edge.target not in self.nodes:
                raise StructuralError(f"edge references unknown node {edge.target!r}")
            if edge in seen:
                raise StructuralError(
                    f"duplicate edge {edge.source} -> {edge.target} ({edge.kind.value})"
                )
            seen.add(edge)
        self._check_root_claims()
        self._check_side_claim_links()
        self._check_defeater_links()

    def _check_root_claims(self) -> None:
        if len(set(self.roots)) != len(self.roots):
            raise StructuralError("duplicate root ids")
        for root in self.roots:
            node = self.nodes.get(root)
            if node is None:
                raise StructuralError(f"root {root!r} is not a node in the graph")
            if not isinstance(node, ClaimNode):
                raise StructuralError(f"root {root!r} is not a claim")

    def _check_side_claim_links(self) -> None:
        justify_targets: dict[NodeId, NodeId] = {}
        for edge in self.edges:
            if edge.kind is not EdgeKind.JUSTIFIES:
                continue
            if not isinstance(self.nodes[edge.source], ClaimNode):
                raise StructuralError(
                    f"justifies edge from {edge.source!r}, which is not a claim"
                )
            block = self.nodes[edge.target]
            if not isinstance(block, BlockNode):
                raise StructuralError(
                    f"justifies edge into {edge.target!r}, which is not a block"
                )
            if block.side_claim != edge.source:
                raise StructuralError(
                    f"block {block.id} names side claim {block.side_claim!r} "
                    f"but is justified by {edge.source!r}"
                )
            if edge.target in justify_targets:
                raise StructuralError(f"block {edge.target} has two justifies edges")
            justify_targets[edge.target] = edge.source
        for node in self.nodes.values():
            if isinstance(node, BlockNode) and node.side_claim is not None:
                if node.id not in justify_targets:
                    raise StructuralError(
                        f"block {node.id} names side claim {node.side_claim} "
                        "but the justifies edge is missing"
                    )

    def _check_defeater_links(self) -> None:
        defeat_sources: dict[NodeId, NodeId] = {}
        for edge in self.edges:
            if edge.kind is not EdgeKind.DEFEATS:
                continue
            source = self.nodes[edge.source]
            if isinstance(source, Defeater):
                if source.target != edge.target:
                    raise StructuralError(
                        f"defeater {source.id} targets {source.target!r} but its "
                        f"defeats edge points at {edge.target!r}"
                    )
                if edge.source in defeat_sources:
                    raise StructuralError(
                        f"defeater {edge.source} has two defeats edges"
                    )
                defeat_sources[edge.source] = edge.target
            # A defeats edge from a non-defeater is representable; R8
            # reports it as a diagnostic rather than refusing the graph.
        for node in self.nodes.values():
            if isinstance(node, Defeater) and node.id not in defeat_sources:
                raise StructuralError(
                    f"defeater {node.id} has no defeats edge for target {node.target}"
                )

    # -- Derived views -------------------------------------------------

    @cached_property
    def _support_children(self) -> dict[NodeId, tuple[NodeId, ...]]:
        acc: dict[NodeId, list[NodeId]] = {node_id: [] for node_id in self.nodes}
        for edge in self.edges:
            if edge.kind is EdgeKind.SUPPORTS:
                acc[edge.target].append(edge.source)
        return {k: tuple(v) for k, v in acc.items()}

    @cached_property
    def _support_parents(self) -> dict[NodeId, tuple[NodeId, ...]]:
        acc: dict[NodeId, list[NodeId]] = {node_id: [] for node_id in self.nodes}
        for edge in self.edges:
            if edge.kind is EdgeKind.SUPPORTS:
                acc[edge.source].append(edge.target)
        return {k: tuple(v) for k, v in acc.items()}

    @cached_property
    def _defeaters_by_target(self) -> dict[NodeId, tuple[Defeater, ...]]:
        acc: dict[NodeId, list[Defeater]] = {}
        for node in self.nodes.values():
            if isinstance(node, Defeater) and node.target in self.nodes:
                acc.setdefault(node.target, []).append(node)
        return {k: tuple(sorted(v, key=lambda d: d.id)) for k, v in acc.items()}

    def supporters_of(self, node_id: NodeId) -> tuple[NodeId, ...]:
        """Ids of nodes with a supports edge into `node_id`."""
        return self._support_children.get(node_id, ())

    def supported_by(self, node_id: NodeId) -> tuple[NodeId, ...]:
        """Ids of nodes that `node_id` supports (its parents)."""
        return self._support_parents.get(node_id, ())

    def defeaters_of(self, node_id: NodeId) -> tuple[Defeater, ...]:
        return self._defeaters_by_target.get(node_id, ())

    def claims(self) -> Iterable[ClaimNode]:
        return (n for n in self.nodes.values() if isinstance(n, ClaimNode))

    def blocks(self) -> Iterable[BlockNode]:
        return (n for n in self.nodes.values() if isinstance(n, BlockNode))

    def evidence(self) -> Iterable[EvidenceNode]:
        return (n for n in self.nodes.values() if isinstance(n, EvidenceNode))

    def defeaters(self) -> Iterable[Defeater]:
        return (n for n in self.nodes.values() if isinstance(n, Defeater))

    def with_nodes(self, replacements: Mapping[NodeId, Node]) -> "CaseGraph":
        """A copy of the graph with the given nodes swapped in."""
        nodes = dict(self.nodes)
        nodes.update(replacements)
        return CaseGraph(self.title, nodes, self.edges, self.roots)


def build_graph(
    title: str,
    nodes: Iterable[Node],
    edges: Iterable[Edge],
    roots: Iterable[NodeId],
) -> CaseGraph:
    """Assemble a CaseGraph from node and edge sequences.

    Raises:
        StructuralError: On duplicate ids or any inconsistency that
            `CaseGraph.__post_init__` rejects.
    """
    node_map: dict[NodeId, Node] = {}
    for node in nodes:
        if node.id in node_map:
            raise StructuralError(f"duplicate node id {node.id!r}")
        node_map[node.id] = node
    return CaseGraph(title, node_map, tuple(edges), tuple(roots))


# ---------------------------------------------------------------------------
# Validation


class Severity(enum.Enum):
    ERROR = "error"
    WARNING = "warning"


@dataclass(frozen=True, slots=True)
class Diagnostic:
    code: str
    severity: Severity
    node: NodeId | None
    message: str


def _support_cycle_components(graph: CaseGraph) -> list[list[NodeId]]:
    """Strongly connected components of size > 1 (plus self loops) over
    supports and justifies edges, using an iterative Tarjan walk."""
    adjacency: dict[NodeId, list[NodeId]] = {node_id: [] for node_id in graph.nodes}
    self_loops: set[NodeId] = set()
    for edge in graph.edges:
        if edge.kind is EdgeKind.DEFEATS:
            continue
        adjacency[edge.source].append(edge.target)
        if edge.source == edge.target:
            self_loops.add(edge.source)

    index: dict[NodeId, int] = {}
    lowlink: dict[NodeId, int] = {}
    on_stack: set[NodeId] = set()
    stack: list[NodeId] = []
    counter = 0
    components: list[list[NodeId]] = []

    for start in graph.nodes:
        if start in index:
            continue
        work: list[tuple[NodeId, int]] = [(start, 0)]
        while work:
            node, child_pos = work[-1]
            if child_pos == 0:
                index[node] = lowlink[node] = counter
                counter += 1
                stack.append(node)
                on_stack.add(node)
            advanced = False
            neighbours = adjacency[node]
            while child_pos < len(neighbours):
                nxt = neighbours[child_pos]
                child_pos += 1
                if nxt not in index:
                    work[-1] = (node, child_pos)
                    work.append((nxt, 0))
                    advanced = True
                    break
                if nxt in on_stack:
                    lowlink[node] = min(lowlink[node], index[nxt])
            if advanced:
                continue
            work.pop()
            if lowlink[node] == index[node]:
                component: list[NodeId] = []
                while True:
                    member = stack.pop()
                    on_stack.discard(member)
                    component.append(member)
                    if member == node:
                        break
                if len(component) > 1 or component[0] in self_loops:
                    components.append(sorted(component))
            if work:
                parent, _ = work[-1]
                lowlink[parent] = min(lowlink[parent], lowlink[node])
    return components


def validate(graph: CaseGraph) -> list[Diagnostic]:
    """Check a graph against the argumentation rule catalog.

    Returns:
        Diagnostics sorted by (code, node id).  Errors mean the argument
        structure is unsound; warnings flag weak spots that are allowed
        to stand.
    """
    out: list[Diagnostic] = []

    def err(code: str, node: NodeId | None, message: str) -> None:
        out.append(Diagnostic(code, Severity.ERROR, node, message))

    def warn(code: str, node: NodeId | None, message: str) -> None:
        out.append(Diagnostic(code, Severity.WARNING, node, message))

    # 1. The support structure (supports + justifies) must be acyclic.
    for component in _support_cycle_components(graph):
        loop = " -> ".join(component + [component[0]])
        err("E_CYCLE", component[0], f"support structure contains a cycle: {loop}")

    for node in graph.nodes.values():
        if isinstance(node, BlockNode):
            parent_claims = [
                p for p in graph.supported_by(node.id)
                if isinstance(graph.nodes[p], ClaimNode)
            ]
            child_claims = [
                c for c in graph.supporters_of(node.id)
                if isinstance(graph.nodes[c], ClaimNode)
            ]
            child_evidence = [
                c for c in graph.supporters_of(node.id)
                if isinstance(graph.nodes[c], EvidenceNode)
            ]

            # 2. Every block supports exactly one parent claim.
            if len(parent_claims) != 1 or len(graph.supported_by(node.id)) != 1:
                err(
                    "E_BLOCK_PARENT",
                    node.id,
                    f"block {node.id} must support exactly one parent claim, "
                    f"found {len(graph.supported_by(node.id))}",
                )

            # 3-6. Arity rules per block kind.
            if node.kind is BlockKind.DECOMPOSITION and len(child_claims) < 2:
                err(
                    "E_DECOMP_ARITY",
                    node.id,
                    f"decomposition block {node.id} needs at least two child "
                    f"claims, found {len(child_claims)}",
                )
            if node.kind in (BlockKind.SUBSTITUTION, BlockKind.CONCRETION):
                if len(child_claims) != 1:
                    err(
                        "E_SUBST_ARITY",
                        node.id,
                        f"{node.kind.value} block {node.id} needs exactly one "
                        f"child claim, found {len(child_claims)}",
                    )
            if node.kind is BlockKind.EVIDENCE_INCORPORATION and not child_evidence:
                err(
                    "E_EVID_ARITY",
                    node.id,
                    f"evidence incorporation block {node.id} has no evidence",
                )
            if node.kind is BlockKind.CALCULATION and not graph.supporters_of(node.id):
                err(
                    "E_CALC_ARITY",
                    node.id,
                    f"calculation block {node.id} has no inputs",
                )

            # W1. Blocks should carry a side claim justifying the step.
            if node.side_claim is None:
                warn(
                    "W_NO_SIDECLAIM",
                    node.id,
                    f"block {node.id} has no side claim",
                )

        elif isinstance(node, EvidenceNode):
            # 7. Evidence may only feed evidence incorporation or
            #    calculation blocks, and must feed at least one.
            parents = graph.supported_by(node.id)
            if not parents:
                err(
                    "E_EVID_PLACEMENT",
                    node.id,
                    f"evidence {node.id} is not attached to any block",
                )
            for parent in parents:
                target = graph.nodes[parent]
                ok = isinstance(target, BlockNode) and target.kind in (
                    BlockKind.EVIDENCE_INCORPORATION,
                    BlockKind.CALCULATION,
                )
                if not ok:
                    err(
                        "E_EVID_PLACEMENT",
                        node.id,
                        f"evidence {node.id} supports {parent}, which is not an "
                        "evidence incorporation or calculation block",
                    )

            # W3. Evidence should have a trustworthiness subcase.
            if node.trustworthiness_subcase is None:
                warn(
                    "W_EVID_TRUST",
                    node.id,
                    f"evidence {node.id} has no trustworthiness subcase",
                )

        elif isinstance(node, ClaimNode):
            # W2. A normal claim with no support is a disguised assertion.
            has_support = any(
                isinstance(graph.nodes[c], BlockNode)
                for c in graph.supporters_of(node.id)
            )
            if node.kind is ClaimKind.NORMAL and not has_support:
                warn(
                    "W_ASSERTION",
                    node.id,
                    f"claim {node.id} has no supporting block and is not "
                    "marked as an assumption or assertion",
                )

        elif isinstance(node, Defeater):
            # 9. A mitigated defeater must point at its resolution.
            if node.state is DefeaterState.MITIGATED:
                resolution = (
                    graph.nodes.get(node.resolution_ref)
                    if node.resolution_ref is not None
                    else None
                )
                if not isinstance(resolution, (ClaimNode, EvidenceNode)):
                    err(
                        "E_DEFEAT_RES",
                        node.id,
                        f"mitigated defeater {node.id} must reference a claim "
                        "or evidence node as its resolution",
                    )

    # 8. Only defeaters may be the source of a defeats edge.
    for edge in graph.edges:
        if edge.kind is EdgeKind.DEFEATS:
            if not isinstance(graph.nodes[edge.source], Defeater):
                err(
                    "E_DEFEAT_SRC",
                    edge.source,
                    f"defeats edge from {edge.source}, which is not a defeater",
                )

    out.sort(key=lambda d: (d.code, d.node or ""))
    return out


def errors_of(diagnostics: Iterable[Diagnostic]) -> list[Diagnostic]:
    return [d for d in diagnostics if d.severity is Severity.ERROR]


# ---------------------------------------------------------------------------
# Confidence propagation

ConfidenceCalculus = Callable[[Sequence[Confidence]], Confidence]


def weakest_link(values: Sequence[Confidence]) -> Confidence:
    """Default calculus: a combination is only as strong as its weakest input."""
    return min(values)


def propagate_confidence(
    graph: CaseGraph,
    calculus: ConfidenceCalculus = weakest_link,
) -> dict[NodeId, Confidence]:
    """Propagate confidence from leaves to roots.

    Leaf claims contribute their `intrinsic_confidence` (ADEQUATE when
    unset) and evidence always contributes ADEQUATE.  Every other node
    combines its children through `calculus`.  Defeaters then cap the
    result: any open defeater forces INSUFFICIENT, and an accepted
    residual defeater knocks the combined level down one step.

    Args:
        graph: A case that validates with zero errors.
        calculus: Combiner applied to child confidences.

    Returns:
        Confidence for every claim, block and evidence node.

    Raises:
        ValueError: If the graph has validation errors.
    """
    errors = errors_of(validate(graph))
    if errors:
        listing = "; ".join(f"{d.code} {d.node or '-'}" for d in errors)
        raise ValueError(f"cannot propagate confidence over an invalid case: {listing}")

    dependencies: dict[NodeId, list[NodeId]] = {
        node_id: []
        for node_id, node in graph.nodes.items()
        if not isinstance(node, Defeater)
    }
    for edge in graph.edges:
        if edge.kind is EdgeKind.SUPPORTS or edge.kind is EdgeKind.JUSTIFIES:
            dependencies[edge.target].append(edge.source)

    result: dict[NodeId, Confidence] = {}
    for node_id in TopologicalSorter(dependencies).static_order():
        node = graph.nodes[node_id]
        children = dependencies[node_id]
        if children:
            combined = calculus([result[c] for c in children])
        elif isinstance(node, ClaimNode):
            combined = (
                node.intrinsic_confidence
                if node.intrinsic_confidence is not None
                else Confidence.ADEQUATE
            )
        else:
            combined = Confidence.ADEQUATE
        result[node_id] = _apply_defeaters(graph, node_id, combined)
    return result


def _apply_defeaters(
    graph: CaseGraph, node_id: NodeId, combined: Confidence
) -> Confidence:
    attackers = graph.defeaters_of(node_id)
    if any(d.state is DefeaterState.OPEN for d in attackers):
        return Confidence.INSUFFICIENT
    if any(d.state is DefeaterState.RESIDUAL_ACCEPTED for d in attackers):
        return Confidence(max(int(combined) - 1, 0))
    return combined


# ---------------------------------------------------------------------------
# Defeater lifecycle

HIDE = "hidden"

_LEGAL_TRANSITIONS = {
    (DefeaterState.OPEN, DefeaterState.MITIGATED),
    (DefeaterState.OPEN, DefeaterState.WITHDRAWN),
    (DefeaterState.OPEN, DefeaterState.RESIDUAL_ACCEPTED),
    (DefeaterState.MITIGATED, DefeaterState.OPEN),
}


def transition_defeater(
    graph: CaseGraph,
    defeater_id: NodeId,
    new_state: DefeaterState | str,
    resolution_ref: NodeId | None = None,
) -> CaseGraph:
    """Move a defeater through its lifecycle, returning a new graph.

    Legal moves: open to mitigated (requires `resolution_ref` naming a
    claim or evidence node), open to withdrawn, open to residual_accepted,
    mitigated back to open (the resolution reference is cleared), and
    withdrawn to the pseudo-state "hidden" which sets the hidden flag.

    Raises:
        KeyError: If `defeater_id` is not a defeater in the graph.
        ValueError: On an illegal transition or a bad resolution.
    """
    node = graph.nodes.get(defeater_id)
    if not isinstance(node, Defeater):
        raise KeyError(f"{defeater_id!r} is not a defeater in this case")

    if new_state == HIDE:
        if node.state is not DefeaterState.WITHDRAWN:
            raise ValueError(
                f"illegal defeater transition {node.state.value} -> hidden"
            )
        if resolution_ref is not None:
            raise ValueError("hiding a defeater does not take a resolution")
        return graph.with_nodes({defeater_id: replace(node, hidden=True)})

    if isinstance(new_state, str):
        try:
            new_state = DefeaterState(new_state)
        except ValueError:
            raise ValueError(f"unknown defeater state {new_state!r}") from None

    if (node.state, new_state) not in _LEGAL_TRANSITIONS:
        raise ValueError(
            f"illegal defeater transition {node.state.value} -> {new_state.value}"
        )

    if new_state is DefeaterState.MITIGATED:
        if resolution_ref is None:
            raise ValueError(
                f"mitigating defeater {defeater_id} requires a resolution "
                "naming a claim or evidence node"
            )
        resolution = graph.nodes.get(resolution_ref)
        if not isinstance(resolution, (ClaimNode, EvidenceNode)):
            raise ValueError(
                f"resolution {resolution_ref!r} must name a claim or evidence "
                "node in the case"
            )
        updated = replace(node, state=new_state, resolution_ref=resolution_ref)
    else:
        if resolution_ref is not None:
            raise ValueError("a resolution is only taken when mitigating")
        updated = replace(node, state=new_state, resolution_ref=None)

    return graph.with_nodes({defeater_id: updated})


# ---------------------------------------------------------------------------
# Health summary


@dataclass(frozen=True, slots=True)
class HealthReport:
    """Counts of outstanding work in a case plus the overall confidence.

    `propagated_root_confidence` is the minimum over root claims, or
    None when the case has validation errors or no roots at all.
    """

    assumptions: int
    assertions_without_support: int
    open_defeaters: int
    residual_defeaters: int
    evidence_without_trustworthiness: int
    blocks_without_side_claim: int
    propagated_root_confidence: Confidence | None


def health(graph: CaseGraph) -> HealthReport:
    """Summarize how much of the case still rests on trust."""
    assumptions = 0
    bare_assertions = 0
    for claim in graph.claims():
        if claim.kind is ClaimKind.ASSUMPTION:
            assumptions += 1
            continue
        has_support = any(
            isinstance(graph.nodes[c], BlockNode)
            for c in graph.supporters_of(claim.id)
        )
        if not has_support:
            bare_assertions += 1

    open_count = sum(1 for d in graph.defeaters() if d.state is DefeaterState.OPEN)
    residual_count = sum(
        1 for d in graph.defeaters() if d.state is DefeaterState.RESIDUAL_ACCEPTED
    )
    missing_trust = sum(
        1 for e in graph.evidence() if e.trustworthiness_subcase is None
    )
    missing_side = sum(1 for b in graph.blocks() if b.side_claim is None)

    root_confidence: Confidence | None = None
    if graph.roots and not errors_of(validate(graph)):
        propagated = propagate_confidence(graph)
        root_confidence = min(propagated[r] for r in graph.roots)

    return HealthReport(
        assumptions=assumptions,
        assertions_without_support=bare_assertions,
        open_defeaters=open_count,
        residual_defeaters=residual_count,
        evidence_without_trustworthiness=missing_trust,
        blocks_without_side_claim=missing_side,
        propagated_root_confidence=root_confidence,
    )


# ---------------------------------------------------------------------------
# Diffing


@dataclass(frozen=True, slots=True)
class CaseDiff:
    """Identity-keyed difference between two cases.

    Nodes pair up by id, edges by their (source, target, kind) triple.
    All sequences are sorted for stable output.
    """

    added_nodes: tuple[NodeId, ...]
    removed_nodes: tuple[NodeId, ...]
    modified_nodes: tuple[NodeId, ...]
    added_edges: tuple[Edge, ...]
    removed_edges: tuple[Edge, ...]

    def is_empty(self) -> bool:
        return not (
            self.added_nodes
            or self.removed_nodes
            or self.modified_nodes
            or self.added_edges
            or self.removed_edges
        )


def diff_cases(old: CaseGraph, new: CaseGraph) -> CaseDiff:
    """Compare two cases by node id and edge triple.

    Swapping the arguments swaps added and removed while leaving the
    modified set unchanged.
    """
    old_ids = set(old.nodes)
    new_ids = set(new.nodes)
    modified = sorted(
        node_id
        for node_id in old_ids & new_ids
        if old.nodes[node_id] != new.nodes[node_id]
    )
    edge_key = lambda e: (e.source, e.target, e.kind.value)
    old_edges = set(old.edges)
    new_edges = set(new.edges)
    return CaseDiff(
        added_nodes=tuple(sorted(new_ids - old_ids)),
        removed_nodes=tuple(sorted(old_ids - new_ids)),
        modified_nodes=tuple(modified),
        added_edges=tuple(sorted(new_edges - old_edges, key=edge_key)),
        removed_edges=tuple(sorted(old_edges - new_edges, key=edge_key)),
    )
