"""Reusable case templates and their defeater catalogs.

Each template is a case file with ``${NAME}`` placeholders confined to
string literals. Instantiation substitutes the parameters, parses the
result and returns the graph. The bundled manifest documents every
template's parameters, where other templates splice in, and the
catalogs of known defeaters that can be attached to an instantiation.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from functools import cache
from importlib import resources
from typing import Mapping

from ..model import CaseGraph, Defeater, DefeaterKind, DefeaterState, Edge, EdgeKind
from ..dsl import parse_case

_PLACEHOLDER = re.compile(r"\$\{([A-Z_]+)\}")


@dataclass(frozen=True, slots=True)
class TemplateInfo:
    """Listing entry: template id, required parameters, one-line description."""

    id: str
    params: tuple[str, ...]
    description: str


@dataclass(frozen=True, slots=True)
class CatalogRow:
    id: str
    kind: DefeaterKind
    target: str
    statement: str
    mitigation: str


@dataclass(frozen=True, slots=True)
class DefeaterCatalog:
    id: str
    template: str
    description: str
    rows: tuple[CatalogRow, ...]

    @property
    def anchors(self) -> tuple[str, ...]:
        return tuple(sorted({row.target for row in self.rows}))


@cache
def _manifest() -> dict:
    text = resources.files(__package__).joinpath("manifest.json").read_text("utf-8")
    return json.loads(text)


@cache
def _template_source(template_id: str) -> str:
    entry = _manifest()["templates"].get(template_id)
    if entry is None:
        known = ", ".join(sorted(_manifest()["templates"]))
        raise ValueError(f"unknown template {template_id!r}; known: {known}")
    return resources.files(__package__).joinpath(entry["file"]).read_text("utf-8")


def required_params(template_id: str) -> tuple[str, ...]:
    """Placeholder names appearing in the template, sorted."""
    return tuple(sorted(set(_PLACEHOLDER.findall(_template_source(template_id)))))


def list_templates() -> list[TemplateInfo]:
    """Stable listing of the bundled templates, ordered by id."""
    entries = _manifest()["templates"]
    return [
        TemplateInfo(tid, required_params(tid), entries[tid]["description"])
        for tid in sorted(entries)
    ]


def _escape_value(value: str) -> str:
    ## parameters land inside string literals, so escape accordingly
    return value.replace("\\", "\\\\").replace('"', '\\"').replace("\n", "\\n")


def instantiate(template_id: str, params: Mapping[str, str]) -> CaseGraph:
    """Fill a template's placeholders and parse the result.

    Args:
        template_id: One of the bundled template ids.
        params: Values for every placeholder the template uses. Extra
            keys are ignored.

    Raises:
        ValueError: For an unknown template or missing parameters.
    """
    source = _template_source(template_id)
    needed = required_params(template_id)
    missing = [name for name in needed if name not in params]
    if missing:
        raise ValueError(
            f"template {template_id!r} is missing parameters: {', '.join(missing)}"
        )
    filled = _PLACEHOLDER.sub(
        lambda m: _escape_value(str(params[m.group(1)])), source
    )
    return parse_case(filled)


def list_catalogs() -> list[DefeaterCatalog]:
    return [catalog(cid) for cid in sorted(_manifest()["catalogs"])]


def catalog(catalog_id: str) -> DefeaterCatalog:
    entry = _manifest()["catalogs"].get(catalog_id)
    if entry is None:
        known = ", ".join(sorted(_manifest()["catalogs"]))
        raise ValueError(f"unknown defeater catalog {catalog_id!r}; known: {known}")
    rows = tuple(
        CatalogRow(
            id=row["id"],
            kind=DefeaterKind(row["kind"]),
            target=row["target"],
            statement=row["statement"],
            mitigation=row["mitigation"],
        )
        for row in entry["rows"]
    )
    return DefeaterCatalog(catalog_id, entry["template"], entry["description"], rows)


def catalog_for_template(template_id: str) -> DefeaterCatalog | None:
    """The catalog whose rows anchor into the given template, if any."""
    for cid, entry in _manifest()["catalogs"].items():
        if entry["template"] == template_id:
            return catalog(cid)
    return None


def attach_catalog(graph: CaseGraph, catalog_id: str) -> CaseGraph:
    """Attach a catalog's rows to a case as open defeaters.

    Every row becomes one open defeater aimed at its anchor, with the
    suggested mitigation appended to the statement. Rows whose defeater
    id is already present are skipped, so attaching twice changes
    nothing.

    Raises:
        ValueError: If any anchor id is absent from the graph (all
            missing anchors are listed), or a row id collides with a
            non-defeater node.
    """
    cat = catalog(catalog_id)
    missing = sorted({row.target for row in cat.rows} - set(graph.nodes))
    if missing:
        raise ValueError(
            f"catalog {catalog_id!r} anchors missing from the case: "
            + ", ".join(missing)
        )

    new_nodes = dict(graph.nodes)
    new_edges = list(graph.edges)
    for row in cat.rows:
        existing = new_nodes.get(row.id)
        if existing is not None:
            if not isinstance(existing, Defeater):
                raise ValueError(
                    f"catalog row {row.id} collides with a non-defeater node"
                )
            continue
        defeater = Defeater(
            id=row.id,
            kind=row.kind,
            target=row.target,
            statement=f"{row.statement} Mitigation: {row.mitigation}",
            state=DefeaterState.OPEN,
        )
        new_nodes[defeater.id] = defeater
        new_edges.append(Edge(defeater.id, defeater.target, EdgeKind.DEFEATS))
    return CaseGraph(graph.title, new_nodes, tuple(new_edges), graph.roots)
