"""Textual notation for safety cases.

The format nests argument blocks under the claims they support, so a
tree-shaped case reads top down:

    case "Pump controller" {
      claim C1 "The controller is acceptably safe" {
        block decompose B1 "Split by hazard" side claim S1 "Hazard list is complete" {
          claim C2 "Overpressure is mitigated"
          claim C3 "Dry running is mitigated"
        }
      }
      defeater D1 undercutting targets B1 "Hazard log predates the redesign" state open
    }

`#` starts a comment that runs to the end of the line.  Strings accept
the escapes \\" \\\\ and \\n.  `parse_case` either returns a complete
graph or raises ParseError; it never hands back a partial case.
"""

from __future__ import annotations

from dataclasses import dataclass

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
    NodeId,
)

BLOCK_KEYWORDS = {
    "decompose": BlockKind.DECOMPOSITION,
    "substitute": BlockKind.SUBSTITUTION,
    "evidence": BlockKind.EVIDENCE_INCORPORATION,
    "concrete": BlockKind.CONCRETION,
    "calculate": BlockKind.CALCULATION,
}
KEYWORD_FOR_BLOCK = {v: k for k, v in BLOCK_KEYWORDS.items()}

STATE_KEYWORDS = {
    "open": DefeaterState.OPEN,
    "mitigated": DefeaterState.MITIGATED,
    "withdrawn": DefeaterState.WITHDRAWN,
    "residual": DefeaterState.RESIDUAL_ACCEPTED,
}
KEYWORD_FOR_STATE = {v: k for k, v in STATE_KEYWORDS.items()}


@dataclass(frozen=True, slots=True)
class Span:
    """Source location of a token: 1-based line and column plus length."""

    line: int
    column: int
    length: int


class ParseError(Exception):
    def __init__(self, span: Span, expected: str, found: str):
        self.span = span
        self.expected = expected
        self.found = found
        super().__init__(
            f"line {span.line}, column {span.column}: expected {expected}, "
            f"found {found}"
        )


_PUNCT = {"{", "}", "[", "]", "=", ","}


@dataclass(frozen=True, slots=True)
class _Token:
    type: str  # "word", "string", "punct", "eof"
    value: str
    span: Span


def _is_word_start(ch: str) -> bool:
    return ch.isalpha()


def _is_word_char(ch: str) -> bool:
    return ch.isalnum() or ch in "_.-"


def _tokenize(text: str) -> list[_Token]:
    tokens: list[_Token] = []
    line, col = 1, 1
    i = 0
    n = len(text)
    while i < n:
        ch = text[i]
        if ch == "\n":
            i += 1
            line += 1
            col = 1
            continue
        if ch in " \t\r":
            i += 1
            col += 1
            continue
        if ch == "#":
            while i < n and text[i] != "\n":
                i += 1
            continue
        if ch in _PUNCT:
            tokens.append(_Token("punct", ch, Span(line, col, 1)))
            i += 1
            col += 1
            continue
        if ch == '"':
            start_line, start_col = line, col
            i += 1
            col += 1
            parts: list[str] = []
            raw_len = 1
            while True:
                if i >= n or text[i] == "\n":
                    raise ParseError(
                        Span(start_line, start_col, raw_len),
                        "closing quote",
                        "end of line" if i < n else "end of input",
                    )
                c = text[i]
                if c == '"':
                    i += 1
                    col += 1
                    raw_len += 1
                    break
                if c == "\\":
                    if i + 1 >= n:
                        raise ParseError(
                            Span(line, col, 1), "escape character", "end of input"
                        )
                    esc = text[i + 1]
                    if esc == '"':
                        parts.append('"')
                    elif esc == "\\":
                        parts.append("\\")
                    elif esc == "n":
                        parts.append("\n")
                    else:
                        raise ParseError(
                            Span(line, col, 2),
                            'one of \\" \\\\ \\n',
                            f"\\{esc}",
                        )
                    i += 2
                    col += 2
                    raw_len += 2
                    continue
                parts.append(c)
                i += 1
                col += 1
                raw_len += 1
            tokens.append(
                _Token("string", "".join(parts), Span(start_line, start_col, raw_len))
            )
            continue
        if _is_word_start(ch):
            start_col = col
            j = i
            while j < n and _is_word_char(text[j]):
                j += 1
            word = text[i:j]
            tokens.append(_Token("word", word, Span(line, start_col, len(word))))
            col += j - i
            i = j
            continue
        raise ParseError(Span(line, col, 1), "a token", repr(ch))
    tokens.append(_Token("eof", "", Span(line, col, 0)))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self._tokens = _tokenize(text)
        self._pos = 0
        self._nodes: dict[NodeId, Node] = {}
        self._spans: dict[NodeId, Span] = {}
        self._edges: list[Edge] = []
        self._roots: list[NodeId] = []
        # Defeater targets may point forward; checked once the whole
        # case has been read.
        self._pending_targets: list[tuple[NodeId, str, Span]] = []

    # -- token plumbing -------------------------------------------------

    def _peek(self, ahead: int = 0) -> _Token:
        return self._tokens[min(self._pos + ahead, len(self._tokens) - 1)]

    def _next(self) -> _Token:
        tok = self._tokens[self._pos]
        if tok.type != "eof":
            self._pos += 1
        return tok

    @staticmethod
    def _describe(tok: _Token) -> str:
        if tok.type == "eof":
            return "end of input"
        return repr(tok.value)

    def _fail(self, tok: _Token, expected: str) -> ParseError:
        return ParseError(tok.span, expected, self._describe(tok))

    def _expect_word(self, *keywords: str) -> _Token:
        tok = self._next()
        if tok.type != "word" or (keywords and tok.value not in keywords):
            what = " or ".join(f"'{k}'" for k in keywords) if keywords else "a name"
            raise self._fail(tok, what)
        return tok

    def _expect_punct(self, symbol: str) -> _Token:
        tok = self._next()
        if tok.type != "punct" or tok.value != symbol:
            raise self._fail(tok, f"'{symbol}'")
        return tok

    def _expect_string(self, what: str) -> str:
        tok = self._next()
        if tok.type != "string":
            raise self._fail(tok, what)
        return tok.value

    def _expect_id(self, what: str) -> _Token:
        tok = self._next()
        if tok.type != "word":
            raise self._fail(tok, what)
        return tok

    def _at_word(self, *keywords: str) -> bool:
        tok = self._peek()
        return tok.type == "word" and tok.value in keywords

    def _at_punct(self, symbol: str) -> bool:
        tok = self._peek()
        return tok.type == "punct" and tok.value == symbol

    # -- registration ---------------------------------------------------

    def _register(self, node: Node, span: Span) -> None:
        if node.id in self._nodes:
            raise ParseError(
                span, f"a fresh id (id {node.id!r} is already defined)", repr(node.id)
            )
        self._nodes[node.id] = node
        self._spans[node.id] = span

    # -- grammar --------------------------------------------------------

    def parse(self) -> CaseGraph:
        self._expect_word("case")
        title = self._expect_string("the case title string")
        self._expect_punct("{")
        while not self._at_punct("}"):
            tok = self._peek()
            if tok.type != "word":
                raise self._fail(tok, "'claim', 'evidence', 'defeater' or '}'")
            if tok.value == "claim":
                claim_id = self._parse_claim()
                self._roots.append(claim_id)
            elif tok.value == "evidence":
                self._parse_evidence()
            elif tok.value == "defeater":
                self._parse_defeater()
            else:
                raise self._fail(tok, "'claim', 'evidence', 'defeater' or '}'")
        self._expect_punct("}")
        tok = self._next()
        if tok.type != "eof":
            raise self._fail(tok, "end of input")

        for defeater_id, target, span in self._pending_targets:
            if target not in self._nodes:
                raise ParseError(
                    span,
                    f"the target of defeater {defeater_id} to name a node "
                    "defined in this case",
                    repr(target),
                )
        return CaseGraph(title, self._nodes, tuple(self._edges), tuple(self._roots))

    def _parse_claim(self) -> NodeId:
        self._expect_word("claim")
        id_tok = self._expect_id("a claim id")
        statement = self._expect_string("the claim statement string")
        kind = ClaimKind.NORMAL
        confidence: Confidence | None = None
        if self._at_punct("["):
            attrs = self._parse_attrs({"kind", "confidence"})
            if "kind" in attrs:
                value, span = attrs["kind"]
                try:
                    kind = ClaimKind(value)
                except ValueError:
                    raise ParseError(
                        span, "one of normal, assumption, assertion", repr(value)
                    ) from None
            if "confidence" in attrs:
                value, span = attrs["confidence"]
                try:
                    confidence = Confidence.from_label(value)
                except ValueError:
                    raise ParseError(
                        span, "one of insufficient, adequate, high", repr(value)
                    ) from None
        claim = ClaimNode(id_tok.value, statement, kind, confidence)
        self._register(claim, id_tok.span)
        if self._at_punct("{"):
            self._expect_punct("{")
            while not self._at_punct("}"):
                block_id = self._parse_block()
                self._edges.append(Edge(block_id, claim.id, EdgeKind.SUPPORTS))
            self._expect_punct("}")
        return claim.id

    def _parse_block(self) -> NodeId:
        self._expect_word("block")
        kind_tok = self._expect_word(*BLOCK_KEYWORDS)
        kind = BLOCK_KEYWORDS[kind_tok.value]
        id_tok = self._expect_id("a block id")
        description = self._expect_string("the block description string")

        side_claim: NodeId | None = None
        if self._at_word("side"):
            self._next()
            side_claim = self._parse_side_claim()

        block = BlockNode(id_tok.value, kind, description, side_claim)
        self._register(block, id_tok.span)
        if side_claim is not None:
            self._edges.append(Edge(side_claim, block.id, EdgeKind.JUSTIFIES))

        self._expect_punct("{")
        while not self._at_punct("}"):
            tok = self._peek()
            if tok.type == "word" and tok.value == "claim":
                child = self._parse_claim()
            elif tok.type == "word" and tok.value == "evidence":
                child = self._parse_evidence()
            else:
                raise self._fail(tok, "'claim', 'evidence' or '}'")
            self._edges.append(Edge(child, block.id, EdgeKind.SUPPORTS))
        self._expect_punct("}")
        return block.id

    def _parse_side_claim(self) -> NodeId:
        """Parse the claim after 'side'.

        A `{` after the side claim is ambiguous: it may open the side
        claim's own body or the enclosing block's child list.  Side
        claim bodies contain blocks and child lists start with claims,
        evidence or `}`, so one token of lookahead past the brace
        settles it.
        """
        self._expect_word("claim")
        id_tok = self._expect_id("the side claim id")
        statement = self._expect_string("the side claim statement string")
        kind = ClaimKind.NORMAL
        confidence: Confidence | None = None
        if self._at_punct("["):
            attrs = self._parse_attrs({"kind", "confidence"})
            if "kind" in attrs:
                value, span = attrs["kind"]
                try:
                    kind = ClaimKind(value)
                except ValueError:
                    raise ParseError(
                        span, "one of normal, assumption, assertion", repr(value)
                    ) from None
            if "confidence" in attrs:
                value, span = attrs["confidence"]
                try:
                    confidence = Confidence.from_label(value)
                except ValueError:
                    raise ParseError(
                        span, "one of insufficient, adequate, high", repr(value)
                    ) from None
        claim = ClaimNode(id_tok.value, statement, kind, confidence)
        self._register(claim, id_tok.span)
        if self._at_punct("{") and self._peek(1).type == "word" \
                and self._peek(1).value == "block":
            self._expect_punct("{")
            while not self._at_punct("}"):
                block_id = self._parse_block()
                self._edges.append(Edge(block_id, claim.id, EdgeKind.SUPPORTS))
            self._expect_punct("}")
        return claim.id

    def _parse_evidence(self) -> NodeId:
        self._expect_word("evidence")
        id_tok = self._expect_id("an evidence id")
        description = self._expect_string("the evidence description string")
        trust: NodeId | None = None
        if self._at_punct("["):
            attrs = self._parse_attrs({"trust"})
            if "trust" in attrs:
                trust = attrs["trust"][0]
        node = EvidenceNode(id_tok.value, description, trust)
        self._register(node, id_tok.span)
        return node.id

    def _parse_defeater(self) -> None:
        self._expect_word("defeater")
        id_tok = self._expect_id("a defeater id")
        kind_tok = self._expect_word("rebutting", "undercutting")
        self._expect_word("targets")
        target_tok = self._expect_id("the id of the node this defeater attacks")
        statement = self._expect_string("the defeater statement string")
        self._expect_word("state")
        state_tok = self._expect_word(*STATE_KEYWORDS)
        state = STATE_KEYWORDS[state_tok.value]

        resolution: NodeId | None = None
        if self._at_word("by"):
            self._next()
            resolution = self._expect_id("the resolution id after 'by'").value

        hidden = False
        if self._at_word("hidden"):
            hidden_tok = self._next()
            if state is not DefeaterState.WITHDRAWN:
                raise ParseError(
                    hidden_tok.span,
                    "'hidden' only on a withdrawn defeater",
                    f"state {state_tok.value}",
                )
            hidden = True

        node = Defeater(
            id_tok.value,
            DefeaterKind(kind_tok.value),
            target_tok.value,
            statement,
            state,
            resolution,
            hidden,
        )
        self._register(node, id_tok.span)
        self._edges.append(Edge(node.id, node.target, EdgeKind.DEFEATS))
        self._pending_targets.append((node.id, target_tok.value, target_tok.span))

    def _parse_attrs(self, allowed: set[str]) -> dict[str, tuple[str, Span]]:
        self._expect_punct("[")
        attrs: dict[str, tuple[str, Span]] = {}
        while True:
            key_tok = self._expect_id("an attribute key")
            if key_tok.value not in allowed:
                raise ParseError(
                    key_tok.span,
                    "one of " + ", ".join(sorted(allowed)),
                    repr(key_tok.value),
                )
            if key_tok.value in attrs:
                raise ParseError(
                    key_tok.span,
                    f"each attribute at most once ({key_tok.value!r} repeats)",
                    repr(key_tok.value),
                )
            self._expect_punct("=")
            value_tok = self._expect_id("an attribute value")
            attrs[key_tok.value] = (value_tok.value, value_tok.span)
            if self._at_punct(","):
                self._next()
                continue
            self._expect_punct("]")
            return attrs


def parse_case(text: str) -> CaseGraph:
    """Parse case text into a graph.

    Raises:
        ParseError: On any lexical, syntactic or referential problem.
            Nothing is returned for bad input; there is no partial graph.
    """
    return _Parser(text).parse()


# ---------------------------------------------------------------------------
# Canonical printing


class PrintError(ValueError):
    """The graph cannot be written in the nested notation.

    The text format expresses trees: every claim sits in exactly one
    place and sharing a child between blocks has no syntax.
    """


def _escape(value: str) -> str:
    return (
        value.replace("\\", "\\\\").replace('"', '\\"').replace("\n", "\\n")
    )


class _Printer:
    def __init__(self, graph: CaseGraph):
        self.graph = graph
        self.lines: list[str] = []
        self._side_claims = {
            b.side_claim for b in graph.blocks() if b.side_claim is not None
        }
        self._check_tree_shape()

    def _check_tree_shape(self) -> None:
        graph = self.graph
        side_of: dict[NodeId, list[NodeId]] = {}
        for block in graph.blocks():
            if block.side_claim is not None:
                side_of.setdefault(block.side_claim, []).append(block.id)
        for node in graph.nodes.values():
            if isinstance(node, Defeater):
                continue
            parents = graph.supported_by(node.id)
            if len(parents) > 1:
                raise PrintError(
                    f"{node.id} supports {len(parents)} nodes; the text form "
                    "cannot share a child between parents"
                )
            if isinstance(node, ClaimNode):
                placements = len(parents) + len(side_of.get(node.id, []))
                if node.id in graph.roots:
                    placements += 1
                if placements != 1:
                    raise PrintError(
                        f"claim {node.id} would appear {placements} times in "
                        "the text form; it needs exactly one place"
                    )
            elif isinstance(node, BlockNode):
                if not parents:
                    raise PrintError(f"block {node.id} supports no claim")

    def render(self) -> str:
        graph = self.graph
        self.lines.append(f'case "{_escape(graph.title)}" {{')
        top_claims = sorted(graph.roots)
        top_evidence = sorted(
            e.id for e in graph.evidence() if not graph.supported_by(e.id)
        )
        for claim_id in top_claims:
            self._emit_claim(claim_id, 1)
        for evidence_id in top_evidence:
            self._emit_evidence(evidence_id, 1)
        for defeater in sorted(graph.defeaters(), key=lambda d: d.id):
            self._emit_defeater(defeater, 1)
        self.lines.append("}")
        return "\n".join(self.lines) + "\n"

    def _emit_claim(self, claim_id: NodeId, depth: int) -> None:
        graph = self.graph
        claim = graph.nodes[claim_id]
        assert isinstance(claim, ClaimNode)
        indent = "  " * depth
        head = f'{indent}claim {claim.id} "{_escape(claim.statement)}"'
        attrs: list[str] = []
        if claim.kind is not ClaimKind.NORMAL:
            attrs.append(f"kind={claim.kind.value}")
        if claim.intrinsic_confidence is not None:
            attrs.append(f"confidence={claim.intrinsic_confidence.label}")
        if attrs:
            head += " [" + ", ".join(attrs) + "]"
        blocks = sorted(
            c for c in graph.supporters_of(claim_id)
            if isinstance(graph.nodes[c], BlockNode)
        )
        if not blocks:
            self.lines.append(head)
            return
        self.lines.append(head + " {")
        for block_id in blocks:
            self._emit_block(block_id, depth + 1)
        self.lines.append(indent + "}")

    def _emit_block(self, block_id: NodeId, depth: int) -> None:
        graph = self.graph
        block = graph.nodes[block_id]
        assert isinstance(block, BlockNode)
        indent = "  " * depth
        head = (
            f"{indent}block {KEYWORD_FOR_BLOCK[block.kind]} {block.id} "
            f'"{_escape(block.description)}"'
        )
        if block.side_claim is not None:
            side = graph.nodes[block.side_claim]
            assert isinstance(side, ClaimNode)
            head += f' side claim {side.id} "{_escape(side.statement)}"'
            attrs = []
            if side.kind is not ClaimKind.NORMAL:
                attrs.append(f"kind={side.kind.value}")
            if side.intrinsic_confidence is not None:
                attrs.append(f"confidence={side.intrinsic_confidence.label}")
            if attrs:
                head += " [" + ", ".join(attrs) + "]"
            side_blocks = sorted(
                c for c in graph.supporters_of(side.id)
                if isinstance(graph.nodes[c], BlockNode)
            )
        else:
            side_blocks = []
        if side_blocks:
            # The side claim's own body comes first, then the block's
            # child list as a second brace group.
            self.lines.append(head + " {")
            for sub in side_blocks:
                self._emit_block(sub, depth + 1)
            self.lines.append(indent + "}")
            opener = indent + "{"
            empty = indent + "{ }"
        else:
            opener = head + " {"
            empty = head + " { }"
        children = sorted(graph.supporters_of(block_id))
        if not children:
            self.lines.append(empty)
            return
        self.lines.append(opener)
        for child_id in children:
            child = graph.nodes[child_id]
            if isinstance(child, ClaimNode):
                self._emit_claim(child_id, depth + 1)
            else:
                self._emit_evidence(child_id, depth + 1)
        self.lines.append(indent + "}")

    def _emit_evidence(self, evidence_id: NodeId, depth: int) -> None:
        node = self.graph.nodes[evidence_id]
        assert isinstance(node, EvidenceNode)
        line = f'{"  " * depth}evidence {node.id} "{_escape(node.description)}"'
        if node.trustworthiness_subcase is not None:
            line += f" [trust={node.trustworthiness_subcase}]"
        self.lines.append(line)

    def _emit_defeater(self, node: Defeater, depth: int) -> None:
        line = (
            f'{"  " * depth}defeater {node.id} {node.kind.value} targets '
            f'{node.target} "{_escape(node.statement)}" state '
            f"{KEYWORD_FOR_STATE[node.state]}"
        )
        if node.resolution_ref is not None:
            line += f" by {node.resolution_ref}"
        if node.hidden:
            line += " hidden"
        self.lines.append(line)


def print_case(graph: CaseGraph) -> str:
    """Render a graph in canonical text form.

    Canonical means 2-space indentation, children ordered by id and
    top-level items grouped as claims, evidence, then defeaters.
    Printing then parsing returns an equal graph whenever the roots are
    in id order (the canonical order the printer itself emits).

    Raises:
        PrintError: When the support structure is not a tree.
    """
    return _Printer(graph).render()
