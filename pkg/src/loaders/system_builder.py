"""Build and validate a typed LagrangianSystem from a raw system document"""

import logging
import re
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
from rapidfuzz import fuzz, process

from ..expr import parse
from ..models import (
    DegreeViolation,
    ExpressionSyntaxError,
    Fiber,
    FieldConfig,
    FiberMismatch,
    Graph,
    InteractionTerm,
    InvalidGraph,
    InvalidTerm,
    LagrangianSystem,
    ParseError,
    TailSpec,
    UnknownVertex,
    expression_variables,
)
from .system_file_loader import RawSection, RawStatement, RawSystemDocument, SystemFileLoader, split_option

logger = logging.getLogger(__name__)

_FIBER = re.compile(r"^(?:R(?P<dim>\d+)|(?P<circle>S1))$")
_NAME = re.compile(r"^[A-Za-z_][A-Za-z0-9_]*$")
_PATH_KEY = re.compile(r"^path\.(?P<j>[A-Za-z_][A-Za-z0-9_]*)\.(?P<k>[A-Za-z_][A-Za-z0-9_]*)$")


class SystemBuilder:
    """Turn raw sections into a validated LagrangianSystem"""

    def __init__(self, allow_ends: bool = False, suggestion_cutoff: float = 60.0):
        """Initialize builder

        Args:
            allow_ends: Accept vertices of total degree < 2 with a warning
            suggestion_cutoff: Minimum rapidfuzz score (0-100) for "did you mean" hints
        """
        self.allow_ends = allow_ends
        self.suggestion_cutoff = suggestion_cutoff
        self.warnings: List[str] = []

    def build(self, document: RawSystemDocument) -> LagrangianSystem:
        """Build the system described by a document

        Raises:
            ParseError, UnknownVertex, FiberMismatch, DegreeViolation, InvalidTerm
        """
        self.warnings = []
        graph_sections = document.of_kind("graph")
        if not graph_sections:
            raise ParseError("missing [graph] section")

        vertices, fibers, edges, tails, couplings = self._build_graph_parts(graph_sections)
        try:
            graph = Graph(tuple(vertices), tuple(edges), tuple(tails))
        except InvalidGraph as exc:
            raise ParseError(str(exc)) from None

        terms = [self._build_term(section, graph, fibers) for section in document.of_kind("term")]
        self._require_unique([t.name for t in terms], "term", document.of_kind("term"))
        configs = {}
        for section in document.of_kind("config"):
            if section.name in configs:
                raise ParseError(f"duplicate config {section.name!r}", section.line)
            configs[section.name] = self._build_config(section, graph, fibers)
        potentials, scatter_couplings = self._build_scatter(document.of_kind("scatter"), graph)

        system = LagrangianSystem(
            graph=graph,
            fibers=fibers,
            terms=tuple(terms),
            configs=configs,
            tail_couplings=couplings,
            scatter_potentials=potentials,
            scatter_couplings=scatter_couplings,
        )
        self._check_degrees(graph)
        logger.info(
            f"Built system with {len(graph.vertices)} vertices, {len(graph.edges)} edges, "
            f"{len(graph.tails)} tails and {len(terms)} terms"
        )
        return system

    # graph --------------------------------------------------------------

    def _build_graph_parts(self, sections: Sequence[RawSection]):
        vertices: List[str] = []
        fibers: Dict[str, Fiber] = {}
        edges: List[Tuple[str, str]] = []
        tails: List[TailSpec] = []
        couplings = {}
        pending_edges: List[RawStatement] = []
        pending_tails: List[RawStatement] = []

        for section in sections:
            for stmt in section.statements:
                keyword = stmt.tokens[0]
                if keyword == "vertex":
                    name, fiber = self._parse_vertex(stmt)
                    if name in fibers:
                        raise ParseError(f"vertex {name!r} declared twice", stmt.line)
                    vertices.append(name)
                    fibers[name] = fiber
                elif keyword == "edge":
                    pending_edges.append(stmt)
                elif keyword == "tail":
                    pending_tails.append(stmt)
                else:
                    raise ParseError(f"unknown graph statement {keyword!r}", stmt.line)

        seen = set()
        for stmt in pending_edges:
            if len(stmt.tokens) != 3:
                raise ParseError("expected 'edge NAME NAME'", stmt.line)
            p, q = stmt.tokens[1], stmt.tokens[2]
            for vertex in (p, q):
                self._require_vertex(vertex, vertices, stmt.line)
            if p == q:
                raise ParseError(f"self-loop at {p!r}", stmt.line)
            if frozenset((p, q)) in seen:
                raise ParseError(f"second edge between {p!r} and {q!r} (multigraphs are not supported)", stmt.line)
            seen.add(frozenset((p, q)))
            edges.append((p, q))

        for stmt in pending_tails:
            if len(stmt.tokens) < 3:
                raise ParseError("expected 'tail NAME attach=NAME [expr=\"...\"]'", stmt.line)
            name = stmt.tokens[1]
            options = dict(split_option(tok, stmt.line) for tok in stmt.tokens[2:])
            unknown = set(options) - {"attach", "expr"}
            if unknown or "attach" not in options:
                raise ParseError(f"tail options must be attach=NAME [expr=...], got {sorted(options)}", stmt.line)
            self._require_vertex(options["attach"], vertices, stmt.line)
            tails.append(TailSpec(name, options["attach"]))
            if "expr" in options:
                couplings[name] = self._parse_expression(options["expr"], stmt.line)

        return vertices, fibers, edges, tails, couplings

    def _parse_vertex(self, stmt: RawStatement) -> Tuple[str, Fiber]:
        if len(stmt.tokens) not in (2, 3) or not _NAME.match(stmt.tokens[1]):
            raise ParseError("expected 'vertex NAME [fiber=R<m>|S1]'", stmt.line)
        fiber = Fiber.euclidean(1)
        if len(stmt.tokens) == 3:
            key, value = split_option(stmt.tokens[2], stmt.line)
            match = _FIBER.match(value)
            if key != "fiber" or not match:
                raise ParseError(f"bad fiber specification {stmt.tokens[2]!r}", stmt.line)
            try:
                fiber = Fiber.circle() if match.group("circle") else Fiber.euclidean(int(match.group("dim")))
            except FiberMismatch as exc:
                raise ParseError(str(exc), stmt.line) from None
        return stmt.tokens[1], fiber

    # terms --------------------------------------------------------------

    def _build_term(self, section: RawSection, graph: Graph, fibers: Dict[str, Fiber]) -> InteractionTerm:
        vertices: Optional[List[str]] = None
        potential = None
        overrides = []
        for stmt in section.statements:
            if stmt.key == "vertices":
                vertices = [v.strip() for v in stmt.value.split(",") if v.strip()]
                for vertex in vertices:
                    self._require_vertex(vertex, graph.vertices, stmt.line)
            elif stmt.key == "expr":
                potential = self._parse_expression(stmt.value, stmt.line)
                for var in expression_variables(potential):
                    self._require_vertex(var.vertex, graph.vertices, stmt.line)
            elif _PATH_KEY.match(stmt.key):
                match = _PATH_KEY.match(stmt.key)
                walk = tuple(v.strip() for v in stmt.value.split(",") if v.strip())
                for vertex in walk:
                    self._require_vertex(vertex, graph.vertices, stmt.line)
                for a, b in zip(walk, walk[1:]):
                    try:
                        graph.signed_edge(a, b)
                    except InvalidGraph as exc:
                        raise ParseError(f"path walk: {exc}", stmt.line) from None
                overrides.append(((match.group("j"), match.group("k")), walk))
            else:
                raise ParseError(f"unknown term key {stmt.key!r}", stmt.line)
        if vertices is None or potential is None:
            raise ParseError(f"term {section.name!r} needs both 'vertices' and 'expr'", section.line)
        try:
            return InteractionTerm(section.name, tuple(vertices), potential, tuple(overrides))
        except InvalidTerm as exc:
            raise ParseError(str(exc), section.line) from None

    def _parse_expression(self, text: str, line: int):
        try:
            return parse(text)
        except ExpressionSyntaxError as exc:
            raise ParseError(str(exc), line) from None

    # configs and scatter -------------------------------------------------

    def _build_config(self, section: RawSection, graph: Graph, fibers: Dict[str, Fiber]) -> FieldConfig:
        values = {}
        for stmt in section.statements:
            self._require_vertex(stmt.key, graph.vertices, stmt.line)
            try:
                vec = np.array([float(tok) for tok in stmt.value.split()])
            except ValueError:
                raise ParseError(f"non-numeric coordinates {stmt.value!r}", stmt.line) from None
            if len(vec) != fibers[stmt.key].dimension:
                raise FiberMismatch(
                    f"line {stmt.line}: {stmt.key!r} needs {fibers[stmt.key].dimension} coordinates, got {len(vec)}"
                )
            values[stmt.key] = vec
        missing = [v for v in graph.vertices if v not in values]
        if missing:
            raise FiberMismatch(f"config {section.name!r} leaves vertices unbound: {', '.join(missing)}")
        return FieldConfig(values)

    def _build_scatter(self, sections: Sequence[RawSection], graph: Graph):
        potentials: Dict[str, float] = {}
        couplings: Dict[Tuple[str, str], float] = {}
        for section in sections:
            for stmt in section.statements:
                words = stmt.key.split()
                try:
                    value = float(stmt.value)
                except ValueError:
                    raise ParseError(f"non-numeric value {stmt.value!r}", stmt.line) from None
                if len(words) == 2 and words[0] == "potential":
                    self._require_vertex(words[1], graph.vertices, stmt.line)
                    potentials[words[1]] = value
                elif len(words) == 3 and words[0] == "coupling":
                    for vertex in words[1:]:
                        self._require_vertex(vertex, graph.vertices, stmt.line)
                    try:
                        edge, _ = graph.signed_edge(words[1], words[2])
                    except InvalidGraph as exc:
                        raise ParseError(str(exc), stmt.line) from None
                    couplings[edge] = value
                else:
                    raise ParseError(f"unknown scatter key {stmt.key!r}", stmt.line)
        return potentials, couplings

    # validation helpers --------------------------------------------------

    def _require_vertex(self, name: str, known: Sequence[str], line: int) -> None:
        if name in known:
            return
        matches = process.extract(name, list(known), scorer=fuzz.ratio, limit=3,
                                  score_cutoff=self.suggestion_cutoff)
        raise UnknownVertex(name, [m[0] for m in matches], line)

    @staticmethod
    def _require_unique(names: Sequence[str], kind: str, sections: Sequence[RawSection]) -> None:
        seen = set()
        for name, section in zip(names, sections):
            if name in seen:
                raise ParseError(f"duplicate {kind} {name!r}", section.line)
            seen.add(name)

    def _check_degrees(self, graph: Graph) -> None:
        ends = graph.ends()
        if not ends:
            return
        if not self.allow_ends:
            raise DegreeViolation(ends)
        for vertex in ends:
            message = f"vertex {vertex!r} has degree {graph.degree(vertex)} (< 2)"
            self.warnings.append(message)
            logger.warning(message)


def load_system(path: str, allow_ends: bool = False) -> LagrangianSystem:
    """Read, parse and validate a system file

    Args:
        path: Path to the system file
        allow_ends: Downgrade degree-1 vertices from an error to a warning

    Returns:
        Validated LagrangianSystem
    """
    document = SystemFileLoader().load(path)
    return SystemBuilder(allow_ends=allow_ends).build(document)
