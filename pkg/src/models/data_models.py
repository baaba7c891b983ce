"""Core data models for discrete Lagrangian systems on graphs"""

import re
from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property
from typing import Any, Dict, List, Mapping, Optional, Sequence, Tuple, Type, TypeVar

import networkx as nx
import numpy as np
import sympy as sp

from .errors import (
    FiberMismatch,
    InvalidGraph,
    InvalidTerm,
    UnknownVertex,
)

Edge = Tuple[str, str]

_VARIABLE_NAME = re.compile(r"^x\((?P<vertex>[A-Za-z_][A-Za-z0-9_]*),(?P<index>\d+)\)$")


# ---------------------------------------------------------------------------
# Graph core
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class TailSpec:
    """Semi-infinite ray of unit edges attached at a core vertex (site 0)"""
    name: str
    attach: str


@dataclass(frozen=True)
class Graph:
    """Finite core graph with optional tails; stored order is canonical"""
    vertices: Tuple[str, ...]
    edges: Tuple[Edge, ...] = ()
    tails: Tuple[TailSpec, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "vertices", tuple(self.vertices))
        object.__setattr__(self, "edges", tuple(tuple(e) for e in self.edges))
        object.__setattr__(self, "tails", tuple(self.tails))

        if len(set(self.vertices)) != len(self.vertices):
            raise InvalidGraph("Duplicate vertex names")
        known = set(self.vertices)
        seen_pairs = set()
        for p, q in self.edges:
            if p not in known or q not in known:
                raise InvalidGraph(f"Edge ({p}, {q}) references an undeclared vertex")
            if p == q:
                raise InvalidGraph(f"Self-loop at {p!r} is not allowed")
            pair = frozenset((p, q))
            if pair in seen_pairs:
                raise InvalidGraph(f"Multiple edges between {p!r} and {q!r}")
            seen_pairs.add(pair)
        tail_names = [t.name for t in self.tails]
        if len(set(tail_names)) != len(tail_names):
            raise InvalidGraph("Duplicate tail names")
        for tail in self.tails:
            if tail.attach not in known:
                raise InvalidGraph(f"Tail {tail.name!r} attaches to undeclared vertex {tail.attach!r}")

    @cached_property
    def vertex_index(self) -> Dict[str, int]:
        return {v: i for i, v in enumerate(self.vertices)}

    @cached_property
    def edge_index(self) -> Dict[Edge, int]:
        return {e: i for i, e in enumerate(self.edges)}

    @cached_property
    def tail_index(self) -> Dict[str, int]:
        return {t.name: i for i, t in enumerate(self.tails)}

    @cached_property
    def _orientation(self) -> Dict[Tuple[str, str], Tuple[Edge, int]]:
        table = {}
        for edge in self.edges:
            p, q = edge
            table[(p, q)] = (edge, 1)
            table[(q, p)] = (edge, -1)
        return table

    @cached_property
    def nx_graph(self) -> nx.Graph:
        """networkx view; adjacency follows stored edge order"""
        graph = nx.Graph()
        graph.add_nodes_from(self.vertices)
        graph.add_edges_from(self.edges)
        return graph

    def signed_edge(self, source: str, target: str) -> Tuple[Edge, int]:
        """Stored edge joining two vertices and the sign of traversing it source -> target"""
        try:
            return self._orientation[(source, target)]
        except KeyError:
            raise InvalidGraph(f"No edge between {source!r} and {target!r}") from None

    def has_vertex(self, name: str) -> bool:
        return name in self.vertex_index

    def tails_at(self, vertex: str) -> List[TailSpec]:
        return [t for t in self.tails if t.attach == vertex]

    def tail(self, name: str) -> TailSpec:
        return self.tails[self.tail_index[name]]

    def degree(self, vertex: str) -> int:
        """Core degree plus number of attached tails"""
        return self.nx_graph.degree[vertex] + len(self.tails_at(vertex))

    def ends(self) -> List[str]:
        return [v for v in self.vertices if self.degree(v) < 2]


def _drop_zeros(mapping: Mapping[Any, float]) -> Dict[Any, float]:
    return {k: float(v) for k, v in mapping.items() if v != 0.0}


@dataclass(frozen=True)
class Chain1:
    """Real 1-chain: finitely many core edges plus one constant per tail"""
    core: Dict[Edge, float] = field(default_factory=dict)
    tails: Dict[str, float] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "core", _drop_zeros({tuple(k): v for k, v in self.core.items()}))
        object.__setattr__(self, "tails", _drop_zeros(self.tails))

    def coefficient(self, edge: Edge) -> float:
        return self.core.get(tuple(edge), 0.0)

    def tail_coefficient(self, name: str) -> float:
        return self.tails.get(name, 0.0)

    def is_zero(self) -> bool:
        return not self.core and not self.tails

    def max_abs(self) -> float:
        values = list(self.core.values()) + list(self.tails.values())
        return max((abs(v) for v in values), default=0.0)

    def __add__(self, other: "Chain1") -> "Chain1":
        core = dict(self.core)
        for edge, value in other.core.items():
            core[edge] = core.get(edge, 0.0) + value
        tails = dict(self.tails)
        for name, value in other.tails.items():
            tails[name] = tails.get(name, 0.0) + value
        return Chain1(core, tails)

    def __neg__(self) -> "Chain1":
        return Chain1({e: -v for e, v in self.core.items()}, {t: -v for t, v in self.tails.items()})

    def __sub__(self, other: "Chain1") -> "Chain1":
        return self + (-other)

    def __mul__(self, scalar: float) -> "Chain1":
        return Chain1({e: scalar * v for e, v in self.core.items()},
                      {t: scalar * v for t, v in self.tails.items()})

    __rmul__ = __mul__


@dataclass(frozen=True)
class Chain0:
    """Real 0-chain with finite support"""
    coefficients: Dict[str, float] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "coefficients", _drop_zeros(self.coefficients))

    def coefficient(self, vertex: str) -> float:
        return self.coefficients.get(vertex, 0.0)

    def is_zero(self) -> bool:
        return not self.coefficients

    def max_abs(self) -> float:
        return max((abs(v) for v in self.coefficients.values()), default=0.0)


# ---------------------------------------------------------------------------
# Lagrangian model
# ---------------------------------------------------------------------------

class FiberKind(str, Enum):
    EUCLIDEAN = "euclidean"
    CIRCLE = "circle"


@dataclass(frozen=True)
class Fiber:
    """Target space N_P of a vertex: R^m or the circle (angle chart)"""
    kind: FiberKind = FiberKind.EUCLIDEAN
    dimension: int = 1

    def __post_init__(self):
        if self.dimension < 1:
            raise FiberMismatch(f"Fiber dimension must be >= 1, got {self.dimension}")
        if self.kind is FiberKind.CIRCLE and self.dimension != 1:
            raise FiberMismatch("Circle fibers have dimension 1")

    @classmethod
    def euclidean(cls, dimension: int = 1) -> "Fiber":
        return cls(FiberKind.EUCLIDEAN, dimension)

    @classmethod
    def circle(cls) -> "Fiber":
        return cls(FiberKind.CIRCLE, 1)

    @property
    def label(self) -> str:
        return "S1" if self.kind is FiberKind.CIRCLE else f"R{self.dimension}"


@dataclass(frozen=True, order=True)
class Variable:
    """Coordinate x(vertex, index) of a fiber"""
    vertex: str
    index: int

    @property
    def name(self) -> str:
        return f"x({self.vertex},{self.index})"

    @property
    def symbol(self) -> sp.Symbol:
        return sp.Symbol(self.name, real=True)

    @classmethod
    def from_symbol(cls, symbol: sp.Symbol) -> "Variable":
        match = _VARIABLE_NAME.match(symbol.name)
        if not match:
            raise InvalidTerm(f"Symbol {symbol.name!r} is not a coordinate variable")
        return cls(match.group("vertex"), int(match.group("index")))

    def __str__(self) -> str:
        return self.name


def expression_variables(expr: sp.Expr) -> List[Variable]:
    """Coordinate variables of an expression, sorted"""
    return sorted(Variable.from_symbol(s) for s in expr.free_symbols)


@dataclass(frozen=True)
class InteractionTerm:
    """Potential Λ^α on a finite vertex set α"""
    name: str
    vertices: Tuple[str, ...]
    potential: sp.Expr
    # explicit l_{jk} walks; any entry makes the term non-tree-like
    path_overrides: Tuple[Tuple[Tuple[str, str], Tuple[str, ...]], ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "vertices", tuple(self.vertices))
        if not self.vertices:
            raise InvalidTerm(f"Term {self.name!r} has an empty vertex list")
        if len(set(self.vertices)) != len(self.vertices):
            raise InvalidTerm(f"Term {self.name!r} repeats a vertex")
        members = set(self.vertices)
        for var in self.variables:
            if var.vertex not in members:
                raise InvalidTerm(
                    f"Term {self.name!r}: variable {var} references vertex outside its set "
                    f"{', '.join(self.vertices)}"
                )
        for (j, k), walk in self.path_overrides:
            if j not in members or k not in members:
                raise InvalidTerm(f"Term {self.name!r}: path endpoints ({j}, {k}) must both lie in the term")
            if not walk or walk[0] != j or walk[-1] != k:
                raise InvalidTerm(f"Term {self.name!r}: path for ({j}, {k}) must start at {j} and end at {k}")

    @property
    def size(self) -> int:
        return len(self.vertices)

    @cached_property
    def variables(self) -> List[Variable]:
        return expression_variables(self.potential)


@dataclass(frozen=True)
class CoordinateLayout:
    """Flat coordinate order: vertices in graph order, fiber components in order"""
    vertices: Tuple[str, ...]
    dimensions: Tuple[int, ...]

    @cached_property
    def offsets(self) -> Dict[str, int]:
        offsets, position = {}, 0
        for vertex, dim in zip(self.vertices, self.dimensions):
            offsets[vertex] = position
            position += dim
        return offsets

    @property
    def size(self) -> int:
        return int(sum(self.dimensions))

    def dimension(self, vertex: str) -> int:
        return self.dimensions[self.vertices.index(vertex)]

    def slice(self, vertex: str) -> slice:
        start = self.offsets[vertex]
        return slice(start, start + self.dimension(vertex))

    def index(self, var: Variable) -> int:
        return self.offsets[var.vertex] + var.index

    @cached_property
    def variables(self) -> Tuple[Variable, ...]:
        return tuple(Variable(v, i) for v, d in zip(self.vertices, self.dimensions) for i in range(d))

    def vertex_of(self, index: int) -> str:
        return self.variables[index].vertex

    def flatten(self, field_values: "VertexField") -> np.ndarray:
        vec = np.zeros(self.size)
        for vertex in self.vertices:
            vec[self.slice(vertex)] = field_values[vertex]
        return vec

    def unflatten(self, vec: np.ndarray, cls: Type["F"]) -> "F":
        return cls({v: np.array(vec[self.slice(v)], dtype=float) for v in self.vertices})

    def selector(self, vertex: str) -> np.ndarray:
        """m_P x n matrix picking the block of one vertex"""
        sel = np.zeros((self.dimension(vertex), self.size))
        sel[:, self.slice(vertex)] = np.eye(self.dimension(vertex))
        return sel


@dataclass(frozen=True, eq=False)
class VertexField:
    """Map vertex -> real vector of fiber dimension"""
    values: Dict[str, np.ndarray] = field(default_factory=dict)

    def __post_init__(self):
        frozen = {}
        for vertex, vec in self.values.items():
            arr = np.array(np.atleast_1d(vec), dtype=float)
            arr.setflags(write=False)
            frozen[vertex] = arr
        object.__setattr__(self, "values", frozen)

    def __getitem__(self, vertex: str) -> np.ndarray:
        return self.values[vertex]

    def __contains__(self, vertex: str) -> bool:
        return vertex in self.values

    @classmethod
    def zeros(cls, layout: CoordinateLayout):
        return cls({v: np.zeros(d) for v, d in zip(layout.vertices, layout.dimensions)})

    def to_dict(self) -> Dict[str, List[float]]:
        return {v: [float(x) for x in vec] for v, vec in self.values.items()}


F = TypeVar("F", bound=VertexField)


class FieldConfig(VertexField):
    """Field Ψ(P) = x_P; angles for circle fibers"""


class TangentField(VertexField):
    """Tangent direction δψ to configuration space"""


class Covector(VertexField):
    """Covector field such as the Euler-Lagrange residual"""


@dataclass(frozen=True)
class LagrangianSystem:
    """Graph, fibers and the interaction family S"""
    graph: Graph
    fibers: Dict[str, Fiber]
    terms: Tuple[InteractionTerm, ...] = ()
    configs: Dict[str, FieldConfig] = field(default_factory=dict)
    # tail name -> nearest-neighbour template in x(in,i), x(out,i)
    tail_couplings: Dict[str, sp.Expr] = field(default_factory=dict)
    scatter_potentials: Dict[str, float] = field(default_factory=dict)
    scatter_couplings: Dict[Edge, float] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "terms", tuple(self.terms))
        missing = [v for v in self.graph.vertices if v not in self.fibers]
        if missing:
            raise FiberMismatch(f"No fiber declared for vertices: {', '.join(missing)}")
        for name in self.fibers:
            if not self.graph.has_vertex(name):
                raise UnknownVertex(name)
        for term in self.terms:
            self._check_term(term)
        for name, config in self.configs.items():
            self.check_config(config, label=f"config {name!r}")
        for tail_name, template in self.tail_couplings.items():
            self._check_tail_coupling(tail_name, template)

    def _check_term(self, term: InteractionTerm) -> None:
        for vertex in term.vertices:
            if not self.graph.has_vertex(vertex):
                raise UnknownVertex(vertex)
        for var in term.variables:
            if var.index >= self.fibers[var.vertex].dimension:
                raise FiberMismatch(
                    f"Term {term.name!r}: {var} exceeds fiber {self.fibers[var.vertex].label} of {var.vertex!r}"
                )
        component = nx.node_connected_component(self.graph.nx_graph, term.vertices[0])
        outside = [v for v in term.vertices if v not in component]
        if outside:
            raise InvalidTerm(f"Term {term.name!r} spans several components ({', '.join(outside)})")
        for (j, k), walk in term.path_overrides:
            for vertex in walk:
                if not self.graph.has_vertex(vertex):
                    raise UnknownVertex(vertex)

    def _check_tail_coupling(self, tail_name: str, template: sp.Expr) -> None:
        if tail_name not in self.graph.tail_index:
            raise InvalidTerm(f"Coupling given for unknown tail {tail_name!r}")
        dim = self.fibers[self.graph.tail(tail_name).attach].dimension
        for var in expression_variables(template):
            if var.vertex not in ("in", "out"):
                raise InvalidTerm(f"Tail {tail_name!r}: coupling may only use x(in,i) and x(out,i), got {var}")
            if var.index >= dim:
                raise FiberMismatch(f"Tail {tail_name!r}: {var} exceeds attach fiber dimension {dim}")

    def check_config(self, config: VertexField, label: str = "configuration") -> None:
        for vertex in self.graph.vertices:
            if vertex not in config:
                raise FiberMismatch(f"{label}: vertex {vertex!r} is not bound")
            if len(config[vertex]) != self.fibers[vertex].dimension:
                raise FiberMismatch(
                    f"{label}: vertex {vertex!r} has {len(config[vertex])} coordinates, "
                    f"fiber {self.fibers[vertex].label} needs {self.fibers[vertex].dimension}"
                )
        for vertex in config.values:
            if not self.graph.has_vertex(vertex):
                raise UnknownVertex(vertex)

    @cached_property
    def layout(self) -> CoordinateLayout:
        return CoordinateLayout(
            self.graph.vertices,
            tuple(self.fibers[v].dimension for v in self.graph.vertices),
        )

    @property
    def dimension(self) -> int:
        return self.layout.size

    def coupled_attach_vertices(self) -> List[str]:
        """Attach vertices of tails that carry a coupling template, in vertex order"""
        attached = {self.graph.tail(name).attach for name in self.tail_couplings}
        return [v for v in self.graph.vertices if v in attached]


# ---------------------------------------------------------------------------
# Tree-like form
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class TreeLikeTerm:
    """Term with augmented set α′, subtree Γ_α and oriented paths l_jk"""
    term: InteractionTerm
    vertices: Tuple[str, ...]
    tree_edges: Tuple[Edge, ...]
    paths: Dict[Tuple[str, str], Chain1]
    base_diameter: int = 0
    diameter: int = 0
    tree_like: bool = True

    @property
    def added_vertices(self) -> Tuple[str, ...]:
        original = set(self.term.vertices)
        return tuple(v for v in self.vertices if v not in original)

    @property
    def diameter_preserved(self) -> bool:
        return self.diameter <= self.base_diameter


@dataclass(frozen=True)
class TreeLikeSystem:
    """Normalized system: one tree-like term per original term"""
    system: LagrangianSystem
    terms: Tuple[TreeLikeTerm, ...]

    @property
    def is_tree_like(self) -> bool:
        return all(t.tree_like for t in self.terms)

    def preserved_fraction(self) -> float:
        if not self.terms:
            return 1.0
        return sum(t.diameter_preserved for t in self.terms) / len(self.terms)


# ---------------------------------------------------------------------------
# Variational
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class LinearizedOperator:
    """Symmetric Hessian L_ψ over the flat coordinate layout"""
    layout: CoordinateLayout
    matrix: Any  # scipy.sparse.csr_matrix

    def dense(self) -> np.ndarray:
        return self.matrix.toarray()

    def block(self, p: str, q: str) -> np.ndarray:
        return self.dense()[self.layout.slice(p), self.layout.slice(q)]

    def apply(self, tangent: VertexField) -> np.ndarray:
        return self.matrix @ self.layout.flatten(tangent)


@dataclass
class SolveResult:
    """Outcome of a Newton solve"""
    config: FieldConfig
    iterations: int
    residual: float
    residual_history: List[float] = field(default_factory=list)


# ---------------------------------------------------------------------------
# Chain-valued 2-form
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class TailForm:
    """Constant tail block: B_t(u,v) = u_Pᵀ C w_v - v_Pᵀ C w_u with w = K u"""
    tail: str
    attach: str
    coupling: np.ndarray
    extension: np.ndarray


@dataclass(frozen=True, eq=False)
class ChainValued2Form:
    """Per-edge antisymmetric bilinear forms on configuration tangents"""
    tree_system: TreeLikeSystem
    config: FieldConfig
    # edge -> {(j, k): m_j x m_k block}, B_e(u,v) = Σ u_jᵀ H v_k - v_jᵀ H u_k
    edge_blocks: Dict[Edge, Dict[Tuple[str, str], np.ndarray]]
    tail_forms: Dict[str, TailForm] = field(default_factory=dict)

    @property
    def system(self) -> LagrangianSystem:
        return self.tree_system.system

    @property
    def layout(self) -> CoordinateLayout:
        return self.system.layout

    @property
    def support(self) -> List[Edge]:
        graph = self.system.graph
        return sorted(self.edge_blocks, key=graph.edge_index.__getitem__)

    def edge_matrix(self, edge: Edge) -> np.ndarray:
        """Antisymmetric W_e with B_e(u,v) = uᵀ W_e v"""
        layout = self.layout
        mat = np.zeros((layout.size, layout.size))
        for (j, k), block in self.edge_blocks.get(tuple(edge), {}).items():
            mat[layout.slice(j), layout.slice(k)] += block
            mat[layout.slice(k), layout.slice(j)] -= block.T
        return mat

    def tail_matrix(self, name: str) -> np.ndarray:
        form = self.tail_forms.get(name)
        if form is None:
            return np.zeros((self.layout.size, self.layout.size))
        half = self.layout.selector(form.attach).T @ form.coupling @ form.extension
        return half - half.T


@dataclass
class BoundaryForms:
    """∂Ω per vertex (A_P) and the closed-form check G_P, as antisymmetric matrices"""
    a_forms: Dict[str, np.ndarray]
    g_forms: Dict[str, np.ndarray]

    @property
    def identity_defect(self) -> float:
        return max(
            (float(np.max(np.abs(self.a_forms[v] - self.g_forms[v]))) if self.a_forms[v].size else 0.0
             for v in self.a_forms),
            default=0.0,
        )

    def evaluate(self, vertex: str, u: np.ndarray, v: np.ndarray) -> float:
        return float(u @ self.a_forms[vertex] @ v)


@dataclass
class ClosednessResult:
    """Per-edge maximum |dB_e| over coordinate triples"""
    mode: str
    per_edge: Dict[Edge, float]
    symbolic_zero: Optional[bool] = None

    @property
    def max_value(self) -> float:
        return max(self.per_edge.values(), default=0.0)


# ---------------------------------------------------------------------------
# Scattering
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ScatterProblem:
    """Scalar nearest-neighbour operator on a graph with tails"""
    graph: Graph
    potentials: Dict[str, float] = field(default_factory=dict)
    # ordered pair -> coupling; symmetric unless the symmetry check is disabled
    couplings: Dict[Edge, float] = field(default_factory=dict)
    enforce_symmetry: bool = True

    def __post_init__(self):
        if not self.graph.tails:
            raise InvalidGraph("Scattering needs at least one tail")
        if self.enforce_symmetry:
            for (p, q), c in self.couplings.items():
                if (q, p) in self.couplings and self.couplings[(q, p)] != c:
                    raise InvalidGraph(f"Coupling between {p!r} and {q!r} is not symmetric")

    def coupling(self, p: str, q: str) -> float:
        if (p, q) in self.couplings:
            return self.couplings[(p, q)]
        if (q, p) in self.couplings:
            return self.couplings[(q, p)]
        return 1.0

    def potential(self, vertex: str) -> float:
        return self.potentials.get(vertex, 0.0)


@dataclass
class SMatrix:
    """S[b, a]: outgoing amplitude on tail b for an incoming wave on tail a"""
    k: float
    tails: Tuple[str, ...]
    matrix: np.ndarray
    # core values per incoming tail, columns ordered as tails
    core_values: np.ndarray
    condition_number: float = 1.0
    ill_conditioned: bool = False


@dataclass
class UnitarityReport:
    """Direct and symplectic unitarity checks"""
    unitarity_defect: float
    flux_defect: float
    reciprocity_defect: float
    tol: float

    @property
    def unitarity_passed(self) -> bool:
        return self.unitarity_defect <= self.tol

    @property
    def flux_passed(self) -> bool:
        return self.flux_defect <= self.tol

    @property
    def reciprocity_passed(self) -> bool:
        return self.reciprocity_defect <= self.tol

    @property
    def passed(self) -> bool:
        return self.unitarity_passed and self.flux_passed


# ---------------------------------------------------------------------------
# Reports
# ---------------------------------------------------------------------------

@dataclass
class CheckResult:
    """One named verification check"""
    name: str
    status: str  # "pass", "fail" or "skip"
    value: Optional[float] = None
    tol: Optional[float] = None
    message: str = ""

    @classmethod
    def compare(cls, name: str, value: float, tol: float, message: str = "") -> "CheckResult":
        status = "pass" if value <= tol else "fail"
        return cls(name=name, status=status, value=float(value), tol=float(tol), message=message)


@dataclass
class RunReport:
    """Machine-readable outcome of one CLI command"""
    command: str
    input_sha256: Optional[str] = None
    checks: List[CheckResult] = field(default_factory=list)
    elapsed_ms: float = 0.0
    details: Dict[str, Any] = field(default_factory=dict)

    def add(self, check: CheckResult) -> None:
        if any(c.name == check.name for c in self.checks):
            raise ValueError(f"Check {check.name!r} already recorded")
        self.checks.append(check)

    @property
    def failed(self) -> bool:
        return any(c.status == "fail" for c in self.checks)


@dataclass
class ReportConfig:
    """Configuration for report generation"""
    include_details: bool = True
    highlight_failures: bool = True
