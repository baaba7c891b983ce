"""Shared builders for the test suite"""

from pathlib import Path
from typing import List, Optional

import networkx as nx
import numpy as np
import pytest

from src.expr import parse
from src.loaders import SystemBuilder, SystemFileLoader
from src.models import (
    Fiber,
    FieldConfig,
    Graph,
    InteractionTerm,
    LagrangianSystem,
    TailSpec,
    TangentField,
    Variable,
)

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


def fixture_path(name: str) -> str:
    return str(FIXTURES / name)


def load_text(text: str, allow_ends: bool = False) -> LagrangianSystem:
    return SystemBuilder(allow_ends=allow_ends).build(SystemFileLoader().loads(text))


def load_fixture(name: str, allow_ends: bool = True) -> LagrangianSystem:
    return SystemBuilder(allow_ends=allow_ends).build(SystemFileLoader().load(fixture_path(name)))


def scalar_system(vertices, edges, terms, tails=()) -> LagrangianSystem:
    """System with R1 fibers; terms are (name, vertices, expression text)"""
    graph = Graph(tuple(vertices), tuple(edges), tuple(TailSpec(n, a) for n, a in tails))
    fibers = {v: Fiber.euclidean(1) for v in vertices}
    built = tuple(InteractionTerm(name, tuple(alpha), parse(text)) for name, alpha, text in terms)
    return LagrangianSystem(graph=graph, fibers=fibers, terms=built)


def config_of(sys: LagrangianSystem, values) -> FieldConfig:
    return FieldConfig({v: np.atleast_1d(np.asarray(values[v], dtype=float)) for v in sys.graph.vertices})


def random_graph(rng: np.random.Generator, n_vertices: int, extra_edges: int = 0, n_tails: int = 0) -> Graph:
    """Random connected graph: a random tree plus extra edges"""
    names = [f"v{i}" for i in range(n_vertices)]
    edges = []
    for i in range(1, n_vertices):
        edges.append((names[int(rng.integers(0, i))], names[i]))
    pairs = {frozenset(e) for e in edges}
    attempts = 0
    while n_vertices > 1 and extra_edges > 0 and attempts < 100:
        attempts += 1
        a, b = (int(x) for x in rng.choice(n_vertices, 2, replace=False))
        pair = frozenset((names[a], names[b]))
        if pair in pairs:
            continue
        pairs.add(pair)
        edges.append((names[a], names[b]))
        extra_edges -= 1
    tails = tuple(TailSpec(f"t{i}", names[int(rng.integers(0, n_vertices))]) for i in range(n_tails))
    return Graph(tuple(names), tuple(edges), tails)


def random_potential(rng: np.random.Generator, variables: List[Variable], trig: bool = True) -> str:
    """Polynomial of degree <= 4 with an optional sin/cos term, as text"""
    monomials = []
    for _ in range(int(rng.integers(1, 4))):
        degree = int(rng.integers(1, 5))
        factors = [variables[int(rng.integers(0, len(variables)))].name for _ in range(degree)]
        coefficient = round(float(rng.uniform(-1, 1)), 3)
        monomials.append(f"{coefficient}*" + "*".join(factors))
    if trig and rng.random() < 0.5:
        a = variables[int(rng.integers(0, len(variables)))].name
        b = variables[int(rng.integers(0, len(variables)))].name
        monomials.append(f"0.5*sin({a}*{b})" if rng.random() < 0.5 else f"0.7*cos({a}-{b})")
    return " + ".join(monomials)


def random_local_system(
    rng: np.random.Generator,
    max_vertices: int = 12,
    max_dim: int = 3,
    n_terms: Optional[int] = None,
    radius: int = 2,
    kind: str = "local",
    trig: bool = True,
) -> LagrangianSystem:
    """Random local system

    kind: "local" (|α| <= 3 within a ball), "pairwise" (|α| = 2 within a ball)
    or "nn" (edges and single vertices only)
    """
    n = int(rng.integers(3, max_vertices + 1))
    graph = random_graph(rng, n, extra_edges=int(rng.integers(0, 3)))
    fibers = {v: Fiber.euclidean(int(rng.integers(1, max_dim + 1))) for v in graph.vertices}
    n_terms = n_terms or int(rng.integers(2, 7))
    terms = []
    for idx in range(n_terms):
        if kind == "nn":
            if rng.random() < 0.8:
                edge = graph.edges[int(rng.integers(0, len(graph.edges)))]
                alpha = list(edge) if rng.random() < 0.5 else [edge[1], edge[0]]
            else:
                alpha = [graph.vertices[int(rng.integers(0, n))]]
        else:
            center = graph.vertices[int(rng.integers(0, n))]
            ball = sorted(nx.single_source_shortest_path_length(graph.nx_graph, center, cutoff=radius))
            size = 2 if kind == "pairwise" else int(rng.integers(1, 4))
            size = min(size, len(ball))
            alpha = [str(v) for v in rng.choice(ball, size, replace=False)]
        variables = [Variable(v, i) for v in alpha for i in range(fibers[v].dimension)]
        text = random_potential(rng, variables, trig=trig)
        terms.append(InteractionTerm(f"term{idx}", tuple(alpha), parse(text)))
    return LagrangianSystem(graph=graph, fibers=fibers, terms=tuple(terms))


def random_config(rng: np.random.Generator, sys: LagrangianSystem, scale: float = 1.0) -> FieldConfig:
    return FieldConfig({v: rng.uniform(-scale, scale, sys.fibers[v].dimension) for v in sys.graph.vertices})


def random_tangent(rng: np.random.Generator, sys: LagrangianSystem) -> TangentField:
    return TangentField({v: rng.normal(size=sys.fibers[v].dimension) for v in sys.graph.vertices})


@pytest.fixture
def rng():
    return np.random.default_rng(20240917)


@pytest.fixture
def triangle_graph():
    return Graph(("v0", "v1", "v2"), (("v0", "v1"), ("v1", "v2"), ("v2", "v0")))
