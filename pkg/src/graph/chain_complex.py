"""Chains, boundary operator and the cycle space (open homology) of a graph with tails"""

from typing import List, Sequence

import networkx as nx
import numpy as np

from ..models import (
    Chain0,
    Chain1,
    Disconnected,
    Edge,
    Graph,
    NotACycle,
    NotInSpan,
)
from .graph_metric import bfs_tree_edges, is_connected


def walk_chain(g: Graph, walk: Sequence[str]) -> Chain1:
    """1-chain of a vertex walk; each step adds its signed edge"""
    core = {}
    for source, target in zip(walk, walk[1:]):
        edge, sign = g.signed_edge(source, target)
        core[edge] = core.get(edge, 0.0) + sign
    return Chain1(core)


def tree_path_chain(g: Graph, tree_edges: Sequence[Edge], source: str, target: str) -> Chain1:
    """Unique path between two vertices of a tree, as a chain"""
    if source == target:
        return Chain1()
    tree = nx.Graph()
    tree.add_edges_from(tree_edges)
    walk = nx.shortest_path(tree, source, target)
    return walk_chain(g, walk)


def boundary(c: Chain1, g: Graph) -> Chain0:
    """∂ of a 1-chain; a tail of coefficient a contributes -a at its attach vertex

    Args:
        c: 1-chain
        g: Graph the chain lives on (needed to locate tail attach vertices)

    Returns:
        Boundary 0-chain
    """
    out = {}
    for (p, q), a in c.core.items():
        out[q] = out.get(q, 0.0) + a
        out[p] = out.get(p, 0.0) - a
    for name, a in c.tails.items():
        attach = g.tail(name).attach
        out[attach] = out.get(attach, 0.0) - a
    return Chain0(out)


def cycle_basis(g: Graph) -> List[Chain1]:
    """Basis of ker ∂ over core edges and tail constants

    Fundamental cycles of the BFS spanning tree (one per non-tree edge, in
    stored order) followed by one path per extra tail: in along the first
    tail, through the tree, out along the other tail.

    Raises:
        Disconnected: if the core graph is not connected
    """
    if not is_connected(g):
        raise Disconnected("cycle_basis needs a connected graph")
    tree = bfs_tree_edges(g, g.vertices)
    tree_set = set(tree)
    basis = []
    for edge in g.edges:
        if edge in tree_set:
            continue
        p, q = edge
        basis.append(Chain1({edge: 1.0}) + tree_path_chain(g, tree, q, p))
    if len(g.tails) > 1:
        first = g.tails[0]
        for other in g.tails[1:]:
            through = tree_path_chain(g, tree, first.attach, other.attach)
            basis.append(through + Chain1(tails={first.name: -1.0, other.name: 1.0}))
    return basis


def _coordinates(g: Graph, c: Chain1) -> np.ndarray:
    vec = np.zeros(len(g.edges) + len(g.tails))
    for edge, a in c.core.items():
        vec[g.edge_index[edge]] = a
    for name, a in c.tails.items():
        vec[len(g.edges) + g.tail_index[name]] = a
    return vec


def cycle_coordinates(g: Graph, basis: Sequence[Chain1], c: Chain1, tol: float = 1e-9) -> np.ndarray:
    """Homology class of a cycle in the given basis

    Raises:
        NotACycle: if |∂c|∞ > tol
        NotInSpan: if the least-squares residual exceeds tol
    """
    boundary_norm = boundary(c, g).max_abs()
    if boundary_norm > tol:
        raise NotACycle(boundary_norm, tol)
    target = _coordinates(g, c)
    if not basis:
        residual = float(np.max(np.abs(target), initial=0.0))
        if residual > tol:
            raise NotInSpan(residual, tol)
        return np.zeros(0)
    matrix = np.column_stack([_coordinates(g, b) for b in basis])
    coords, *_ = np.linalg.lstsq(matrix, target, rcond=None)
    residual = float(np.max(np.abs(matrix @ coords - target), initial=0.0))
    if residual > tol:
        raise NotInSpan(residual, tol)
    return coords
