"""Geodesic metric of a graph with unit edge lengths"""

from itertools import combinations
from typing import Iterable, List, Tuple

import networkx as nx

from ..models import Disconnected, Edge, Graph, NoPath, UnknownVertex


def _require(g: Graph, vertex: str) -> None:
    if not g.has_vertex(vertex):
        raise UnknownVertex(vertex)


def distance(g: Graph, u: str, v: str) -> int:
    """Length of a shortest core path between two vertices

    Args:
        g: Graph
        u: Source vertex
        v: Target vertex

    Returns:
        Number of edges on a shortest path

    Raises:
        NoPath: if u and v lie in different components
    """
    _require(g, u)
    _require(g, v)
    try:
        return nx.shortest_path_length(g.nx_graph, u, v)
    except nx.NetworkXNoPath:
        raise NoPath(u, v) from None


def set_diameter(g: Graph, s: Iterable[str]) -> int:
    """Maximal pairwise distance inside a nonempty vertex set"""
    members = list(dict.fromkeys(s))
    if not members:
        raise ValueError("Diameter of an empty set is undefined")
    for vertex in members:
        _require(g, vertex)
    diameter = 0
    for i, source in enumerate(members):
        lengths = nx.single_source_shortest_path_length(g.nx_graph, source)
        for target in members[i + 1:]:
            if target not in lengths:
                raise NoPath(source, target)
            diameter = max(diameter, lengths[target])
    return diameter


def bfs_geodesic(g: Graph, source: str, target: str) -> List[str]:
    """Vertex walk of the BFS shortest path; neighbours are visited in stored edge order

    Args:
        g: Graph
        source: Start vertex
        target: End vertex

    Returns:
        Vertex list from source to target
    """
    if source == target:
        return [source]
    predecessors = dict(nx.bfs_predecessors(g.nx_graph, source))
    if target not in predecessors:
        raise NoPath(source, target)
    walk = [target]
    while walk[-1] != source:
        walk.append(predecessors[walk[-1]])
    return walk[::-1]


def bfs_tree_edges(g: Graph, vertices: Iterable[str]) -> Tuple[Edge, ...]:
    """BFS spanning tree of the induced subgraph, rooted at its lowest-index vertex

    Returns:
        Stored edges of the tree, in canonical edge order

    Raises:
        Disconnected: if the induced subgraph is not connected
    """
    members = sorted(set(vertices), key=g.vertex_index.__getitem__)
    if not members:
        return ()
    sub = g.nx_graph.subgraph(members)
    tree = []
    for parent, child in nx.bfs_edges(sub, members[0]):
        edge, _ = g.signed_edge(parent, child)
        tree.append(edge)
    if len(tree) != len(members) - 1:
        raise Disconnected(f"Induced subgraph on {', '.join(members)} is not connected")
    return tuple(sorted(tree, key=g.edge_index.__getitem__))


def is_connected(g: Graph) -> bool:
    return len(g.vertices) > 0 and nx.is_connected(g.nx_graph)


def vertex_pairs(g: Graph, s: Iterable[str]) -> List[Tuple[str, str]]:
    """Unordered pairs of a set in canonical vertex order"""
    ordered = sorted(set(s), key=g.vertex_index.__getitem__)
    return list(combinations(ordered, 2))
