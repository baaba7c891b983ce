"""Tree-like normalization of local interaction terms"""

import logging
from dataclasses import replace
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import networkx as nx

from ..graph import bfs_geodesic, bfs_tree_edges, set_diameter, tree_path_chain, vertex_pairs, walk_chain
from ..models import (
    Chain1,
    Disconnected,
    Edge,
    Graph,
    InteractionTerm,
    InvalidGraph,
    LagrangianSystem,
    TreeLikeSystem,
    TreeLikeTerm,
    VertexNotInTerm,
)

logger = logging.getLogger(__name__)


def connect_set(g: Graph, s: Iterable[str]) -> Tuple[str, ...]:
    """Close a vertex set under one BFS geodesic per pair

    Pairs are visited in canonical vertex order; the result is returned in
    canonical vertex order and induces a connected subgraph.

    Raises:
        NoPath: if two members lie in different components
    """
    members = set(s)
    for source, target in vertex_pairs(g, members):
        members.update(bfs_geodesic(g, source, target))
    return tuple(sorted(members, key=g.vertex_index.__getitem__))


def induced_subtree(g: Graph, s: Iterable[str]) -> Tuple[Edge, ...]:
    """BFS spanning tree of the subgraph induced on s

    Raises:
        Disconnected: if the induced subgraph is not connected
    """
    return bfs_tree_edges(g, s)


def _path_table(g: Graph, vertices: Sequence[str], tree_edges: Sequence[Edge]) -> Dict[Tuple[str, str], Chain1]:
    paths = {}
    for j, k in vertex_pairs(g, vertices):
        chain = tree_path_chain(g, tree_edges, j, k)
        paths[(j, k)] = chain
        paths[(k, j)] = -chain
    return paths


def _apply_overrides(g: Graph, term: InteractionTerm, paths: Dict[Tuple[str, str], Chain1]) -> bool:
    for (j, k), walk in term.path_overrides:
        chain = walk_chain(g, walk)
        paths[(j, k)] = chain
        paths[(k, j)] = -chain
    return not term.path_overrides


def build_tree_like_term(
    g: Graph,
    term: InteractionTerm,
    tree_edges: Sequence[Edge],
    vertices: Optional[Sequence[str]] = None,
) -> TreeLikeTerm:
    """Tree-like term over an explicitly chosen subtree

    Args:
        g: Graph the term lives on
        term: Original interaction term
        tree_edges: Stored edges forming a tree
        vertices: Augmented set α′; defaults to the vertices of the tree (or α for |α| = 1)

    Raises:
        InvalidGraph: if the edges do not form a tree over α′ ⊇ α
    """
    tree_edges = tuple(tuple(e) for e in tree_edges)
    for edge in tree_edges:
        if edge not in g.edge_index:
            raise InvalidGraph(f"{edge} is not a stored edge")
    if vertices is None:
        spanned = {v for e in tree_edges for v in e} | set(term.vertices)
        vertices = tuple(term.vertices) + tuple(
            v for v in g.vertices if v in spanned and v not in term.vertices
        )
    tree = nx.Graph()
    tree.add_nodes_from(vertices)
    tree.add_edges_from(tree_edges)
    if set(tree.nodes) != set(vertices) or not nx.is_tree(tree):
        raise InvalidGraph(f"Edges {list(tree_edges)} do not form a tree spanning {list(vertices)}")
    if not set(term.vertices) <= set(vertices):
        raise InvalidGraph(f"Tree vertices {list(vertices)} do not contain the term set")

    paths = _path_table(g, vertices, tree_edges)
    tree_like = _apply_overrides(g, term, paths)
    return TreeLikeTerm(
        term=term,
        vertices=tuple(vertices),
        tree_edges=tree_edges,
        paths=paths,
        base_diameter=set_diameter(g, term.vertices),
        diameter=set_diameter(g, vertices),
        tree_like=tree_like,
    )


def with_path_override(t: TreeLikeTerm, j: str, k: str, chain: Chain1) -> TreeLikeTerm:
    """Copy of a term with l_jk replaced; the result is no longer tree-like

    Used to reproduce non-closed forms from path choices outside a common tree.
    """
    if j not in t.vertices or k not in t.vertices:
        raise VertexNotInTerm(f"({j}, {k}) not both in {list(t.vertices)}")
    paths = dict(t.paths)
    paths[(j, k)] = chain
    paths[(k, j)] = -chain
    return replace(t, paths=paths, tree_like=False)


def tree_path(t: TreeLikeTerm, j: str, k: str) -> Chain1:
    """Oriented path l_jk of a normalized term; ∂ l_jk = k - j

    Raises:
        VertexNotInTerm: if j or k is not in α′
    """
    for vertex in (j, k):
        if vertex not in t.vertices:
            raise VertexNotInTerm(f"{vertex!r} is not in term {t.term.name!r} ({', '.join(t.vertices)})")
    if j == k:
        return Chain1()
    return t.paths[(j, k)]


class TreeNormalizer:
    """Bring every term of a local system into tree-like form"""

    def normalize(self, sys: LagrangianSystem) -> TreeLikeSystem:
        """Normalize a system term by term

        Args:
            sys: Local Lagrangian system

        Returns:
            TreeLikeSystem with one TreeLikeTerm per term, in term order
        """
        terms = [self.normalize_term(sys.graph, term) for term in sys.terms]
        tsys = TreeLikeSystem(system=sys, terms=tuple(terms))
        logger.info(
            f"Normalized {len(terms)} terms; diameter preserved for "
            f"{tsys.preserved_fraction():.0%} of them"
        )
        return tsys

    def normalize_term(self, g: Graph, term: InteractionTerm) -> TreeLikeTerm:
        augmented = connect_set(g, term.vertices)
        added = [v for v in augmented if v not in term.vertices]
        vertices = tuple(term.vertices) + tuple(added)
        try:
            tree_edges = induced_subtree(g, vertices)
        except Disconnected:
            raise Disconnected(f"Term {term.name!r} could not be connected") from None
        t = build_tree_like_term(g, term, tree_edges, vertices)
        if added:
            logger.debug(f"Term {term.name!r}: added vertices {', '.join(added)}")
        if not t.diameter_preserved:
            logger.warning(
                f"Term {term.name!r}: diameter grew from {t.base_diameter} to {t.diameter} during normalization"
            )
        return t


def normalize(sys: LagrangianSystem) -> TreeLikeSystem:
    """Tree-like form of a system (deterministic BFS choices)"""
    return TreeNormalizer().normalize(sys)


def _format_chain(g: Graph, chain: Chain1) -> str:
    if chain.is_zero():
        return "0"
    parts = []
    for edge in sorted(chain.core, key=g.edge_index.__getitem__):
        value = chain.core[edge]
        sign = "+" if value > 0 else "-"
        magnitude = "" if abs(value) == 1 else f"{abs(value):g}"
        parts.append(f"{sign}{magnitude}[{edge[0]},{edge[1]}]")
    return " ".join(parts)


def format_annotations(tsys: TreeLikeSystem) -> List[str]:
    """Comment lines describing α′, Γ_α and every l_jk of each term"""
    g = tsys.system.graph
    lines = ["# tree-like form"]
    for t in tsys.terms:
        edges = ", ".join(f"{p}-{q}" for p, q in t.tree_edges) or "(none)"
        lines.append(f"# [term {t.term.name}] vertices' = {','.join(t.vertices)}")
        lines.append(f"#   tree = {edges}")
        lines.append(f"#   diameter {t.base_diameter} -> {t.diameter}; tree_like = {str(t.tree_like).lower()}")
        for j, k in vertex_pairs(g, t.vertices):
            lines.append(f"#   l({j},{k}) = {_format_chain(g, t.paths[(j, k)])}")
    return lines
