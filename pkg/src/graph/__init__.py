"""Graph core: metric, chains, boundary and cycle space"""

from .graph_metric import (
    distance,
    set_diameter,
    bfs_geodesic,
    bfs_tree_edges,
    is_connected,
    vertex_pairs,
)
from .chain_complex import (
    walk_chain,
    tree_path_chain,
    boundary,
    cycle_basis,
    cycle_coordinates,
)

__all__ = [
    "distance",
    "set_diameter",
    "bfs_geodesic",
    "bfs_tree_edges",
    "is_connected",
    "vertex_pairs",
    "walk_chain",
    "tree_path_chain",
    "boundary",
    "cycle_basis",
    "cycle_coordinates",
]
