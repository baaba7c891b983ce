"""Tree-like normalization components"""

from .tree_normalizer import (
    TreeNormalizer,
    connect_set,
    induced_subtree,
    normalize,
    tree_path,
    build_tree_like_term,
    with_path_override,
    format_annotations,
)

__all__ = [
    "TreeNormalizer",
    "connect_set",
    "induced_subtree",
    "normalize",
    "tree_path",
    "build_tree_like_term",
    "with_path_override",
    "format_annotations",
]
