"""Exact solvers for the convex-closure achievement game GEN(S, W)."""

from .builders import (PointConfig, TreeSpec, affine_geometry, deleted_affine, hull_membership,
                       path_geometry, tree_vertex_geometry)
from .closed_forms import (NotApplicable, nim_closed, nim_extreme_W, nim_path_multi,
                           nim_path_single, nim_tree_multi, nim_tree_single)
from .formats import Instance, load_instance, parse_instance
from .game import GameSpec, grundy_of_dag, mex, nim_bruteforce, nim_of_position, nim_table
from .geometry import Geometry, isomorphic, mask_of, elements_of, validate_axioms
from .structure import class_of_position, nim_structure, orbit_quotient, solve_structure

__all__ = [
    "Geometry", "GameSpec", "Instance", "NotApplicable", "PointConfig", "TreeSpec",
    "affine_geometry", "class_of_position", "deleted_affine", "elements_of", "grundy_of_dag",
    "hull_membership", "isomorphic", "load_instance", "mask_of", "mex", "nim_bruteforce",
    "nim_closed", "nim_extreme_W", "nim_of_position", "nim_path_multi", "nim_path_single",
    "nim_structure", "nim_table", "nim_tree_multi", "nim_tree_single", "orbit_quotient",
    "parse_instance", "path_geometry", "solve_structure", "tree_vertex_geometry",
    "validate_axioms",
]
