"""Structural controllability and minimal input problems for descriptor systems."""
from .controllability import ControllabilityReport, check_structural_controllability, explain, is_solvable
from .dm import DMComponent, DMDecomposition, dm_decompose
from .matching import Matching, max_matching
from .mcp import (Mcp0Solution, Mcp1Solution, UnsolvableError, cover_sets, is_input_configuration,
                  solve_mcp0, solve_mcp1_exact, solve_mcp1_greedy)
from .reduction import ReducedSystem, set_cover_to_descriptor
from .setcover import SetCoverInstance, exact_set_cover, greedy_set_cover
from .system import (BipartiteGraph, DescriptorSystem, GraphView, Node, StructuralPattern,
                     build_bipartite, e, parse_system, serialize_system, u, view_edges, x)

__version__ = "0.1.0"

__all__ = [
    "BipartiteGraph", "ControllabilityReport", "DMComponent", "DMDecomposition",
    "DescriptorSystem", "GraphView", "Matching", "Mcp0Solution", "Mcp1Solution", "Node",
    "ReducedSystem", "SetCoverInstance", "StructuralPattern", "UnsolvableError",
    "build_bipartite", "check_structural_controllability", "cover_sets", "dm_decompose", "e",
    "exact_set_cover", "explain", "greedy_set_cover", "is_input_configuration", "is_solvable",
    "max_matching", "parse_system", "serialize_system", "set_cover_to_descriptor", "solve_mcp0",
    "solve_mcp1_exact", "solve_mcp1_greedy", "u", "view_edges", "x",
]
