"""Minimum soapy union: choose integer shifts that make a family of sets overlap as much as possible."""

from .core import Instance, Objective, difference_set, evaluate, normalize
from .graphs import EdgeWeights, Graph, WeightedTree
from .reductions import ReducedInstance, Ruler, encode_vc, ruler
from .solvers import (
    Certificate,
    SolveResult,
    improve_disconnected,
    solve_exact,
    solve_greedy,
    solve_oracle,
    verify_certificate,
)

__all__ = [
    "Certificate",
    "EdgeWeights",
    "Graph",
    "Instance",
    "Objective",
    "ReducedInstance",
    "Ruler",
    "SolveResult",
    "WeightedTree",
    "difference_set",
    "encode_vc",
    "evaluate",
    "improve_disconnected",
    "normalize",
    "ruler",
    "solve_exact",
    "solve_greedy",
    "solve_oracle",
    "verify_certificate",
]
