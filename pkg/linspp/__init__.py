"""Linearization of order-d shortest path problems on acyclic digraphs."""

from linspp.apec import ApecInstance, compute_gamma, corresponding_apec_instance, solve_apec
from linspp.costs import LinearCost, OrderDCost, eval_linear, eval_order_d, reduce_form
from linspp.graph import (
    Dag,
    Path,
    build_dag,
    choose_nonbasic_system,
    enumerate_paths,
    prune_to_covered,
    restrict_to_prefix_subgraph,
    topological_arc_order,
)
from linspp.instance_io import read_instance, write_instance
from linspp.linearizer import linearize, verify_linearization
from linspp.verdicts import ApecVerdict, FailureWitness, LinVerdict, TwoPathSystem

__version__ = "0.1.0"

__all__ = [
    "ApecInstance",
    "ApecVerdict",
    "Dag",
    "FailureWitness",
    "LinVerdict",
    "LinearCost",
    "OrderDCost",
    "Path",
    "TwoPathSystem",
    "build_dag",
    "choose_nonbasic_system",
    "compute_gamma",
    "corresponding_apec_instance",
    "enumerate_paths",
    "eval_linear",
    "eval_order_d",
    "linearize",
    "prune_to_covered",
    "read_instance",
    "reduce_form",
    "restrict_to_prefix_subgraph",
    "solve_apec",
    "topological_arc_order",
    "verify_linearization",
    "write_instance",
]
