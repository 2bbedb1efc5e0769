"""Local approximate single- and multi-commodity flow on unit-capacity graphs.

Solvers return a dict with an ``artifact`` (a flow or an infeasibility
certificate, discriminated by ``artifact["kind"]``) and a ``stats`` report.
"""

from ._localflow import (
    Graph,
    GraphError,
    ParseError,
    compute_iterations,
    grid_graph,
    path_graph,
    random_balanced_demand,
    random_gnm_graph,
    random_regular_graph,
    solve_multi,
    solve_single,
    verify,
)


def solve(graph, demands, eps, audit=False):
    """Route one demand dict or a list of them; dispatches on the commodity count."""
    if isinstance(demands, dict):
        return solve_single(graph, demands, eps, audit)
    if len(demands) == 1:
        return solve_single(graph, demands[0], eps, audit)
    return solve_multi(graph, demands, eps, audit)


__all__ = [
    "Graph",
    "GraphError",
    "ParseError",
    "compute_iterations",
    "grid_graph",
    "path_graph",
    "random_balanced_demand",
    "random_gnm_graph",
    "random_regular_graph",
    "solve",
    "solve_multi",
    "solve_single",
    "verify",
]
