"""Local resilience laboratory for random regular and binomial graphs."""

from rlab.graph import DensityReport, Graph, GraphError, Partition, density_rho, induced_bipartite, remove_subgraph

__version__ = "0.1.0"

__all__ = [
    "DensityReport",
    "Graph",
    "GraphError",
    "Partition",
    "density_rho",
    "induced_bipartite",
    "remove_subgraph",
    "__version__",
]
