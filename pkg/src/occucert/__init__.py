"""Computational certificates for degree-sequence occupancy bounds in the hard-core model."""

from occucert.graph import Graph, from_edge_list

__version__ = "0.1.0"

__all__ = ["Graph", "from_edge_list", "__version__"]
