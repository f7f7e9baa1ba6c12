"""Polynomial kernels for above-guarantee subgraph problems on lambda-extendible properties."""
from .graph import Graph, GraphError
from .properties import PropertySpec, builtin, ex, ms, pt, property_constants
from .kernel import Instance, kernelize

__all__ = ["Graph", "GraphError", "PropertySpec", "builtin", "ex", "ms", "pt",
           "property_constants", "Instance", "kernelize"]
