"""Defective and clustered graph colouring.

Colouring engines for the classical graph classes (outerplanar, planar,
bounded genus, bounded degree, minor- and immersion-free, bounded
circumference, bounded thickness), the extremal constructions certifying
their lower bounds, and exact desk-scale oracles that everything is tested
against.
"""

from .colouring import Certificate, Colouring, ColourAllocator, ListAssignment, audit, respects_lists
from .graphs import Graph, Layering, PlaneTriangulation, TPartition, bfs_layering, mad_exact
from .errors import (
    DefclustError,
    HypothesisViolation,
    OracleCapExceeded,
    OracleContractViolation,
)

__all__ = [
    "Certificate",
    "Colouring",
    "ColourAllocator",
    "DefclustError",
    "Graph",
    "HypothesisViolation",
    "Layering",
    "ListAssignment",
    "OracleCapExceeded",
    "OracleContractViolation",
    "PlaneTriangulation",
    "TPartition",
    "audit",
    "bfs_layering",
    "mad_exact",
    "respects_lists",
]
