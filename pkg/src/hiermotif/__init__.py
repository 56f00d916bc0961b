"""Hierarchical random graphs built from network motifs.

Graph construction, analytic degree laws, structural metrics and the
annealed Ising renormalization on the triangle-motif graph.
"""

from hiermotif.errors import (
    CapacityExceeded,
    DomainError,
    MalformedMatrix,
    TooManySlots,
    UnsupportedLevel,
)
from hiermotif.motifs import MotifId, MotifSpec, get_motif
from hiermotif.hierarchy import GraphTopology, build, expected_edge_count, level_partition
from hiermotif.sampling import DecorationRealization, ensemble, sample

__version__ = "0.1.0"

__all__ = [
    "CapacityExceeded",
    "DomainError",
    "MalformedMatrix",
    "TooManySlots",
    "UnsupportedLevel",
    "MotifId",
    "MotifSpec",
    "get_motif",
    "GraphTopology",
    "build",
    "expected_edge_count",
    "level_partition",
    "DecorationRealization",
    "ensemble",
    "sample",
]
