"""Clustering, diameters and boundary ratios of realized graphs."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp
from scipy.sparse import csgraph

from hiermotif.hierarchy import GraphTopology, expected_level_sizes, node_count
from hiermotif.motifs import get_motif
from hiermotif.sampling import DecorationRealization

# sources per BFS batch; bounds the distance block at ~64 MB for 2**17 nodes
_BFS_BATCH = 64


@dataclass
class StructureReport:
    motif: str
    k: int
    p: float
    seed: int
    clustering_avg: float
    diameter: int
    boundary_ratio: float
    per_level_clustering: dict[int, float] = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "motif": self.motif,
            "k": self.k,
            "p": self.p,
            "seed": self.seed,
            "clustering_avg": self.clustering_avg,
            "diameter": self.diameter,
            "boundary_ratio": self.boundary_ratio,
            "per_level_clustering": {str(k): v for k, v in self.per_level_clustering.items()},
        }


def adjacency(g: GraphTopology, real: DecorationRealization | None = None) -> sp.csr_matrix:
    edges = g.edges(None if real is None else real.active)
    n = g.node_count
    data = np.ones(2 * len(edges))
    rows = np.concatenate([edges[:, 0], edges[:, 1]])
    cols = np.concatenate([edges[:, 1], edges[:, 0]])
    return sp.csr_matrix((data, (rows, cols)), shape=(n, n))


def local_clustering(g: GraphTopology, real: DecorationRealization | None = None):
    """Return (degree, N, Q) arrays; Q(i) = 0 where degree < 2."""
    a = adjacency(g, real)
    deg = np.asarray(a.sum(axis=1)).ravel()
    links = np.asarray((a @ a).multiply(a).sum(axis=1)).ravel() / 2
    denom = deg * (deg - 1)
    q = np.divide(2 * links, denom, out=np.zeros_like(links), where=denom > 0)
    return deg.astype(np.int64), np.rint(links).astype(np.int64), q


def clustering_average(g: GraphTopology, real: DecorationRealization | None = None) -> float:
    return float(local_clustering(g, real)[2].mean())


def per_level_clustering(g: GraphTopology, real: DecorationRealization | None = None) -> dict[int, float]:
    q = local_clustering(g, real)[2]
    return {
        int(lv): float(q[g.level_class == lv].mean())
        for lv in np.unique(g.level_class)
    }


def diameter(g: GraphTopology, real: DecorationRealization | None = None) -> int:
    """Exact diameter: the largest BFS eccentricity over all sources."""
    a = adjacency(g, real)
    n = g.node_count
    best = 0
    for start in range(0, n, _BFS_BATCH):
        idx = np.arange(start, min(n, start + _BFS_BATCH))
        dist = csgraph.shortest_path(a, method="D", unweighted=True, indices=idx)
        top = dist.max()
        if math.isinf(top):
            raise ValueError("realized graph is disconnected")
        best = max(best, int(top))
    return best


def mean_degree(g: GraphTopology, real: DecorationRealization | None = None) -> float:
    m = g.basic_edges.shape[0] + (0 if real is None else real.n_active)
    return 2.0 * m / g.node_count


def small_world_bound(g: GraphTopology, real: DecorationRealization | None = None, C: float = 4.0) -> float:
    """C * log_<n_k> |V_k| with the realized mean degree."""
    return C * math.log(g.node_count) / math.log(mean_degree(g, real))


def boundary_ratio_closed(motif, k: int) -> float:
    q = get_motif(motif).q
    return (k * (q - 1) ** 2 + (q - 1) * (k + 2)) / (0.5 * (q**k + q))


# ---------------------------------------------------------------------------
# closed forms for the bare (p=0) and fully decorated (p=1) graphs

def clustering_m1_bare_closed(k: int) -> float:
    """Bare M1 average clustering, k >= 2 (Lambda_1 is a single triangle, Q = 1)."""
    v = node_count(3, k)
    v1 = expected_level_sizes(3, k)[1]
    return 1 / 3 + v1 / (6 * v) + 2 / v


def clustering_m5_bare_closed(k: int) -> float:
    """Bare M5 average clustering, k >= 2 (Lambda_1 is K4, Q = 1)."""
    v = node_count(4, k)
    v1 = expected_level_sizes(4, k)[1]
    return 2 / 5 + 2 * v1 / (15 * v) + 12 / (5 * v)


def clustering_m1_decorated_closed(k: int) -> float:
    """Closed-form finite-k average for decorated M1.

    Built on n(i) = 4l, N(i) = 4l for internal nodes and n = 2k, N = 2k - 1
    for external ones.  Direct counting on built graphs gives larger N from
    level 2 up (see ``clustering_m1_decorated_structural``).
    """
    s = sum(3.0**-l / (4 * l - 1) for l in range(1, k))
    return 4 * 3.0**k / (3.0**k + 3) * s + 6 / (k * (3.0**k + 3))


def clustering_limit_m1_decorated(terms: int) -> float:
    """Partial sum 4 * sum_{l=1..terms} 3^-l / (4l - 1)."""
    if terms < 1:
        raise ValueError("terms must be >= 1")
    return 4 * math.fsum(3.0**-l / (4 * l - 1) for l in range(1, terms + 1))


def clustering_limit_m1_decorated_arctan() -> float:
    """Arctan/log form of the series limit; evaluates to minus the series value."""
    c = 3.0**-0.25
    return 2 * c * math.atan(c) - c * math.log((3.0**0.25 + 1) / (3.0**0.25 - 1))


def _per_level_average(q: int, k: int, internal, external) -> float:
    sizes = expected_level_sizes(q, k)
    total = 0.0
    for l, size in sizes.items():
        n, links = internal(l) if l < k else external(k)
        total += size * 2 * links / (n * (n - 1))
    return total / node_count(q, k)


def clustering_m1_decorated_structural(k: int) -> float:
    """Decorated M1 average from counted per-level values.

    Internal level l: n = 4l, N = 6l - 2.  External: n = 2k, N = 3k - 2.
    The extra links over N = 4l and N = 2k - 1 join neighbours that sit in
    different copies (glued through another copy's decoration or through the
    newest decoration between external nodes).
    """
    if k == 1:
        return 1.0
    return _per_level_average(3, k, lambda l: (4 * l, 6 * l - 2), lambda k: (2 * k, 3 * k - 2))


def clustering_m5_decorated_structural(k: int) -> float:
    """Decorated M5 average: internal n = 6l, N = 12l - 3; external n = 3k, N = 6k - 3."""
    if k == 1:
        return 1.0
    return _per_level_average(4, k, lambda l: (6 * l, 12 * l - 3), lambda k: (3 * k, 6 * k - 3))


def clustering_limit_decorated_structural(motif, terms: int = 60) -> float:
    motif = get_motif(motif)
    q = motif.q
    if motif.id.value == "M1":
        per = lambda l: 2 * (6 * l - 2) / (4 * l * (4 * l - 1))  # noqa: E731
    elif motif.id.value == "M5":
        per = lambda l: 2 * (12 * l - 3) / (6 * l * (6 * l - 1))  # noqa: E731
    else:
        raise ValueError("structural decorated limit available for M1 and M5 only")
    return math.fsum((q - 1) * float(q) ** -l * per(l) for l in range(1, terms + 1))


def structure_report(g: GraphTopology, real: DecorationRealization) -> StructureReport:
    q = local_clustering(g, real)[2]
    return StructureReport(
        motif=g.motif.id.value,
        k=g.k,
        p=real.p,
        seed=real.seed,
        clustering_avg=float(q.mean()),
        diameter=diameter(g, real),
        boundary_ratio=boundary_ratio_closed(g.motif, g.k),
        per_level_clustering={
            int(lv): float(q[g.level_class == lv].mean()) for lv in np.unique(g.level_class)
        },
    )
