"""Deterministic construction of the underlying graphs Lambda_k.

Lambda_1 is the motif itself with every bond basic.  Lambda_j is made from
q copies of Lambda_{j-1}: external node j of copy i is identified with
external node i of copy j, node i of copy i stays external, and r new
decoration slots join the new external nodes along the motif bonds.

Node ids are compact.  The q external nodes always hold ids 0..q-1 (id i-1
for motif node i); the nodes glued at the latest step follow in
lexicographic pair order, then the remaining nodes of copy 1, copy 2, ...
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from itertools import combinations
from typing import Optional

import numpy as np

from hiermotif.errors import CapacityExceeded
from hiermotif.motifs import MotifSpec, get_motif

MAX_NODES = 2**22


def node_count(q: int, k: int) -> int:
    return (q**k + q) // 2


@dataclass(frozen=True)
class NodeRecord:
    id: int
    level_class: int
    glue_pair: Optional[tuple[int, int]]
    external_index: Optional[int]

    @property
    def external(self) -> bool:
        return self.external_index is not None


@dataclass(frozen=True)
class SlotRecord:
    endpoints: tuple[int, int]
    creation_level: int


@dataclass(frozen=True, eq=False)
class GraphTopology:
    """Underlying graph Lambda_k with per-node provenance.

    ``glue_pair`` rows are (0, 0) and ``external_index`` entries are 0 where
    the attribute is absent; present values are motif node indices 1..q.
    """

    motif: MotifSpec
    k: int
    level_class: np.ndarray
    glue_pair: np.ndarray
    external_index: np.ndarray
    basic_edges: np.ndarray
    slots: np.ndarray
    slot_level: np.ndarray

    @property
    def node_count(self) -> int:
        return int(self.level_class.shape[0])

    @property
    def external_ids(self) -> np.ndarray:
        return np.arange(self.motif.q)

    @property
    def n_slots(self) -> int:
        return int(self.slots.shape[0])

    def node(self, i: int) -> NodeRecord:
        gp = tuple(int(v) for v in self.glue_pair[i])
        ext = int(self.external_index[i])
        return NodeRecord(
            id=int(i),
            level_class=int(self.level_class[i]),
            glue_pair=gp if gp[0] else None,
            external_index=ext or None,
        )

    @property
    def nodes(self) -> list[NodeRecord]:
        return [self.node(i) for i in range(self.node_count)]

    @property
    def decoration_slots(self) -> list[SlotRecord]:
        return [
            SlotRecord((int(u), int(v)), int(lv))
            for (u, v), lv in zip(self.slots, self.slot_level)
        ]

    def basic_degree(self) -> np.ndarray:
        return np.bincount(self.basic_edges.ravel(), minlength=self.node_count)

    def slot_incidence(self) -> np.ndarray:
        """Number of decoration slots touching each node."""
        return np.bincount(self.slots.ravel(), minlength=self.node_count)

    def edges(self, active: Optional[np.ndarray] = None) -> np.ndarray:
        """Realized edge list: basic edges followed by the active slots."""
        if active is None:
            return self.basic_edges
        return np.concatenate([self.basic_edges, self.slots[np.asarray(active, bool)]])

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, GraphTopology):
            return NotImplemented
        return (
            self.motif == other.motif
            and self.k == other.k
            and all(
                np.array_equal(getattr(self, f), getattr(other, f))
                for f in (
                    "level_class",
                    "glue_pair",
                    "external_index",
                    "basic_edges",
                    "slots",
                    "slot_level",
                )
            )
        )

    __hash__ = None  # type: ignore[assignment]


def _level_one(motif: MotifSpec) -> GraphTopology:
    q = motif.q
    edges = np.array(motif.edges, dtype=np.int64) - 1
    return GraphTopology(
        motif=motif,
        k=1,
        level_class=np.ones(q, dtype=np.int64),
        glue_pair=np.zeros((q, 2), dtype=np.int64),
        external_index=np.arange(1, q + 1, dtype=np.int64),
        basic_edges=edges,
        slots=np.zeros((0, 2), dtype=np.int64),
        slot_level=np.zeros(0, dtype=np.int64),
    )


def _glue(prev: GraphTopology) -> GraphTopology:
    motif = prev.motif
    q, n, j = motif.q, prev.node_count, prev.k + 1
    pairs = list(combinations(range(q), 2))
    n_glued = len(pairs)
    n_inner = n - q

    # remap[c, v]: new id of local node v in copy c
    remap = np.empty((q, n), dtype=np.int64)
    remap[np.arange(q), np.arange(q)] = np.arange(q)
    for t, (a, b) in enumerate(pairs):
        remap[a, b] = remap[b, a] = q + t
    first_inner = q + n_glued
    remap[:, q:] = first_inner + np.arange(q)[:, None] * n_inner + np.arange(n_inner)
    new_n = first_inner + q * n_inner

    level_class = np.empty(new_n, dtype=np.int64)
    glue_pair = np.zeros((new_n, 2), dtype=np.int64)
    external_index = np.zeros(new_n, dtype=np.int64)

    level_class[:q] = j
    external_index[:q] = np.arange(1, q + 1)
    level_class[q:first_inner] = j - 1
    glue_pair[q:first_inner] = np.array(pairs, dtype=np.int64) + 1
    inner = remap[:, q:]
    level_class[inner] = prev.level_class[q:]
    glue_pair[inner] = prev.glue_pair[q:]

    def carry(pairs_arr: np.ndarray) -> np.ndarray:
        if pairs_arr.size == 0:
            return np.zeros((0, 2), dtype=np.int64)
        mapped = np.concatenate([remap[c][pairs_arr] for c in range(q)])
        return np.sort(mapped, axis=1)

    new_slots = np.array(motif.edges, dtype=np.int64) - 1
    slots = np.concatenate([carry(prev.slots), new_slots])
    slot_level = np.concatenate(
        [np.tile(prev.slot_level, q), np.full(motif.r, j, dtype=np.int64)]
    )
    return GraphTopology(
        motif=motif,
        k=j,
        level_class=level_class,
        glue_pair=glue_pair,
        external_index=external_index,
        basic_edges=carry(prev.basic_edges),
        slots=slots,
        slot_level=slot_level,
    )


def build(motif, k: int, max_nodes: int = MAX_NODES) -> GraphTopology:
    """Construct Lambda_k for ``motif``.

    Raises CapacityExceeded when (q^k + q)/2 exceeds ``max_nodes``.
    """
    motif = get_motif(motif)
    k = int(k)
    if k < 1:
        raise ValueError(f"level k must be >= 1, got {k}")
    size = node_count(motif.q, k)
    if size > max_nodes:
        raise CapacityExceeded(
            f"{motif.id.value} at k={k} has {size} nodes, above the cap of {max_nodes}"
        )
    g = _level_one(motif)
    for _ in range(k - 1):
        g = _glue(g)
    return g


def level_partition(g: GraphTopology) -> dict[int, int]:
    counts = Counter(int(v) for v in g.level_class)
    return {lv: counts[lv] for lv in sorted(counts)}


def expected_level_sizes(q: int, k: int) -> dict[int, int]:
    sizes = {l: q ** (k - l) * (q - 1) // 2 for l in range(1, k)}
    sizes[k] = q
    return sizes


def expected_edge_count(motif, k: int, p: float) -> float:
    """Expected number of realized bonds in Lambda_k at decoration probability p."""
    motif = get_motif(motif)
    q, r = motif.q, motif.r
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"p must lie in [0, 1], got {p}")
    return r * q ** (k - 1) + r * p * (q ** (k - 1) - 1) / (q - 1)


def basic_edge_count(motif, k: int) -> int:
    motif = get_motif(motif)
    return motif.r * motif.q ** (k - 1)


def slot_count(motif, k: int) -> int:
    motif = get_motif(motif)
    return motif.r * (motif.q ** (k - 1) - 1) // (motif.q - 1)
