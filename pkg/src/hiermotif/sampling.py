"""Random decoration of an underlying graph.

Each decoration slot is switched on independently with probability p.  The
uniform variate for slot s of a realization with seed S is the s-th output of
a Philox4x64 counter-based generator keyed by S, so a realization depends
only on (graph, p, seed) and never on how many workers produced it.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Iterator, Optional

import numpy as np

from hiermotif.hierarchy import GraphTopology

_MASK64 = (1 << 64) - 1
THREADS_ENV = "HIERMOTIF_THREADS"


def mix(base_seed: int, index: int) -> int:
    """SplitMix64 finalizer applied to base_seed + (index + 1) * golden gamma."""
    z = (int(base_seed) + (int(index) + 1) * 0x9E3779B97F4A7C15) & _MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return z ^ (z >> 31)


def default_workers() -> int:
    raw = os.environ.get(THREADS_ENV)
    if raw:
        try:
            return max(1, int(raw))
        except ValueError:
            raise ValueError(f"{THREADS_ENV} must be an integer, got {raw!r}") from None
    return 1


def slot_uniforms(seed: int, n_slots: int) -> np.ndarray:
    bitgen = np.random.Philox(key=int(seed) & _MASK64)
    return np.random.Generator(bitgen).random(n_slots)


@dataclass(frozen=True, eq=False)
class DecorationRealization:
    graph_ref: str
    p: float
    seed: int
    active: np.ndarray

    @property
    def n_active(self) -> int:
        return int(self.active.sum())

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, DecorationRealization):
            return NotImplemented
        return (
            self.graph_ref == other.graph_ref
            and self.p == other.p
            and self.seed == other.seed
            and np.array_equal(self.active, other.active)
        )

    __hash__ = None  # type: ignore[assignment]


def graph_ref(g: GraphTopology) -> str:
    return f"{g.motif.id.value}/k={g.k}"


def _check_p(p: float) -> float:
    p = float(p)
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"p must lie in [0, 1], got {p}")
    return p


def sample(g: GraphTopology, p: float, seed: int) -> DecorationRealization:
    p = _check_p(p)
    seed = int(seed) & _MASK64
    if p == 0.0:
        active = np.zeros(g.n_slots, dtype=bool)
    elif p == 1.0:
        active = np.ones(g.n_slots, dtype=bool)
    else:
        active = slot_uniforms(seed, g.n_slots) < p
    return DecorationRealization(graph_ref(g), p, seed, active)


def bare(g: GraphTopology) -> DecorationRealization:
    return sample(g, 0.0, 0)


def full(g: GraphTopology) -> DecorationRealization:
    return sample(g, 1.0, 0)


def ensemble_seeds(base_seed: int, n: int) -> list[int]:
    return [mix(base_seed, i) for i in range(n)]


def ensemble(
    g: GraphTopology,
    p: float,
    base_seed: int,
    n: int,
    workers: Optional[int] = None,
) -> Iterator[DecorationRealization]:
    """Yield ``n`` realizations; realization i uses seed mix(base_seed, i)."""
    if n < 1:
        raise ValueError(f"ensemble size must be >= 1, got {n}")
    p = _check_p(p)
    seeds = ensemble_seeds(base_seed, n)
    workers = default_workers() if workers is None else max(1, int(workers))
    if workers == 1:
        for s in seeds:
            yield sample(g, p, s)
        return
    with ThreadPoolExecutor(max_workers=workers) as pool:
        yield from pool.map(lambda s: sample(g, p, s), seeds)
