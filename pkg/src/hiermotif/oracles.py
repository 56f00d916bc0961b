"""Exhaustive-enumeration ground truth for the recursions.

The annealed Ising partition function on Lambda_2 and Lambda_3 of the
triangle motif is summed over every internal spin assignment.  Given the
spins, the decoration indicators are independent, so each slot contributes
the exact factor p e^{L s} + 1 - p instead of being enumerated.
"""

from __future__ import annotations

from itertools import product
from typing import Callable, NamedTuple

import numpy as np

from hiermotif.errors import TooManySlots, UnsupportedLevel
from hiermotif.hierarchy import GraphTopology, build
from hiermotif.ising import IsingParams

MAX_ENUM_SLOTS = 20


class BoundarySpins(NamedTuple):
    a: int
    b: int
    c: int


# boundaries whose averages make up Y^1, Y^2, Y^3
Y_BOUNDARIES = (BoundarySpins(1, 1, 1), BoundarySpins(1, 1, -1), BoundarySpins(1, -1, -1))


def _configurations(g: GraphTopology, boundary: BoundarySpins) -> np.ndarray:
    n = g.node_count
    inner = n - 3
    grid = np.array(list(product((1, -1), repeat=inner)), dtype=float).reshape(-1, inner)
    spins = np.empty((grid.shape[0], n))
    spins[:, :3] = boundary
    spins[:, 3:] = grid
    return spins


def _log_weights(params: IsingParams, g: GraphTopology, spins: np.ndarray) -> np.ndarray:
    be = g.basic_edges
    basic = params.K * (spins[:, be[:, 0]] * spins[:, be[:, 1]]).sum(axis=1)
    s = spins[:, g.slots[:, 0]] * spins[:, g.slots[:, 1]]
    deco = np.log(params.p * np.exp(params.L * s) + 1 - params.p).sum(axis=1)
    return basic + deco


def _check_level(k: int) -> None:
    if k not in (2, 3):
        raise UnsupportedLevel(f"exhaustive enumeration supports k in {{2, 3}}, got {k}")


def brute_force_partition(params: IsingParams, k: int, boundary) -> float:
    _check_level(k)
    g = build("m1", k)
    spins = _configurations(g, BoundarySpins(*boundary))
    return float(np.exp(_log_weights(params, g, spins)).sum())


def designated_triangle(g: GraphTopology) -> tuple[int, int, int]:
    """Nodes of the level-one triangle that contains external node a.

    External node a keeps exactly its two motif bonds at every level, so its
    basic neighbours close that triangle.
    """
    be = g.basic_edges
    nbrs = np.concatenate([be[be[:, 0] == 0, 1], be[be[:, 1] == 0, 0]])
    b, c = sorted(int(v) for v in nbrs)
    return 0, b, c


def brute_force_F(
    params: IsingParams,
    k: int,
    f: Callable[[np.ndarray, np.ndarray, np.ndarray], np.ndarray],
    boundary,
) -> float:
    """Annealed Gibbs average of f(sigma_a, sigma_b', sigma_c') on the designated triangle.

    ``f`` must accept numpy arrays and be symmetric in its last two arguments.
    """
    _check_level(k)
    g = build("m1", k)
    spins = _configurations(g, BoundarySpins(*boundary))
    logw = _log_weights(params, g, spins)
    w = np.exp(logw - logw.max())
    a, b, c = designated_triangle(g)
    vals = np.asarray(f(spins[:, a], spins[:, b], spins[:, c]), dtype=float)
    return float((w * vals).sum() / w.sum())


def brute_force_Y(params: IsingParams, k: int, f) -> np.ndarray:
    return np.array([brute_force_F(params, k, f, bd) for bd in Y_BOUNDARIES])


def brute_force_degree_law(g: GraphTopology, node: int, p: float) -> dict[int, float]:
    """Exact degree pmf of one node by enumerating its incident slot subsets."""
    incident = np.flatnonzero((g.slots == node).any(axis=1))
    s = len(incident)
    if s > MAX_ENUM_SLOTS:
        raise TooManySlots(f"node {node} touches {s} slots (limit {MAX_ENUM_SLOTS})")
    base = int(g.basic_degree()[node])
    pmf: dict[int, float] = {}
    for bits in product((0, 1), repeat=s):
        on = sum(bits)
        pmf[base + on] = pmf.get(base + on, 0.0) + p**on * (1 - p) ** (s - on)
    return dict(sorted(pmf.items()))


def brute_force_pooled_degree_law(g: GraphTopology, p: float) -> dict[int, float]:
    """Node-averaged degree pmf by enumerating every subset of all slots."""
    s = g.n_slots
    if s > MAX_ENUM_SLOTS:
        raise TooManySlots(f"graph has {s} slots (limit {MAX_ENUM_SLOTS})")
    basic = g.basic_degree()
    n = g.node_count
    pmf: dict[int, float] = {}
    for bits in product((False, True), repeat=s):
        active = np.array(bits, dtype=bool)
        on = int(active.sum())
        prob = p**on * (1 - p) ** (s - on)
        deg = basic + np.bincount(g.slots[active].ravel(), minlength=n)
        for d, cnt in zip(*np.unique(deg, return_counts=True)):
            pmf[int(d)] = pmf.get(int(d), 0.0) + prob * cnt / n
    return dict(sorted(pmf.items()))
