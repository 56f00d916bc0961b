"""Analytic node-degree law: a finite mixture of shifted binomials.

A node picked uniformly from Lambda_k falls in a component (w, b, s) with
probability w and then has degree b + nu, nu ~ Binomial(s, p).  Internal
nodes created by gluing motif nodes i and j at level l have b = n0(i) + n0(j)
and s = b (l - 1); external node i has b = n0(i) and s = n0(i) (k - 1).

The generic mixture is the single source of truth.  The motif-specific
closed forms further down are kept only for cross-checking.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import combinations
from typing import Optional, Sequence

import numpy as np
from scipy import special

from hiermotif.hierarchy import GraphTopology
from hiermotif.motifs import MotifId, MotifSpec, get_motif
from hiermotif.sampling import ensemble


def _binom_pmf(x, n: int, p: float) -> np.ndarray:
    """Binomial pmf evaluated in log space.

    scipy.stats.binom.pmf overflows inside its beta-derivative kernel for
    p near the smallest normal double, so the log form is used instead.
    """
    x = np.asarray(x)
    inside = (x >= 0) & (x <= n)
    xs = np.where(inside, x, 0).astype(float)
    with np.errstate(divide="ignore"):
        log_pmf = (
            special.gammaln(n + 1.0) - special.gammaln(xs + 1.0) - special.gammaln(n - xs + 1.0)
            + special.xlogy(xs, p) + special.xlog1py(n - xs, -p)
        )
    return np.where(inside, np.exp(log_pmf), 0.0)


@dataclass(frozen=True)
class DegreeMixture:
    motif: MotifId
    k: int
    p: float
    components: tuple[tuple[float, int, int], ...]
    multiplicities: tuple[int, ...] = ()
    total: int = 0

    @property
    def weights(self) -> np.ndarray:
        return np.array([c[0] for c in self.components])

    @property
    def max_degree(self) -> int:
        return max(b + s for _, b, s in self.components)

    def pmf(self, n) -> np.ndarray:
        n = np.asarray(n)
        out = np.zeros(n.shape, dtype=float)
        if self.total:
            # node counts first, one division last: exact at p in {0, 1}
            for mult, (_, b, s) in zip(self.multiplicities, self.components):
                out = out + mult * _binom_pmf(n - b, s, self.p)
            return out / self.total
        for w, b, s in self.components:
            out = out + w * _binom_pmf(n - b, s, self.p)
        return out

    def support_pmf(self) -> tuple[np.ndarray, np.ndarray]:
        degrees = np.arange(self.max_degree + 1)
        return degrees, self.pmf(degrees)

    def moment(self, order: int) -> float:
        degrees, probs = self.support_pmf()
        return float(np.sum(probs * degrees.astype(float) ** order))

    def mean(self) -> float:
        # exact per-component means avoid summing pmf round-off
        return float(sum(w * (b + s * self.p) for w, b, s in self.components))

    def second_moment(self) -> float:
        p = self.p
        return float(
            sum(w * ((b + s * p) ** 2 + s * p * (1 - p)) for w, b, s in self.components)
        )


def _mixture(motif: MotifSpec, k: int, p: float, parts, total: int) -> DegreeMixture:
    # integer multiplicities are summed first so each weight is a correctly
    # rounded count / |V_k|
    merged: dict[tuple[int, int], int] = {}
    for mult, b, s in parts:
        merged[(b, s)] = merged.get((b, s), 0) + mult
    return DegreeMixture(
        motif=motif.id,
        k=k,
        p=p,
        components=tuple((mult / total, b, s) for (b, s), mult in merged.items()),
        multiplicities=tuple(merged.values()),
        total=total,
    )


def mixture_model(motif, k: int, p: float) -> DegreeMixture:
    """Degree mixture of Lambda_k.

    Level-l internal weight is (q-1) q^-l / (1 + q^(1-k)), shared equally by
    the q(q-1)/2 glue pairs; the external weight 2 / (q^(k-1) + 1) is shared
    equally by the q motif nodes.  Both are held as node multiplicities over
    |V_k| = (q^k + q) / 2.
    """
    motif = get_motif(motif)
    q, deg = motif.q, motif.base_degrees
    k = int(k)
    if k < 1:
        raise ValueError(f"level k must be >= 1, got {k}")
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"p must lie in [0, 1], got {p}")
    if k == 1:
        parts = [(1, d, 0) for d in deg]
        return _mixture(motif, 1, p, parts, q)

    pairs = list(combinations(range(q), 2))
    parts = []
    for l in range(1, k):
        mult = q ** (k - 1 - l)
        for i, j in pairs:
            b = deg[i] + deg[j]
            parts.append((mult, b, b * (l - 1)))
    for d in deg:
        parts.append((1, d, d * (k - 1)))
    return _mixture(motif, k, p, parts, (q**k + q) // 2)


def node_components(g: GraphTopology) -> np.ndarray:
    """Predicted (basic degree, slot count) for every node of ``g``, shape (n, 2)."""
    deg = np.array((0,) + g.motif.base_degrees)
    ext = g.external_index > 0
    base = np.where(ext, deg[g.external_index], deg[g.glue_pair[:, 0]] + deg[g.glue_pair[:, 1]])
    slots = np.where(ext, base * (g.k - 1), base * (g.level_class - 1))
    return np.column_stack([base, slots])


def mixture_pmf(m: DegreeMixture, n):
    out = m.pmf(n)
    return float(out) if np.ndim(out) == 0 else out


# ---------------------------------------------------------------------------
# moments

def mean_degree_generic(motif, k: float, p: float) -> float:
    """Mean degree 2<|E_k|>/|V_k| written in its general-motif form."""
    motif = get_motif(motif)
    q, r = motif.q, motif.r
    tail = 0.0 if math.isinf(k) else (q - 1 + 2 * p) / (q ** (k - 1) + 1)
    return 4 * r / (q * (q - 1)) * (q - 1 + p - tail)


def mean_degree_closed(motif, k: float, p: float) -> float:
    """Motif-specific closed form of the mean degree; ``k`` may be math.inf."""
    motif = get_motif(motif)
    q = motif.q
    if motif.id in (MotifId.M1, MotifId.M5):
        if math.isinf(k):
            return 2 * q - 2 + 2 * p
        qk = float(q) ** (k - 1)
        return (qk * (2 * q - 2 + 2 * p) - 2 * p) / (qk + 1)
    tail = 0.0 if math.isinf(k) else (3 + 2 * p) / (4.0 ** (k - 1) + 1)
    if motif.id is MotifId.M4:
        return 5 + 5 / 3 * (p - tail)
    return 4 + 4 / 3 * (p - tail)


def second_moment_limit(motif, p: float) -> float:
    motif = get_motif(motif)
    if motif.id in (MotifId.M1, MotifId.M5):
        q = motif.q
        return 4 * (q - 1) ** 2 + (8 * q - 6) * p + (4 * q + 2) * p**2
    if motif.id is MotifId.M3:
        return 16 + 12 * p + 68 / 9 * p**2
    if motif.id is MotifId.M2:
        return 50 / 3 + 112 / 9 * p + 214 / 27 * p**2
    return 76 / 3 + 167 / 9 * p + 335 / 27 * p**2


# ---------------------------------------------------------------------------
# characteristic functions

def _ipow(z: np.ndarray, n: int) -> np.ndarray:
    """z**n for a non-negative integer n by repeated squaring."""
    result = np.ones_like(z)
    base = z
    while n:
        if n & 1:
            result = result * base
        n >>= 1
        if n:
            base = base * base
    return result


def _scalar_or_array(t, values: np.ndarray):
    return complex(values) if np.ndim(t) == 0 else values


def char_fn_finite(motif, k: int, p: float, t):
    """Characteristic function of the level-k degree mixture."""
    m = mixture_model(motif, k, p)
    tt = np.asarray(t, dtype=float)
    z = p * np.exp(1j * tt) + (1 - p)
    out = np.zeros(tt.shape, dtype=complex)
    for w, b, s in m.components:
        out = out + w * np.exp(1j * b * tt) * _ipow(z, s)
    return _scalar_or_array(t, out)


def char_fn_closed_finite(motif, k: int, p: float, t):
    """Finite-k closed forms written out per motif (available for M3 and M2)."""
    motif = get_motif(motif)
    tt = np.asarray(t, dtype=float)
    e = lambda n: np.exp(1j * n * tt)  # noqa: E731
    z = p * e(1) + 1 - p
    c = 4.0 ** (1 - k)
    if motif.id is MotifId.M3:
        out = 3 * e(4) / (1 + c) * (1 - c * z ** (4 * (k - 1))) / (4 - z**4)
        out = out + 2 * e(2) / (4.0 ** (k - 1) + 1) * z ** (2 * (k - 1))
    elif motif.id is MotifId.M2:
        inner = sum(
            e(b) * (1 - c * z ** (b * (k - 1))) / (4 - z**b) for b in (3, 4, 5)
        )
        outer = (
            2 * e(2) * z ** (2 * (k - 1))
            + e(3) * z ** (3 * (k - 1))
            + e(1) * z ** (k - 1)
        )
        out = inner / (1 + c) + 2 / (4.0**k + 4) * outer
    else:
        raise ValueError(f"no closed finite-k form for {motif.id.value}")
    return _scalar_or_array(t, out)


def char_fn_limit(motif, p: float, t):
    """Closed-form k -> infinity characteristic functions."""
    motif = get_motif(motif)
    tt = np.asarray(t, dtype=float)
    e = lambda n: np.exp(1j * n * tt)  # noqa: E731
    z = p * e(1) + 1 - p
    if motif.id in (MotifId.M1, MotifId.M5):
        q = motif.q
        out = (q - 1) * e(2 * (q - 1)) / (q - z ** (2 * (q - 1)))
    elif motif.id is MotifId.M3:
        out = 3 * e(4) / (4 - z**4)
    elif motif.id is MotifId.M2:
        out = sum(e(b) / (4 - z**b) for b in (3, 4, 5))
    else:
        out = e(4) / (2 * (4 - z**4)) + 2 * e(5) / (4 - z**5) + e(6) / (2 * (4 - z**6))
    return _scalar_or_array(t, out)


# ---------------------------------------------------------------------------
# empirical comparison

DEFAULT_T_GRID = tuple(np.round(np.linspace(0.25, 3.0, 12), 6))


@dataclass
class FitReport:
    motif: str
    k: int
    p: float
    n_samples: int
    seed: int
    degrees: np.ndarray
    empirical_prob: np.ndarray
    model_prob: np.ndarray
    total_variation: float
    mean_empirical: float
    mean_standard_error: float
    mean_model: float
    t_grid: np.ndarray
    cf_empirical: np.ndarray
    cf_model: np.ndarray
    extra: dict = field(default_factory=dict)

    @property
    def mean_z_score(self) -> float:
        diff = self.mean_empirical - self.mean_model
        if self.mean_standard_error == 0.0:
            return 0.0 if abs(diff) < 1e-12 else math.inf
        return diff / self.mean_standard_error

    def to_dict(self) -> dict:
        return {
            "motif": self.motif,
            "k": self.k,
            "p": self.p,
            "n_samples": self.n_samples,
            "seed": self.seed,
            "total_variation": self.total_variation,
            "mean_empirical": self.mean_empirical,
            "mean_standard_error": self.mean_standard_error,
            "mean_model": self.mean_model,
            "histogram": [
                {"degree": int(d), "empirical_prob": float(e), "model_prob": float(m)}
                for d, e, m in zip(self.degrees, self.empirical_prob, self.model_prob)
            ],
            "char_fn": [
                {
                    "t": float(t),
                    "empirical_re": float(ce.real),
                    "empirical_im": float(ce.imag),
                    "model_re": float(cm.real),
                    "model_im": float(cm.imag),
                }
                for t, ce, cm in zip(self.t_grid, self.cf_empirical, self.cf_model)
            ],
        }


def realized_degrees(g: GraphTopology, active: np.ndarray) -> np.ndarray:
    extra = np.bincount(g.slots[np.asarray(active, bool)].ravel(), minlength=g.node_count)
    return g.basic_degree() + extra


def degree_fit(
    g: GraphTopology,
    p: float,
    n_samples: int,
    seed: int,
    t_grid: Optional[Sequence[float]] = None,
    workers: Optional[int] = None,
) -> FitReport:
    if n_samples < 1:
        raise ValueError(f"n_samples must be >= 1, got {n_samples}")
    t_grid = np.asarray(DEFAULT_T_GRID if t_grid is None else t_grid, dtype=float)
    model = mixture_model(g.motif, g.k, p)
    top = max(model.max_degree, int(g.basic_degree().max() + g.slot_incidence().max()))

    counts = np.zeros(top + 1, dtype=np.int64)
    sample_means = np.empty(n_samples)
    cf_sum = np.zeros(t_grid.shape, dtype=complex)
    for idx, real in enumerate(ensemble(g, p, seed, n_samples, workers=workers)):
        d = realized_degrees(g, real.active)
        counts += np.bincount(d, minlength=top + 1)
        sample_means[idx] = d.mean()
        cf_sum += np.exp(1j * np.outer(t_grid, d)).sum(axis=1)

    total = n_samples * g.node_count
    degrees = np.arange(top + 1)
    empirical = counts / total
    model_prob = model.pmf(degrees)
    se = float(sample_means.std(ddof=1) / math.sqrt(n_samples)) if n_samples > 1 else 0.0
    return FitReport(
        motif=g.motif.id.value,
        k=g.k,
        p=float(p),
        n_samples=int(n_samples),
        seed=int(seed),
        degrees=degrees,
        empirical_prob=empirical,
        model_prob=model_prob,
        total_variation=float(0.5 * np.abs(empirical - model_prob).sum()),
        mean_empirical=float(sample_means.mean()),
        mean_standard_error=se,
        mean_model=mean_degree_closed(g.motif, g.k, p),
        t_grid=t_grid,
        cf_empirical=cf_sum / total,
        cf_model=np.asarray(char_fn_finite(g.motif, g.k, p, t_grid)),
    )
