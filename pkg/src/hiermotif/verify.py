"""Oracle and identity checks behind the ``verify`` subcommand.

Every check is deterministic (fixed seeds, no timings) so the rendered table
is byte-identical across runs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from hiermotif import degrees, ising, oracles, structure
from hiermotif.hierarchy import (
    basic_edge_count,
    build,
    expected_level_sizes,
    level_partition,
    node_count,
    slot_count,
)
from hiermotif.motifs import MotifId, all_motifs
from hiermotif.sampling import full

VERIFY_SEED = 20240917


@dataclass(frozen=True)
class CheckResult:
    suite: str
    name: str
    passed: bool
    detail: str


def _fmt(err: float) -> str:
    return f"max_err={err:.3e}"


# ---------------------------------------------------------------------------
# suites

def check_counting(k_q3: int = 7, k_q4: int = 6) -> list[CheckResult]:
    out = []
    for m in all_motifs():
        top = k_q3 if m.q == 3 else k_q4
        bad = []
        for k in range(1, top + 1):
            g = build(m, k)
            ok = (
                g.node_count == node_count(m.q, k)
                and len(g.basic_edges) == basic_edge_count(m, k)
                and g.n_slots == slot_count(m, k)
                and level_partition(g) == expected_level_sizes(m.q, k)
            )
            if not ok:
                bad.append(k)
        out.append(CheckResult("hierarchy", f"counts {m.id.value} k<={top}", not bad, f"bad_k={bad}"))
    return out


def check_degree_structure(k_max: int = 5) -> list[CheckResult]:
    out = []
    for m in all_motifs():
        bad = []
        for k in range(1, k_max + 1):
            g = build(m, k)
            comp = degrees.node_components(g)
            real = np.column_stack([g.basic_degree(), g.slot_incidence()])
            mix = degrees.mixture_model(m, k, 0.5)
            keys, counts = np.unique(comp, axis=0, return_counts=True)
            predicted = {(b, s): c for (_, b, s), c in zip(mix.components, mix.multiplicities)}
            counted = {(int(b), int(s)): int(c) for (b, s), c in zip(keys, counts)}
            if not np.array_equal(comp, real) or predicted != counted:
                bad.append(k)
        out.append(CheckResult("degrees", f"components {m.id.value} k<={k_max}", not bad, f"bad_k={bad}"))
    return out


def check_degree_laws(p: float = 0.37) -> list[CheckResult]:
    out = []
    # pooled law on small graphs by enumerating all slot subsets
    for motif, k in (("m1", 2), ("m1", 3), ("m3", 2), ("m5", 2)):
        g = build(motif, k)
        exact = oracles.brute_force_pooled_degree_law(g, p)
        mix = degrees.mixture_model(motif, k, p)
        err = max(abs(v - mix.pmf(d)) for d, v in exact.items())
        out.append(CheckResult("degrees", f"pooled law {motif.upper()} k={k}", err < 1e-12, _fmt(err)))
    # per-node law against the node's binomial component
    for m in all_motifs():
        g = build(m, 3)
        comp = degrees.node_components(g)
        err = 0.0
        for node in range(g.node_count):
            exact = oracles.brute_force_degree_law(g, node, p)
            b, s = comp[node]
            for d, v in exact.items():
                err = max(err, abs(v - math.comb(s, d - b) * p ** (d - b) * (1 - p) ** (s - d + b)))
        out.append(CheckResult("degrees", f"node laws {m.id.value} k=3", err < 1e-12, _fmt(err)))
    return out


def check_moments() -> list[CheckResult]:
    out = []
    grid_p = (0.0, 0.25, 0.5, 0.75, 1.0)
    for m in all_motifs():
        err = max(
            abs(degrees.mean_degree_closed(m, k, p) - degrees.mixture_model(m, k, p).mean())
            for k in range(2, 12)
            for p in grid_p
        )
        out.append(CheckResult("moments", f"mean {m.id.value}", err < 1e-10, _fmt(err)))
        err2 = max(
            abs(degrees.second_moment_limit(m, p) - degrees.mixture_model(m, 40, p).second_moment())
            for p in grid_p
        )
        out.append(CheckResult("moments", f"second moment limit {m.id.value}", err2 < 1e-8, _fmt(err2)))
    return out


def check_char_fns() -> list[CheckResult]:
    out = []
    t = np.linspace(-3, 3, 20)
    for motif in (MotifId.M3, MotifId.M2):
        err = max(
            float(np.max(np.abs(
                degrees.char_fn_finite(motif, k, p, t) - degrees.char_fn_closed_finite(motif, k, p, t)
            )))
            for k in (2, 3, 5, 8)
            for p in (0.2, 0.5, 0.9)
        )
        out.append(CheckResult("char_fn", f"finite-k {motif.value}", err < 1e-10, _fmt(err)))
    for m in all_motifs():
        err = max(
            float(np.max(np.abs(degrees.char_fn_finite(m, 40, p, t) - degrees.char_fn_limit(m, p, t))))
            for p in (0.2, 0.5, 0.9)
        )
        out.append(CheckResult("char_fn", f"limit {m.id.value}", err < 1e-6, _fmt(err)))
    return out


def check_clustering() -> list[CheckResult]:
    out = []
    for motif, closed, k_max in (
        ("m1", structure.clustering_m1_bare_closed, 7),
        ("m5", structure.clustering_m5_bare_closed, 6),
    ):
        err = max(
            abs(structure.clustering_average(build(motif, k)) - closed(k)) for k in range(2, k_max + 1)
        )
        name = f"bare clustering {motif.upper()} 2<=k<={k_max}"
        out.append(CheckResult("structure", name, err < 1e-12, _fmt(err)))
    for motif, formula, k_max in (
        ("m1", structure.clustering_m1_decorated_structural, 6),
        ("m5", structure.clustering_m5_decorated_structural, 5),
    ):
        err = 0.0
        for k in range(1, k_max + 1):
            g = build(motif, k)
            err = max(err, abs(structure.clustering_average(g, full(g)) - formula(k)))
        out.append(
            CheckResult("structure", f"decorated clustering {motif.upper()} per-level", err < 1e-12, _fmt(err))
        )
    bad = []
    for m in all_motifs():
        for k in range(1, 6):
            want = 2 ** (k - 1) if m.id in (MotifId.M1, MotifId.M5) else 2**k
            if structure.diameter(build(m, k)) != want:
                bad.append(f"{m.id.value}/{k}")
    out.append(CheckResult("structure", "bare diameters k<=5", not bad, f"bad={bad}"))
    return out


def _random_params(rng: np.random.Generator, n: int) -> list[ising.IsingParams]:
    ps = (0.0, 0.3, 0.7, 1.0)
    return [
        ising.IsingParams(float(rng.uniform(-1.5, 1.5)), float(rng.uniform(-1.5, 1.5)), ps[i % 4])
        for i in range(n)
    ]


def _observable(a, b, c):
    return 2 + a + 0.5 * b * c


def check_ising_oracle(draws: int = 20) -> list[CheckResult]:
    rng = np.random.default_rng(VERIFY_SEED)
    params = _random_params(rng, draws)
    err_z = err_f = 0.0
    for prm in params:
        rec = ising.recursion_AB(prm, 3)
        for k in (2, 3):
            la, lb = rec[k - 1]
            za = oracles.brute_force_partition(prm, k, (1, 1, 1))
            zb = oracles.brute_force_partition(prm, k, (1, 1, -1))
            err_z = max(err_z, abs(za / math.exp(la) - 1), abs(zb / math.exp(lb) - 1))
    Y1 = np.array([_observable(1, 1, 1), _observable(1, 1, -1), _observable(1, -1, -1)], dtype=float)
    for prm in params[: max(10, draws // 2)]:
        traj = ising.evolve_Y(prm, Y1, 2)
        for k in (2, 3):
            y = oracles.brute_force_Y(prm, k, _observable)
            err_f = max(err_f, float(np.max(np.abs(y / traj.Y[k - 1] - 1))))
    control = ising.IsingParams(0.5, 0.3, 0.5)
    a2, b2 = ising.recursion_AB_uncorrected(control, 2)[1]
    ratio = b2 / oracles.brute_force_partition(control, 2, (1, 1, -1))
    return [
        CheckResult("ising_oracle", f"partition k=2,3 ({draws} draws)", err_z < 1e-10, _fmt(err_z)),
        CheckResult("ising_oracle", "boundary averages k=2,3", err_f < 1e-10, _fmt(err_f)),
        CheckResult(
            "ising_oracle", "uncorrected B-line rejected (negative control)", abs(ratio - 1) > 0.1,
            f"ratio={ratio:.6f}",
        ),
    ]


def check_fixed_points() -> list[CheckResult]:
    fp = ising.fixed_points(ising.NINE_FIFTHS)
    err_deg = max(abs(fp.stable - 3), abs(fp.unstable - 3))
    err_k = abs(ising.critical_K(ising.L_STAR, 1.0) - math.log(3) / 4)
    err_psi = abs(ising.psi(ising.L_STAR) - 1)
    ok_sign = True
    for t in np.linspace(1, 1.8, 22)[1:-1]:
        f = ising.fixed_points(float(t))
        ok_sign &= t * ising.phi_prime(f.stable) < 1 < t * ising.phi_prime(f.unstable)
    resid = 0.0
    for t in np.linspace(0.2, 1.79, 30):
        for x in ising.fixed_points(float(t)).roots:
            resid = max(resid, abs(t * ising.phi(x) - x) / x)
    return [
        CheckResult("ising", "degenerate pair at t=9/5", err_deg < 1e-12, _fmt(err_deg)),
        CheckResult("ising", "K* at t=9/5 equals ln3/4", err_k < 1e-12, _fmt(err_k)),
        CheckResult("ising", "psi(L*) = 1", err_psi < 1e-12, _fmt(err_psi)),
        CheckResult("ising", "stability signs on (1, 9/5)", bool(ok_sign), ""),
        CheckResult("ising", "fixed point residuals", resid < 1e-12, _fmt(resid)),
    ]


def check_phases() -> list[CheckResult]:
    worst = 0.0
    labels_ok = True
    for L in (-1.0, 0.0):
        for K in (-1.0, -0.5, 0.0, 0.5, 1.0):
            tr = ising.evolve_Y(ising.IsingParams(K, L, 0.5), (2, 1, 1), 100)
            worst = max(worst, tr.dobrushin_S[-1])
            labels_ok &= tr.verdict is ising.PhaseLabel.UNORDERED
    ks = ising.critical_K(0.1, 0.5)
    lo = ising.classify_phase(ising.IsingParams(0.9 * ks, 0.1, 0.5))
    hi = ising.evolve_Y(ising.IsingParams(1.1 * ks, 0.1, 0.5), (2, 1, 1), 199)
    k0 = ising.classify_phase(ising.IsingParams(0.0, 0.5, 0.5))
    return [
        CheckResult("ising", "unordered for L<=0", labels_ok and worst <= 1e-6, f"max_D={worst:.3e}"),
        CheckResult("ising", "0.9 K* unordered", lo is ising.PhaseLabel.UNORDERED, lo.value),
        CheckResult(
            "ising", "1.1 K* ordered, d(Y_200) >= 1e-3",
            hi.verdict is ising.PhaseLabel.ORDERED and hi.diameter_Y[-1] >= 1e-3,
            f"d={hi.diameter_Y[-1]:.6f}",
        ),
        CheckResult("ising", "p above psi(L) ordered at K=0", k0 is ising.PhaseLabel.ORDERED, k0.value),
    ]


SUITES: dict[str, Callable[[], list[CheckResult]]] = {
    "hierarchy": check_counting,
    "degrees": lambda: check_degree_structure() + check_degree_laws(),
    "moments": check_moments,
    "char_fn": check_char_fns,
    "structure": check_clustering,
    "ising_oracle": check_ising_oracle,
    "ising": lambda: check_fixed_points() + check_phases(),
}


def run_all(suites=None) -> list[CheckResult]:
    names = list(SUITES) if suites is None else list(suites)
    results = []
    for name in names:
        if name not in SUITES:
            raise ValueError(f"unknown suite {name!r}; choose from {sorted(SUITES)}")
        results.extend(SUITES[name]())
    return results


def render_table(results: list[CheckResult]) -> str:
    width = max(len(f"{r.suite}/{r.name}") for r in results)
    lines = [
        f"{'PASS' if r.passed else 'FAIL'}  {(r.suite + '/' + r.name).ljust(width)}  {r.detail}".rstrip()
        for r in results
    ]
    n_fail = sum(not r.passed for r in results)
    lines.append(f"{len(results) - n_fail}/{len(results)} checks passed")
    return "\n".join(lines) + "\n"
