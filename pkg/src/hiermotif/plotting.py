"""Figures written next to the CSV/JSON outputs of the CLI."""

from __future__ import annotations

import math
from pathlib import Path
from typing import Sequence

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from hiermotif.ising import L_STAR, IsingTrajectory, psi  # noqa: E402

VERDICT_COLORS = {"Unordered": "tab:blue", "Ordered": "tab:red", "Critical": "k"}


def _save(fig, path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    # no timestamp metadata so repeated runs give identical files
    fig.savefig(path, dpi=120, metadata={"Software": None} if path.suffix == ".png" else None)
    plt.close(fig)
    return path


def plot_degree_fit(report, path):
    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(10, 4))
    d = np.asarray(report.degrees)
    ax1.bar(d - 0.2, report.empirical_prob, width=0.4, label="sampled")
    ax1.bar(d + 0.2, report.model_prob, width=0.4, label="mixture")
    ax1.set_xlabel("degree")
    ax1.set_ylabel("probability")
    ax1.set_title(f"{report.motif}, k={report.k}, p={report.p}")
    ax1.legend()

    t = np.asarray(report.t_grid)
    ax2.plot(t, np.real(report.cf_model), "-", label="Re model")
    ax2.plot(t, np.real(report.cf_empirical), "o", label="Re sampled")
    ax2.plot(t, np.imag(report.cf_model), "--", label="Im model")
    ax2.plot(t, np.imag(report.cf_empirical), "s", label="Im sampled")
    ax2.set_xlabel("t")
    ax2.set_title("characteristic function")
    ax2.legend(fontsize=8)
    fig.tight_layout()
    return _save(fig, path)


def plot_structure_series(rows: Sequence[dict], path, title: str = ""):
    k = [r["k"] for r in rows]
    fig, axes = plt.subplots(1, 3, figsize=(12, 3.6))
    axes[0].plot(k, [r["Q_k"] for r in rows], "o-")
    axes[0].set_ylabel("average clustering")
    axes[1].semilogy(k, [r["diam"] for r in rows], "o-", base=2)
    axes[1].set_ylabel("diameter")
    axes[2].semilogy(k, [r["boundary_ratio"] for r in rows], "o-")
    axes[2].set_ylabel("boundary ratio")
    for ax in axes:
        ax.set_xlabel("k")
    if title:
        fig.suptitle(title)
    fig.tight_layout()
    return _save(fig, path)


def plot_phase_diagram(rows: Sequence[dict], path, max_panels: int = 4):
    ps = sorted({r["p"] for r in rows})
    shown = ps[:: max(1, math.ceil(len(ps) / max_panels))][:max_panels]
    fig, axes = plt.subplots(1, len(shown), figsize=(4 * len(shown), 3.8), squeeze=False)
    for ax, p in zip(axes[0], shown):
        sub = [r for r in rows if r["p"] == p]
        for verdict, color in VERDICT_COLORS.items():
            pts = [(r["L"], r["K"]) for r in sub if r["verdict"] == verdict]
            if pts:
                L, K = zip(*pts)
                ax.scatter(L, K, s=8, c=color, label=verdict)
        crit = sorted({(r["L"], r["K_star"]) for r in sub if r["K_star"] is not None})
        if crit:
            L, Ks = zip(*crit)
            Kmax = max(r["K"] for r in sub)
            ax.plot(L, np.minimum(Ks, Kmax), "k-", lw=1, label="K*")
        ax.axvline(L_STAR, color="grey", ls=":", lw=1)
        ax.set_title(f"p = {p:g}")
        ax.set_xlabel("L")
        ax.set_ylabel("K")
    axes[0][0].legend(fontsize=8)
    fig.tight_layout()
    return _save(fig, path)


def plot_trajectory(traj: IsingTrajectory, path):
    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(10, 3.8))
    x = np.array(traj.x, dtype=float)
    k = np.arange(1, len(x) + 1)
    finite = np.isfinite(x)
    ax1.semilogy(k[finite], x[finite], ".-")
    ax1.set_xlabel("k")
    ax1.set_ylabel("x_k")
    ax1.set_title(f"K={traj.params.K:g}, L={traj.params.L:g}, p={traj.params.p:g}: {traj.verdict.value}")
    ax2.plot(k, traj.dobrushin_S, label="D(S_k)")
    ax2.plot(np.arange(1, len(traj.diameter_Y) + 1), traj.diameter_Y, label="d(Y_k)")
    ax2.set_xlabel("k")
    ax2.legend()
    fig.tight_layout()
    return _save(fig, path)


def plot_critical_curve(path, L_max: float = 2.0):
    L = np.linspace(L_STAR, L_max, 200)
    fig, ax = plt.subplots(figsize=(5, 3.8))
    ax.plot(L, [psi(v) for v in L])
    ax.set_xlabel("L")
    ax.set_ylabel("p*")
    ax.set_ylim(0, 1.05)
    fig.tight_layout()
    return _save(fig, path)
