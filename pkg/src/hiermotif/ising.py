"""Annealed Ising renormalization on the triangle-motif graph (zero field).

Basic bonds carry coupling K, decorations carry L and are present with
probability p; both couplings already include the inverse temperature.  The
boundary partition functions A_k = Z_k(+,+,+) and B_k = Z_k(+,+,-) reduce to
the ratio x_k = A_k / B_k, which obeys x_{k+1} = t * phi(x_k).  Boundary
averages Y_k evolve through the stochastic matrices T(x_k).
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from hiermotif.errors import DomainError, MalformedMatrix

NINE_FIFTHS = 9.0 / 5.0
DIVERGENCE_GUARD = 1e100
CRITICAL_RTOL = 1e-12
# L below which t < 9/5 for every p
L_STAR = 0.25 * math.log(9.0 / 5.0)
# coupling at the degenerate fixed point x = 3 (t = 9/5)
K_STAR_DEGENERATE = 0.25 * math.log(3.0)


class PhaseLabel(str, enum.Enum):
    UNORDERED = "Unordered"
    ORDERED = "Ordered"
    CRITICAL = "Critical"


@dataclass(frozen=True)
class IsingParams:
    K: float
    L: float
    p: float

    def __post_init__(self):
        if not 0.0 <= self.p <= 1.0:
            raise DomainError(f"p must lie in [0, 1], got {self.p}")
        if not (math.isfinite(self.K) and math.isfinite(self.L)):
            raise DomainError("couplings K and L must be finite")

    @property
    def t(self) -> float:
        return t_param(self.L, self.p)

    @property
    def x1(self) -> float:
        return math.exp(4 * self.K)


# ---------------------------------------------------------------------------
# scalar maps

def decoration_factors(L: float, p: float) -> tuple[float, float]:
    """(R+, R-): annealed weight of three boundary decorations, aligned / one flipped."""
    up = p * math.exp(L) + 1 - p
    down = p * math.exp(-L) + 1 - p
    return up**3, up * down**2


def t_param(L: float, p: float) -> float:
    up = p * math.exp(L) + 1 - p
    down = p * math.exp(-L) + 1 - p
    return (up / down) ** 2


def phi(x: float) -> float:
    if not x > 0:
        raise DomainError(f"phi needs x > 0, got {x}")
    if math.isinf(x):
        return math.inf
    return (x * x - x + 4) / (x + 3)


def phi_prime(x: float) -> float:
    return 1 - (4 / (x + 3)) ** 2


@dataclass(frozen=True)
class FixedPointSet:
    """Positive solutions of x = t phi(x).

    ``stable`` is the attracting root (absent when t > 9/5); ``unstable`` is
    present only for 1 < t <= 9/5.
    """

    t: float
    stable: Optional[float]
    unstable: Optional[float]

    @property
    def roots(self) -> tuple[float, ...]:
        return tuple(r for r in (self.stable, self.unstable) if r is not None)


def fixed_points(t: float) -> FixedPointSet:
    if not t > 0:
        raise DomainError(f"t must be positive, got {t}")
    if t == 1.0:
        return FixedPointSet(t, 1.0, None)
    if abs(t - NINE_FIFTHS) <= 1e-12:
        return FixedPointSet(t, 3.0, 3.0)
    disc = 9 + 22 * t - 15 * t * t
    if disc < 0:
        return FixedPointSet(t, None, None)
    root = math.sqrt(disc)
    # (t - 1) x^2 - (t + 3) x + 4t = 0; the small root in cancellation-free form
    small = 8 * t / (3 + t + root)
    if t < 1:
        return FixedPointSet(t, small, None)
    return FixedPointSet(t, small, (3 + t + root) / (2 * (t - 1)))


@dataclass
class XSequence:
    values: list[float]
    diverged: bool

    def __len__(self) -> int:
        return len(self.values)


def iterate_x(params: IsingParams, k_max: int) -> XSequence:
    """x_1 = e^{4K}, x_{j+1} = t phi(x_j) for j < k_max.

    Stops early and flags divergence once x exceeds 1e100.
    """
    if k_max < 1:
        raise ValueError("k_max must be >= 1")
    t = params.t
    try:
        x = math.exp(4 * params.K)
    except OverflowError:
        x = math.inf
    values = [x]
    while len(values) < k_max:
        if x > DIVERGENCE_GUARD:
            return XSequence(values, True)
        x = t * phi(x)
        values.append(x)
    return XSequence(values, x > DIVERGENCE_GUARD)


def recursion_AB(params: IsingParams, k_max: int) -> list[tuple[float, float]]:
    """(log A_k, log B_k) for k = 1..k_max.

    A_{k+1} = R+ (A^3 + 3AB^2 + 4B^3),  B_{k+1} = R- (A^2 B + 4AB^2 + 3B^3),
    A_1 = e^{3K}, B_1 = e^{-K}, evaluated in the log domain.
    """
    r_plus, r_minus = decoration_factors(params.L, params.p)
    log_rp, log_rm = math.log(r_plus), math.log(r_minus)
    la, lb = 3 * params.K, -params.K
    out = [(la, lb)]
    for _ in range(k_max - 1):
        u = la - lb
        num = np.logaddexp.reduce([3 * u, math.log(3) + u, math.log(4)])
        den = np.logaddexp.reduce([2 * u, math.log(4) + u, math.log(3)])
        la, lb = log_rp + 3 * lb + float(num), log_rm + 3 * lb + float(den)
        out.append((la, lb))
    return out


def recursion_AB_uncorrected(params: IsingParams, k_max: int) -> list[tuple[float, float]]:
    """Linear-domain recursion with the uncorrected B line, A^2 + 4AB^2 + 3B^3.

    Kept as a negative control against the exhaustive partition function.
    """
    r_plus, r_minus = decoration_factors(params.L, params.p)
    a, b = math.exp(3 * params.K), math.exp(-params.K)
    out = [(a, b)]
    for _ in range(k_max - 1):
        a, b = r_plus * (a**3 + 3 * a * b * b + 4 * b**3), r_minus * (a * a + 4 * a * b * b + 3 * b**3)
        out.append((a, b))
    return out


# ---------------------------------------------------------------------------
# stochastic matrices

def transfer_matrix(x: float) -> np.ndarray:
    if not x > 0:
        raise DomainError(f"T(x) needs x > 0, got {x}")
    if math.isinf(x) or x > DIVERGENCE_GUARD:
        return np.array([[1.0, 0.0, 0.0], [1.0, 0.0, 0.0], [0.0, 0.0, 1.0]])
    d1 = x**3 + 3 * x + 4
    d2 = x * x + 4 * x + 3
    return np.array(
        [
            [x * (x * x + 1) / d1, 2 * (x + 1) / d1, 2 / d1],
            [x * (x + 1) / d2, 2 * (x + 1) / d2, (x + 1) / d2],
            [2 * x / d2, 2 * (x + 1) / d2, (x * x + 1) / d2],
        ]
    )


def dobrushin(T: np.ndarray) -> float:
    """Largest half-L1 distance between two rows of a row-stochastic matrix."""
    T = np.asarray(T, dtype=float)
    if T.ndim != 2 or np.any(np.abs(T.sum(axis=1) - 1) > 1e-9) or np.any(T < -1e-12):
        raise MalformedMatrix("rows must be probability vectors")
    diff = np.abs(T[:, None, :] - T[None, :, :]).sum(axis=2)
    return float(0.5 * diff.max())


def dobrushin_overlap(T: np.ndarray) -> float:
    """Equivalent form 1 - min_{i<j} sum_l min(T_il, T_jl)."""
    T = np.asarray(T, dtype=float)
    n = T.shape[0]
    overlaps = [np.minimum(T[i], T[j]).sum() for i in range(n) for j in range(i + 1, n)]
    return float(1 - min(overlaps))


def spread(y: np.ndarray) -> float:
    """d(Y) = max_i Y^i - min_i Y^i."""
    return float(np.max(y) - np.min(y))


# ---------------------------------------------------------------------------
# trajectories and phases

@dataclass
class IsingTrajectory:
    """x_k, D(S_k) for k = 1..k_max and Y_k, d(Y_k) for k = 1..k_max+1.

    S_k = T(x_k) ... T(x_1), so Y_{k+1} = S_k Y_1.  After divergence of x the
    limiting matrix T(inf) is used.
    """

    params: IsingParams
    x: list[float]
    Y: list[np.ndarray]
    S: np.ndarray
    dobrushin_S: list[float]
    diameter_Y: list[float]
    verdict: PhaseLabel
    diverged: bool = False
    row_sum_error: float = 0.0
    extra: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "K": self.params.K,
            "L": self.params.L,
            "p": self.params.p,
            "t": self.params.t,
            "verdict": self.verdict.value,
            "diverged": self.diverged,
            "x": [float(v) if math.isfinite(v) else "inf" for v in self.x],
            "dobrushin_S": list(map(float, self.dobrushin_S)),
            "diameter_Y": list(map(float, self.diameter_Y)),
            "Y_final": [float(v) for v in self.Y[-1]],
        }


def evolve_Y(params: IsingParams, Y1: Sequence[float], k_max: int) -> IsingTrajectory:
    y = np.asarray(Y1, dtype=float)
    if y.shape != (3,) or np.any(y <= 0):
        raise DomainError("Y1 must be a 3-vector with positive entries")
    xs = iterate_x(params, k_max)
    x_full = list(xs.values) + [math.inf] * (k_max - len(xs.values))
    S = np.eye(3)
    Ys, dS, dY = [y], [], [spread(y)]
    worst = 0.0
    for x in x_full:
        T = transfer_matrix(x)
        S = T @ S
        worst = max(worst, float(np.abs(S.sum(axis=1) - 1).max()))
        y = T @ y
        Ys.append(y)
        dS.append(dobrushin(S))
        dY.append(spread(y))
    return IsingTrajectory(
        params=params,
        x=x_full,
        Y=Ys,
        S=S,
        dobrushin_S=dS,
        diameter_Y=dY,
        verdict=classify_phase(params),
        diverged=xs.diverged or len(xs.values) < k_max,
        row_sum_error=worst,
    )


def gamma_sequence(xs: Sequence[float]) -> np.ndarray:
    """T_23(x_k) + T_32(x_k) = 3 / (x_k + 3)."""
    x = np.asarray(xs, dtype=float)
    return 3.0 / (x + 3.0)


def classify_phase(params: IsingParams) -> PhaseLabel:
    t = params.t
    if t <= 1.0:
        return PhaseLabel.UNORDERED
    if abs(t - NINE_FIFTHS) <= 1e-12:
        # x_k -> 3 for K <= K*; the equality point keeps its own label
        threshold = 3.0
    elif t > NINE_FIFTHS:
        return PhaseLabel.ORDERED
    else:
        threshold = fixed_points(t).unstable
    x1 = params.x1
    if abs(x1 - threshold) <= CRITICAL_RTOL * max(1.0, threshold):
        return PhaseLabel.CRITICAL
    return PhaseLabel.UNORDERED if x1 < threshold else PhaseLabel.ORDERED


def critical_K(L: float, p: float) -> Optional[float]:
    t = t_param(L, p)
    if t <= 1.0:
        return None
    if abs(t - NINE_FIFTHS) <= 1e-12:
        return K_STAR_DEGENERATE
    if t > NINE_FIFTHS:
        return None
    return math.log(fixed_points(t).unstable) / 4


def psi(L: float, clamp: bool = False) -> float:
    """Largest decoration probability with t < 9/5 at coupling L (> L*).

    Below L* every p keeps t < 9/5: raises DomainError, or returns 1.0 when
    ``clamp`` is set.
    """
    if L < L_STAR:
        if clamp:
            return 1.0
        raise DomainError(f"psi(L) exceeds 1 for L < L* = {L_STAR:.7f}")
    r5 = math.sqrt(5.0)
    return (3 - r5) / (r5 * math.exp(L) - 3 * math.exp(-L) + 3 - r5)


def critical_curves():
    return L_STAR, psi


# ---------------------------------------------------------------------------
# sweeps

PHASE_COLUMNS = ("L", "p", "K", "t", "x1", "x_star1", "x_star2", "K_star", "verdict")


def phase_row(K: float, L: float, p: float) -> dict:
    params = IsingParams(K, L, p)
    t = params.t
    fp = fixed_points(t)
    return {
        "L": L,
        "p": p,
        "K": K,
        "t": t,
        "x1": params.x1,
        "x_star1": fp.stable,
        "x_star2": fp.unstable,
        "K_star": critical_K(L, p),
        "verdict": classify_phase(params).value,
    }


def phase_diagram(L_values, p_values, K_values) -> list[dict]:
    """Long-format rows ordered by L, then p, then K."""
    return [
        phase_row(float(K), float(L), float(p))
        for L in L_values
        for p in p_values
        for K in K_values
    ]
