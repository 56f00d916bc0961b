import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from hiermotif.errors import DomainError, MalformedMatrix
from hiermotif.ising import (
    K_STAR_DEGENERATE,
    L_STAR,
    NINE_FIFTHS,
    PHASE_COLUMNS,
    IsingParams,
    PhaseLabel,
    classify_phase,
    critical_K,
    dobrushin,
    dobrushin_overlap,
    evolve_Y,
    fixed_points,
    gamma_sequence,
    iterate_x,
    phase_diagram,
    phi,
    phi_prime,
    psi,
    recursion_AB,
    spread,
    t_param,
    transfer_matrix,
)


def test_t_param_special_values():
    assert t_param(0.7, 0.0) == 1.0
    assert t_param(0.0, 0.6) == 1.0
    assert t_param(0.3, 1.0) == pytest.approx(math.exp(1.2))
    assert t_param(-0.3, 0.5) < 1 < t_param(0.3, 0.5)


def test_phi():
    assert phi(1.0) == 1.0
    assert phi(3.0) == pytest.approx(10 / 6)
    assert phi_prime(1.0) == 0.0
    with pytest.raises(DomainError):
        phi(0.0)


def test_fixed_points_quadratic():
    # t = 3/2: x^2 - 9x + 12 = 0
    fp = fixed_points(1.5)
    assert fp.stable == pytest.approx((9 - math.sqrt(33)) / 2, rel=1e-14)
    assert fp.unstable == pytest.approx((9 + math.sqrt(33)) / 2, rel=1e-14)
    assert fixed_points(1.0).roots == (1.0,)
    assert fixed_points(NINE_FIFTHS).roots == (3.0, 3.0)
    assert fixed_points(2.0).roots == ()
    low = fixed_points(0.5)
    assert low.unstable is None and 0 < low.stable < 1


@settings(deadline=None, max_examples=60)
@given(st.floats(0.01, 1.799))
def test_fixed_points_solve_the_map(t):
    for x in fixed_points(t).roots:
        assert t * phi(x) == pytest.approx(x, rel=1e-11)


def test_stability_signs():
    for t in np.linspace(1, 1.8, 22)[1:-1]:
        fp = fixed_points(float(t))
        assert t * phi_prime(fp.stable) < 1 < t * phi_prime(fp.unstable)


def test_constants():
    assert L_STAR == pytest.approx(0.25 * math.log(9 / 5), rel=1e-15)
    assert L_STAR == pytest.approx(0.1469467, abs=1e-7)
    assert K_STAR_DEGENERATE == pytest.approx(0.2746531, abs=1e-7)
    assert psi(L_STAR) == pytest.approx(1.0, abs=1e-12)
    assert psi(0.5) == pytest.approx(0.29035883302226323, rel=1e-14)
    assert t_param(0.5, psi(0.5)) == pytest.approx(NINE_FIFTHS, rel=1e-12)
    assert psi(0.0, clamp=True) == 1.0
    with pytest.raises(DomainError):
        psi(0.1)


def test_iterate_x():
    xs = iterate_x(IsingParams(0.2, 0.0, 0.5), 30)
    assert xs.values[0] == pytest.approx(math.exp(0.8))
    assert xs.values[-1] == pytest.approx(1.0, abs=1e-12)
    big = iterate_x(IsingParams(3.0, 1.0, 1.0), 500)
    assert big.diverged and len(big) < 500
    with pytest.raises(ValueError):
        iterate_x(IsingParams(0, 0, 0), 0)


def test_recursion_ratio_matches_x_map():
    prm = IsingParams(0.4, 0.2, 0.6)
    ab = recursion_AB(prm, 8)
    xs = iterate_x(prm, 8).values
    for (la, lb), x in zip(ab, xs):
        assert math.exp(la - lb) == pytest.approx(x, rel=1e-12)


@settings(deadline=None, max_examples=50)
@given(st.floats(1e-3, 1e6))
def test_transfer_matrix_stochastic(x):
    T = transfer_matrix(x)
    assert np.allclose(T.sum(axis=1), 1, atol=1e-12)
    assert np.all(T >= 0)
    assert dobrushin(T) == pytest.approx(dobrushin_overlap(T), abs=1e-12)
    assert T[1, 2] + T[2, 1] == pytest.approx(gamma_sequence([x])[0], rel=1e-12)


def test_transfer_limit_and_errors():
    assert np.array_equal(transfer_matrix(math.inf), transfer_matrix(1e300))
    with pytest.raises(DomainError):
        transfer_matrix(-1.0)
    with pytest.raises(MalformedMatrix):
        dobrushin(np.array([[0.5, 0.6], [0.5, 0.5]]))
    assert dobrushin(np.eye(3)) == 1.0
    assert dobrushin(np.full((3, 3), 1 / 3)) == pytest.approx(0.0, abs=1e-15)


def test_constant_Y_is_preserved():
    tr = evolve_Y(IsingParams(0.3, 0.2, 0.4), (1.5, 1.5, 1.5), 20)
    assert all(np.allclose(y, 1.5) for y in tr.Y)
    assert max(tr.diameter_Y) == pytest.approx(0.0, abs=1e-12)
    assert tr.row_sum_error < 1e-12


def test_contraction_bound_in_unordered_phase():
    prm = IsingParams(0.5, -0.4, 0.7)
    tr = evolve_Y(prm, (2.0, 1.0, 0.5), 60)
    d1 = tr.diameter_Y[0]
    for dS, dY in zip(tr.dobrushin_S, tr.diameter_Y[1:]):
        assert dY <= dS * d1 + 1e-12
    assert tr.dobrushin_S[-1] < 1e-6


def test_evolve_Y_validation():
    with pytest.raises(DomainError):
        evolve_Y(IsingParams(0, 0, 0.5), (1.0, 0.0, 1.0), 5)
    with pytest.raises(DomainError):
        IsingParams(0.1, 0.1, 1.2)


def test_classification():
    ks = critical_K(0.1, 0.5)
    assert ks == pytest.approx(0.7202056947070783, rel=1e-14)
    assert classify_phase(IsingParams(0.9 * ks, 0.1, 0.5)) is PhaseLabel.UNORDERED
    assert classify_phase(IsingParams(1.1 * ks, 0.1, 0.5)) is PhaseLabel.ORDERED
    assert classify_phase(IsingParams(ks, 0.1, 0.5)) is PhaseLabel.CRITICAL
    assert classify_phase(IsingParams(0.0, 0.5, 0.5)) is PhaseLabel.ORDERED
    assert classify_phase(IsingParams(5.0, -1.0, 0.5)) is PhaseLabel.UNORDERED
    assert critical_K(-0.2, 0.5) is None and critical_K(1.0, 1.0) is None


def test_degenerate_surface():
    p_deg = 1.0  # t = 9/5 exactly at L*
    assert critical_K(L_STAR, p_deg) == pytest.approx(math.log(3) / 4, abs=1e-12)
    assert classify_phase(IsingParams(0.27, L_STAR, p_deg)) is PhaseLabel.UNORDERED
    assert classify_phase(IsingParams(0.28, L_STAR, p_deg)) is PhaseLabel.ORDERED


def test_ordered_keeps_boundary_memory():
    ks = critical_K(0.1, 0.5)
    tr = evolve_Y(IsingParams(1.1 * ks, 0.1, 0.5), (2, 1, 1), 199)
    assert len(tr.diameter_Y) == 200
    assert tr.diameter_Y[-1] == pytest.approx(0.19683, abs=1e-4)
    # x grows roughly like t^k with t ~ 1.22, so no overflow guard within 200 steps
    assert tr.verdict is PhaseLabel.ORDERED and not tr.diverged


def test_phase_diagram_order():
    rows = phase_diagram([0.0, 0.2], [0.5], [0.1, 0.2, 0.3])
    assert [(r["L"], r["K"]) for r in rows] == [(L, K) for L in (0.0, 0.2) for K in (0.1, 0.2, 0.3)]
    assert tuple(rows[0]) == PHASE_COLUMNS
    assert spread(np.array([3.0, 1.0, 2.0])) == 2.0


def test_t_param_closed_cases():
    for L in (-0.7, 0.2, 1.3):
        assert t_param(L, 1.0) == pytest.approx(math.exp(4 * L), rel=1e-14)
        assert t_param(L, 0.5) == pytest.approx(math.exp(2 * L), rel=1e-14)


def test_phi_identity_and_intercept():
    for x in (0.01, 0.5, 2.0, 40.0):
        assert phi(x) == pytest.approx((x**3 + 3 * x + 4) / (x * x + 4 * x + 3), rel=1e-14)
    assert phi(1e-12) == pytest.approx(4 / 3, rel=1e-9)
    assert NINE_FIFTHS * phi(3.0) == pytest.approx(3.0, rel=1e-15)


def test_contracting_map_converges():
    t = math.exp(-2)
    target = fixed_points(t).stable
    for x1 in (0.1, 1.0, 10.0):
        K = math.log(x1) / 4
        L = -0.5  # p = 1 gives t = e^{4L} = e^{-2}
        xs = iterate_x(IsingParams(K, L, 1.0), 60).values
        assert xs[-1] == pytest.approx(target, abs=1e-12)


def test_degenerate_fixed_point_is_constant():
    xs = iterate_x(IsingParams(K_STAR_DEGENERATE, L_STAR, 1.0), 40).values
    assert max(abs(x - 3) for x in xs) < 1e-9
    assert classify_phase(IsingParams(K_STAR_DEGENERATE, L_STAR, 1.0)) is PhaseLabel.CRITICAL


def test_transfer_matrix_at_one():
    assert np.allclose(transfer_matrix(1.0), [[0.25, 0.5, 0.25]] * 3, atol=1e-15)
    assert dobrushin(transfer_matrix(1.0)) == pytest.approx(0.0, abs=1e-15)
    for x in (0.01, 1.0, 100.0):
        assert np.abs(transfer_matrix(x).sum(axis=1) - 1).max() < 1e-14
    far = transfer_matrix(1e9)
    assert np.allclose(far, [[1, 0, 0], [1, 0, 0], [0, 0, 1]], atol=1e-8)


def test_dobrushin_submultiplicative():
    rng = np.random.default_rng(5)
    for _ in range(200):
        S = rng.dirichlet(np.ones(3), size=3)
        T = rng.dirichlet(np.ones(3) * 0.3, size=3)
        assert dobrushin(S @ T) <= dobrushin(S) * dobrushin(T) + 1e-12


def test_zero_couplings_give_eight():
    ab = recursion_AB(IsingParams(0.0, 0.0, 0.4), 2)
    assert ab[0] == (0.0, 0.0)
    assert math.exp(ab[1][0]) == pytest.approx(8.0) and math.exp(ab[1][1]) == pytest.approx(8.0)


def test_log_domain_survives_large_levels():
    ab = recursion_AB(IsingParams(1.0, 0.5, 0.5), 40)
    assert all(math.isfinite(a) and math.isfinite(b) for a, b in ab)


@settings(deadline=None, max_examples=50)
@given(st.floats(-1.5, 1.5), st.floats(-1.5, 1.5), st.floats(0, 1))
def test_recursion_consistent_with_x_map(K, L, p):
    prm = IsingParams(K, L, p)
    xs = iterate_x(prm, 30)
    for (la, lb), x in zip(recursion_AB(prm, len(xs)), xs.values):
        # log A grows with the edge count, so the difference carries |log A| * eps of noise
        assert abs((la - lb) - math.log(x)) <= 1e-12 * max(1.0, abs(la), abs(lb))


def test_unordered_example_large_K():
    tr = evolve_Y(IsingParams(2.0, -1.0, 0.5), (2, 1, 1), 100)
    assert tr.dobrushin_S[-1] <= 1e-6 and tr.diameter_Y[-1] < 1e-6


def test_ordered_example_t_equals_e():
    L = 0.5  # p = 0.5 gives t = e^{2L} = e
    tr = evolve_Y(IsingParams(0.25, L, 0.5), (2, 1, 1), 199)
    assert tr.params.t == pytest.approx(math.e)
    eps = tr.diameter_Y[-1]
    assert eps > 0.09 and min(tr.diameter_Y) >= eps - 1e-12


def test_gamma_partial_sums_converge_when_ordered():
    xs = iterate_x(IsingParams(0.25, 0.5, 0.5), 200)
    gam = gamma_sequence(xs.values)
    partial = np.cumsum(gam)
    assert np.all(np.diff(partial)[-20:] < 1e-12)


def test_critical_K_limits():
    assert critical_K(0.5, 0.5) is None
    near_one = [critical_K(L, 1.0) for L in (1e-2, 1e-3, 1e-4)]
    assert near_one[0] < near_one[1] < near_one[2]
