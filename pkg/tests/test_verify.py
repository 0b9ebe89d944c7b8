import math

import numpy as np
import pytest

from kirchhoff import bifurcation as bf
from kirchhoff import profile, verify
from kirchhoff.errors import DomainError, RegimeError
from kirchhoff.profile import ProfileGrid
from kirchhoff.scalar_reduction import ProblemParams
from oracles import abc, lam_star, q1


def p1_grid(n, lam=math.pi**2 / 2):
    return bf.solution_profile(1, 1, 1, lam, n=n)


def test_p1_exact_solution_residual():
    rep = verify.residual(p1_grid(2001), ProblemParams(1, 1, 1, math.pi**2 / 2))
    assert rep.max_residual <= 1e-6
    assert rep.nonlocal_gap_rel <= 1e-6
    assert rep.grid_h == pytest.approx(1e-3)
    assert rep.nodes_checked == 2001 - 2 - 2


def test_residual_is_deterministic():
    grid = p1_grid(501)
    params = ProblemParams(1, 1, 1, math.pi**2 / 2)
    assert verify.residual(grid, params) == verify.residual(grid, params)


def test_residual_p2_tangency():
    lam = lam_star(1, 1)
    rep = verify.residual(bf.solution_profile(1, 1, 2, lam), ProblemParams(1, 1, 2, lam))
    assert rep.max_residual <= 1e-5


def test_residual_detects_wrong_lambda():
    lam = lam_star(1, 1)
    rep = verify.residual(bf.solution_profile(1, 1, 2, lam), ProblemParams(1, 1, 2, 1.01 * lam))
    assert rep.max_residual > 1e-3


def test_residual_preconditions():
    params = ProblemParams(1, 1, 1, 5.0)
    with pytest.raises(DomainError):
        verify.residual(p1_grid(51), params)
    g = p1_grid(201)
    xs = g.xs.copy()
    xs[5] += 1e-4
    with pytest.raises(DomainError):
        verify.residual(ProfileGrid(1.0, xs, g.values, g.max_value, g.grad_norm), params)


def test_residual_convergence_p1():
    params = ProblemParams(1, 1, 1, math.pi**2 / 2)
    res = [verify.residual(p1_grid(n), params).max_residual for n in (251, 501, 1001, 2001)]
    ratios = [res[i] / res[i + 1] for i in range(3)]
    assert all(3.5 <= r <= 4.5 for r in ratios)


def test_shooting_p2_centre():
    assert verify.shoot_profile(2, 4001).max_value == pytest.approx(q1(), abs=1e-7)


def test_shooting_p3_gradient_norm():
    a3, b3, _ = abc(3.0)
    assert verify.shoot_profile(3, 4001).grad_norm == pytest.approx(2 * a3**1.5 * b3**0.5, abs=1e-6)


def test_shooting_p05_probe_points():
    shot = verify.shoot_profile(0.5, 4001)
    idx = np.arange(0, 4001, 400)
    assert idx.size == 11
    np.testing.assert_allclose(shot.values[idx], profile.evaluate(0.5, shot.xs[idx]), atol=1e-6)


@pytest.mark.parametrize("p", [0.5, 2.0, 3.0, 5.0])
def test_shooting_agrees_with_profile(p):
    shot = verify.shoot_profile(p, 4001)
    assert np.max(np.abs(shot.values - profile.sample(p, 4001).values)) <= 1e-6


def test_shooting_preconditions():
    with pytest.raises(RegimeError):
        verify.shoot_profile(1.0)
    with pytest.raises(DomainError):
        verify.shoot_profile(2.0, 100)


def test_sign_scan_p2():
    lam = lam_star(1, 1)
    assert verify.sign_scan_roots(ProblemParams(1, 1, 2, 0.9 * lam)).count == 0
    scan = verify.sign_scan_roots(ProblemParams(1, 1, 2, 1.1 * lam))
    assert scan.count == 2 and len(scan.brackets) == 2
    touch = verify.sign_scan_roots(ProblemParams(1, 1, 2, lam))
    assert touch.count == 1 and touch.touches[0] == pytest.approx(1.0, rel=1e-4)


@pytest.mark.parametrize("lam", [0.01, 1.0, 100.0, 1e4])
def test_sign_scan_p5_unique(lam):
    assert verify.sign_scan_roots(ProblemParams(1, 1, 5, lam)).count == 1


def test_sign_scan_preconditions():
    params = ProblemParams(1, 1, 2, 1)
    with pytest.raises(DomainError):
        verify.sign_scan_roots(params, 1.0, 0.5)
    with pytest.raises(DomainError):
        verify.sign_scan_roots(params, n=10)


def test_rayleigh_quotient_scale_invariant():
    xs = np.linspace(-1, 1, 1001)
    v = np.cos(0.5 * np.pi * xs).clip(min=0)
    v[0] = v[-1] = 0.0
    q = verify.rayleigh_quotient(2.0, xs, v)
    assert verify.rayleigh_quotient(2.0, xs, 7.3 * v) == pytest.approx(q, rel=1e-12)


def test_rayleigh_quotient_exact_for_tent():
    # v = 1 - |x|: ||v'||^2 = 2 and int v^(p+1) = 2 / (p + 2).
    xs = np.linspace(-1, 1, 3)
    p = 2.0
    assert verify.rayleigh_quotient(p, xs, 1 - np.abs(xs)) == pytest.approx(2**1.5 / (2 / 4), rel=1e-14)


def test_rayleigh_quotient_rejects_bad_trials():
    xs = np.linspace(-1, 1, 11)
    with pytest.raises(DomainError):
        verify.rayleigh_quotient(2.0, xs, np.ones(11))
    with pytest.raises(DomainError):
        verify.rayleigh_quotient(2.0, xs, np.zeros(11))


def test_rayleigh_sample_seeded():
    assert verify.rayleigh_sample(2, 30, seed=7) == verify.rayleigh_sample(2, 30, seed=7)
    with pytest.raises(RegimeError):
        verify.rayleigh_sample(1.0, 10)
    with pytest.raises(DomainError):
        verify.rayleigh_sample(2.0, 0)


def test_fixed_node_convergence_rejects_non_nested():
    grids = [profile.sample(2, 101), profile.sample(2, 151)]
    with pytest.raises(DomainError):
        verify.fixed_node_convergence(grids, lambda g: (g.xs, g.values))
