import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.integrate import simpson

from kirchhoff import eigenproblem as ep
from kirchhoff import profile, verify
from kirchhoff.errors import RegimeError
from oracles import abc


def test_mu1_p3_closed_form():
    a3, b3, _ = abc(3.0)
    assert ep.mu1(3) == pytest.approx(4 * a3**3 * b3, rel=1e-13)
    assert ep.mu1(3) == pytest.approx(profile.grad_norm(3) ** 2, rel=1e-13)


@pytest.mark.parametrize("p", np.linspace(1.1, 10, 12))
def test_mu1_alternative_grouping(p):
    assert ep.mu1(p) == pytest.approx(ep.mu1_alt(p), rel=1e-14)


@pytest.mark.parametrize("p", [0.5, 1.0])
def test_regime_errors(p):
    for fn in (ep.mu1, ep.zeta, ep.nu, ep.phi_grad_norm, ep.eigen_pair):
        with pytest.raises(RegimeError):
            fn(p)


def test_zeta_forms():
    a3, _, c3 = abc(3.0)
    assert ep.zeta(3) == pytest.approx((a3 / (2 * c3)) ** 0.25, rel=1e-14)
    a2, _, c2 = abc(2.0)
    assert ep.zeta(2) ** 3 * 2 * c2 / a2 == pytest.approx(1.0, rel=1e-14)


def test_phi1_boundary_and_centre():
    assert ep.phi1(2, 1.0) == 0.0 and ep.phi1(2, -1.0) == 0.0
    a3, _, _ = abc(3.0)
    assert ep.phi1(3, 0.0) == pytest.approx(ep.nu(3) * np.sqrt(2) * a3, rel=1e-14)
    assert ep.phi1(3, 0.0) == pytest.approx(ep.zeta(3), rel=1e-13)


def test_phi1_grid_max_is_zeta():
    grid = ep.phi1_grid(2, 2001)
    assert grid.max_value == pytest.approx(ep.zeta(2), rel=1e-9)


@settings(max_examples=40, deadline=None)
@given(st.floats(1.05, 12.0))
def test_scaling_identities(p):
    pair = ep.eigen_pair(p)
    a, b, _ = abc(p)
    assert pair.nu * profile.eta(p) == pytest.approx(pair.zeta, rel=1e-11)
    assert pair.phi_grad_norm == pytest.approx(np.sqrt(2 * a * b) * pair.zeta, rel=1e-12)
    assert pair.phi_grad_norm ** (p + 1) == pytest.approx(pair.mu1, rel=1e-10)


@pytest.mark.parametrize("p", [1.5, 2.0, 3.0, 5.0])
def test_normalisation_by_simpson(p):
    grid = ep.phi1_grid(p, 2001)
    assert simpson(grid.values ** (p + 1), x=grid.xs) == pytest.approx(1.0, abs=1e-8)


@pytest.mark.parametrize("p", [1.5, 2.0, 3.0, 5.0])
def test_euler_lagrange_second_order_at_fixed_nodes(p):
    grids = [ep.phi1_grid(p, n) for n in (501, 1001, 2001)]
    maxima, ratios = verify.fixed_node_convergence(
        grids, lambda g: verify.eigen_residual(g, ep.mu1(p), ep.phi_grad_norm(p), skip=0)
    )
    assert maxima[-1] < 1e-5
    assert all(3.5 <= r <= 4.5 for r in ratios)


def test_eigenfunction_is_a_near_minimiser():
    p = 3.0
    grid = ep.phi1_grid(p, 20001)
    q = verify.rayleigh_quotient(p, grid.xs, grid.values)
    assert q == pytest.approx(ep.mu1(p), rel=1e-8)


def test_tent_is_not_the_minimiser():
    xs = np.linspace(-1, 1, 2001)
    assert verify.rayleigh_quotient(2.0, xs, 1 - np.abs(xs)) > ep.mu1(2.0) * 1.01


@pytest.mark.parametrize("p", [1.5, 2.0, 3.0, 5.0])
def test_rayleigh_lower_bound(p):
    assert verify.rayleigh_sample(p, 100, seed=42) >= ep.mu1(p) * (1 - 1e-8)
