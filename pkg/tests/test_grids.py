import math

import numpy as np
import pytest

from growthlab.grids import (
    BallRule,
    Domain,
    PolarGrid,
    log_panel_rule,
    sphere_rule,
    sphere_surface,
    unit_ball_volume,
)


@pytest.mark.parametrize("dim", [1, 2, 3, 4, 5])
def test_sphere_measure(dim):
    _, w = sphere_rule(dim)
    assert abs(w.sum() / sphere_surface(dim) - 1) < 1e-12


def test_sphere_nodes_are_unit(grid3):
    norms = np.linalg.norm(grid3.sphere_nodes, axis=1)
    assert np.allclose(norms, 1.0, atol=1e-14)


def test_half_line_rules():
    n, w = sphere_rule(1, domain=Domain.HALF_LINE_POS)
    assert n.shape == (1, 1) and n[0, 0] == 1.0 and w[0] == 1.0
    n, w = sphere_rule(1, domain=Domain.HALF_LINE_NEG)
    assert n[0, 0] == -1.0
    with pytest.raises(ValueError):
        sphere_rule(2, domain=Domain.HALF_LINE_POS)


def test_log_panel_rule_polynomial_exact():
    r, w = log_panel_rule(1e-3, 50.0, panels=20, points_per_panel=8)
    assert np.all(np.diff(r) > 0) and r[-1] < 50.0
    # exact for polynomials on each panel
    got = float(np.sum(w * r**3))
    assert abs(got - 50.0**4 / 4) / (50.0**4 / 4) < 1e-14


def test_log_panel_rule_from_positive_lower():
    r, w = log_panel_rule(1e-3, 100.0, panels=16, points_per_panel=8, lower=2.0)
    assert r.min() > 2.0
    got = float(np.sum(w * r))
    assert abs(got - (100.0**2 - 4.0) / 2) < 1e-9


def test_grid_full_volume_weights(grid3):
    # cell weights integrate exp(-r^2) over R^3 to the exact gaussian value
    cw = grid3.cell_weights()
    vals = np.exp(-(grid3.radial_nodes**2))
    got = float(np.sum(cw * vals[:, None]))
    assert abs(got - math.pi**1.5) < 1e-7


def test_grid_gaussian_integral(grid2):
    cw = grid2.cell_weights()
    vals = np.exp(-(grid2.radial_nodes**2))
    got = float(np.sum(cw * vals[:, None]))
    assert abs(got - math.pi) < 1e-7


def test_ball_rule_volume():
    for dim in (1, 2, 3):
        ball = BallRule.build(dim, rho=1.5)
        assert abs(ball.volume - unit_ball_volume(dim) * 1.5**dim) < 1e-10
    shifted = BallRule.build(3, center=[1.0, -2.0, 0.5], rho=0.5)
    assert np.all(np.linalg.norm(shifted.nodes - np.array([1.0, -2.0, 0.5]), axis=1) < 0.5)


def test_refined_grid_scales_nodes(grid3):
    fine = grid3.refined(radial=2, angular=2)
    assert fine.n_radial == 2 * grid3.n_radial
    assert fine.n_sphere > grid3.n_sphere


def test_monte_carlo_sphere_deterministic():
    n1, w1 = sphere_rule(5, seed=99)
    n2, w2 = sphere_rule(5, seed=99)
    assert np.array_equal(n1, n2) and np.array_equal(w1, w2)
    n3, _ = sphere_rule(5, seed=100)
    assert not np.array_equal(n1, n3)
