import numpy as np
import pytest

from kirchhoff_groundstate import (
    RadialFunction,
    grad_norm_sq,
    l2_norm_sq,
    make_grid,
    rescale,
)
from kirchhoff_groundstate.grids import FOUR_PI, fd_weights

from conftest import gaussian


def test_make_grid_validates_inputs():
    with pytest.raises(ValueError):
        make_grid(-1.0, 100)
    with pytest.raises(ValueError):
        make_grid(10.0, 8)
    with pytest.raises(ValueError):
        make_grid(10.0, 100, scheme="spectral")


def test_uniform_grid_nodes_and_weights():
    g = make_grid(10.0, 101)
    assert g.nodes[0] == 0.0
    assert g.nodes[-1] == 10.0
    assert np.allclose(np.diff(g.nodes), 0.1)
    # weights integrate 1 over [0, r_max]
    assert g.integrate(np.ones(g.n)) == pytest.approx(10.0, rel=1e-12)


def test_graded_grid_clusters_near_origin():
    g = make_grid(10.0, 101, scheme="graded")
    d = np.diff(g.nodes)
    assert d[0] < d[-1]
    assert g.nodes[-1] == pytest.approx(10.0)
    assert g.integrate(np.ones(g.n)) == pytest.approx(10.0, rel=1e-10)


def test_quadrature_exact_on_cubics():
    # composite Simpson (with the 3/8 tail on odd interval counts) is exact
    # for polynomials of degree <= 3
    for n in (101, 102):
        g = make_grid(2.0, n)
        for k in range(4):
            exact = 2.0 ** (k + 1) / (k + 1)
            assert g.integrate(g.nodes**k) == pytest.approx(exact, rel=1e-10)


def test_fd_weights_standard_stencil():
    w = fd_weights(np.array([-1.0, 0.0, 1.0]), 0.0, 2)
    assert np.allclose(w, [1.0, -2.0, 1.0])


def test_values_are_immutable():
    g = make_grid(5.0, 51)
    u = RadialFunction(g, np.ones(51))
    with pytest.raises(ValueError):
        u.values[0] = 2.0


def test_rejects_nonfinite_values():
    g = make_grid(5.0, 51)
    vals = np.ones(51)
    vals[3] = np.nan
    with pytest.raises(ValueError):
        RadialFunction(g, vals)


def test_grad_norm_zero_on_constant():
    g = make_grid(8.0, 201)
    u = RadialFunction(g, np.full(g.n, 2.5))
    assert grad_norm_sq(u) == pytest.approx(0.0, abs=1e-18)


def test_grad_norm_gaussian_analytic():
    # ||grad(A e^{-r^2})||^2 = 3 A^2 (pi/2)^{3/2}
    A = 1.7
    exact = 3.0 * A**2 * (np.pi / 2.0) ** 1.5
    g = make_grid(8.0, 201)
    u = RadialFunction(g, A * np.exp(-(g.nodes**2)))
    assert grad_norm_sq(u) == pytest.approx(exact, rel=1e-4)


def test_grad_norm_convergence_order():
    A = 1.0
    exact = 3.0 * A**2 * (np.pi / 2.0) ** 1.5

    def err(n):
        g = make_grid(8.0, n)
        u = RadialFunction(g, A * np.exp(-(g.nodes**2)))
        return abs(grad_norm_sq(u) - exact)

    assert err(51) / err(101) >= 3.0


def test_l2_norm_gaussian_analytic():
    # ||A e^{-r^2}||_2^2 = A^2 (pi/2)^{3/2}
    A = 2.0
    exact = A**2 * (np.pi / 2.0) ** 1.5
    g = make_grid(8.0, 201)
    u = RadialFunction(g, A * np.exp(-(g.nodes**2)))
    assert l2_norm_sq(u) == pytest.approx(exact, rel=1e-8)


def test_rescale_identity():
    g = make_grid(8.0, 201)
    u = gaussian(g)
    v = rescale(u, 1.0)
    assert np.array_equal(u.values, v.values)


def test_rescale_rejects_nonpositive_t():
    g = make_grid(8.0, 201)
    u = gaussian(g)
    for t in (0.0, -1.0):
        with pytest.raises(ValueError):
            rescale(u, t)


def test_rescale_scaling_laws():
    g = make_grid(20.0, 2001)
    u = RadialFunction(g, np.exp(-(g.nodes**2)))
    half = rescale(u, 0.5)
    assert l2_norm_sq(half) == pytest.approx(0.125 * l2_norm_sq(u), rel=1e-3)
    double = rescale(u, 2.0)
    assert grad_norm_sq(double) == pytest.approx(2.0 * grad_norm_sq(u), rel=1e-3)


def test_hardy_inequality_on_smooth_samples():
    # ||grad u||^2 >= (1/4) int u^2/|x|^2 dx; the weight cancels r^2 exactly,
    # leaving a plain radial integral on the right
    g = make_grid(12.0, 401)
    for width, center in [(1.0, 0.0), (2.5, 1.0), (0.7, 3.0)]:
        u = gaussian(g, amp=2.0, width=width, center=center)
        lhs = grad_norm_sq(u)
        rhs = 0.25 * FOUR_PI * g.integrate(u.values**2)
        assert lhs - rhs >= -1e-8 * max(1.0, lhs)


def test_high_order_derivatives_match_analytic():
    g = make_grid(8.0, 401)
    u = np.exp(-(g.nodes**2))
    du, d2u = g.high_order_derivatives(u)
    assert np.allclose(du, -2.0 * g.nodes * u, atol=1e-9)
    assert np.allclose(d2u, (4.0 * g.nodes**2 - 2.0) * u, atol=1e-8)
