import numpy as np
import pytest

from dualfem.errors import InvalidArgumentError
from dualfem.mesh import build_space_time_mesh, build_time_mesh
from dualfem.projection import (l2_project, l2_project_time, mass_local_2d,
                                quad_points_1d, quad_points_2d)


def sample_function(mesh, f):
    """Evaluate f(x, t) at every element Gauss point, shape (ne, 4)."""
    pts = quad_points_2d(mesh)
    return f(pts[..., 0], pts[..., 1])


def nodal_rms(mesh, nodal):
    return float(np.sqrt(np.mean(nodal ** 2)))


def test_mass_local_is_exact():
    hx, ht = 0.3, 0.7
    M = mass_local_2d(hx, ht)
    # total mass = element area; symmetric positive definite
    assert M.sum() == pytest.approx(hx * ht, rel=1e-14)
    assert np.allclose(M, M.T)
    assert np.all(np.linalg.eigvalsh(M) > 0)
    # diagonal of the bilinear element mass matrix is (hx ht / 9)
    assert np.allclose(np.diag(M), hx * ht / 9.0)


def test_quad_points_inside_elements():
    m = build_space_time_mesh(2.0, 1.0, 3, 2)
    pts = quad_points_2d(m)
    assert pts.shape == (6, 4, 2)
    corners = m.nodes[m.elements]
    lo = corners.min(axis=1, keepdims=True)
    hi = corners.max(axis=1, keepdims=True)
    assert np.all(pts > lo) and np.all(pts < hi)


def test_identity_on_fe_space(rng):
    # samples of a field already in the FE space are recovered exactly
    m = build_space_time_mesh(1.0, 1.0, 6, 5)
    nodal = rng.standard_normal(m.n_nodes)
    from dualfem.fem import eval_shapes_quad, gauss_rule
    rule = gauss_rule(2)
    coords = m.nodes[m.elements[0]]
    Nq = np.stack([eval_shapes_quad(coords, pt).values for pt in rule.points])
    samples = nodal[m.elements] @ Nq.T
    recovered = l2_project(m, samples)
    assert np.abs(recovered - nodal).max() < 1e-10


def test_constant_samples_with_pins():
    m = build_space_time_mesh(1.0, 1.0, 4, 4)
    samples = np.full((m.n_elements, 4), 7.0)
    out = l2_project(m, samples, pinned={0: 7.0, 5: 7.0})
    assert np.abs(out - 7.0).max() < 1e-12


def test_pinned_values_exact():
    m = build_space_time_mesh(1.0, 1.0, 4, 4)
    samples = np.full((m.n_elements, 4), 1.0)
    value = 0.1 + 0.2
    out = l2_project(m, samples, pinned={3: value})
    assert out[3] == value


def test_smooth_field_second_order():
    f = lambda x, t: np.sin(0.5 * np.pi * x) + 1.0 + 0.0 * t
    errs = []
    for nx, nt in ((10, 11), (20, 22), (40, 44)):
        m = build_space_time_mesh(1.0, 1.1, nx, nt)
        out = l2_project(m, sample_function(m, f))
        x = m.x_coords()
        exact = np.tile(f(x, 0.0), m.nt + 1)
        errs.append(np.abs(out - exact).max())
    orders = [np.log2(errs[i] / errs[i + 1]) for i in range(2)]
    assert min(orders) > 1.8


def test_best_approximation_property(rng):
    # projection minimizes the L2 distance among FE fields with matching pins
    m = build_space_time_mesh(1.0, 1.0, 5, 4)
    f = lambda x, t: np.cos(2 * x + t) + x * t
    samples = sample_function(m, f)
    proj = l2_project(m, samples)

    from dualfem.fem import eval_shapes_quad, gauss_rule
    rule = gauss_rule(2)
    coords = m.nodes[m.elements[0]]
    Nq = np.stack([eval_shapes_quad(coords, pt).values for pt in rule.points])
    wdet = 0.25 * m.hx * m.ht

    def dist(nodal):
        vals = nodal[m.elements] @ Nq.T
        return np.sqrt(wdet * np.sum((vals - samples) ** 2))

    d0 = dist(proj)
    for _ in range(10):
        other = proj + rng.standard_normal(m.n_nodes) * 0.1
        assert dist(other) >= d0 - 1e-12


def test_shape_mismatch_rejected():
    m = build_space_time_mesh(1.0, 1.0, 2, 2)
    with pytest.raises(InvalidArgumentError):
        l2_project(m, np.zeros((3, 4)))


def test_time_projection_identity(rng):
    m = build_time_mesh(0.5, 10)
    nodal = rng.standard_normal(m.n_nodes)
    pts = quad_points_1d(m)
    # linear interpolation at the Gauss points of each interval
    samples = np.empty((m.ne, 2))
    for e in range(m.ne):
        samples[e] = np.interp(pts[e], m.nodes, nodal)
    out = l2_project_time(m, samples)
    assert np.abs(out - nodal).max() < 1e-10


def test_time_projection_with_pin_and_components():
    m = build_time_mesh(1.0, 8)
    pts = quad_points_1d(m)
    samples = np.stack([np.sin(pts), np.cos(pts), pts ** 2])
    pinned = {0: np.array([0.0, 1.0, 0.0])}
    out = l2_project_time(m, samples, pinned)
    assert out.shape == (3, 9)
    assert out[0, 0] == 0.0 and out[1, 0] == 1.0 and out[2, 0] == 0.0
    assert np.abs(out[0] - np.sin(m.nodes)).max() < 2e-3
