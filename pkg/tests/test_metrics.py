import numpy as np
import pytest

from dualfem.errors import InvalidArgumentError
from dualfem.metrics import err1, err2, err_omega, pct_error


def test_pct_error_basic():
    u = np.array([1.1, 2.0, 2.9])
    ref = np.array([1.0, 2.0, 3.0])
    pct = pct_error(u, ref)
    assert pct == pytest.approx([10.0, 0.0, 100.0 / 30.0], rel=1e-12)


def test_pct_error_flags_vanishing_reference():
    pct = pct_error(np.array([1.0, 1.0]), np.array([0.0, 2.0]))
    assert np.isnan(pct[0])
    assert pct[1] == pytest.approx(50.0)


def test_err2_constant_shift_closed_form():
    # u = u_exact + delta with u_exact = C: err2 = 100 |delta| / |C| exactly
    C, delta = 4.0, 0.3
    u_exact = np.full((5, 11), C)
    u = u_exact + delta
    e2 = err2(u, u_exact, hx=0.1)
    assert np.allclose(e2, 100.0 * delta / C, rtol=1e-12)
    e1 = err1(u, u_exact, hx=0.1)
    assert np.allclose(e1, 100.0 * delta / C, rtol=1e-12)


def test_err2_uses_interpolant_quadrature():
    # rms of the hat interpolant of (0,1,0,...) differs from the nodal rms;
    # check the quadrature value on a single sawtooth row
    u_exact = np.ones((1, 5))
    u = u_exact.copy()
    u[0, 2] += 1.0
    e2 = err2(u, u_exact, hx=0.25)
    # error field is one hat of height 1 and support 2h = 0.5 on L = 1:
    # integral of hat^2 is 2h/3 = 1/6, reference rms is 1
    expect = 100.0 * np.sqrt(1.0 / 6.0)
    assert e2[0] == pytest.approx(expect, rel=1e-12)


def test_err_measures_reject_vanishing_rms():
    with pytest.raises(InvalidArgumentError):
        err2(np.ones((2, 3)), np.zeros((2, 3)), hx=0.5)
    with pytest.raises(InvalidArgumentError):
        err1(np.ones((2, 3)), np.zeros((2, 3)), hx=0.5)


def test_err2_bounded_by_err1_max(rng):
    u_exact = 2.0 + rng.standard_normal((4, 21)) * 0.1
    u = u_exact + rng.standard_normal((4, 21)) * 0.05
    e1 = err1(u, u_exact, hx=0.05)
    e2 = err2(u, u_exact, hx=0.05)
    assert np.all(e2 <= e1.max(axis=1) + 1e-12)


def test_err_omega():
    ref = np.array([[3.0, 0.0], [4.0, 1.0], [0.0, 0.0]])
    om = ref + np.array([[0.5, 0.0], [0.0, 0.0], [0.0, 0.1]])
    e = err_omega(om, ref)
    assert e[0] == pytest.approx(10.0)
    assert e[1] == pytest.approx(10.0)
    with pytest.raises(InvalidArgumentError):
        err_omega(ref, np.zeros_like(ref))
