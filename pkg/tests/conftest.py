import numpy as np
import pytest


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)


def gauss_legendre_integrate(f, a, b, n=12):
    """High-order quadrature used as an independent check on hand-coded
    element integrals."""
    pts, wts = np.polynomial.legendre.leggauss(n)
    xm, xr = 0.5 * (a + b), 0.5 * (b - a)
    return xr * np.sum(wts * f(xm + xr * pts))


def gauss_legendre_integrate_2d(f, ax, bx, at, bt, n=12):
    pts, wts = np.polynomial.legendre.leggauss(n)
    xm, xr = 0.5 * (ax + bx), 0.5 * (bx - ax)
    tm, tr = 0.5 * (at + bt), 0.5 * (bt - at)
    acc = 0.0
    for pi, wi in zip(pts, wts):
        for pj, wj in zip(pts, wts):
            acc += wi * wj * f(xm + xr * pi, tm + tr * pj)
    return xr * tr * acc
