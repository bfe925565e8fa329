import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from complexkit.cauchy import cauchy_eval, holomorphy_residual, pompeiu_eval, pompeiu_terms
from complexkit.errors import PointOnBoundary
from complexkit.geometry import QuadratureSpec, annulus, contour_integral, circle, disc

D = disc()


def _random_interior(rng, n, rmax=0.7):
    return rmax * np.sqrt(rng.random(n)) * np.exp(2j * np.pi * rng.random(n))


def test_constant_reproduced():
    assert abs(cauchy_eval(lambda z: np.ones_like(z), D, 0) - 1) < 1e-12


def test_exp_reproduced():
    z = 0.3 + 0.1j
    assert abs(cauchy_eval(np.exp, D, z) - np.exp(z)) < 1e-10


def test_annulus_inverse():
    assert abs(cauchy_eval(lambda z: 1 / z, annulus(0, 0.5, 2.0), 1.0) - 1) < 1e-10


def test_annulus_needs_both_contours():
    # the outer circle alone misses the inner contribution
    outer = contour_integral(lambda w: (1 / w) / (w - 1.0), circle(0, 2.0)) / (2j * np.pi)
    assert abs(outer - 1) > 0.1


def test_point_on_boundary_rejected():
    with pytest.raises(PointOnBoundary):
        cauchy_eval(np.exp, D, 1.0)
    with pytest.raises(PointOnBoundary):
        cauchy_eval(np.exp, D, 0.999)
    with pytest.raises(PointOnBoundary):
        cauchy_eval(np.exp, D, 3.0)


@given(st.floats(0, 0.9), st.floats(0, 2 * np.pi))
@settings(max_examples=40, deadline=None)
def test_holomorphic_polynomial_reproduced(r, t):
    z = r * np.exp(1j * t)
    f = lambda w: w ** 5 - 3j * w ** 2 + 2
    assert abs(cauchy_eval(f, D, z) - f(z)) < 1e-10


def test_pompeiu_conj_at_origin():
    assert abs(pompeiu_eval(np.conj, D, 0)) < 1e-3


def test_pompeiu_conj_at_half():
    assert abs(pompeiu_eval(np.conj, D, 0.5) - 0.5) < 1e-2


def test_pompeiu_holomorphic_area_term_vanishes():
    b, a = pompeiu_terms(np.exp, D, 0.3)
    assert abs(a[0]) < 1e-6
    assert abs(b[0] + a[0] - np.exp(0.3)) < 1e-6


@pytest.mark.parametrize("f", [
    np.conj,
    lambda z: z * np.conj(z),
    lambda z: np.real(z) + 0j,
    lambda z: np.exp(z) + np.conj(z) ** 2,
], ids=["conj", "abs2", "re", "exp_conj2"])
def test_pompeiu_family(f):
    pts = _random_interior(np.random.default_rng(3), 20)
    e256 = np.max(np.abs(pompeiu_eval(f, D, pts, QuadratureSpec(area_resolution=256)) - f(pts)))
    e512 = np.max(np.abs(pompeiu_eval(f, D, pts, QuadratureSpec(area_resolution=512)) - f(pts)))
    assert e256 <= 5e-2
    assert e512 < e256


def test_pompeiu_with_explicit_dbar():
    pts = _random_interior(np.random.default_rng(4), 10)
    v = pompeiu_eval(lambda z: z * np.conj(z), D, pts, dbar_f=lambda z: z)
    assert np.max(np.abs(v - np.abs(pts) ** 2)) < 1e-2


def test_reduction_to_cauchy():
    pts = _random_interior(np.random.default_rng(5), 10)
    f = lambda z: np.sin(z) * np.exp(z)
    p = pompeiu_eval(f, D, pts)
    c = np.array([cauchy_eval(f, D, z) for z in pts])
    assert np.max(np.abs(p - c)) < 1e-6


def test_pompeiu_on_annulus():
    d = annulus(0, 0.5, 2.0)
    pts = np.array([1.0, -1.2j, 0.8 + 0.8j])
    v = pompeiu_eval(lambda z: 1 / z + np.conj(z), d, pts, QuadratureSpec(area_resolution=256))
    assert np.max(np.abs(v - (1 / pts + np.conj(pts)))) < 5e-2


def test_holomorphy_residual_examples():
    pts = _random_interior(np.random.default_rng(6), 10)
    assert holomorphy_residual(lambda z: z ** 2, D, pts) < 1e-10
    # boundary data of conj is 1/zeta on the circle, whose Cauchy integral is 0
    assert holomorphy_residual(np.conj, D, np.append(pts, 0.5)) >= 0.4
    assert holomorphy_residual(lambda z: np.zeros_like(z), D, pts) == 0
