import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from complexkit.cauchy import holomorphy_residual
from complexkit.dbar import (
    CauchyTransform,
    CutoffSpec,
    DbarProblem,
    blow_up_extension,
    boundedness_bound,
    cauchy_transform,
    dbar_residual,
    extension_residual,
)
from complexkit.errors import LatticeMismatch, SingularityInsideCutoffTransition
from complexkit.geometry import GridField, QuadratureSpec, disc

Q256 = QuadratureSpec(area_resolution=256)
Q512 = QuadratureSpec(area_resolution=512)


def indicator(z):
    return (np.abs(z) <= 1).astype(complex)


def bump(z):
    r2 = np.abs(z) ** 2 / 0.64
    return np.where(r2 < 1, (1 - r2) ** 3, 0) * (1 + 0.5j * np.real(z))


def _window(f, lo, hi, h):
    return GridField.window(f, lo, hi, h)


def test_zero_alpha_gives_zero():
    p = DbarProblem(lambda z: np.zeros_like(z), 1.0)
    assert np.all(cauchy_transform(p, [0.2, 1.5j]) == 0)


def test_indicator_inside_and_outside():
    p = DbarProblem(indicator, 1.0)
    f = cauchy_transform(p, [0.5, 2.0], Q256)
    assert abs(f[0] - 0.5) < 2e-2
    assert abs(f[1] - 0.5) < 1e-2


def test_gridfield_alpha_matches_callable():
    g = GridField.sample(bump, -1 - 1j, 2 / 128, 129, 129, lambda z: np.abs(z) <= 1)
    pts = np.array([0.1 + 0.2j, -0.4, 1.5j])
    a = cauchy_transform(DbarProblem(g, 1.0), pts, Q256)
    b = cauchy_transform(DbarProblem(bump, 1.0), pts, Q256)
    assert np.max(np.abs(a - b)) < 5e-3


def test_dbar_residual_examples():
    h = 1 / 32
    f = _window(np.conj, -0.5 - 0.5j, 0.5 + 0.5j, h)
    one = _window(lambda z: np.ones_like(z), -0.5 - 0.5j, 0.5 + 0.5j, h)
    assert dbar_residual(f, one) < 1e-6
    f = _window(lambda z: z ** 2, -0.5 - 0.5j, 0.5 + 0.5j, h)
    zero = _window(lambda z: np.zeros_like(z), -0.5 - 0.5j, 0.5 + 0.5j, h)
    assert dbar_residual(f, zero) < 1e-8


def test_dbar_residual_lattice_mismatch():
    f = _window(np.conj, -0.5 - 0.5j, 0.5 + 0.5j, 0.1)
    a = _window(np.conj, -0.5 - 0.5j, 0.5 + 0.5j, 0.15)
    with pytest.raises(LatticeMismatch):
        dbar_residual(f, a)
    shifted = _window(np.conj, -0.47 - 0.5j, 0.5 + 0.5j, 0.1)
    with pytest.raises(LatticeMismatch):
        dbar_residual(f, shifted)


def _bump_residual(q, cells=24):
    p = DbarProblem(bump, 1.0)
    T = CauchyTransform(p, q)
    h = 2 / q.area_resolution
    lo = 0.3 + 0.1j - cells // 2 * h * (1 + 1j)
    hi = lo + cells * h * (1 + 1j)
    f = GridField.window(lambda z: T(z.ravel()).reshape(z.shape), lo, hi, h)
    a = GridField.window(bump, lo, hi, h)
    return dbar_residual(f, a)


def test_bump_residual_converges():
    r256, r512 = _bump_residual(Q256), _bump_residual(Q512)
    assert r256 < 5e-2
    assert r512 < r256 / 2


def test_boundedness_bound_examples():
    assert boundedness_bound(DbarProblem(lambda z: np.zeros_like(z), 1.0)) == 0
    p = DbarProblem(indicator, 1.0)
    B = boundedness_bound(p)
    assert B >= 1
    # closed form conj / 1/z has modulus 1 on the circle, below 1 elsewhere
    z = np.exp(2j * np.pi * np.arange(16) / 16) * 1.0
    sup = np.max(np.abs(cauchy_transform(p, np.concatenate([z * 0.5, z, z * 1.5]), Q256)))
    assert abs(sup - 1) < 2e-2 and sup <= B
    p2 = DbarProblem(lambda z: 2 * indicator(z), 1.0)
    assert boundedness_bound(p2) == pytest.approx(2 * B)


@given(st.complex_numbers(max_magnitude=3), st.complex_numbers(max_magnitude=3))
@settings(max_examples=10, deadline=None)
def test_transform_linear_in_alpha(a, b):
    q = QuadratureSpec(area_resolution=64)
    pts = np.array([0.3 + 0.1j, -0.6j, 1.4])
    g1, g2 = indicator, bump
    lhs = cauchy_transform(DbarProblem(lambda z: a * g1(z) + b * g2(z), 1.0), pts, q)
    rhs = (a * cauchy_transform(DbarProblem(g1, 1.0), pts, q)
           + b * cauchy_transform(DbarProblem(g2, 1.0), pts, q))
    assert np.max(np.abs(lhs - rhs)) <= 1e-10 * max(1.0, np.max(np.abs(rhs)))


def test_holomorphic_off_support():
    T = CauchyTransform(DbarProblem(bump, 1.0), QuadratureSpec(area_resolution=128))
    zeta = 1.8 + 0.3j
    small = disc(zeta, 0.2)
    pts = zeta + 0.08 * np.exp(2j * np.pi * np.arange(6) / 6)
    assert holomorphy_residual(lambda z: T(z), small, pts) < 1e-3


def test_continuity_across_support_boundary():
    T = CauchyTransform(DbarProblem(indicator, 1.0), Q256)
    t = 2 * np.pi * np.arange(12) / 12
    inner = T(0.98 * np.exp(1j * t))
    outer = T(1.02 * np.exp(1j * t))
    assert np.max(np.abs(inner - outer)) < 0.08


# ---- cutoff and blow-up extension

def test_cutoff_profile():
    c = CutoffSpec(1.0, 0.2, 0.4)
    assert c.phi(1.1) == 1 and c.phi(1.5) == 0
    z = 1 + 0.3 * np.exp(0.7j)
    s = 1e-6
    fx = (c.phi(z + s) - c.phi(z - s)) / (2 * s)
    fy = (c.phi(z + 1j * s) - c.phi(z - 1j * s)) / (2 * s)
    assert abs(c.dphi_dzbar(z) - 0.5 * (fx + 1j * fy)) < 1e-6
    with pytest.raises(ValueError):
        CutoffSpec(0, 0.4, 0.2)


@pytest.fixture(scope="module")
def blowup():
    return blow_up_extension(lambda z: 1 / (z - 1), CutoffSpec(1.0, 0.2, 0.4), disc(), Q256)


def test_blowup_residual(blowup):
    assert extension_residual(blowup) < 5e-2


def test_blowup_bounded_difference(blowup):
    B = blowup.bound()
    zk = 1 - 2.0 ** -np.arange(1, 11)
    diff = np.abs(blowup(zk) - 1 / (zk - 1))
    assert np.all(diff <= B)
    ratio = np.abs(blowup(zk) * (zk - 1))
    assert np.all(np.abs(ratio - 1) <= 1 + B * np.abs(zk - 1))
    assert abs(ratio[-1] - 1) < 1e-2


def test_blowup_with_entire_h():
    ext = blow_up_extension(np.exp, CutoffSpec(1.0, 0.2, 0.4), disc(), Q256)
    assert extension_residual(ext) < 5e-2


def test_singularity_in_transition_rejected():
    ext = blow_up_extension(lambda z: 1 / (z - 0.7), CutoffSpec(1.0, 0.2, 0.4), disc(),
                            QuadratureSpec(area_resolution=64))
    with pytest.raises(SingularityInsideCutoffTransition), np.errstate(all="ignore"):
        ext.alpha(np.array([0.7 + 0j]))
