import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from complexkit.errors import AllMasksEmpty, GeometryMismatch, NonFiniteSample
from complexkit.geometry import GridField
from complexkit.osgood import (
    SEQUENCES,
    BoundednessMask,
    DenseBall,
    FunctionSequence,
    boundedness_masks,
    boundedness_set,
    conj_sequence,
    cover_check,
    dense_ball_search,
    divergent_constants,
    exp_partial_sums,
    limit_holomorphy_residual,
    powers,
    zero_sequence,
)


def disc_grid(R=1.0, n=33):
    h = 2 * R / (n - 1)
    return GridField.sample(lambda z: np.zeros(z.shape, complex), complex(-R, -R), h, n, n,
                            lambda z: np.abs(z) <= R + 1e-12)


def square_grid(n=11, h=0.1, origin=0j):
    return GridField.sample(lambda z: np.zeros(z.shape, complex), origin, h, n, n,
                            lambda z: np.ones(z.shape, bool))


def brute_sup(seq, grid):
    """Per-point scalar loop, reducing over j from the top index down."""
    out = np.full(grid.mask.shape, np.nan)
    pts = grid.points()
    for idx in zip(*np.nonzero(grid.mask)):
        z = complex(pts[idx])
        best = 0.0
        for j in range(seq.j_max, 0, -1):
            best = max(best, abs(complex(seq.member(j, np.asarray(z)))))
        out[idx] = best
    return out


def brute_ball(mask, grid):
    """Largest open lattice disc: for each true node, distance to the nearest
    false node, counting a ring of false nodes just outside the lattice."""
    H, W = mask.shape
    padded = np.zeros((H + 2, W + 2), bool)
    padded[1:-1, 1:-1] = mask
    falses = np.argwhere(~padded)
    best = None
    for i, j in np.argwhere(padded):
        r = np.min(np.hypot(falses[:, 0] - i, falses[:, 1] - j))
        c = grid.origin + grid.spacing * complex(j - 1, i - 1)
        key = (-r, c.real, c.imag)
        if best is None or key < best[0]:
            best = (key, c, r * grid.spacing)
    return best[1], best[2]


# ---- boundedness sets

def test_boundedness_examples():
    g = disc_grid(1.0)
    m = boundedness_set(powers(), g, 1)
    assert np.array_equal(m.mask, g.mask)
    g2 = disc_grid(2.0)
    m = boundedness_set(exp_partial_sums(30), g2, 8)
    assert np.array_equal(m.mask, g2.mask)
    ones = FunctionSequence(lambda j, z: np.ones(np.shape(z), complex), 5)
    assert not boundedness_set(ones, g, 0.5).mask.any()


def test_exp_sup_oracle_below_e_squared():
    g = disc_grid(2.0)
    sup = brute_sup(exp_partial_sums(30), g)
    assert np.nanmax(sup) <= np.exp(2) + 1e-12


@pytest.mark.parametrize("name", ["powers", "exp", "conj", "constants"])
def test_masks_equal_brute_force_oracle(name):
    seq = SEQUENCES[name](12)
    g = disc_grid(1.5, 25)
    sup = brute_sup(seq, g)
    for k in (1, 2, 3, 5, 8):
        want = np.zeros(g.mask.shape, bool)
        want[g.mask] = sup[g.mask] <= k
        assert np.array_equal(boundedness_set(seq, g, k).mask, want)


def test_boundedness_errors():
    g = disc_grid()
    with pytest.raises(ValueError):
        boundedness_set(powers(), g, 0)
    bad = FunctionSequence(lambda j, z: 1 / np.asarray(z, complex), 2)
    with pytest.raises(NonFiniteSample), np.errstate(all="ignore"):
        boundedness_set(bad, g, 1)
    with pytest.raises(ValueError):
        FunctionSequence(lambda j, z: z, 0)


@given(st.integers(0, 1000))
@settings(max_examples=20, deadline=None)
def test_mask_monotone_in_k(seed):
    rng = np.random.default_rng(seed)
    a, b = np.sort(rng.uniform(0.1, 10, 2))
    g = disc_grid(1.8, 21)
    seq = exp_partial_sums(15)
    ma, mb = boundedness_set(seq, g, a).mask, boundedness_set(seq, g, b).mask
    assert not np.any(ma & ~mb)


@pytest.mark.parametrize("name", ["powers", "exp", "constants"])
def test_truncation_monotone(name):
    g = disc_grid(1.3, 21)
    seq = SEQUENCES[name](40)
    prev = None
    for jm in (1, 5, 10, 20, 40):
        m = boundedness_set(seq.truncated(jm), g, 2).mask
        if prev is not None:
            assert not np.any(m & ~prev)
        prev = m


def test_pbm_export():
    g = square_grid(3, 1.0)
    mask = np.array([[1, 0, 0], [0, 0, 0], [0, 0, 1]], bool)
    pbm = BoundednessMask(g, mask, 1).to_pbm()
    assert pbm == "P1\n3 3\n0 0 1\n0 0 0\n1 0 0\n"


# ---- cover check

def test_cover_examples():
    covered, missing = cover_check(boundedness_masks(powers(), disc_grid(), 1))
    assert covered and missing == []
    g = disc_grid()
    covered, missing = cover_check(boundedness_masks(divergent_constants(64), g, 50))
    assert not covered and len(missing) == g.mask.sum()
    assert cover_check(boundedness_masks(exp_partial_sums(30), disc_grid(2.0), 8))[0]


def test_cover_geometry_mismatch():
    a = boundedness_set(powers(), disc_grid(1.0, 33), 1)
    b = boundedness_set(powers(), disc_grid(1.0, 17), 1)
    with pytest.raises(GeometryMismatch):
        cover_check([a, b])
    with pytest.raises(GeometryMismatch):
        dense_ball_search([a, b])
    with pytest.raises(ValueError):
        cover_check([])


# ---- dense ball search

def test_dense_ball_full_square():
    g = square_grid(11, 0.1)
    ball = dense_ball_search([BoundednessMask(g, np.ones((11, 11), bool), 1)])
    assert ball.k == 1 and abs(ball.center - (0.5 + 0.5j)) < 1e-12
    # inscribed disc of the unit square, up to one lattice cell
    assert 0.5 <= ball.radius <= 0.5 + 0.1 + 1e-12


def test_dense_ball_single_cell():
    g = square_grid(9, 0.25)
    m = np.zeros((9, 9), bool)
    m[3, 6] = True
    ball = dense_ball_search([BoundednessMask(g, m, 2)])
    assert ball == DenseBall(2, complex(6 * 0.25, 3 * 0.25), 0.25)


def test_dense_ball_left_half_matches_oracle():
    g = square_grid(21, 0.1, -1 - 1j)
    m = (g.points().real < -0.05)
    ball = dense_ball_search([BoundednessMask(g, m, 1)])
    c, r = brute_ball(m, g)
    assert ball.center.real < 0 and ball.center == c and ball.radius == pytest.approx(r)


@given(st.integers(0, 10_000))
@settings(max_examples=25, deadline=None)
def test_dense_ball_matches_brute_force_on_random_masks(seed):
    rng = np.random.default_rng(seed)
    g = square_grid(12, 0.5)
    m = rng.random((12, 12)) < rng.uniform(0.3, 0.95)
    if not m.any():
        m[0, 0] = True
    ball = dense_ball_search([BoundednessMask(g, m, 1)])
    c, r = brute_ball(m, g)
    assert ball.center == c and ball.radius == pytest.approx(r, rel=1e-12)
    # the open disc holds only true lattice points
    inside = np.abs(g.points() - ball.center) < ball.radius - 1e-12
    assert np.all(m[inside])


def test_dense_ball_tie_prefers_smaller_k():
    g = square_grid(7, 1.0)
    m = np.zeros((7, 7), bool)
    m[3, 3] = True
    ball = dense_ball_search([BoundednessMask(g, m.copy(), 3), BoundednessMask(g, m.copy(), 2)])
    assert ball.k == 2


def test_dense_ball_all_empty():
    g = square_grid(5)
    with pytest.raises(AllMasksEmpty):
        dense_ball_search([BoundednessMask(g, np.zeros((5, 5), bool), 1)])


@given(st.integers(0, 10_000), st.integers(1, 6))
@settings(max_examples=40, deadline=None)
def test_discrete_baire_on_random_tilings(seed, K):
    rng = np.random.default_rng(seed)
    g = disc_grid(1.0, 17)
    label = rng.integers(1, K + 1, g.mask.shape)
    masks = [BoundednessMask(g, g.mask & (label == k), k) for k in range(1, K + 1)]
    covered, _ = cover_check(masks)
    assert covered
    assert dense_ball_search(masks).radius >= g.spacing


# ---- holomorphy residual of the limit

def test_limit_residual_examples():
    assert limit_holomorphy_residual(exp_partial_sums(30), (0j, 0.5)) < 1e-10
    assert limit_holomorphy_residual(conj_sequence(), (0j, 0.5)) >= 0.1
    assert limit_holomorphy_residual(zero_sequence(), (0j, 0.5)) == 0
    with pytest.raises(ValueError):
        limit_holomorphy_residual(zero_sequence(), (0j, 0.0))


def test_exp_tail_bound_is_tiny():
    from math import factorial

    tail = sum(0.5 ** m / factorial(m) for m in range(31, 60))
    assert tail < 1e-40


def test_pipeline_on_exp_family():
    g = disc_grid(2.0)
    seq = exp_partial_sums(30)
    masks = boundedness_masks(seq, g, 8)
    assert cover_check(masks)[0]
    ball = dense_ball_search(masks)
    assert ball.radius >= g.spacing
    assert limit_holomorphy_residual(seq, ball) < 1e-8
