"""Quick invariant checks across all modules, run by ``complexkit selftest``.

Each check returns ``(name, ok, value, tolerance)``.  Everything is
seeded and sized to finish in a few seconds.
"""

from __future__ import annotations

import numpy as np

from .automorphisms import (
    BidiscAutomorphism,
    commutator_defect,
    isotropy_abelian_report,
    poincare_witness,
    random_unitary,
)
from .bers import CharacterTable, Poly, character_point, hom_from_map, morphism_audit
from .cauchy import cauchy_eval, pompeiu_eval
from .dbar import DbarProblem, cauchy_transform
from .dirichlet import BoundaryData, harnack_lower_bound_check, hopf_normal_derivative
from .dirichlet import harmonic_extension, poisson_kernel
from .geometry import QuadratureSpec, disc
from .metrics import (
    Kind,
    MetricQuery,
    Model,
    bidisc_automorphism_map,
    distance_decreasing_check,
    metric_length,
)
from .osgood import (
    boundedness_masks,
    cover_check,
    dense_ball_search,
    exp_partial_sums,
    limit_holomorphy_residual,
)
from .geometry import GridField


def _cauchy(rng):
    d = disc()
    pts = 0.7 * np.sqrt(rng.random(5)) * np.exp(2j * np.pi * rng.random(5))
    err = max(abs(cauchy_eval(np.exp, d, complex(z)) - np.exp(z)) for z in pts)
    yield "cauchy_exp", err < 1e-10, float(err), 1e-10
    v = np.atleast_1d(pompeiu_eval(np.conj, d, pts, QuadratureSpec(area_resolution=128)))
    err = float(np.max(np.abs(v - np.conj(pts))))
    yield "pompeiu_conj", err < 5e-2, err, 5e-2


def _dbar(rng):
    p = DbarProblem(lambda z: (np.abs(z) <= 1).astype(complex), 1.0)
    pts = np.array([0.3 + 0.2j, -0.5j, 1.5, -1.2 + 0.4j])
    f = cauchy_transform(p, pts, QuadratureSpec(area_resolution=128))
    exact = np.where(np.abs(pts) <= 1, np.conj(pts), 1 / pts)
    err = float(np.max(np.abs(f - exact)))
    yield "dbar_indicator", err < 2e-2, err, 2e-2


def _dirichlet(rng):
    f = BoundaryData.from_function(lambda p: np.cos(2 * p), 256)
    u = harmonic_extension(f)
    z = 0.6 * np.exp(2j * np.pi * rng.random(20))
    err = float(np.max(np.abs(u(z) - np.real(z ** 2))))
    yield "dirichlet_cos2", err < 1e-10, err, 1e-10
    th = 2 * np.pi * np.arange(2048) / 2048
    norm = float(abs(np.mean(poisson_kernel(0.9, th)) - 1))
    yield "kernel_normalization", norm < 1e-12, norm, 1e-12
    g = BoundaryData.from_function(lambda p: 1 - np.cos(p), 256)
    dn = hopf_normal_derivative(harmonic_extension(g), 1.0)
    yield "hopf_one_minus_cos", abs(dn + 1) < 1e-3, float(dn), 1e-3
    hc = harnack_lower_bound_check(g, 0.6)
    yield "harnack", hc.ok, hc.lhs - hc.rhs, 0.0


def _metrics(rng):
    K = Kind.KOBAYASHI
    xi = rng.normal(size=(50, 2)) + 1j * rng.normal(size=(50, 2))
    err = max(abs(metric_length(MetricQuery(Model.UNIT_BALL2, K, [0, 0], x))
                  - np.linalg.norm(x)) for x in xi)
    yield "ball_origin_euclidean", err < 1e-12, float(err), 1e-12
    err = max(abs(metric_length(MetricQuery(Model.UNIT_BIDISC, K, [0, 0], x))
                  - np.max(np.abs(x))) for x in xi)
    yield "bidisc_origin_max", err < 1e-12, float(err), 1e-12
    gap = 0.0
    for _ in range(10):
        a = BidiscAutomorphism(*(0.8 * Model.UNIT_DISC.random_points(rng, 2).ravel()),
                               *rng.uniform(0, 2 * np.pi, 2))
        P = Model.UNIT_BIDISC.random_points(rng, 1, 0.9)[0]
        r = distance_decreasing_check(bidisc_automorphism_map(a),
                                      MetricQuery(Model.UNIT_BIDISC, K, P, xi[0]))
        gap = max(gap, abs(r.lhs - r.rhs))
    yield "automorphism_invariance", gap < 1e-8, gap, 1e-8


def _automorphisms(rng):
    w = poincare_witness(np.array([[-1, 1], [1, 0]]))
    yield ("poincare_midpoint", w.branch == "midpoint" and abs(w.image_norm - 0.5 ** 0.5) < 1e-12,
           w.image_norm, 1e-12)
    rep = isotropy_abelian_report(100, 0)
    yield "bidisc_isotropy_abelian", rep.bidisc_max_defect == 0, rep.bidisc_max_defect, 0.0
    yield "ball_isotropy_nonabelian", rep.ball_witness[2] > 0.1, rep.ball_witness[2], 0.1
    u, v = random_unitary(rng), random_unitary(rng)
    d = abs(commutator_defect(u, v) - commutator_defect(v, u))
    yield "commutator_symmetric", d < 1e-15, float(d), 1e-15


def _bers(rng):
    audit = morphism_audit(hom_from_map(Poly([1, 2, -1, 0, 3])), 50, 0)
    worst = max(audit.additive_defect, audit.multiplicative_defect,
                audit.unital_defect, audit.scalar_defect)
    yield "pullback_is_homomorphism", worst < 1e-10, worst, 1e-10
    yield "pullback_recovers_h", audit.recovered_h == Poly([1, 2, -1, 0, 3]), 0.0, 0.0
    decoy = morphism_audit(lambda f: f.conj(), 20, 0)
    yield "conjugation_flagged", decoy.scalar_defect == 2.0, decoy.scalar_defect, 2.0
    c, ok, _ = character_point(CharacterTable.of_evaluation(0.3 - 1.2j, 8))
    yield "character_is_evaluation", ok and c == 0.3 - 1.2j, 0.0, 1e-10


def _osgood(rng):
    n, R = 33, 2.0
    h = 2 * R / (n - 1)
    grid = GridField.sample(lambda z: np.zeros(z.shape, complex), complex(-R, -R), h, n, n,
                            lambda z: np.abs(z) <= R + 1e-12)
    seq = exp_partial_sums(30)
    masks = boundedness_masks(seq, grid, 8)
    covered, _ = cover_check(masks)
    yield "exp_sums_cover", covered, 0.0, 0.0
    ball = dense_ball_search(masks)
    yield "dense_ball_radius", ball.radius >= h, ball.radius, h
    res = limit_holomorphy_residual(seq, ball)
    yield "limit_holomorphy", res < 1e-8, res, 1e-8


def run_selftest(seed: int = 0):
    rng = np.random.default_rng(seed)
    checks = []
    for block in (_cauchy, _dbar, _dirichlet, _metrics, _automorphisms, _bers, _osgood):
        checks.extend((n, bool(ok), float(v), float(t)) for n, ok, v, t in block(rng))
    return checks
