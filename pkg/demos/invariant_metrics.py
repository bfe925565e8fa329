"""Invariant metrics on the disc, ball and bidisc, and the failure of a
biholomorphism between ball and bidisc.

Run with ``python3 demos/invariant_metrics.py``.
"""

import numpy as np

from complexkit.automorphisms import isotropy_abelian_report, poincare_witness
from complexkit.metrics import CurvePath, Kind, MetricQuery, Model, curve_length, metric_length

K = Kind.KOBAYASHI
xi = np.array([0.3, 0.4j])
print("ball at 0:  ", metric_length(MetricQuery(Model.UNIT_BALL2, K, [0, 0], xi)))
print("bidisc at 0:", metric_length(MetricQuery(Model.UNIT_BIDISC, K, [0, 0], xi)))
print("disc at -0.5:", metric_length(MetricQuery(Model.UNIT_DISC, K, -0.5, 1)))

seg = CurvePath(lambda t: np.array([0.5 * t, 0]), lambda t: np.array([0.5, 0]), Model.UNIT_DISC)
print("length of [0, 1/2]:", curve_length(seg, K), "atanh(1/2):", np.arctanh(0.5))

# A linear map cannot carry the bidisc onto the ball: some boundary point misses the sphere.
w = poincare_witness(np.array([[-1, 1], [1, 0]]))
print("witness:", w.branch, w.witness_point, "->", w.image, "norm", w.image_norm)

# The isotropy group of the bidisc at 0 has commuting rotations; the ball's does not.
rep = isotropy_abelian_report(200, seed=0)
print("bidisc commutator defect:", rep.bidisc_max_defect, "ball witness defect:", rep.ball_witness[2])
