"""Boundedness sets of a function sequence on a lattice and a discrete Baire step.

``S_k`` is the set of lattice points where every member ``f_j``,
``j <= j_max``, has modulus at most ``k``.  Truncating the index set
makes each mask an outer approximation of the true set; raising
``j_max`` can only shrink it.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.ndimage import distance_transform_edt

from .cauchy import holomorphy_residual
from .errors import AllMasksEmpty, GeometryMismatch, NonFiniteSample
from .geometry import GridField, QuadratureSpec, disc


@dataclass(frozen=True)
class FunctionSequence:
    """``member(j, z)`` for ``j = 1..j_max``, vectorized over ``z``."""

    member: Callable
    j_max: int = 64
    name: str = ""

    def __post_init__(self):
        if self.j_max < 1:
            raise ValueError("j_max must be positive")

    def truncated(self, j_max: int) -> "FunctionSequence":
        return FunctionSequence(self.member, j_max, self.name)

    def limit_proxy(self) -> Callable:
        return lambda z: self.member(self.j_max, z)


@dataclass
class BoundednessMask:
    grid: GridField
    mask: np.ndarray
    k: float

    def to_pbm(self) -> str:
        """Plain PBM, top row first (largest imaginary part); 1 marks the set."""
        rows = self.mask[::-1].astype(int)
        lines = ["P1", f"{rows.shape[1]} {rows.shape[0]}"]
        lines += [" ".join(map(str, r)) for r in rows]
        return "\n".join(lines) + "\n"


def sup_field(seq: FunctionSequence, grid: GridField) -> np.ndarray:
    """``max_j |f_j|`` at each region point of ``grid``; ``nan`` elsewhere."""
    pts = grid.points()[grid.mask]
    sup = np.zeros(pts.shape)
    for j in range(1, seq.j_max + 1):
        v = np.abs(np.broadcast_to(np.asarray(seq.member(j, pts), dtype=complex), pts.shape))
        if not np.all(np.isfinite(v)):
            raise NonFiniteSample(f"member {j} is not finite on the grid")
        np.maximum(sup, v, out=sup)
    out = np.full(grid.mask.shape, np.nan)
    out[grid.mask] = sup
    return out


def boundedness_set(seq: FunctionSequence, grid: GridField, k: float,
                    sup: np.ndarray | None = None) -> BoundednessMask:
    """Mask of ``max_{j <= j_max} |f_j| <= k``; false off the grid's region."""
    if not k > 0:
        raise ValueError("k must be positive")
    s = sup_field(seq, grid) if sup is None else sup
    m = np.zeros(grid.mask.shape, bool)
    m[grid.mask] = s[grid.mask] <= k
    return BoundednessMask(grid, m, float(k))


def boundedness_masks(seq: FunctionSequence, grid: GridField, K: int) -> list:
    """Masks for ``k = 1..K`` sharing one sweep over the sequence."""
    s = sup_field(seq, grid)
    return [boundedness_set(seq, grid, k, s) for k in range(1, K + 1)]


def _same_geometry(a: GridField, b: GridField) -> bool:
    return (a.origin == b.origin and a.spacing == b.spacing
            and a.mask.shape == b.mask.shape and np.array_equal(a.mask, b.mask))


def _check_geometry(masks) -> GridField:
    if not masks:
        raise ValueError("need at least one mask")
    g = masks[0].grid
    if any(not _same_geometry(g, m.grid) for m in masks[1:]):
        raise GeometryMismatch("masks live on different grids")
    return g


def cover_check(masks: list) -> tuple:
    """``(covered, uncovered_points)`` for the union of the masks over the region."""
    g = _check_geometry(masks)
    union = np.zeros(g.mask.shape, bool)
    for m in masks:
        union |= m.mask
    missing = g.mask & ~union
    return (not missing.any()), [complex(z) for z in g.points()[missing]]


@dataclass(frozen=True)
class DenseBall:
    k: float
    center: complex
    radius: float


def dense_ball_search(masks: list) -> DenseBall:
    """Largest lattice disc lying in a single mask.

    The radius at a true cell is its distance to the nearest false lattice
    point (the region's exterior counts as false), so the open disc holds
    only true points.  Ties go to the smaller ``k``, then to the
    lexicographically smaller centre ``(Re, Im)``.
    """
    g = _check_geometry(masks)
    pts = g.points()
    best = None
    for m in masks:
        if not m.mask.any():
            continue
        d = distance_transform_edt(np.pad(m.mask, 1, constant_values=False))[1:-1, 1:-1]
        top = d.max()
        cand = pts[d == top]
        c = min(cand, key=lambda z: (z.real, z.imag))
        key = (-top, m.k, c.real, c.imag)
        if best is None or key < best[0]:
            best = (key, DenseBall(m.k, complex(c), float(top * g.spacing)))
    if best is None:
        raise AllMasksEmpty("every mask is empty")
    return best[1]


def limit_holomorphy_residual(seq: FunctionSequence, ball, q: QuadratureSpec | None = None,
                              n_samples: int = 16) -> float:
    """Cauchy-formula consistency of ``f_{j_max}`` on a ball.

    Samples sit on the circle of half the radius, well inside the
    contour of the ball.
    """
    center, radius = (ball.center, ball.radius) if isinstance(ball, DenseBall) else ball
    if not radius > 0:
        raise ValueError("radius must be positive")
    q = q or QuadratureSpec()
    t = 2 * np.pi * np.arange(n_samples) / n_samples
    pts = np.concatenate([[center], center + 0.5 * radius * np.exp(1j * t)])
    return holomorphy_residual(seq.limit_proxy(), disc(center, radius), pts, q)


# registry of sequences with known behaviour

def powers(j_max: int = 64) -> FunctionSequence:
    return FunctionSequence(lambda j, z: np.asarray(z, dtype=complex) ** j, j_max, "powers")


def exp_partial_sums(j_max: int = 30) -> FunctionSequence:
    def member(j, z):
        z = np.asarray(z, dtype=complex)
        term = np.ones(z.shape, complex)
        acc = term.copy()
        for m in range(1, j + 1):
            term = term * z / m
            acc = acc + term
        return acc

    return FunctionSequence(member, j_max, "exp")


def divergent_constants(j_max: int = 64) -> FunctionSequence:
    return FunctionSequence(lambda j, z: np.full(np.shape(z), float(j), complex),
                            j_max, "constants")


def conj_sequence(j_max: int = 8) -> FunctionSequence:
    return FunctionSequence(lambda j, z: np.conj(np.asarray(z, dtype=complex)), j_max, "conj")


def zero_sequence(j_max: int = 8) -> FunctionSequence:
    return FunctionSequence(lambda j, z: np.zeros(np.shape(z), complex), j_max, "zero")


SEQUENCES = {
    "powers": powers,
    "exp": exp_partial_sums,
    "constants": divergent_constants,
    "conj": conj_sequence,
    "zero": zero_sequence,
}
