"""Poisson-integral Dirichlet solver on the unit disc and its verification tools.

Boundary data are equispaced samples ``f(e^{i psi_k})``, ``psi_k = 2 pi k / N``.
The Poisson integral is evaluated with the periodic trapezoid rule.  Close
to the circle the kernel is sharper than the sample spacing, so the data
are first refined by trigonometric interpolation until the aliasing error
``r**N_eff`` drops below roundoff.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .errors import (
    DegenerateSampleSet,
    LatticeTooSmall,
    NegativeData,
    NonFiniteSample,
    RadiusOutOfRange,
)
from .geometry import GridField, _as_values

MAX_NODES = 1 << 20


@dataclass(frozen=True)
class BoundaryData:
    samples: np.ndarray

    def __post_init__(self):
        s = np.asarray(self.samples, dtype=complex).ravel()
        if s.size < 8:
            raise ValueError("need at least 8 boundary samples")
        if not np.all(np.isfinite(s)):
            raise NonFiniteSample("boundary samples must be finite")
        object.__setattr__(self, "samples", s)

    @property
    def count(self) -> int:
        return self.samples.size

    @property
    def angles(self) -> np.ndarray:
        return 2 * np.pi * np.arange(self.count) / self.count

    @classmethod
    def from_function(cls, f: Callable, count: int = 256) -> "BoundaryData":
        """Sample ``f(psi)`` (a function of the boundary angle)."""
        psi = 2 * np.pi * np.arange(count) / count
        return cls(_as_values(f, psi))

    @property
    def is_real(self) -> bool:
        return bool(np.all(self.samples.imag == 0))

    def refined(self, n: int) -> np.ndarray:
        """Trigonometric interpolant of the samples on ``n >= count`` nodes."""
        N = self.count
        if n <= N:
            return self.samples
        c = np.fft.fft(self.samples)
        out = np.zeros(n, complex)
        half = N // 2
        out[:half] = c[:half]
        out[n - (N - half - 1):] = c[half + 1:]
        if N % 2 == 0:
            # split the Nyquist mode symmetrically
            out[half] = 0.5 * c[half]
            out[n - half] = 0.5 * c[half]
        else:
            out[half] = c[half]
        return np.fft.ifft(out) * (n / N)

    def __call__(self, psi):
        """Trigonometric interpolant evaluated at arbitrary angles."""
        psi = np.asarray(psi, dtype=float)
        N = self.count
        c = np.fft.fft(self.samples) / N
        k = np.fft.fftfreq(N, 1.0 / N)
        if N % 2 == 0:
            nyq = N // 2
            terms = np.exp(1j * np.multiply.outer(psi, k))
            terms[..., nyq] = np.cos(nyq * psi)
        else:
            terms = np.exp(1j * np.multiply.outer(psi, k))
        out = terms @ c
        return out.real if self.is_real else out


@dataclass
class HarmonicField:
    """Samples ``values[j, k] = u(radii[j] * e^{i thetas[k]})``."""

    radii: np.ndarray
    thetas: np.ndarray
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        self.radii = np.asarray(self.radii, float)
        self.thetas = np.asarray(self.thetas, float)
        self.values = np.asarray(self.values)
        if np.any(self.radii >= 1) or np.any(self.radii < 0):
            raise RadiusOutOfRange("radial grid must lie inside the disc")
        if not np.all(np.isfinite(self.values)):
            raise NonFiniteSample("field values must be finite")


def poisson_kernel(r, delta):
    """``(1 - r^2) / (1 - 2 r cos(delta) + r^2)`` for ``0 <= r < 1``."""
    r = np.asarray(r, dtype=float)
    if np.any(r < 0) or np.any(r >= 1):
        raise RadiusOutOfRange("kernel needs 0 <= r < 1")
    out = (1 - r * r) / (1 - 2 * r * np.cos(delta) + r * r)
    return float(out) if np.ndim(out) == 0 else out


def _nodes_needed(rmax: float, n: int) -> int:
    if rmax <= 0:
        return n
    need = int(math.ceil(37.0 / -math.log(rmax))) + 1
    return min(max(n, need), MAX_NODES)


def poisson_solve(f: BoundaryData, r, theta):
    """Harmonic extension ``u(r e^{i theta})`` of the boundary data."""
    r = np.asarray(r, dtype=float)
    theta = np.asarray(theta, dtype=float)
    if np.any(r < 0) or np.any(r >= 1):
        raise RadiusOutOfRange("poisson_solve needs 0 <= r < 1")
    r, theta = np.broadcast_arrays(r, theta)
    n = _nodes_needed(float(r.max()) if r.size else 0.0, f.count)
    samples = f.refined(n)
    psi = 2 * np.pi * np.arange(n) / n
    flat_r, flat_t = r.ravel(), theta.ravel()
    out = np.empty(flat_r.shape, complex)
    chunk = max(1, (1 << 22) // n)
    for i in range(0, flat_r.size, chunk):
        rr = flat_r[i:i + chunk, None]
        kern = (1 - rr * rr) / (1 - 2 * rr * np.cos(flat_t[i:i + chunk, None] - psi) + rr * rr)
        out[i:i + chunk] = kern @ samples / n
    out = out.reshape(r.shape)
    if f.is_real:
        out = out.real
    return out.item() if out.ndim == 0 else out


class HarmonicExtension:
    """``u`` on the closed disc: Poisson integral inside, data on the circle."""

    def __init__(self, f: BoundaryData):
        self.data = f

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        r, th = np.abs(z), np.angle(z)
        if np.any(r > 1 + 1e-12):
            raise RadiusOutOfRange("point outside the closed disc")
        on = r >= 1 - 1e-14
        dtype = float if self.data.is_real else complex
        out = np.empty(z.shape, dtype)
        if np.any(on):
            out[on] = self.data(th[on])
        if np.any(~on):
            out[~on] = poisson_solve(self.data, r[~on], th[~on])
        return out.item() if out.ndim == 0 else out


def harmonic_extension(f: BoundaryData) -> HarmonicExtension:
    return HarmonicExtension(f)


def sample_polar(f: BoundaryData, radii, n_theta: int) -> HarmonicField:
    thetas = 2 * np.pi * np.arange(n_theta) / n_theta
    R, T = np.meshgrid(radii, thetas, indexing="ij")
    return HarmonicField(radii, thetas, poisson_solve(f, R, T))


def laplacian_residual(u: HarmonicField | GridField) -> float:
    """Max ``|five-point Laplacian|`` over interior nodes."""
    if isinstance(u, GridField):
        if min(u.values.shape) < 5:
            raise LatticeTooSmall("need at least a 5x5 lattice")
        V, h = u.values, u.spacing
        lap = np.zeros(V.shape, complex)
        lap[1:-1, 1:-1] = (V[2:, 1:-1] + V[:-2, 1:-1] + V[1:-1, 2:] + V[1:-1, :-2]
                           - 4 * V[1:-1, 1:-1]) / (h * h)
        ok = u.interior(1)
        return float(np.max(np.abs(lap[ok]))) if ok.any() else 0.0
    V = np.asarray(u.values)
    if V.shape[0] < 5 or V.shape[1] < 5:
        raise LatticeTooSmall("need at least 5 radii and 5 angles")
    dr = np.diff(u.radii)
    if not np.allclose(dr, dr[0]):
        raise ValueError("radial grid must be uniform")
    dr = dr[0]
    dt = 2 * np.pi / u.thetas.size
    r = u.radii[1:-1, None]
    mid = V[1:-1]
    u_rr = (V[2:] - 2 * mid + V[:-2]) / dr ** 2
    u_r = (V[2:] - V[:-2]) / (2 * dr)
    u_tt = (np.roll(mid, -1, axis=1) - 2 * mid + np.roll(mid, 1, axis=1)) / dt ** 2
    lap = u_rr + u_r / r + u_tt / r ** 2
    return float(np.max(np.abs(lap)))


def boundary_continuity_gap(f: BoundaryData, r: float) -> float:
    """``max_theta |u(r, theta) - f(theta)|`` over the sample angles."""
    if not 0.9 <= r < 1:
        raise RadiusOutOfRange("continuity gap needs 0.9 <= r < 1")
    u = poisson_solve(f, np.full(f.count, r), f.angles)
    return float(np.max(np.abs(u - f.samples)))


def holder_seminorm(points, values, alpha: float, chunk: int = 2048,
                    max_points: int = 50_000) -> float:
    """Brute-force ``max |g(x) - g(y)| / |x - y|**alpha`` over sample pairs.

    Points may be real (1-d), complex, or rows of an ``(n, d)`` array.
    The value is a lower bound for the seminorm of the sampled function.
    """
    if not 0 < alpha <= 1:
        raise ValueError("alpha must lie in (0, 1]")
    x = np.asarray(points)
    if np.iscomplexobj(x):
        x = np.stack([x.real, x.imag], axis=-1)
    x = x.reshape(len(x), -1).astype(float)
    g = np.asarray(values).ravel()
    if len(x) != g.size:
        raise ValueError("points and values differ in length")
    if len(x) > max_points:
        raise ValueError(f"at most {max_points} points")
    if len(np.unique(x, axis=0)) < 2:
        raise DegenerateSampleSet("need two distinct sample points")
    best = 0.0
    for i in range(0, len(x), chunk):
        dx = np.linalg.norm(x[i:i + chunk, None, :] - x[None, :, :], axis=-1)
        dg = np.abs(g[i:i + chunk, None] - g[None, :])
        with np.errstate(divide="ignore", invalid="ignore"):
            q = np.where(dx > 0, dg / np.where(dx > 0, dx, 1.0) ** alpha, 0.0)
        best = max(best, float(q.max()))
    return best


@dataclass
class CkAlphaReport:
    k: int
    alpha: float
    sup_norms: list          # sup |g^(j)| for j = 0 .. k-1
    seminorms: list          # one per supplied order-k derivative
    seminorm: float

    def as_dict(self) -> dict:
        return {"k": self.k, "alpha": self.alpha, "sup_norms": self.sup_norms,
                "seminorms": self.seminorms, "seminorm": self.seminorm}


def ck_alpha_report(x, values, k: int, alpha: float,
                    derivatives: dict | None = None) -> CkAlphaReport:
    """Measure the C^{k,alpha} quantities of a sampled function.

    ``derivatives`` maps an order ``j`` to a list of sample arrays (one per
    multi-index of that order).  Missing orders are filled in by repeated
    second-order finite differences along a 1-d grid ``x``.
    """
    if k < 0:
        raise ValueError("k must be nonnegative")
    x = np.asarray(x)
    derivatives = dict(derivatives or {})
    derivatives.setdefault(0, [np.asarray(values)])
    for j in range(1, k + 1):
        if j not in derivatives:
            if x.ndim != 1:
                raise ValueError("finite differences need a 1-d grid")
            prev = derivatives[j - 1]
            derivatives[j] = [np.gradient(p, x, edge_order=2) for p in prev]
    sups = [max(float(np.max(np.abs(p))) for p in derivatives[j]) for j in range(k)]
    semis = [holder_seminorm(x, p, alpha) for p in derivatives[k]]
    return CkAlphaReport(k, alpha, sups, semis, max(semis))


def _richardson(steps: Sequence[float], quotients: Sequence[float]) -> float:
    # Neville extrapolation of the interpolating polynomial to step 0
    s = list(map(float, steps))
    p = list(quotients)
    n = len(s)
    for m in range(1, n):
        for i in range(n - m):
            p[i] = (s[i] * p[i + 1] - s[i + m] * p[i]) / (s[i] - s[i + m])
    return p[0]


def hopf_normal_derivative(u: Callable, P: complex,
                           steps: Sequence[float] = (1e-2, 5e-3, 2.5e-3)) -> float:
    """Outward normal derivative of ``u`` at the boundary point ``P``.

    One-sided quotients ``(u(P) - u(P - s nu)) / s`` are extrapolated to
    ``s = 0``.  For a nonconstant harmonic ``u`` with a boundary minimum at
    ``P`` the result is strictly negative.
    """
    P = complex(P)
    nu = P / abs(P)
    s = np.asarray(steps, float)
    pts = np.concatenate([[P], P - s * nu])
    vals = np.asarray(_as_values(u, pts))
    if not np.all(np.isfinite(vals)):
        raise NonFiniteSample("u is not finite on the inward ray")
    q = (vals[0] - vals[1:]) / s
    return float(np.real(_richardson(s, q)))


@dataclass(frozen=True)
class HarnackCheck:
    lhs: float
    rhs: float
    ok: bool


def harnack_lower_bound_check(f: BoundaryData, r: float,
                              n_theta: int | None = None) -> HarnackCheck:
    """Compare ``min_theta u(r, theta)`` with ``u(0) (1 - r) / (1 + r)``.

    ``(1 - r)/(1 + r)`` is the minimum of the Poisson kernel at radius ``r``,
    which makes the bound sharp for nonnegative data.
    """
    if not 0 < r < 1:
        raise RadiusOutOfRange("need 0 < r < 1")
    s = f.samples
    if np.any(s.imag != 0) or np.any(s.real < 0) or not np.any(s.real > 0):
        raise NegativeData("boundary data must be real, nonnegative and not all zero")
    n_theta = n_theta or max(4 * f.count, 1024)
    th = 2 * np.pi * np.arange(n_theta) / n_theta
    lhs = float(np.min(poisson_solve(f, np.full(n_theta, r), th)))
    rhs = float(np.mean(s.real)) * (1 - r) / (1 + r)
    return HarnackCheck(lhs, rhs, lhs >= rhs - 1e-9)
