"""Bidisc automorphisms, isotropy groups of bidisc and ball, Poincare witnesses."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    CoincidentPoints,
    KindMismatch,
    NotOnSphere,
    PointOutsideDomain,
    SingularMatrix,
)


def mobius(a: complex, z, phase: float = 0.0):
    """Disc automorphism ``e^{i phase} (z - a) / (1 - conj(a) z)``."""
    z = np.asarray(z, dtype=complex)
    return np.exp(1j * phase) * (z - a) / (1 - np.conj(a) * z)


def mobius_derivative(a: complex, z, phase: float = 0.0):
    z = np.asarray(z, dtype=complex)
    return np.exp(1j * phase) * (1 - abs(a) ** 2) / (1 - np.conj(a) * z) ** 2


@dataclass(frozen=True)
class BidiscAutomorphism:
    """``(z1, z2) -> (e^{i t1} m_alpha(z1), e^{i t2} m_beta(z2))``."""

    alpha: complex = 0j
    beta: complex = 0j
    theta1: float = 0.0
    theta2: float = 0.0

    def __post_init__(self):
        if not (abs(self.alpha) < 1 and abs(self.beta) < 1):
            raise ValueError("need |alpha| < 1 and |beta| < 1")

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        if np.any(np.abs(z) >= 1):
            raise PointOutsideDomain("point is not in the open bidisc")
        return np.stack([mobius(self.alpha, z[..., 0], self.theta1),
                         mobius(self.beta, z[..., 1], self.theta2)], axis=-1)

    def jacobian(self, z) -> np.ndarray:
        z = np.asarray(z, dtype=complex)
        return np.diag([complex(mobius_derivative(self.alpha, z[0], self.theta1)),
                        complex(mobius_derivative(self.beta, z[1], self.theta2))])

    def inverse(self) -> "BidiscAutomorphism":
        # e^{it} m_a(z) = w  <=>  z = e^{-it} m_{-a e^{it}}(w)
        return BidiscAutomorphism(-self.alpha * np.exp(1j * self.theta1),
                                  -self.beta * np.exp(1j * self.theta2),
                                  -self.theta1, -self.theta2)

    def compose(self, other: "BidiscAutomorphism") -> "BidiscAutomorphism":
        """``self o other``, again of the same normal form."""
        params = []
        for (a1, t1), (a2, t2) in (((self.alpha, self.theta1), (other.alpha, other.theta1)),
                                   ((self.beta, self.theta2), (other.beta, other.theta2))):
            # zero of the composite, then its phase from one evaluation
            inv1 = complex(mobius(-a1 * np.exp(1j * t1), 0j, -t1))
            c = complex(mobius(-a2 * np.exp(1j * t2), inv1, -t2))
            z0 = 0j if abs(c) > 1e-12 else 0.5 + 0j
            g = complex(mobius(a1, mobius(a2, z0, t2), t1))
            m = complex(mobius(c, z0))
            params.append((c, float(np.angle(g / m))))
        (a, t1), (b, t2) = params
        return BidiscAutomorphism(a, b, t1, t2)


def apply_bidisc_automorphism(a: BidiscAutomorphism, z):
    return a(z)


@dataclass(frozen=True)
class DiagonalRotation:
    theta1: float
    theta2: float

    def matrix(self) -> np.ndarray:
        return np.diag([np.exp(1j * self.theta1), np.exp(1j * self.theta2)])


@dataclass(frozen=True)
class Unitary2:
    U: np.ndarray

    def __post_init__(self):
        U = np.asarray(self.U, dtype=complex)
        if U.shape != (2, 2):
            raise ValueError("need a 2x2 matrix")
        if np.max(np.abs(U @ U.conj().T - np.eye(2))) > 1e-12:
            raise ValueError("matrix is not unitary")
        object.__setattr__(self, "U", U)

    def matrix(self) -> np.ndarray:
        return self.U

    def __call__(self, z):
        return self.U @ np.asarray(z, dtype=complex)


SWAP = Unitary2(np.array([[0, 1], [1, 0]]))
FLIP = Unitary2(np.diag([1, -1]))


def random_unitary(rng: np.random.Generator) -> Unitary2:
    """Gram-Schmidt on the columns of a random complex 2x2 matrix."""
    while True:
        m = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
        u = m[:, 0] / np.linalg.norm(m[:, 0])
        v = m[:, 1] - np.vdot(u, m[:, 1]) * u
        nv = np.linalg.norm(v)
        if nv > 1e-8:
            return Unitary2(np.column_stack([u, v / nv]))


def commutator_defect(g1, g2) -> float:
    """Max entry of ``|g1 g2 - g2 g1|``; zero exactly when they commute."""
    if type(g1) is not type(g2) or not isinstance(g1, (DiagonalRotation, Unitary2)):
        raise KindMismatch("both elements must be of the same kind")
    if isinstance(g1, DiagonalRotation):
        # rotations compose by adding phases
        ab = np.exp(1j * np.array([g1.theta1 + g2.theta1, g1.theta2 + g2.theta2]))
        ba = np.exp(1j * np.array([g2.theta1 + g1.theta1, g2.theta2 + g1.theta2]))
        return float(np.max(np.abs(ab - ba)))
    A, B = g1.matrix(), g2.matrix()
    return float(np.max(np.abs(A @ B - B @ A)))


@dataclass
class IsotropyReport:
    bidisc_max_defect: float
    ball_witness: tuple      # (U1, U2, defect)
    ball_tries: int

    def as_dict(self) -> dict:
        U1, U2, defect = self.ball_witness

        def enc(U):
            return [[[float(x.real), float(x.imag)] for x in row] for row in U.U]

        return {"bidisc_max_defect": self.bidisc_max_defect,
                "ball_witness": {"U1": enc(U1), "U2": enc(U2), "defect": defect},
                "ball_tries": self.ball_tries}


def isotropy_abelian_report(sample_count: int, seed=0, threshold: float = 0.1,
                            max_tries: int = 10_000) -> IsotropyReport:
    """Sample both connected isotropy groups and compare their commutators."""
    if sample_count < 2:
        raise ValueError("sample_count must be at least 2")
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(sample_count):
        a = DiagonalRotation(*rng.uniform(0, 2 * np.pi, 2))
        b = DiagonalRotation(*rng.uniform(0, 2 * np.pi, 2))
        worst = max(worst, commutator_defect(a, b))
    for tries in range(1, max_tries + 1):
        U1, U2 = random_unitary(rng), random_unitary(rng)
        d = commutator_defect(U1, U2)
        if d > threshold:
            return IsotropyReport(worst, (U1, U2, d), tries)
    # the swap / flip pair never commutes
    return IsotropyReport(worst, (SWAP, FLIP, commutator_defect(SWAP, FLIP)), max_tries)


@dataclass(frozen=True)
class PoincareWitness:
    witness_point: tuple
    image: tuple
    image_norm: float
    branch: str

    def as_dict(self) -> dict:
        def enc(p):
            return [[float(c.real), float(c.imag)] for c in p]

        return {"witness_point": enc(self.witness_point), "image": enc(self.image),
                "image_norm": self.image_norm, "branch": self.branch}


def poincare_witness(L, sphere_tol: float = 1e-9) -> PoincareWitness:
    """Show that the linear map ``L`` cannot carry the bidisc onto the ball.

    The boundary segment ``{(t, 1): 0 <= t <= 1}`` of the bidisc would have
    to land in the sphere.  Either an endpoint misses the sphere, or both
    hit it and the midpoint falls strictly inside (the ball is strictly
    convex).
    """
    L = np.asarray(L, dtype=complex)
    if L.shape != (2, 2):
        raise ValueError("need a 2x2 matrix")
    if abs(np.linalg.det(L)) <= 1e-10:
        raise SingularMatrix("matrix is not invertible")
    for t, branch in ((0.0, "endpoint"), (1.0, "endpoint"), (0.5, "midpoint")):
        s = L @ np.array([t, 1.0], complex)
        n = float(np.linalg.norm(s))
        if branch == "midpoint" or abs(n - 1) > sphere_tol:
            return PoincareWitness((complex(t), 1 + 0j), tuple(complex(c) for c in s),
                                   n, branch)


def strict_convexity_check(p, q, tol: float = 1e-9) -> float:
    """``|(p + q) / 2|`` for two distinct points of the unit sphere in C^2."""
    p = np.asarray(p, dtype=complex)
    q = np.asarray(q, dtype=complex)
    if abs(np.linalg.norm(p) - 1) > tol or abs(np.linalg.norm(q) - 1) > tol:
        raise NotOnSphere("points must lie on the unit sphere")
    if np.linalg.norm(p - q) <= tol:
        raise CoincidentPoints("points coincide")
    return float(np.linalg.norm((p + q) / 2))
