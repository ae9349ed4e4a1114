"""Accretivity and sector certification, plus seeded random ensembles.

A matrix is accretive when its Hermitian part is positive definite; it is
sectorial with half-angle alpha when its numerical range sits inside
S_alpha = {z : Re z > 0, |Im z| <= tan(alpha) Re z}.  This module certifies
(alpha, m, M) for a given matrix and generates reproducible ensembles with
those quantities controlled exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import linalg
from .errors import ParameterError, PreconditionError
from .linalg import as_matrix, hermitian_part, imaginary_part


@dataclass(frozen=True)
class SectorCertificate:
    """Certified sector data: half-angle alpha and real-part bounds m <= M."""

    alpha: float
    m: float
    M: float


@dataclass(frozen=True)
class EnsembleSpec:
    """Description of a seeded random ensemble of sectorial matrices."""

    dim: int
    alpha_max: float
    m: float
    M: float
    count: int
    seed: int

    def __post_init__(self):
        if self.dim < 1:
            raise ParameterError(f"dim must be >= 1, got {self.dim}")
        if not 0.0 <= self.alpha_max < math.pi / 2:
            raise ParameterError(f"alpha_max must be in [0, pi/2), got {self.alpha_max}")
        if not 0.0 < self.m <= self.M:
            raise ParameterError(f"need 0 < m <= M, got m={self.m}, M={self.M}")
        if self.count < 1:
            raise ParameterError(f"count must be >= 1, got {self.count}")
        if not 0 <= self.seed < 2**64:
            raise ParameterError("seed must be a 64-bit unsigned integer")


def is_accretive(A) -> tuple[bool, float]:
    """Whether Re A is positive definite, with a normalized margin.

    margin = lambda_min(Re A) / (1 + ||A||_op); accretive iff the margin
    exceeds the Loewner slack (strict positivity).
    """
    A = as_matrix(A)
    lam_min = float(np.linalg.eigvalsh(hermitian_part(A))[0])
    margin = lam_min / (1.0 + linalg.opnorm(A))
    return margin > linalg.TAU_LOEWNER, margin


def _require_accretive(A) -> np.ndarray:
    A = as_matrix(A)
    ok, margin = is_accretive(A)
    if not ok:
        raise PreconditionError(f"matrix is not accretive (margin {margin:.3e})")
    return A


def sectorial_angle(A) -> float:
    """Least alpha with W(A) inside S_alpha, for accretive A.

    Computed as arctan of the largest |eigenvalue| of
    (Re A)^{-1/2} (Im A) (Re A)^{-1/2}, which is exactly the smallest alpha
    with tan(alpha) Re A +- Im A >= 0.
    """
    A = _require_accretive(A)
    re_eig = linalg.hermitian_eigen(hermitian_part(A))
    W = re_eig.vectors @ np.diag(re_eig.values**-0.5) @ re_eig.vectors.conj().T
    H = W @ imaginary_part(A) @ W
    H = (H + H.conj().T) / 2.0
    rho = float(np.max(np.abs(np.linalg.eigvalsh(H))))
    return math.atan(rho)


def re_bounds(A) -> tuple[float, float]:
    """(lambda_min, lambda_max) of Re A, for accretive A."""
    A = _require_accretive(A)
    vals = np.linalg.eigvalsh(hermitian_part(A))
    return float(vals[0]), float(vals[-1])


def certify(A) -> SectorCertificate:
    """Full (alpha, m, M) certificate for an accretive matrix."""
    alpha = sectorial_angle(A)
    m, M = re_bounds(A)
    return SectorCertificate(alpha=alpha, m=m, M=M)


def _rng(seed: int, index: int, salt: int = 0) -> np.random.Generator:
    # Counter-style seeding: a pure function of (seed, index), so ensemble
    # members are independent of iteration order and safe to parallelize.
    return np.random.default_rng((seed, salt, index))


def haar_unitary(n: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-distributed unitary via phase-fixed QR of a complex Ginibre draw."""
    G = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    Q, R = np.linalg.qr(G)
    d = np.diagonal(R).copy()
    d = d / np.abs(d)
    return Q * d.conj()


def random_sectorial(spec: EnsembleSpec, index: int) -> np.ndarray:
    """Member ``index`` of the ensemble described by ``spec``.

    Construction: A = P^{1/2} (I + iT) P^{1/2} with P Hermitian of spectrum
    uniform in [m, M] and T Hermitian rescaled to ||T||_op = u tan(alpha_max),
    u uniform in [0, 1].  Then Re A = P exactly (so m I <= Re A <= M I) and
    the sectorial angle is arctan(||T||_op) <= alpha_max.
    """
    if index < 0 or index >= spec.count:
        raise ParameterError(f"index {index} outside [0, {spec.count})")
    rng = _rng(spec.seed, index)
    n = spec.dim
    p = rng.uniform(spec.m, spec.M, size=n)
    U = haar_unitary(n, rng)
    S = U @ np.diag(np.sqrt(p)) @ U.conj().T
    S = (S + S.conj().T) / 2.0  # exact Hermitian square root of P
    P = S @ S
    P = (P + P.conj().T) / 2.0
    if spec.alpha_max == 0.0:
        return P.astype(np.complex128)
    G = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    T = (G + G.conj().T) / 2.0
    u = rng.uniform(0.0, 1.0)
    tnorm = float(np.max(np.abs(np.linalg.eigvalsh(T))))
    if tnorm > 0.0:
        T = T * (u * math.tan(spec.alpha_max) / tnorm)
    Im = S @ T @ S
    Im = (Im + Im.conj().T) / 2.0
    return P + 1j * Im


def random_pd(spec: EnsembleSpec, index: int) -> np.ndarray:
    """Hermitian positive definite member: random_sectorial at alpha_max = 0."""
    flat = EnsembleSpec(
        dim=spec.dim, alpha_max=0.0, m=spec.m, M=spec.M, count=spec.count, seed=spec.seed
    )
    return random_sectorial(flat, index)
