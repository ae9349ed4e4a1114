"""Named numerical checks, one per inequality or identity in the catalog.

Every check draws operand ensembles deterministically from (seed, index),
certifies the sector data per sample, evaluates both sides of its statement
and reports the worst normalized margin.  Loewner comparisons go through
``linalg.loewner_leq`` on Hermitian parts; scalar and norm comparisons use
(rhs - lhs) / (1 + |rhs| + |lhs|); identities report the negated relative
deviation.  A check passes when the minimum margin survives -TAU_LOEWNER
(order checks) or -TAU_EQ (identity checks).
"""

from __future__ import annotations

import math
import time
import zlib
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable

import numpy as np

from . import funcalc, linalg, sector
from .errors import ParameterError
from .funcalc import MonotoneFunction, apply_function, catalog, scalar_eval, standard_catalog
from .linalg import (
    NormKind,
    TAU_EQ,
    TAU_LOEWNER,
    hermitian_part,
    inverse,
    kyfan,
    loewner_leq,
    maxabs,
    opnorm,
    uinorm,
)
from .maps import PositiveLinearMap, apply_map, is_unital, random_map
from .means import arithmetic_mean, harmonic_mean, scalar_sigma, sigma_mean
from .sector import EnsembleSpec, random_sectorial


def kantorovich_constant(m: float, M: float) -> float:
    """K(m, M) = (M + m)^2 / (4 M m) for 0 < m <= M."""
    if not 0.0 < m <= M:
        raise ParameterError(f"need 0 < m <= M, got m={m}, M={M}")
    return (M + m) ** 2 / (4.0 * M * m)


def _lm(X, Y) -> float:
    """Loewner margin of X <= Y."""
    return loewner_leq(X, Y).margin


def _sm(lhs: float, rhs: float) -> float:
    """Scalar margin of lhs <= rhs, normalized scale-free."""
    return (rhs - lhs) / (1.0 + abs(rhs) + abs(lhs))


def _dev(X, Y) -> float:
    """Identity margin: negated relative deviation between X and Y."""
    return -maxabs(X - Y) / (1.0 + maxabs(X) + maxabs(Y))


_H = hermitian_part

_T_GRID = np.arange(1, 10) / 10.0


@lru_cache(maxsize=64)
def _power(t: float) -> MonotoneFunction:
    return catalog("power", t)


def _certify(A: np.ndarray) -> tuple[float, float, float]:
    """(alpha, m, M) by the same formulas as sector.sectorial_angle/re_bounds,
    computed from a single pass for the engine's hot loop."""
    ReA = _H(A)
    vals, vecs = np.linalg.eigh(ReA)
    m, M = float(vals[0]), float(vals[-1])
    W = vecs @ np.diag(vals**-0.5) @ vecs.conj().T
    Im = (A - A.conj().T) / 2.0j
    Hm = W @ Im @ W
    Hm = (Hm + Hm.conj().T) / 2.0
    rho = float(np.max(np.abs(np.linalg.eigvalsh(Hm))))
    return math.atan(rho), m, M


@lru_cache(maxsize=20000)
def _operand_pair(spec: EnsembleSpec, index: int):
    """Certified operand pair for sample ``index``, shared across checks."""
    wide = EnsembleSpec(
        dim=spec.dim, alpha_max=spec.alpha_max, m=spec.m, M=spec.M,
        count=2 * spec.count, seed=spec.seed,
    )
    A = random_sectorial(wide, 2 * index)
    B = random_sectorial(wide, 2 * index + 1)
    aA, mA, MA = _certify(A)
    aB, mB, MB = _certify(B)
    return A, B, max(aA, aB), min(mA, mB), max(MA, MB)


class _Sample:
    """Per-sample evaluation context handed to check evaluators."""

    def __init__(self, spec, index, check_id, f, g, phi, norm, alpha_mode):
        A, B, cert_alpha, m, M = _operand_pair(spec, index)
        self.A, self.B = A, B
        self.ReA, self.ReB = _H(A), _H(B)
        self.m, self.M = m, M
        alpha = cert_alpha if alpha_mode == "certified" else spec.alpha_max
        self.alpha = alpha
        self.cosa = math.cos(alpha)
        self.seca = 1.0 / self.cosa
        self.cos2 = self.cosa * self.cosa
        self.sec2 = self.seca * self.seca
        self.f, self.g, self.phi, self.norm = f, g, phi, norm
        self.order = funcalc.default_order()
        self.eye = np.eye(spec.dim, dtype=np.complex128)
        self._rng = None
        self._seed = (spec.seed, zlib.crc32(check_id.encode()), index)

    @property
    def rng(self) -> np.random.Generator:
        if self._rng is None:
            self._rng = np.random.default_rng(self._seed)
        return self._rng

    # means and functional calculus with validation handled by the engine
    def sigma(self, X, Y, fn=None):
        return sigma_mean(X, Y, fn or self.f, order=self.order,
                          validate=False, check_convergence=False)

    def apply(self, fn, X):
        return apply_function(fn, X, order=self.order,
                              validate=False, check_convergence=False)

    def harm(self, X, Y, t):
        return harmonic_mean(X, Y, t, validate=False)

    def draw_t(self) -> float:
        return float(_T_GRID[self.rng.integers(0, len(_T_GRID))])

    def unit_vector(self) -> np.ndarray:
        n = self.A.shape[0]
        x = self.rng.standard_normal(n) + 1j * self.rng.standard_normal(n)
        return x / np.linalg.norm(x)

    def psd_bump(self) -> np.ndarray:
        # Hermitian PSD perturbation; keeps the perturbed operand in the
        # same sector since only the real part grows.
        n = self.A.shape[0]
        U = sector.haar_unitary(n, self.rng)
        d = self.rng.uniform(0.0, self.M, size=n)
        Q = U @ np.diag(d) @ U.conj().T
        return (Q + Q.conj().T) / 2.0

    def conditioned_invertible(self) -> np.ndarray:
        # Invertible with singular values in [1/2, 2] so identity checks are
        # not polluted by conditioning noise.
        n = self.A.shape[0]
        U = sector.haar_unitary(n, self.rng)
        V = sector.haar_unitary(n, self.rng)
        d = self.rng.uniform(0.5, 2.0, size=n)
        return U @ np.diag(d) @ V.conj().T

    def inner(self, X, x) -> complex:
        return complex(x.conj() @ X @ x)

    def gumus_factor(self, t: float) -> float:
        lam = min(t, 1.0 - t)
        return ((1.0 - lam) * self.m + lam * self.M) / (
            self.m ** (1.0 - lam) * self.M ** lam
        )


# ---------------------------------------------------------------------------
# check evaluators: each returns the sample margin
# ---------------------------------------------------------------------------

def _ev_real_superadditive(c):
    return _lm(c.sigma(c.ReA, c.ReB), _H(c.sigma(c.A, c.B)))


def _ev_real_sector_reverse(c):
    return _lm(_H(c.sigma(c.A, c.B)), c.sec2 * c.sigma(c.ReA, c.ReB))


def _ev_amgmhm(c):
    t = c.f.derivative_at_one
    S = _H(c.sigma(c.A, c.B))
    lo = _lm(c.cos2 * _H(c.harm(c.A, c.B, t)), S)
    hi = _lm(S, c.sec2 * _H(arithmetic_mean(c.A, c.B, t)))
    return min(lo, hi)


def _ev_mean_monotone(c):
    C = c.A + c.psd_bump()
    D = c.B + c.psd_bump()
    return _lm(_H(c.sigma(c.A, c.B)), c.sec2 * _H(c.sigma(C, D)))


def _ev_transformer(c):
    C = c.conditioned_invertible()
    X = C.conj().T @ c.sigma(c.A, c.B) @ C
    Y = c.sigma(C.conj().T @ c.A @ C, C.conj().T @ c.B @ C)
    return _dev(X, Y)


def _ev_kantorovich(c):
    # Requires f'(1) = g'(1): both means then sit between the same weighted
    # harmonic and arithmetic means, whose ratio K(m, M) bounds.  Mismatched
    # derivatives break the bound already for 1x1 positive inputs
    # ((a, b) = (2, 1), f = z^0.3, g = z^0.5 gives 2^0.2 > K(1, 2)).
    Pf = apply_map(c.phi, _H(c.sigma(c.A, c.B, c.f)))
    Pg = apply_map(c.phi, _H(c.sigma(c.A, c.B, c.g)))
    lhs = opnorm(Pf @ inverse(Pg))
    rhs = c.sec2**3 * kantorovich_constant(c.m, c.M)
    return _sm(lhs, rhs)


def _ev_har_ando(c):
    t = c.draw_t()
    L = apply_map(c.phi, c.harm(c.ReA, c.ReB, t))
    R = c.harm(apply_map(c.phi, c.A), apply_map(c.phi, c.B), t)
    return _lm(_H(L), _H(R))


def _ev_ando_sector(c):
    L = _H(apply_map(c.phi, c.sigma(c.A, c.B)))
    R = _H(c.sigma(apply_map(c.phi, c.A), apply_map(c.phi, c.B)))
    return _lm(L, c.sec2 * R)


def _ev_sigma_inner(c):
    x = c.unit_vector()
    lhs = c.inner(c.sigma(c.A, c.B), x).real
    rhs = c.sec2 * scalar_sigma(c.inner(c.A, x), c.inner(c.B, x), c.f).real
    return _sm(lhs, rhs)


def _ev_sigma_nabla_phi(c):
    t = c.f.derivative_at_one
    L = _H(apply_map(c.phi, c.sigma(c.A, c.B)))
    R = _H(apply_map(c.phi, arithmetic_mean(c.A, c.B, t)))
    return _lm(L, c.sec2 * R)


def _ev_f_real_super(c):
    return _lm(_H(c.apply(c.f, c.ReA)), _H(c.apply(c.f, c.A)))


def _ev_f_real_reverse(c):
    return _lm(_H(c.apply(c.f, c.A)), c.sec2 * _H(c.apply(c.f, c.ReA)))


def _ev_choi_sector(c):
    L = _H(apply_map(c.phi, c.apply(c.f, c.A)))
    R = _H(c.apply(c.f, apply_map(c.phi, c.A)))
    return _lm(c.cos2 * L, R)


def _ev_f_inner(c):
    x = c.unit_vector()
    lhs = c.inner(c.apply(c.f, c.A), x).real
    rhs = c.sec2 * scalar_eval(c.f, c.inner(c.A, x)).real
    return _sm(lhs, rhs)


def _ev_f_nabla(c):
    t = c.draw_t()
    L = arithmetic_mean(c.apply(c.f, c.A), c.apply(c.f, c.B), t)
    R = c.apply(c.f, arithmetic_mean(c.A, c.B, t))
    return _lm(_H(L), c.sec2 * _H(R))


def _ev_f_sharp_nabla(c):
    FA = c.apply(c.f, c.A)
    FB = c.apply(c.f, c.B)
    L = _H(c.sigma(FA, FB, _power(0.5)))
    R = _H(c.apply(c.f, arithmetic_mean(c.A, c.B, 0.5)))
    return _lm(L, c.sec2 * c.sec2 * R)


def _ev_sharp_real_super(c):
    pt = _power(c.draw_t())
    return _lm(c.sigma(c.ReA, c.ReB, pt), _H(c.sigma(c.A, c.B, pt)))


def _ev_sharp_sector_reverse(c):
    pt = _power(c.draw_t())
    return _lm(_H(c.sigma(c.A, c.B, pt)), c.sec2 * c.sigma(c.ReA, c.ReB, pt))


def _ev_har_real_super(c):
    t = c.draw_t()
    return _lm(c.harm(c.ReA, c.ReB, t), _H(c.harm(c.A, c.B, t)))


def _ev_har_sector_reverse(c):
    t = c.draw_t()
    return _lm(_H(c.harm(c.A, c.B, t)), c.sec2 * c.harm(c.ReA, c.ReB, t))


def _ev_inv_real(c):
    return _lm(_H(inverse(c.A)), inverse(c.ReA))


def _ev_inv_sector(c):
    return _lm(inverse(c.ReA), c.sec2 * _H(inverse(c.A)))


def _ev_gumus_a(c):
    t = c.draw_t()
    K = c.gumus_factor(t)
    return _lm(_H(arithmetic_mean(c.A, c.B, t)), K * _H(c.sigma(c.A, c.B, _power(t))))


def _ev_gumus_b(c):
    t = c.draw_t()
    K = c.gumus_factor(t)
    return _lm(_H(c.sigma(c.A, c.B, _power(t))), c.sec2 * K * _H(c.harm(c.A, c.B, t)))


def _ev_gumus_c(c):
    t = c.draw_t()
    K = c.gumus_factor(t)
    shift = c.M * (K - 1.0) * c.eye
    S = _H(c.sigma(c.A, c.B, _power(t)))
    lo = _lm(_H(arithmetic_mean(c.A, c.B, t)) - shift, S)
    hi = _lm(S, c.sec2 * (shift + _H(c.harm(c.A, c.B, t))))
    return min(lo, hi)


def _ev_mixed_gm(c):
    G = _H(c.sigma(arithmetic_mean(c.A, c.B, 0.5), c.harm(c.A, c.B, 0.5), _power(0.5)))
    S = _H(c.sigma(c.A, c.B, _power(0.5)))
    lo = _lm(c.cosa**3 * G, S)
    hi = _lm(S, c.sec2 * G)
    return min(lo, hi)


def _ev_mixed_ns(c):
    # Re(A nabla_t (A sharp_s B)) <= sec^2 Re(A sharp_s (A nabla_t B)).
    # The positive-case interchange runs nabla-of-sharp below sharp-of-nabla
    # (joint concavity of sharp_s); the 1x1 case (1, 4, s=t=1/2) decides the
    # orientation: 1.5 against sqrt(2.5).
    s, t = c.draw_t(), c.draw_t()
    ps = _power(s)
    L = _H(arithmetic_mean(c.A, c.sigma(c.A, c.B, ps), t))
    R = _H(c.sigma(c.A, arithmetic_mean(c.A, c.B, t), ps))
    return _lm(L, c.sec2 * R)


def _ev_norm_real_sandwich(c):
    a = uinorm(c.A, c.norm)
    b = uinorm(c.ReA, c.norm)
    return min(_sm(c.cosa * a, b), _sm(b, a))


def _ev_f_norm_lower(c):
    lhs = scalar_eval(c.f, uinorm(c.ReA, c.norm)).real
    rhs = uinorm(_H(c.apply(c.f, c.A)), c.norm)
    return _sm(lhs, rhs)


def _ev_f_opnorm_sandwich(c):
    v = scalar_eval(c.f, opnorm(c.ReA)).real
    w = opnorm(_H(c.apply(c.f, c.A)))
    return min(_sm(v, w), _sm(w, c.sec2 * v))


def _ev_phi_sigma_norm(c):
    L = uinorm(apply_map(c.phi, c.sigma(c.A, c.B)), c.norm)
    R = uinorm(c.sigma(apply_map(c.phi, c.A), apply_map(c.phi, c.B)), c.norm)
    return _sm(c.cosa**3 * L, R)


def _ev_phi_nabla_norm(c):
    t = c.f.derivative_at_one
    L = uinorm(apply_map(c.phi, c.sigma(c.A, c.B)), c.norm)
    R = uinorm(arithmetic_mean(apply_map(c.phi, c.A), apply_map(c.phi, c.B), t), c.norm)
    return _sm(c.cosa**3 * L, R)


def _ev_ando_zhan(c):
    lhs = uinorm(c.apply(c.f, c.A + c.B), c.norm)
    rhs = c.seca**3 * uinorm(c.apply(c.f, c.A) + c.apply(c.f, c.B), c.norm)
    return _sm(lhs, rhs)


def _ev_f_nabla_norm(c):
    t = c.draw_t()
    L = uinorm(arithmetic_mean(c.apply(c.f, c.A), c.apply(c.f, c.B), t), c.norm)
    R = uinorm(c.apply(c.f, arithmetic_mean(c.A, c.B, t)), c.norm)
    return _sm(c.cosa**3 * L, R)


def _ev_norm_of_sigma(c):
    lhs = uinorm(c.sigma(c.A, c.B), c.norm)
    rhs = c.seca**3 * scalar_sigma(uinorm(c.A, c.norm), uinorm(c.B, c.norm), c.f).real
    return _sm(lhs, rhs)


# --- classical counterparts on positive ensembles --------------------------

def _ev_pos_jensen(c):
    x = c.unit_vector()
    lhs = c.inner(c.apply(c.f, c.A), x).real
    rhs = scalar_eval(c.f, c.inner(c.A, x).real).real
    return _sm(lhs, rhs)


def _ev_pos_sigma_inner(c):
    x = c.unit_vector()
    lhs = c.inner(c.sigma(c.A, c.B), x).real
    rhs = scalar_sigma(c.inner(c.A, x).real, c.inner(c.B, x).real, c.f).real
    return _sm(lhs, rhs)


def _ev_pos_sigma_norm(c):
    lhs = uinorm(c.sigma(c.A, c.B), c.norm)
    rhs = scalar_sigma(uinorm(c.A, c.norm), uinorm(c.B, c.norm), c.f).real
    return _sm(lhs, rhs)


def _ev_pos_amgmhm(c):
    t = c.f.derivative_at_one
    S = _H(c.sigma(c.A, c.B))
    return min(
        _lm(_H(c.harm(c.A, c.B, t)), S),
        _lm(S, _H(arithmetic_mean(c.A, c.B, t))),
    )


def _ev_pos_ando(c):
    L = _H(apply_map(c.phi, c.sigma(c.A, c.B)))
    R = _H(c.sigma(apply_map(c.phi, c.A), apply_map(c.phi, c.B)))
    return _lm(L, R)


def _ev_pos_choi(c):
    L = _H(apply_map(c.phi, c.apply(c.f, c.A)))
    R = _H(c.apply(c.f, apply_map(c.phi, c.A)))
    return _lm(L, R)


def _ev_pos_ando_hiai(c):
    L = _H(c.sigma(c.apply(c.f, c.A), c.apply(c.f, c.B), _power(0.5)))
    R = _H(c.apply(c.f, arithmetic_mean(c.A, c.B, 0.5)))
    return _lm(L, R)


def _ev_pos_f_norm(c):
    lhs = scalar_eval(c.f, uinorm(c.A, c.norm)).real
    rhs = uinorm(_H(c.apply(c.f, c.A)), c.norm)
    return _sm(lhs, rhs)


def _ev_pos_ando_zhan(c):
    lhs = uinorm(c.apply(c.f, c.A + c.B), c.norm)
    rhs = uinorm(c.apply(c.f, c.A) + c.apply(c.f, c.B), c.norm)
    return _sm(lhs, rhs)


def _ev_pos_gumus(c):
    t = c.draw_t()
    K = c.gumus_factor(t)
    return _lm(_H(arithmetic_mean(c.A, c.B, t)), K * _H(c.sigma(c.A, c.B, _power(t))))


def _ev_pos_sharpando(c):
    G = c.sigma(arithmetic_mean(c.A, c.B, 0.5), c.harm(c.A, c.B, 0.5), _power(0.5))
    S = c.sigma(c.A, c.B, _power(0.5))
    return _dev(G, S)


def _ev_pos_ts(c):
    # A nabla_t (A sharp_s B) <= A sharp_s (A nabla_t B) by joint concavity
    # of sharp_s (the 1x1 case decides the orientation).
    s, t = c.draw_t(), c.draw_t()
    ps = _power(s)
    L = _H(arithmetic_mean(c.A, c.sigma(c.A, c.B, ps), t))
    R = _H(c.sigma(c.A, arithmetic_mean(c.A, c.B, t), ps))
    return _lm(L, R)


def _ev_pos_ab_norm(c):
    lhs = uinorm(c.A @ c.B, c.norm)
    rhs = 0.25 * uinorm((c.A + c.B) @ (c.A + c.B), c.norm)
    return _sm(lhs, rhs)


def _ev_pos_concave(c):
    t = c.draw_t()
    L = _H(arithmetic_mean(c.apply(c.f, c.A), c.apply(c.f, c.B), t))
    R = _H(c.apply(c.f, arithmetic_mean(c.A, c.B, t)))
    return _lm(L, R)


@dataclass(frozen=True)
class CheckDef:
    id: str
    evaluate: Callable
    kind: str = "order"            # "order" or "identity"
    ensemble: str = "sectorial"    # "sectorial" or "positive"
    needs_f: bool = False
    needs_g: bool = False
    map_kind: str | None = None    # None, "unital" or "positive"
    needs_norm: bool = False


_DEFS = (
    CheckDef("real_superadditive", _ev_real_superadditive, needs_f=True),
    CheckDef("real_sector_reverse", _ev_real_sector_reverse, needs_f=True),
    CheckDef("amgmhm", _ev_amgmhm, needs_f=True),
    CheckDef("mean_monotone", _ev_mean_monotone, needs_f=True),
    CheckDef("transformer", _ev_transformer, kind="identity", needs_f=True),
    CheckDef("kantorovich", _ev_kantorovich, needs_f=True, needs_g=True, map_kind="unital"),
    CheckDef("har_ando", _ev_har_ando, map_kind="unital"),
    CheckDef("ando_sector", _ev_ando_sector, needs_f=True, map_kind="positive"),
    CheckDef("sigma_inner", _ev_sigma_inner, needs_f=True),
    CheckDef("sigma_nabla_phi", _ev_sigma_nabla_phi, needs_f=True, map_kind="positive"),
    CheckDef("f_real_super", _ev_f_real_super, needs_f=True),
    CheckDef("f_real_reverse", _ev_f_real_reverse, needs_f=True),
    CheckDef("choi_sector", _ev_choi_sector, needs_f=True, map_kind="unital"),
    CheckDef("f_inner", _ev_f_inner, needs_f=True),
    CheckDef("f_nabla", _ev_f_nabla, needs_f=True),
    CheckDef("f_sharp_nabla", _ev_f_sharp_nabla, needs_f=True),
    CheckDef("sharp_real_super", _ev_sharp_real_super),
    CheckDef("sharp_sector_reverse", _ev_sharp_sector_reverse),
    CheckDef("har_real_super", _ev_har_real_super),
    CheckDef("har_sector_reverse", _ev_har_sector_reverse),
    CheckDef("inv_real", _ev_inv_real),
    CheckDef("inv_sector", _ev_inv_sector),
    CheckDef("gumus_a", _ev_gumus_a),
    CheckDef("gumus_b", _ev_gumus_b),
    CheckDef("gumus_c", _ev_gumus_c),
    CheckDef("mixed_gm", _ev_mixed_gm),
    CheckDef("mixed_ns", _ev_mixed_ns),
    CheckDef("norm_real_sandwich", _ev_norm_real_sandwich, needs_norm=True),
    CheckDef("f_norm_lower", _ev_f_norm_lower, needs_f=True, needs_norm=True),
    CheckDef("f_opnorm_sandwich", _ev_f_opnorm_sandwich, needs_f=True),
    CheckDef("phi_sigma_norm", _ev_phi_sigma_norm, needs_f=True, map_kind="unital",
             needs_norm=True),
    CheckDef("phi_nabla_norm", _ev_phi_nabla_norm, needs_f=True, map_kind="positive",
             needs_norm=True),
    CheckDef("ando_zhan", _ev_ando_zhan, needs_f=True, needs_norm=True),
    CheckDef("f_nabla_norm", _ev_f_nabla_norm, needs_f=True, needs_norm=True),
    CheckDef("norm_of_sigma", _ev_norm_of_sigma, needs_f=True, needs_norm=True),
    CheckDef("pos_jensen", _ev_pos_jensen, ensemble="positive", needs_f=True),
    CheckDef("pos_sigma_inner", _ev_pos_sigma_inner, ensemble="positive", needs_f=True),
    CheckDef("pos_sigma_norm", _ev_pos_sigma_norm, ensemble="positive", needs_f=True,
             needs_norm=True),
    CheckDef("pos_amgmhm", _ev_pos_amgmhm, ensemble="positive", needs_f=True),
    CheckDef("pos_ando", _ev_pos_ando, ensemble="positive", needs_f=True,
             map_kind="positive"),
    CheckDef("pos_choi", _ev_pos_choi, ensemble="positive", needs_f=True,
             map_kind="unital"),
    CheckDef("pos_ando_hiai", _ev_pos_ando_hiai, ensemble="positive", needs_f=True),
    CheckDef("pos_f_norm", _ev_pos_f_norm, ensemble="positive", needs_f=True,
             needs_norm=True),
    CheckDef("pos_ando_zhan", _ev_pos_ando_zhan, ensemble="positive", needs_f=True,
             needs_norm=True),
    CheckDef("pos_gumus", _ev_pos_gumus, ensemble="positive"),
    CheckDef("pos_sharpando", _ev_pos_sharpando, kind="identity", ensemble="positive"),
    CheckDef("pos_ts", _ev_pos_ts, ensemble="positive"),
    CheckDef("pos_ab_norm", _ev_pos_ab_norm, ensemble="positive", needs_norm=True),
    CheckDef("pos_concave", _ev_pos_concave, ensemble="positive", needs_f=True),
)

REGISTRY: dict[str, CheckDef] = {d.id: d for d in _DEFS}
CHECK_IDS: tuple[str, ...] = tuple(d.id for d in _DEFS)


@dataclass(frozen=True)
class CheckReport:
    """Outcome of one named check over a seeded ensemble."""

    check: str
    ensemble: dict
    samples: int
    min_margin: float
    worst_index: int
    passed: bool
    elapsed_ms: float
    params: dict = field(default_factory=dict)

    def to_dict(self, with_timing: bool = False) -> dict:
        return {
            "id": self.check,
            "params": self.params,
            "ensemble": self.ensemble,
            "samples": self.samples,
            "min_margin": self.min_margin,
            "worst_index": self.worst_index,
            "pass": self.passed,
            "elapsed_ms": self.elapsed_ms if with_timing else 0.0,
        }


def _spec_digest(spec: EnsembleSpec) -> dict:
    return {
        "dim": spec.dim, "alpha_max": spec.alpha_max, "m": spec.m, "M": spec.M,
        "count": spec.count, "seed": spec.seed,
    }


def run_check(
    check_id: str,
    spec: EnsembleSpec,
    f: MonotoneFunction | None = None,
    g: MonotoneFunction | None = None,
    phi: PositiveLinearMap | None = None,
    norm: NormKind | None = None,
    alpha_mode: str = "certified",
) -> CheckReport:
    """Evaluate one check over ``spec.count`` samples and report the margin.

    alpha_mode selects the angle entering sec/cos factors: "certified" uses
    the per-sample certified max(alpha_A, alpha_B), "bound" the ensemble's
    alpha_max.  Deterministic in (spec.seed, check_id).
    """
    try:
        d = REGISTRY[check_id]
    except KeyError:
        raise ParameterError(f"unknown check id {check_id!r}") from None
    if alpha_mode not in ("certified", "bound"):
        raise ParameterError(f"unknown alpha_mode {alpha_mode!r}")
    if d.needs_f and f is None:
        raise ParameterError(f"check {check_id} requires a monotone function f")
    if d.needs_g and g is None:
        raise ParameterError(f"check {check_id} requires a second function g")
    if d.map_kind is not None:
        if phi is None:
            raise ParameterError(f"check {check_id} requires a positive linear map")
        if phi.dim_in != spec.dim:
            raise ParameterError(
                f"map expects dimension {phi.dim_in}, ensemble has {spec.dim}"
            )
        if d.map_kind == "unital" and not is_unital(phi):
            raise ParameterError(f"check {check_id} requires a unital map")
    if d.needs_norm and norm is None:
        raise ParameterError(f"check {check_id} requires a norm kind")
    if d.needs_f and f is not None and not 0.0 < f.derivative_at_one < 1.0:
        raise ParameterError("f'(1) must lie in (0, 1)")
    if d.needs_g and g is not None and f is not None:
        if abs(f.derivative_at_one - g.derivative_at_one) > 1e-12:
            raise ParameterError(
                "kantorovich requires f'(1) = g'(1); the ratio bound fails "
                "for mismatched derivatives already at dimension 1"
            )

    eff_spec = spec
    if d.ensemble == "positive" and spec.alpha_max != 0.0:
        eff_spec = EnsembleSpec(dim=spec.dim, alpha_max=0.0, m=spec.m, M=spec.M,
                                count=spec.count, seed=spec.seed)

    start = time.perf_counter()
    min_margin = math.inf
    worst = 0
    for i in range(eff_spec.count):
        c = _Sample(eff_spec, i, check_id, f, g, phi, norm, alpha_mode)
        margin = float(d.evaluate(c))
        if margin < min_margin:
            min_margin = margin
            worst = i
    elapsed = (time.perf_counter() - start) * 1e3

    threshold = TAU_EQ if d.kind == "identity" else TAU_LOEWNER
    params = {
        "function": f.describe() if f is not None else None,
        "function_g": g.describe() if g is not None else None,
        "map": phi.describe() if phi is not None else None,
        "norm": str(norm) if norm is not None else None,
        "alpha_mode": alpha_mode,
    }
    return CheckReport(
        check=check_id,
        ensemble=_spec_digest(eff_spec),
        samples=eff_spec.count,
        min_margin=min_margin,
        worst_index=worst,
        passed=bool(min_margin >= -threshold),
        elapsed_ms=elapsed,
        params=params,
    )


@dataclass(frozen=True)
class SuiteItem:
    check: str
    spec: EnsembleSpec
    f: MonotoneFunction | None = None
    g: MonotoneFunction | None = None
    phi: PositiveLinearMap | None = None
    norm: NormKind | None = None
    alpha_mode: str = "certified"


def run_suite(items: list[SuiteItem], jobs: int = 1) -> list[CheckReport]:
    """Run the items (possibly concurrently); reports come back in item order."""
    def one(item: SuiteItem) -> CheckReport:
        return run_check(item.check, item.spec, f=item.f, g=item.g,
                         phi=item.phi, norm=item.norm, alpha_mode=item.alpha_mode)

    if jobs <= 1:
        return [one(item) for item in items]
    with ThreadPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(one, items))


DEFAULT_DIMS = (1, 2, 3, 5, 8)
DEFAULT_ALPHAS = (0.0, math.pi / 6, math.pi / 4, math.pi / 3)
DEFAULT_SEED = 20260810
_UNITAL_VARIANTS = ("compression", "kraus", "pinching", "vector_state", "normalized_trace")
_POSITIVE_VARIANTS = _UNITAL_VARIANTS + ("kraus_nonunital",)


def matched_partner(f: MonotoneFunction) -> MonotoneFunction:
    """A different catalog function with the same derivative at 1."""
    t = f.derivative_at_one
    if f.name == "power":
        return catalog("harmonic", t)
    return catalog("power", t)


def _map_for(dim: int, variant: str, seed: int) -> PositiveLinearMap:
    if variant == "compression":
        return random_map(dim, max(1, dim - 1), variant, seed)
    if variant in ("kraus", "kraus_nonunital", "pinching"):
        return random_map(dim, dim, variant, seed)
    return random_map(dim, 1, variant, seed)


def default_suite(
    samples: int = 200,
    seed: int = DEFAULT_SEED,
    dims: tuple[int, ...] = DEFAULT_DIMS,
    alphas: tuple[float, ...] = DEFAULT_ALPHAS,
    m: float = 1.0,
    M: float = 2.0,
) -> list[SuiteItem]:
    """The full built-in catalog over the dims x alphas ensemble grid.

    Catalog functions, map variants and norm kinds cycle deterministically
    across the grid, so each check meets every function/variant/kind while
    keeping 200 samples per configuration.  Ensemble seeds depend only on
    (seed, dim, alpha), letting checks share cached operand draws.
    """
    functions = standard_catalog()
    norms = [linalg.OPERATOR, linalg.FROBENIUS, linalg.TRACE]
    items: list[SuiteItem] = []
    for d in REGISTRY.values():
        grid_alphas = alphas if d.ensemble == "sectorial" else (0.0,)
        ordinal = 0
        for ai, alpha in enumerate(grid_alphas):
            for di, dim in enumerate(dims):
                spec = EnsembleSpec(
                    dim=dim, alpha_max=alpha, m=m, M=M, count=samples,
                    seed=(seed + 7919 * di + 104729 * ai) % 2**63,
                )
                f = functions[ordinal % len(functions)] if d.needs_f else None
                g = matched_partner(f) if d.needs_g else None
                phi = None
                if d.map_kind == "unital":
                    variant = _UNITAL_VARIANTS[ordinal % len(_UNITAL_VARIANTS)]
                    phi = _map_for(dim, variant, seed + ordinal)
                elif d.map_kind == "positive":
                    variant = _POSITIVE_VARIANTS[ordinal % len(_POSITIVE_VARIANTS)]
                    phi = _map_for(dim, variant, seed + ordinal)
                norm = None
                if d.needs_norm:
                    # kyfan's k must fit the smallest matrix the norm meets,
                    # which is the map's output side when a map is involved
                    norm_dim = phi.dim_out if phi is not None else dim
                    cycle = norms + [kyfan((norm_dim + 1) // 2)]
                    norm = cycle[ordinal % len(cycle)]
                items.append(SuiteItem(check=d.id, spec=spec, f=f, g=g, phi=phi, norm=norm))
                ordinal += 1
    return items
