"""Matrix monotone functions and their functional calculus on accretive matrices.

A normalized matrix monotone function f (f(1) = 1) carries a probability
measure nu_f on [0, 1] through which

    f(A) = integral over [0,1] of  I !_t A  d nu_f(t),

where I !_t A = ((1-t) I + t A^{-1})^{-1} is the weighted harmonic mean with
the identity.  The measure is represented as point atoms plus a Jacobi-type
density t^e0 (1-t)^e1 and is integrated by Gauss-Jacobi rules matched to the
endpoint exponents.  A Dunford contour integral over a circle in the right
half-plane provides an independent second route to f(A); agreement of the
two is the module's central cross-check.
"""

from __future__ import annotations


import math
import os
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable

import numpy as np
from scipy.special import roots_jacobi

from . import linalg
from .errors import InvalidInputError, NumericFailureError, ParameterError, PreconditionError
from .linalg import as_matrix, hermitian_part, maxabs, solve_stack
from .sector import is_accretive

DEFAULT_ORDER = 80
_MAX_ORDER = 512


def default_order() -> int:
    """Default quadrature order, overridable via AMM_QUAD_ORDER."""
    raw = os.environ.get("AMM_QUAD_ORDER")
    if raw is None:
        return DEFAULT_ORDER
    try:
        order = int(raw)
    except ValueError as exc:
        raise ParameterError(f"AMM_QUAD_ORDER must be an integer, got {raw!r}") from exc
    if not 2 <= order <= _MAX_ORDER:
        raise ParameterError(f"AMM_QUAD_ORDER must be in [2, {_MAX_ORDER}], got {order}")
    return order


@dataclass(frozen=True)
class DensitySpec:
    """Jacobi-type density coeff * t^exp0 * (1-t)^exp1 * smooth(t) on [0, 1]."""

    coeff: float
    exp0: float
    exp1: float
    smooth: Callable[[np.ndarray], np.ndarray] | None = None

    def smooth_at(self, t: np.ndarray) -> np.ndarray:
        if self.smooth is None:
            return np.ones_like(t)
        return np.asarray(self.smooth(t), dtype=float)


@dataclass(frozen=True)
class MeasureSpec:
    """Probability measure on [0, 1]: atoms plus an optional density."""

    atoms: tuple[tuple[float, float], ...] = ()
    density: DensitySpec | None = None


def _validate_measure(measure: MeasureSpec):
    seen = set()
    for t, w in measure.atoms:
        if not 0.0 <= t <= 1.0:
            raise ParameterError(f"atom position {t} outside [0, 1]")
        if w <= 0.0:
            raise ParameterError(f"atom weight {w} must be positive")
        if t in seen:
            raise ParameterError(f"duplicate atom position {t}")
        seen.add(t)
    d = measure.density
    if d is not None:
        if d.coeff <= 0.0:
            raise ParameterError("density coefficient must be positive")
        if d.exp0 <= -1.0 or d.exp1 <= -1.0:
            raise ParameterError("density exponents must exceed -1")


@dataclass(frozen=True)
class QuadratureRule:
    """Gauss-Jacobi rule for the weight t^exp0 (1-t)^exp1 on [0, 1]."""

    nodes: np.ndarray
    weights: np.ndarray
    order: int


@lru_cache(maxsize=256)
def _cached_rule(exp0: float, exp1: float, order: int) -> QuadratureRule:
    # scipy's convention is the weight (1-x)^a (1+x)^b on [-1, 1]; shifting
    # t = (1+x)/2 maps a -> exp1 and b -> exp0 with a 2^-(e0+e1+1) rescale.
    import warnings

    with warnings.catch_warnings():
        # a 0/0 in scipy's normalization table when exp0 + exp1 = -1; the
        # offending entry is masked by np.where and the rule is unaffected
        warnings.simplefilter("ignore", RuntimeWarning)
        x, w = roots_jacobi(order, exp1, exp0)
    nodes = (x + 1.0) / 2.0
    weights = w * 0.5 ** (exp0 + exp1 + 1.0)
    return QuadratureRule(nodes=nodes, weights=weights, order=order)


def gauss_jacobi_rule(exp0: float, exp1: float, order: int) -> QuadratureRule:
    """Nodes interior to (0, 1), positive weights, degree 2*order - 1 exact."""
    if exp0 <= -1.0 or exp1 <= -1.0:
        raise ParameterError(f"exponents must exceed -1, got ({exp0}, {exp1})")
    if not 2 <= order <= _MAX_ORDER:
        raise ParameterError(f"order must be in [2, {_MAX_ORDER}], got {order}")
    return _cached_rule(float(exp0), float(exp1), int(order))


def measure_mass(measure: MeasureSpec, order: int | None = None) -> float:
    """Total mass of the measure (atom weights plus density integral)."""
    _validate_measure(measure)
    mass = sum(w for _, w in measure.atoms)
    d = measure.density
    if d is not None:
        rule = gauss_jacobi_rule(d.exp0, d.exp1, order or default_order())
        mass += d.coeff * float(np.dot(rule.weights, d.smooth_at(rule.nodes)))
    return float(mass)


def measure_mean(measure: MeasureSpec, order: int | None = None) -> float:
    """First moment of the measure; equals f'(1) for the represented f."""
    _validate_measure(measure)
    mean = sum(w * t for t, w in measure.atoms)
    d = measure.density
    if d is not None:
        rule = gauss_jacobi_rule(d.exp0, d.exp1, order or default_order())
        mean += d.coeff * float(np.dot(rule.weights * rule.nodes, d.smooth_at(rule.nodes)))
    return float(mean)


@dataclass(frozen=True)
class MonotoneFunction:
    """A normalized matrix monotone function and its representing measure."""

    name: str
    measure: MeasureSpec
    scalar_form: Callable
    derivative_at_one: float
    param: float | None = None

    def describe(self) -> dict:
        return {"name": self.name, "param": self.param}

    def __str__(self):
        return self.name if self.param is None else f"{self.name}({self.param:g})"


def _power_scalar(lam: float):
    def f(z):
        return np.power(np.asarray(z, dtype=np.complex128), lam)

    return f


def _arithmetic_scalar(t: float):
    def f(z):
        return (1.0 - t) + t * np.asarray(z, dtype=np.complex128)

    return f


def _harmonic_scalar(t: float):
    def f(z):
        z = np.asarray(z, dtype=np.complex128)
        return 1.0 / ((1.0 - t) + t / z)

    return f


def _uniform_scalar(z):
    # z ln z / (z - 1), continued by its Taylor series near z = 1.
    z = np.asarray(z, dtype=np.complex128)
    scalar = z.ndim == 0
    zv = np.atleast_1d(z)
    w = zv - 1.0
    out = np.empty_like(zv)
    near = np.abs(w) < 1e-4
    if np.any(near):
        wn = w[near]
        out[near] = zv[near] * (1.0 - wn / 2.0 + wn**2 / 3.0 - wn**3 / 4.0)
    far = ~near
    if np.any(far):
        out[far] = zv[far] * np.log(zv[far]) / (zv[far] - 1.0)
    return out[0] if scalar else out


def _make_function(name, measure, scalar_form, derivative_at_one, param=None) -> MonotoneFunction:
    _validate_measure(measure)
    mass = measure_mass(measure)
    if abs(mass - 1.0) > 1e-10:
        raise ParameterError(f"measure mass {mass} is not 1")
    mean = measure_mean(measure)
    if abs(mean - derivative_at_one) > 1e-10:
        raise ParameterError(f"measure mean {mean} != f'(1) = {derivative_at_one}")
    f1 = complex(np.asarray(scalar_form(1.0 + 0.0j)).reshape(()))
    if abs(f1 - 1.0) > 1e-12:
        raise ParameterError(f"f(1) = {f1} violates the normalization f(1) = 1")
    return MonotoneFunction(
        name=name,
        measure=measure,
        scalar_form=scalar_form,
        derivative_at_one=float(derivative_at_one),
        param=param,
    )


CATALOG_NAMES = ("power", "arithmetic", "harmonic", "uniform")


def catalog(name: str, param: float | None = None) -> MonotoneFunction:
    """Built-in functions: power(lam), arithmetic(t), harmonic(t), uniform.

    power(lam) carries the density sin(lam pi)/pi * t^(lam-1) (1-t)^(-lam);
    arithmetic(t) the endpoint atoms {(0, 1-t), (1, t)}; harmonic(t) the
    single atom {(t, 1)}; uniform the flat density on [0, 1].
    """
    if name == "power":
        if param is None or not 0.0 < param < 1.0:
            raise ParameterError(f"power requires lambda in (0, 1), got {param}")
        lam = float(param)
        density = DensitySpec(coeff=math.sin(lam * math.pi) / math.pi, exp0=lam - 1.0, exp1=-lam)
        return _make_function("power", MeasureSpec(density=density), _power_scalar(lam), lam, lam)
    if name == "arithmetic":
        if param is None or not 0.0 < param < 1.0:
            raise ParameterError(f"arithmetic requires t in (0, 1), got {param}")
        t = float(param)
        measure = MeasureSpec(atoms=((0.0, 1.0 - t), (1.0, t)))
        return _make_function("arithmetic", measure, _arithmetic_scalar(t), t, t)
    if name == "harmonic":
        if param is None or not 0.0 < param < 1.0:
            raise ParameterError(f"harmonic requires t in (0, 1), got {param}")
        t = float(param)
        measure = MeasureSpec(atoms=((t, 1.0),))
        return _make_function("harmonic", measure, _harmonic_scalar(t), t, t)
    if name == "uniform":
        if param is not None:
            raise ParameterError("uniform takes no parameter")
        measure = MeasureSpec(density=DensitySpec(coeff=1.0, exp0=0.0, exp1=0.0))
        return _make_function("uniform", measure, _uniform_scalar, 0.5)
    raise ParameterError(f"unknown catalog function {name!r}")


def standard_catalog() -> tuple[MonotoneFunction, ...]:
    """The six instances exercised throughout the verification suite."""
    return (
        catalog("power", 0.3),
        catalog("power", 0.5),
        catalog("power", 0.7),
        catalog("uniform"),
        catalog("harmonic", 0.4),
        catalog("arithmetic", 0.6),
    )


def harmonic_unit(t: float, A, validate: bool = True) -> np.ndarray:
    """I !_t A = ((1-t) I + t A^{-1})^{-1}, with exact endpoints I and A."""
    A = as_matrix(A)
    if not 0.0 <= t <= 1.0:
        raise ParameterError(f"t must be in [0, 1], got {t}")
    if validate:
        ok, margin = is_accretive(A)
        if not ok:
            raise PreconditionError(f"matrix is not accretive (margin {margin:.3e})")
    n = A.shape[0]
    if t == 0.0:
        return np.eye(n, dtype=np.complex128)
    if t == 1.0:
        return A.copy()
    Ainv = solve_stack(A[None])[0]
    M = (1.0 - t) * np.eye(n, dtype=np.complex128) + t * Ainv
    return solve_stack(M[None])[0]


def _measure_integral(measure: MeasureSpec, order: int, unit, endpoint0, endpoint1, nodes_fn):
    """Sum atoms + Gauss-Jacobi density terms of a matrix-valued integrand.

    unit(t) evaluates one interior point, nodes_fn(ts) a whole batch;
    endpoint0/endpoint1 are the exact t = 0 / t = 1 limits.  Summation
    order is fixed (atoms in declaration order, then nodes by index).
    """
    total = None

    def add(term):
        nonlocal total
        total = term if total is None else total + term

    for t, w in measure.atoms:
        if t == 0.0:
            add(w * endpoint0())
        elif t == 1.0:
            add(w * endpoint1())
        else:
            add(w * unit(t))
    d = measure.density
    if d is not None:
        rule = gauss_jacobi_rule(d.exp0, d.exp1, order)
        weights = d.coeff * rule.weights * d.smooth_at(rule.nodes)
        stack = nodes_fn(rule.nodes)
        add(np.einsum("k,kij->ij", weights, stack))
    return total


def _apply_via_measure(f: MonotoneFunction, A: np.ndarray, order: int) -> np.ndarray:
    n = A.shape[0]
    eye = np.eye(n, dtype=np.complex128)
    Ainv = solve_stack(A[None])[0]

    def unit(t):
        return solve_stack(((1.0 - t) * eye + t * Ainv)[None])[0]

    def batch(ts):
        stack = (1.0 - ts)[:, None, None] * eye + ts[:, None, None] * Ainv
        return solve_stack(stack)

    return _measure_integral(f.measure, order, unit, lambda: eye, lambda: A.copy(), batch)


def apply_function(
    f: MonotoneFunction,
    A,
    order: int | None = None,
    validate: bool = True,
    check_convergence: bool = True,
) -> np.ndarray:
    """f(A) through the harmonic-mean integral of the representing measure.

    With validate=True the input must be accretive and the result is checked
    to be accretive in turn.  check_convergence reruns the quadrature at
    twice the order and demands relative agreement within 1e-8; pure-atom
    measures are exact and skip the test.  validate=False additionally
    admits any matrix whose spectrum avoids (-inf, 0] (used by the
    congruence route, where that condition holds by construction).
    """
    A = as_matrix(A)
    order = order or default_order()
    if validate:
        ok, margin = is_accretive(A)
        if not ok:
            raise PreconditionError(f"matrix is not accretive (margin {margin:.3e})")
    F = _apply_via_measure(f, A, order)
    if check_convergence and f.measure.density is not None:
        F2 = _apply_via_measure(f, A, min(2 * order, _MAX_ORDER))
        drift = maxabs(F2 - F) / (1.0 + maxabs(F))
        if drift > 1e-8:
            raise NumericFailureError(
                f"quadrature not converged at order {order}: doubling moves by {drift:.3e}"
            )
    if validate:
        ok, margin = is_accretive(F)
        if not ok:
            raise NumericFailureError(
                f"f(A) lost accretivity (margin {margin:.3e}); input likely ill-conditioned"
            )
    return F


@dataclass(frozen=True)
class DunfordContour:
    """Circle center + radius exp(i theta), sampled at ``nodes`` points."""

    center: float
    radius: float
    nodes: int


def choose_contour(A) -> DunfordContour:
    """Circle in C \\ (-inf, 0] enclosing the spectrum of accretive A.

    Center c = 1.05 max(R^2/m, 2m) and radius r = 1.02 sqrt(R^2 - 2cm + c^2)
    with m = lambda_min(Re A), R = ||A||_op; every eigenvalue satisfies
    |lambda - c| <= sqrt(R^2 - 2cm + c^2) since Re lambda >= m, |lambda| <= R.
    If the 2% inflation would cross the cut, the radius is re-centered
    halfway between the enclosing bound and c.  The node count is taken
    large enough that the trapezoid rule's geometric error bound
    max(bound/r, r/c)^N reaches 1e-12.
    """
    A = as_matrix(A)
    ok, margin = is_accretive(A)
    if not ok:
        raise PreconditionError(f"matrix is not accretive (margin {margin:.3e})")
    m = float(np.linalg.eigvalsh(hermitian_part(A))[0])
    R = linalg.opnorm(A)
    c = 1.05 * max(R * R / m, 2.0 * m)
    bound = math.sqrt(max(R * R - 2.0 * c * m + c * c, 0.0))
    r = 1.02 * bound
    if r >= c:
        r = 0.5 * (bound + c)
        if not bound < r < c:
            raise NumericFailureError(
                "cannot enclose the spectrum while avoiding (-inf, 0]; "
                f"conditioning R/m = {R / m:.3e} is too large"
            )
    rate = max(bound / r, r / c)
    nodes = max(256, 16 * math.ceil(math.log(1e12) / -math.log(rate) / 16.0))
    if nodes > 65536:
        raise NumericFailureError("contour too tight: node count exceeds 65536")
    return DunfordContour(center=c, radius=r, nodes=nodes)


def dunford_apply(f: MonotoneFunction, A, contour: DunfordContour, validate: bool = True) -> np.ndarray:
    """f(A) = (1/2 pi i) * contour integral of f(z) (zI - A)^{-1} dz.

    Trapezoid rule on the circle, exponentially convergent for analytic
    integrands; the independent cross-check against apply_function.
    """
    A = as_matrix(A)
    if validate:
        ok, margin = is_accretive(A)
        if not ok:
            raise PreconditionError(f"matrix is not accretive (margin {margin:.3e})")
    if contour.nodes < 16:
        raise ParameterError("contour needs at least 16 nodes")
    if not 0.0 < contour.radius < contour.center:
        raise ParameterError("contour circle must avoid (-inf, 0]")
    n = A.shape[0]
    N = contour.nodes
    theta = 2.0 * math.pi * np.arange(N) / N
    ring = contour.radius * np.exp(1j * theta)
    z = contour.center + ring
    fz = np.asarray(f.scalar_form(z), dtype=np.complex128)
    stack = z[:, None, None] * np.eye(n, dtype=np.complex128) - A
    resolvents = solve_stack(stack)
    weights = ring * fz / N
    return np.einsum("k,kij->ij", weights, resolvents)


def scalar_eval(f: MonotoneFunction, z: complex) -> complex:
    """Closed-form principal-branch evaluation of f at z off (-inf, 0]."""
    z = complex(z)
    if z.imag == 0.0 and z.real <= 0.0:
        raise InvalidInputError(f"z = {z} lies on the branch cut (-inf, 0]")
    return complex(np.asarray(f.scalar_form(z)).reshape(()))
