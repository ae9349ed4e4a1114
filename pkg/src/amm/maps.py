"""Positive linear maps between matrix algebras.

Five generator variants cover the structural extremes the inequality
catalog needs: compressions V*AV, Kraus sums, block pinchings, vector
states and the normalized trace.  All preserve positivity and adjoints by
construction; unitality is a property of the variant (Kraus maps may be
deliberately scaled off unital).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ParameterError
from .linalg import as_matrix, maxabs

VARIANTS = (
    "compression",
    "kraus",
    "kraus_nonunital",
    "pinching",
    "vector_state",
    "normalized_trace",
)


@dataclass(frozen=True, eq=False)
class PositiveLinearMap:
    """A positive linear map Phi: M_n -> M_r of one of the generator kinds."""

    variant: str
    dim_in: int
    dim_out: int
    operators: tuple = field(default=())   # Kraus/compression factors
    blocks: tuple = field(default=())      # pinching partition
    vector: np.ndarray | None = None       # vector state

    def __call__(self, A) -> np.ndarray:
        return apply_map(self, A)

    def describe(self) -> dict:
        return {"variant": self.variant, "dim_in": self.dim_in, "dim_out": self.dim_out}


def apply_map(phi: PositiveLinearMap, A) -> np.ndarray:
    """Evaluate Phi(A); Re Phi(A) = Phi(Re A) holds by construction."""
    A = as_matrix(A)
    if A.shape[0] != phi.dim_in:
        raise ParameterError(f"map expects dimension {phi.dim_in}, got {A.shape[0]}")
    if phi.variant == "compression":
        V = phi.operators[0]
        return V.conj().T @ A @ V
    if phi.variant in ("kraus", "kraus_nonunital"):
        out = np.zeros((phi.dim_out, phi.dim_out), dtype=np.complex128)
        for V in phi.operators:
            out += V.conj().T @ A @ V
        return out
    if phi.variant == "pinching":
        out = np.zeros_like(A)
        for block in phi.blocks:
            idx = np.asarray(block)
            out[np.ix_(idx, idx)] = A[np.ix_(idx, idx)]
        return out
    if phi.variant == "vector_state":
        x = phi.vector
        return np.array([[x.conj() @ A @ x]], dtype=np.complex128)
    if phi.variant == "normalized_trace":
        return np.array([[np.trace(A) / phi.dim_in]], dtype=np.complex128)
    raise ParameterError(f"unknown map variant {phi.variant!r}")


def is_unital(phi: PositiveLinearMap) -> bool:
    """Whether Phi(I) = I within 1e-12."""
    eye_in = np.eye(phi.dim_in, dtype=np.complex128)
    eye_out = np.eye(phi.dim_out, dtype=np.complex128)
    return maxabs(apply_map(phi, eye_in) - eye_out) <= 1e-12


def random_map(dim_in: int, dim_out: int, variant: str, seed: int) -> PositiveLinearMap:
    """Seeded construction of one map variant.

    compression draws V as orthonormal columns (QR of a Ginibre block);
    kraus stacks two such blocks so the unitality sum telescopes to the
    identity; kraus_nonunital rescales that construction; pinching splits
    the index set into two contiguous blocks; vector_state draws a random
    unit vector.
    """
    if variant not in VARIANTS:
        raise ParameterError(f"unknown map variant {variant!r}")
    if dim_in < 1 or dim_out < 1:
        raise ParameterError("map dimensions must be positive")
    rng = np.random.default_rng((seed, 0x6D61, dim_in, dim_out))
    if variant == "compression":
        if dim_out > dim_in:
            raise ParameterError("compression requires dim_out <= dim_in")
        G = rng.standard_normal((dim_in, dim_out)) + 1j * rng.standard_normal((dim_in, dim_out))
        V, _ = np.linalg.qr(G)
        return PositiveLinearMap("compression", dim_in, dim_out, operators=(V,))
    if variant in ("kraus", "kraus_nonunital"):
        k = 2
        if dim_out > k * dim_in:
            raise ParameterError("kraus requires dim_out <= 2 * dim_in")
        G = rng.standard_normal((k * dim_in, dim_out)) + 1j * rng.standard_normal(
            (k * dim_in, dim_out)
        )
        W, _ = np.linalg.qr(G)
        ops = tuple(W[i * dim_in:(i + 1) * dim_in, :] for i in range(k))
        if variant == "kraus_nonunital":
            scale = np.sqrt(rng.uniform(0.25, 0.75))
            ops = tuple(scale * V for V in ops)
        return PositiveLinearMap(variant, dim_in, dim_out, operators=ops)
    if variant == "pinching":
        if dim_out != dim_in:
            raise ParameterError("pinching preserves the dimension")
        half = (dim_in + 1) // 2
        blocks = (tuple(range(half)),)
        if half < dim_in:
            blocks = blocks + (tuple(range(half, dim_in)),)
        return PositiveLinearMap("pinching", dim_in, dim_out, blocks=blocks)
    if variant == "vector_state":
        if dim_out != 1:
            raise ParameterError("vector_state maps to 1x1 matrices")
        x = rng.standard_normal(dim_in) + 1j * rng.standard_normal(dim_in)
        x = x / np.linalg.norm(x)
        return PositiveLinearMap("vector_state", dim_in, 1, vector=x)
    if dim_out != 1:
        raise ParameterError("normalized_trace maps to 1x1 matrices")
    return PositiveLinearMap("normalized_trace", dim_in, 1)
