import math

import numpy as np
import pytest

from amm import linalg, means
from amm.errors import ParameterError, PreconditionError
from amm.funcalc import catalog, standard_catalog
from amm.linalg import hermitian_part, inverse, loewner_leq, maxabs, opnorm
from amm.means import (
    arithmetic_mean,
    congruence_sigma,
    drury_half,
    geometric_mean,
    geometric_neg,
    geometric_paths,
    harmonic_mean,
    scalar_sigma,
    sigma_mean,
)
from amm.sector import EnsembleSpec, random_pd, random_sectorial


def pair(dim, alpha, seed, m=1.0, M=2.0):
    spec = EnsembleSpec(dim=dim, alpha_max=alpha, m=m, M=M, count=2, seed=seed)
    return random_sectorial(spec, 0), random_sectorial(spec, 1)


class TestHarmonic:
    def test_scalar(self):
        got = harmonic_mean(np.array([[2.0]]), np.array([[8.0]]), 0.5)
        assert got[0, 0] == pytest.approx(3.2)

    def test_endpoints(self):
        A, B = pair(3, math.pi / 6, 10)
        np.testing.assert_array_equal(harmonic_mean(A, B, 0.0), A)
        np.testing.assert_array_equal(harmonic_mean(A, B, 1.0), B)

    def test_idempotent(self):
        A, _ = pair(3, math.pi / 4, 11)
        for t in (0.2, 0.5, 0.9):
            assert maxabs(harmonic_mean(A, A, t) - A) <= 1e-12

    def test_validation(self):
        with pytest.raises(ParameterError):
            harmonic_mean(np.eye(2), np.eye(2), 1.5)
        with pytest.raises(PreconditionError):
            harmonic_mean(np.array([[1j]]), np.array([[1.0]]), 0.5)


class TestArithmetic:
    def test_simple(self):
        got = arithmetic_mean(np.eye(2), 3 * np.eye(2), 0.5)
        np.testing.assert_allclose(got, 2 * np.eye(2))

    def test_endpoint(self):
        A, B = pair(2, 0.0, 12)
        np.testing.assert_array_equal(arithmetic_mean(A, B, 1.0), B)

    def test_real_part_linearity(self):
        A, B = pair(3, math.pi / 4, 13)
        lhs = hermitian_part(arithmetic_mean(A, B, 0.3))
        rhs = arithmetic_mean(hermitian_part(A), hermitian_part(B), 0.3)
        assert maxabs(lhs - rhs) <= 1e-15


class TestSigma:
    def test_arithmetic_is_exact(self):
        A, B = pair(3, math.pi / 6, 14)
        S = sigma_mean(A, B, catalog("arithmetic", 0.3))
        np.testing.assert_allclose(S, 0.7 * A + 0.3 * B, atol=1e-14)

    def test_idempotence_all_catalog(self):
        A, _ = pair(4, math.pi / 4, 15)
        for f in standard_catalog():
            assert maxabs(sigma_mean(A, A, f) - A) <= 1e-9 * (1 + maxabs(A))

    def test_scalar_geometric(self):
        S = sigma_mean(np.array([[4.0]]), np.array([[9.0]]), catalog("power", 0.5))
        assert S[0, 0] == pytest.approx(6.0, rel=1e-11)

    def test_congruence_identity_left(self):
        _, B = pair(3, math.pi / 4, 16)
        f = catalog("power", 0.3)
        got = congruence_sigma(np.eye(3), B, f)
        from amm.funcalc import apply_function

        assert maxabs(got - apply_function(f, B)) <= 1e-10 * (1 + maxabs(B))

    def test_congruence_commuting_diagonal(self):
        got = congruence_sigma(
            np.diag([1.0, 4.0]).astype(complex),
            np.diag([4.0, 1.0]).astype(complex),
            catalog("power", 0.5),
        )
        np.testing.assert_allclose(got, np.diag([2.0, 2.0]), atol=1e-10)

    def test_scalar_congruence_oracle(self):
        # (1+i) sharp (1-i) = sqrt((1+i)(1-i)) = sqrt(2) for commuting scalars
        got = congruence_sigma(
            np.array([[1 + 1j]]), np.array([[1 - 1j]]), catalog("power", 0.5)
        )
        assert got[0, 0] == pytest.approx(math.sqrt(2), abs=1e-11)

    def test_transformer_identity(self):
        rng = np.random.default_rng(17)
        A, B = pair(4, math.pi / 4, 17)
        from amm.sector import haar_unitary

        C = haar_unitary(4, rng) @ np.diag(rng.uniform(0.5, 2, 4)) @ haar_unitary(4, rng)
        f = catalog("uniform")
        lhs = C.conj().T @ sigma_mean(A, B, f) @ C
        rhs = sigma_mean(C.conj().T @ A @ C, C.conj().T @ B @ C, f)
        scale = 1 + opnorm(lhs)
        assert opnorm(lhs - rhs) <= 1e-7 * scale


class TestGeometric:
    def test_scalar(self):
        G = geometric_mean(np.array([[4.0]]), np.array([[9.0]]), 0.5)
        assert G[0, 0] == pytest.approx(6.0, rel=1e-11)

    @pytest.mark.parametrize("lam", [0.1, 0.25, 0.5, 0.75, 0.9])
    def test_three_paths_agree(self, lam):
        A, B = pair(4, math.pi / 3, 18)
        Pa, Pb, Pc = geometric_paths(A, B, lam)
        scale = 1 + max(opnorm(Pa), opnorm(Pb), opnorm(Pc))
        assert opnorm(Pa - Pb) <= 1e-8 * scale
        assert opnorm(Pa - Pc) <= 1e-8 * scale
        assert opnorm(Pb - Pc) <= 1e-8 * scale

    def test_weight_flip(self):
        A, B = pair(3, math.pi / 4, 19)
        for lam in (0.25, 0.5, 0.8):
            X = geometric_mean(A, B, lam)
            Y = geometric_mean(B, A, 1 - lam)
            assert opnorm(X - Y) <= 1e-8 * (1 + opnorm(X))

    def test_inversion(self):
        A, B = pair(3, math.pi / 4, 20)
        X = inverse(geometric_mean(A, B, 0.3))
        Y = geometric_mean(inverse(A), inverse(B), 0.3)
        assert opnorm(X - Y) <= 1e-8 * (1 + opnorm(X))

    def test_lambda_range(self):
        with pytest.raises(ParameterError):
            geometric_mean(np.eye(2), np.eye(2), 0.0)
        with pytest.raises(ParameterError):
            geometric_mean(np.eye(2), np.eye(2), 1.0)


class TestDrury:
    def test_equal_operands(self):
        A, _ = pair(3, math.pi / 6, 21)
        assert maxabs(drury_half(A, A) - A) <= 1e-9 * (1 + maxabs(A))

    def test_scalar(self):
        got = drury_half(np.array([[4.0]]), np.array([[9.0]]))
        assert got[0, 0] == pytest.approx(6.0, rel=1e-10)

    def test_matches_geometric_half(self):
        for seed in (22, 23, 24):
            A, B = pair(3, math.pi / 3, seed)
            D = drury_half(A, B)
            G = geometric_mean(A, B, 0.5)
            assert opnorm(D - G) <= 1e-7 * (1 + opnorm(G))


class TestGeometricNeg:
    def test_equal_operands(self):
        A, _ = pair(3, math.pi / 6, 25)
        got = geometric_neg(A, A, 0.4)
        assert maxabs(got - A) <= 1e-8 * (1 + maxabs(A))

    def test_scalar_power_formula(self):
        got = geometric_neg(np.array([[4.0]]), np.array([[9.0]]), 0.5)
        assert got[0, 0] == pytest.approx(8.0 / 3.0, rel=1e-10)

    def test_diagonal_elementwise(self):
        a = np.array([1.5, 3.0])
        b = np.array([2.0, 0.8])
        lam = 0.3
        got = geometric_neg(np.diag(a).astype(complex), np.diag(b).astype(complex), lam)
        want = np.diag(a ** (1 + lam) * b ** (-lam))
        np.testing.assert_allclose(got, want, atol=1e-10)

    def test_lambda_range(self):
        with pytest.raises(ParameterError):
            geometric_neg(np.eye(2), np.eye(2), 1.2)


class TestPositiveDegeneration:
    def test_harmonic_sigma_arithmetic_chain(self):
        spec = EnsembleSpec(dim=4, alpha_max=0.0, m=1.0, M=2.0, count=10, seed=2024)
        for f in standard_catalog():
            t = f.derivative_at_one
            for i in range(0, 10, 2):
                A, B = random_pd(spec, i), random_pd(spec, i + 1)
                S = hermitian_part(sigma_mean(A, B, f))
                assert loewner_leq(hermitian_part(harmonic_mean(A, B, t)), S).holds
                assert loewner_leq(S, arithmetic_mean(A, B, t)).holds

    def test_mixed_mean_identity(self):
        spec = EnsembleSpec(dim=3, alpha_max=0.0, m=1.0, M=2.0, count=10, seed=2025)
        for i in range(0, 10, 2):
            A, B = random_pd(spec, i), random_pd(spec, i + 1)
            N = arithmetic_mean(A, B, 0.5)
            H = harmonic_mean(A, B, 0.5)
            lhs = geometric_mean(N, H, 0.5)
            rhs = geometric_mean(A, B, 0.5)
            assert opnorm(lhs - rhs) <= 1e-8 * (1 + opnorm(rhs))


class TestScalarSigma:
    def test_positive(self):
        assert scalar_sigma(4.0, 9.0, catalog("power", 0.5)) == pytest.approx(6.0)

    def test_complex(self):
        f = catalog("harmonic", 0.5)
        got = scalar_sigma(1.0, 1 + 1j, f)
        # 1 !_0.5 (1+i) = ((1/2) + (1/2)/(1+i))^-1
        want = 1.0 / (0.5 + 0.5 / (1 + 1j))
        assert got == pytest.approx(want, abs=1e-14)

    def test_zero_rejected(self):
        with pytest.raises(ParameterError):
            scalar_sigma(0.0, 1.0, catalog("power", 0.5))
