import math

import numpy as np
import pytest

from sdc.linalg import (
    DensityMatrix,
    binary_entropy,
    hermitian_eig,
    kron,
    partial_trace,
    random_density_matrix,
    random_unitary,
    relative_entropy,
    shannon_entropy,
    von_neumann_entropy,
)

SX = np.array([[0, 1], [1, 0]], dtype=complex)
PHI_PLUS = np.array([1, 0, 0, 1], dtype=complex) / np.sqrt(2)


def shannon_oracle(ps):
    # independent reference: plain math.log loop
    return -sum(p * math.log2(p) for p in ps if p > 1e-15)


class TestKron:
    def test_identity(self):
        assert np.array_equal(kron(np.eye(2), np.eye(2)), np.eye(4))

    def test_xx_fixes_phi_plus(self):
        # oracle: explicit 4x4 multiplication
        xx = np.zeros((4, 4), dtype=complex)
        for i in range(2):
            for j in range(2):
                for k in range(2):
                    for l in range(2):
                        xx[2 * i + j, 2 * k + l] = SX[i, k] * SX[j, l]
        assert np.allclose(xx @ PHI_PLUS, PHI_PLUS)
        assert np.allclose(kron(SX, SX) @ PHI_PLUS, PHI_PLUS)

    def test_diagonal(self):
        got = kron(np.diag([1.0, -1.0]), np.eye(2))
        assert np.allclose(got, np.diag([1, 1, -1, -1]))

    def test_mixed_product_property(self):
        rng = np.random.default_rng(11)
        for n in (2, 3):
            a, b, c, d = (
                rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
                for _ in range(4)
            )
            lhs = kron(a, b) @ kron(c, d)
            rhs = kron(a @ c, b @ d)
            assert np.max(np.abs(lhs - rhs)) <= 1e-10


def partial_trace_oracle(mat, da, db, keep):
    # direct index contraction, no reshape tricks
    if keep == 0:
        out = np.zeros((da, da), dtype=complex)
        for i in range(da):
            for j in range(da):
                out[i, j] = sum(mat[i * db + k, j * db + k] for k in range(db))
    else:
        out = np.zeros((db, db), dtype=complex)
        for i in range(db):
            for j in range(db):
                out[i, j] = sum(mat[k * db + i, k * db + j] for k in range(da))
    return out


class TestPartialTrace:
    def test_bell_marginal(self):
        rho = DensityMatrix(np.outer(PHI_PLUS, PHI_PLUS.conj()), (2, 2))
        assert np.allclose(partial_trace(rho, [1]).mat, np.eye(2) / 2)

    def test_product_state(self):
        rng = np.random.default_rng(5)
        a = random_density_matrix(2, rng).mat
        b = random_density_matrix(3, rng).mat
        rho = DensityMatrix(kron(a, b), (2, 3))
        assert np.max(np.abs(partial_trace(rho, [0]).mat - a)) <= 1e-12

    def test_werner_marginal_vs_oracle(self):
        mat = 0.5 * np.outer(PHI_PLUS, PHI_PLUS.conj()) + 0.5 * np.eye(4) / 4
        rho = DensityMatrix(mat, (2, 2))
        expect = partial_trace_oracle(mat, 2, 2, keep=1)
        got = partial_trace(rho, [1]).mat
        assert np.max(np.abs(got - expect)) <= 1e-12
        assert np.allclose(got, np.eye(2) / 2)

    def test_trace_and_psd_preserved(self):
        rng = np.random.default_rng(7)
        for _ in range(20):
            rho = random_density_matrix((2, 2, 2), rng)
            red = partial_trace(rho, [0, 2])
            assert abs(red.mat.trace() - 1) <= 1e-10
            assert np.linalg.eigvalsh(red.mat)[0] >= -1e-10

    def test_index_out_of_range(self):
        rho = random_density_matrix((2, 2), np.random.default_rng(0))
        with pytest.raises(ValueError):
            partial_trace(rho, [2])


class TestHermitianEig:
    def test_diagonal(self):
        spec = hermitian_eig(np.diag([0.7, 0.3]))
        assert np.allclose(spec.eigenvalues, [0.7, 0.3])

    def test_pauli_x(self):
        spec = hermitian_eig(SX)
        assert np.allclose(spec.eigenvalues, [1.0, -1.0])

    def test_werner_spectrum(self):
        # characteristic polynomial gives (1+3eta)/4 once, (1-eta)/4 thrice
        eta = 1 / 3
        mat = eta * np.outer(PHI_PLUS, PHI_PLUS.conj()) + (1 - eta) * np.eye(4) / 4
        spec = hermitian_eig(mat)
        expect = [(1 + 3 * eta) / 4] + [(1 - eta) / 4] * 3
        assert np.max(np.abs(spec.eigenvalues - expect)) <= 1e-12

    def test_reconstruction(self):
        rng = np.random.default_rng(13)
        for n in (2, 4, 6):
            g = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
            a = (g + g.conj().T) / 2
            spec = hermitian_eig(a)
            rebuilt = spec.eigenvectors @ np.diag(spec.eigenvalues) @ spec.eigenvectors.conj().T
            assert np.max(np.abs(rebuilt - a)) <= 1e-9

    def test_non_hermitian_rejected(self):
        with pytest.raises(ValueError):
            hermitian_eig(np.array([[0, 1], [0, 0]], dtype=complex))


class TestEntropies:
    def test_pure_state(self):
        rho = DensityMatrix(np.outer(PHI_PLUS, PHI_PLUS.conj()), (2, 2))
        assert abs(von_neumann_entropy(rho)) <= 1e-12

    def test_maximally_mixed(self):
        assert abs(von_neumann_entropy(np.eye(4) / 4) - 2.0) <= 1e-12

    def test_diagonal_matches_shannon_oracle(self):
        ps = [0.625, 0.125, 0.125, 0.125]
        expect = shannon_oracle(ps)
        assert abs(expect - 1.5487949406954) <= 1e-10
        assert abs(von_neumann_entropy(np.diag(ps)) - expect) <= 1e-12

    def test_shannon_examples(self):
        assert shannon_entropy([1, 0, 0, 0]) == 0.0
        assert abs(shannon_entropy([0.25] * 4) - 2.0) <= 1e-12
        assert abs(shannon_entropy([0.05, 0.95]) - shannon_oracle([0.05, 0.95])) <= 1e-12
        assert abs(shannon_entropy([0.05, 0.95]) - 0.2863970) <= 1e-6

    def test_shannon_normalization_failure(self):
        with pytest.raises(ValueError):
            shannon_entropy([0.5, 0.4])
        with pytest.raises(ValueError):
            shannon_entropy([1.2, -0.2])

    def test_binary_entropy(self):
        assert binary_entropy(0.0) == 0.0
        assert abs(binary_entropy(0.5) - 1.0) <= 1e-12
        with pytest.raises(ValueError):
            binary_entropy(1.2)

    def test_entropy_bounds_random(self):
        rng = np.random.default_rng(21)
        for dims in ((2,), (2, 2), (3, 3)):
            for _ in range(10):
                s = von_neumann_entropy(random_density_matrix(dims, rng))
                assert -1e-12 <= s <= math.log2(int(np.prod(dims))) + 1e-12


class TestRelativeEntropy:
    def test_identical_arguments(self):
        rho = random_density_matrix((2, 2), np.random.default_rng(3))
        assert abs(relative_entropy(rho, rho)) <= 1e-9

    def test_pure_vs_mixed(self):
        ket0 = np.zeros((2, 2))
        ket0[0, 0] = 1.0
        assert abs(relative_entropy(ket0, np.eye(2) / 2) - 1.0) <= 1e-12

    def test_orthogonal_supports(self):
        ket0 = np.diag([1.0, 0.0])
        ket1 = np.diag([0.0, 1.0])
        assert relative_entropy(ket0, ket1) == math.inf

    def test_klein_inequality(self):
        rng = np.random.default_rng(42)
        for _ in range(100):
            rho = random_density_matrix(4, rng)
            sigma = random_density_matrix(4, rng)
            assert relative_entropy(rho, sigma) >= 0.0


class TestDensityMatrix:
    def test_rejects_non_hermitian(self):
        with pytest.raises(ValueError):
            DensityMatrix(np.array([[0.5, 0.5], [0.0, 0.5]]))

    def test_rejects_bad_trace(self):
        with pytest.raises(ValueError):
            DensityMatrix(np.eye(2))

    def test_rejects_negative(self):
        with pytest.raises(ValueError):
            DensityMatrix(np.diag([1.5, -0.5]))

    def test_rejects_bad_dims(self):
        with pytest.raises(ValueError):
            DensityMatrix(np.eye(4) / 4, (2, 3))

    def test_immutable(self):
        rho = DensityMatrix(np.eye(2) / 2)
        with pytest.raises((ValueError, AttributeError)):
            rho.mat[0, 0] = 9.0


def test_random_unitary_is_unitary():
    rng = np.random.default_rng(9)
    for d in (2, 3, 4):
        u = random_unitary(d, rng)
        assert np.max(np.abs(u @ u.conj().T - np.eye(d))) <= 1e-12
