import math

import numpy as np
import pytest

from sdc.linalg import DensityMatrix, kron, partial_trace, von_neumann_entropy
from sdc.states import bell_diagonal, bell_state, ghz_state, k_copies, werner_state

SIGMAS = [
    np.eye(2, dtype=complex),
    np.array([[0, 1], [1, 0]], dtype=complex),
    np.array([[0, -1j], [1j, 0]], dtype=complex),
    np.array([[1, 0], [0, -1]], dtype=complex),
]


class TestBellState:
    def test_phi_plus_amplitudes(self):
        rho = bell_state(2)
        # (|00> + |11>)/sqrt(2): all four corner entries are 1/2
        for i, j in [(0, 0), (0, 3), (3, 0), (3, 3)]:
            assert abs(rho.mat[i, j] - 0.5) <= 1e-12

    @pytest.mark.parametrize("d", [2, 3, 4, 5])
    def test_marginals_maximally_mixed(self, d):
        for m in range(d):
            for n in range(d):
                rho = bell_state(d, m, n)
                for keep in ([0], [1]):
                    red = partial_trace(rho, keep).mat
                    assert np.max(np.abs(red - np.eye(d) / d)) <= 1e-10

    def test_displaced_state_explicit(self):
        # oracle: build (sigma_x x I)|phi+> by hand -> (|10> + |01>)/sqrt(2)
        expect = np.zeros(4, dtype=complex)
        expect[1] = expect[2] = 1 / math.sqrt(2)
        rho = bell_state(2, 1, 0)
        assert np.max(np.abs(rho.mat - np.outer(expect, expect.conj()))) <= 1e-12
        # orthogonal to |phi+>
        phi = bell_state(2).mat
        assert abs(np.trace(phi @ rho.mat)) <= 1e-12

    def test_pure_rank_one(self):
        rho = bell_state(3, 2, 1)
        assert abs(von_neumann_entropy(rho)) <= 1e-10

    def test_index_range(self):
        with pytest.raises(ValueError):
            bell_state(2, 2, 0)


class TestWernerState:
    def test_limits(self):
        assert np.allclose(werner_state(2, 0.0).mat, np.eye(4) / 4)
        assert np.max(np.abs(werner_state(2, 1.0).mat - bell_state(2).mat)) <= 1e-12

    def test_eigenvalues_third(self):
        w = np.sort(np.linalg.eigvalsh(werner_state(2, 1 / 3).mat))[::-1]
        assert np.max(np.abs(w - [0.5, 1 / 6, 1 / 6, 1 / 6])) <= 1e-12

    def test_eigenvalue_formula_sampled(self):
        for eta in np.linspace(0, 1, 20):
            w = np.sort(np.linalg.eigvalsh(werner_state(2, eta).mat))[::-1]
            expect = [(1 + 3 * eta) / 4] + [(1 - eta) / 4] * 3
            assert np.max(np.abs(w - expect)) <= 1e-10

    def test_range_check(self):
        with pytest.raises(ValueError):
            werner_state(2, 1.1)
        with pytest.raises(ValueError):
            werner_state(2, -0.1)


class TestBellDiagonal:
    def test_single_term(self):
        assert np.max(np.abs(bell_diagonal([1, 0, 0, 0]).mat - bell_state(2).mat)) <= 1e-12

    def test_werner_mapping(self):
        eta = 0.37
        probs = [(1 + 3 * eta) / 4] + [(1 - eta) / 4] * 3
        assert np.max(np.abs(bell_diagonal(probs).mat - werner_state(2, eta).mat)) <= 1e-12

    def test_entropy_is_shannon(self):
        probs = [0.4, 0.3, 0.2, 0.1]
        expect = -sum(p * math.log2(p) for p in probs)
        assert abs(expect - 1.8464393446710) <= 1e-10
        assert abs(von_neumann_entropy(bell_diagonal(probs)) - expect) <= 1e-10

    def test_normalization(self):
        with pytest.raises(ValueError):
            bell_diagonal([0.5, 0.5, 0.5, -0.5])
        with pytest.raises(ValueError):
            bell_diagonal([0.3, 0.3, 0.3, 0.3])


class TestGhzState:
    def test_two_party_is_bell(self):
        assert np.max(np.abs(ghz_state(2).mat - bell_state(2).mat)) <= 1e-12

    def test_single_party_marginal_entropy(self):
        rho = ghz_state(3)
        for which in range(3):
            red = partial_trace(rho, [which])
            assert abs(von_neumann_entropy(red) - 1.0) <= 1e-10

    def test_pure(self):
        for parties in (2, 3, 4):
            assert abs(von_neumann_entropy(ghz_state(parties))) <= 1e-10

    @pytest.mark.parametrize("parties", [2, 4, 6])
    def test_collective_pauli_invariance_even_parties(self, parties):
        rho = ghz_state(parties).mat
        for sigma in SIGMAS:
            op = kron(*([sigma] * parties))
            assert np.max(np.abs(op @ rho @ op.conj().T - rho)) <= 1e-10

    def test_dimension_cap(self):
        with pytest.raises(ValueError):
            ghz_state(7)

    def test_party_count(self):
        with pytest.raises(ValueError):
            ghz_state(1)


class TestKCopies:
    def test_single_copy_identity(self):
        rho = werner_state(2, 0.3)
        assert k_copies(rho, 1) is rho

    def test_bell_two_copies_receiver_marginal(self):
        rho = k_copies(bell_state(2), 2)
        assert rho.dims == (2, 2, 2, 2)
        red = partial_trace(rho, [2, 3]).mat
        assert np.max(np.abs(red - np.eye(4) / 4)) <= 1e-10

    def test_sender_grouping(self):
        # copies of a product state a (x) b regroup to (a a, b b)
        a = np.diag([0.9, 0.1]).astype(complex)
        b = np.diag([0.6, 0.4]).astype(complex)
        rho = k_copies(DensityMatrix(kron(a, b), (2, 2)), 2)
        assert np.max(np.abs(rho.mat - kron(a, a, b, b))) <= 1e-12

    def test_entropy_additivity(self):
        single = werner_state(2, 0.5)
        s1 = von_neumann_entropy(single)
        assert abs(s1 - 1.5487949406954) <= 1e-10
        s2 = von_neumann_entropy(k_copies(single, 2))
        assert abs(s2 - 2 * s1) <= 1e-9

    def test_dimension_cap(self):
        with pytest.raises(ValueError):
            k_copies(bell_state(3), 3)
        with pytest.raises(ValueError):
            k_copies(bell_state(2), 4)

    def test_bipartite_only(self):
        with pytest.raises(ValueError):
            k_copies(ghz_state(3), 2)
