"""Constructors for the shared resource states.

All constructors return validated ``DensityMatrix`` values with subsystem
dims ordered senders first, receivers last.  Total dimension is capped at
desk scale (two three-level copies, i.e. 81).
"""

from __future__ import annotations

import math
from functools import reduce

import numpy as np

from sdc.channels import QUBIT_PAULI_KEYS, weyl_op
from sdc.linalg import DensityMatrix, kron, permute_subsystems

# Desk-scale cap on the total Hilbert dimension (fits two d=3 copies).
MAX_DIM = 81


def bell_state(d: int, m: int = 0, n: int = 0) -> DensityMatrix:
    """Maximally entangled pure state labelled by a displacement index.

    The (0, 0) state is sum_j |jj> / sqrt(d); the others displace the sender
    half.  For d=2, (0,0) is (|00> + |11>)/sqrt(2).
    """
    if d < 2:
        raise ValueError(f"d must be at least 2, got {d}")
    if not (0 <= m < d and 0 <= n < d):
        raise ValueError(f"indices (m={m}, n={n}) out of range for dimension {d}")
    psi = np.zeros(d * d, dtype=complex)
    for j in range(d):
        psi[j * d + j] = 1.0 / math.sqrt(d)
    if (m, n) != (0, 0):
        psi = kron(weyl_op(d, m, n), np.eye(d)) @ psi
    return DensityMatrix(np.outer(psi, psi.conj()), (d, d))


def werner_state(d: int, eta: float) -> DensityMatrix:
    """Mixture eta * Bell + (1 - eta) * maximally mixed."""
    if not 0 <= eta <= 1:
        raise ValueError(f"eta must be in [0, 1], got {eta}")
    bell = bell_state(d).mat
    mat = eta * bell + (1.0 - eta) * np.eye(d * d) / d**2
    return DensityMatrix(mat, (d, d))


def bell_diagonal(probs) -> DensityMatrix:
    """Convex combination of the four two-qubit Bell projectors.

    Weights are ordered to match the qubit Pauli labelling (identity, x, y, z)
    of the displaced Bell states, so the Werner state appears as
    ((1+3 eta)/4, (1-eta)/4, (1-eta)/4, (1-eta)/4).
    """
    probs = [float(p) for p in probs]
    if len(probs) != 4:
        raise ValueError(f"expected 4 probabilities, got {len(probs)}")
    if min(probs) < -1e-12:
        raise ValueError("probabilities must be nonnegative")
    if abs(sum(probs) - 1.0) > 1e-9:
        raise ValueError(f"probabilities must sum to 1, got {sum(probs):.12f}")
    mat = np.zeros((4, 4), dtype=complex)
    for p, (m, n) in zip(probs, QUBIT_PAULI_KEYS):
        mat += p * bell_state(2, m, n).mat
    return DensityMatrix(mat, (2, 2))


def ghz_state(parties: int) -> DensityMatrix:
    """Even superposition of all-zeros and all-ones over qubit parties."""
    if parties < 2:
        raise ValueError(f"parties must be at least 2, got {parties}")
    dim = 2**parties
    if dim > MAX_DIM:
        raise ValueError(f"total dimension {dim} exceeds the desk-scale cap {MAX_DIM}")
    psi = np.zeros(dim, dtype=complex)
    psi[0] = psi[-1] = 1.0 / math.sqrt(2)
    return DensityMatrix(np.outer(psi, psi.conj()), (2,) * parties)


def k_copies(rho: DensityMatrix, k: int) -> DensityMatrix:
    """Tensor power of a bipartite state, regrouped senders first.

    The input has dims (sender, receiver); the output carries dims
    (a_1 ... a_k, b_1 ... b_k) so that sender-side encodings act as a single
    left tensor block.
    """
    if len(rho.dims) != 2:
        raise ValueError(f"k_copies expects a bipartite state, got dims {rho.dims}")
    if k < 1:
        raise ValueError(f"k must be at least 1, got {k}")
    if rho.dim**k > MAX_DIM:
        raise ValueError(
            f"total dimension {rho.dim ** k} exceeds the desk-scale cap {MAX_DIM}"
        )
    if k == 1:
        return rho
    full = reduce(np.kron, [rho.mat] * k)
    inter = rho.dims * k  # (a1, b1, a2, b2, ...)
    perm = list(range(0, 2 * k, 2)) + list(range(1, 2 * k, 2))
    mat, dims = permute_subsystems(full, inter, perm)
    return DensityMatrix(mat, dims)
