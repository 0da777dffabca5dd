"""Dense complex linear algebra and entropy kernels.

Everything downstream (states, channels, capacities, optimizers) works on
plain numpy complex matrices.  States carry their subsystem dimensions in a
small validated ``DensityMatrix`` wrapper.  All entropies are base 2 (bits).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence, Union

import numpy as np

# Eigenvalues below this are treated as exactly zero in entropy sums.
EIG_CUTOFF = 1e-12
# Tolerance for Hermiticity / trace / positivity validation.
VALID_TOL = 1e-10

MatrixLike = Union[np.ndarray, "DensityMatrix"]


def kron(*mats: np.ndarray) -> np.ndarray:
    """Kronecker product of one or more matrices, left to right."""
    out = np.asarray(mats[0], dtype=complex)
    for m in mats[1:]:
        out = np.kron(out, np.asarray(m, dtype=complex))
    return out


class DensityMatrix:
    """Hermitian, positive semidefinite, unit-trace matrix with subsystem dims.

    ``dims`` lists the dimension of each tensor factor in order; their product
    must equal the matrix side.  Instances are immutable after construction.
    """

    __slots__ = ("mat", "dims")

    def __init__(self, mat, dims: Sequence[int] | None = None, *, validate: bool = True):
        mat = np.array(mat, dtype=complex)
        if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
            raise ValueError("density matrix must be a square 2-D array")
        if dims is None:
            dims = (mat.shape[0],)
        dims = tuple(int(d) for d in dims)
        if any(d < 1 for d in dims):
            raise ValueError("subsystem dimensions must be positive")
        if int(np.prod(dims)) != mat.shape[0]:
            raise ValueError(
                f"subsystem dims {dims} do not multiply to matrix side {mat.shape[0]}"
            )
        if validate:
            if not np.all(np.isfinite(mat.view(float))):
                raise ValueError("density matrix entries must be finite")
            herm = np.max(np.abs(mat - mat.conj().T))
            if herm > VALID_TOL:
                raise ValueError(f"matrix is not Hermitian (residual {herm:.2e})")
            tr = mat.trace()
            if abs(tr - 1.0) > VALID_TOL:
                raise ValueError(f"trace must be 1, got {tr:.12f}")
            lo = float(np.linalg.eigvalsh(mat)[0])
            if lo < -VALID_TOL:
                raise ValueError(f"matrix is not positive semidefinite (min eig {lo:.2e})")
        mat.setflags(write=False)
        object.__setattr__(self, "mat", mat)
        object.__setattr__(self, "dims", dims)

    def __setattr__(self, name, value):  # pragma: no cover - immutability guard
        raise AttributeError("DensityMatrix is immutable")

    @property
    def dim(self) -> int:
        return self.mat.shape[0]

    def __repr__(self) -> str:
        return f"DensityMatrix(dim={self.dim}, dims={self.dims})"


@dataclass(frozen=True)
class Spectrum:
    """Eigendecomposition of a Hermitian matrix, eigenvalues descending."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray  # columns, aligned with eigenvalues


def _as_matrix(rho: MatrixLike) -> np.ndarray:
    if isinstance(rho, DensityMatrix):
        return rho.mat
    return np.asarray(rho, dtype=complex)


def hermitian_eig(a: MatrixLike, tol: float = 1e-8) -> Spectrum:
    """Eigendecomposition of a Hermitian matrix.

    Raises ValueError if the input deviates from Hermiticity by more than
    ``tol``.  Eigenvalues come back real and descending, eigenvectors as the
    matching orthonormal columns.
    """
    mat = _as_matrix(a)
    herm = np.max(np.abs(mat - mat.conj().T))
    if herm > tol:
        raise ValueError(f"matrix is not Hermitian (residual {herm:.2e})")
    w, v = np.linalg.eigh(mat)
    return Spectrum(eigenvalues=w[::-1].copy(), eigenvectors=v[:, ::-1].copy())


def _partial_trace_raw(mat: np.ndarray, dims: Sequence[int], keep: Sequence[int]) -> np.ndarray:
    n = len(dims)
    keep = sorted(set(int(i) for i in keep))
    if any(i < 0 or i >= n for i in keep):
        raise ValueError(f"keep indices {keep} out of range for {n} subsystems")
    tensor = mat.reshape(tuple(dims) * 2)
    drop = [i for i in range(n) if i not in keep]
    remaining = n
    for ax in sorted(drop, reverse=True):
        tensor = np.trace(tensor, axis1=ax, axis2=ax + remaining)
        remaining -= 1
    side = int(np.prod([dims[i] for i in keep])) if keep else 1
    return tensor.reshape(side, side)


def partial_trace(rho: DensityMatrix, keep: Iterable[int]) -> DensityMatrix:
    """Reduced state over the ``keep`` subsystems (indices into ``rho.dims``)."""
    keep = sorted(set(int(i) for i in keep))
    if not keep:
        raise ValueError("keep must name at least one subsystem")
    out = _partial_trace_raw(rho.mat, rho.dims, keep)
    return DensityMatrix(out, tuple(rho.dims[i] for i in keep))


def permute_subsystems(mat: np.ndarray, dims: Sequence[int], perm: Sequence[int]):
    """Reorder tensor factors of a matrix; returns (matrix, permuted dims)."""
    n = len(dims)
    perm = [int(p) for p in perm]
    if sorted(perm) != list(range(n)):
        raise ValueError(f"perm {perm} is not a permutation of {n} subsystems")
    tensor = mat.reshape(tuple(dims) * 2)
    tensor = tensor.transpose(perm + [n + p for p in perm])
    new_dims = tuple(dims[p] for p in perm)
    side = int(np.prod(new_dims))
    return np.ascontiguousarray(tensor.reshape(side, side)), new_dims


def _entropy_from_eigenvalues(w: np.ndarray) -> float:
    w = np.real(np.asarray(w, dtype=complex))
    w = np.where(w < EIG_CUTOFF, 0.0, w)
    nz = w[w > 0]
    if nz.size == 0:
        return 0.0
    return float(-(nz * np.log2(nz)).sum())


def von_neumann_entropy(rho: MatrixLike) -> float:
    """-tr(rho log2 rho) with the 0 log 0 := 0 convention."""
    return _entropy_from_eigenvalues(np.linalg.eigvalsh(_as_matrix(rho)))


def shannon_entropy(probs: Iterable[float]) -> float:
    """Base-2 Shannon entropy of a probability list.

    Entries may carry tiny negative noise (>= -1e-12); the list must sum to 1
    within 1e-9, otherwise a ValueError is raised.
    """
    p = np.asarray(list(probs), dtype=float).ravel()
    if p.size == 0:
        raise ValueError("probabilities must be a non-empty list")
    if float(p.min(initial=0.0)) < -1e-12:
        raise ValueError(f"probabilities must be nonnegative, got min {p.min():.3e}")
    total = float(p.sum())
    if abs(total - 1.0) > 1e-9:
        raise ValueError(f"probabilities must sum to 1, got {total:.12f}")
    return _entropy_from_eigenvalues(p)


def binary_entropy(p: float) -> float:
    """Shannon entropy of the distribution (p, 1-p)."""
    if p < -1e-12 or p > 1 + 1e-12:
        raise ValueError(f"p must be in [0, 1], got {p}")
    p = min(max(p, 0.0), 1.0)
    return _entropy_from_eigenvalues(np.array([p, 1.0 - p]))


def relative_entropy(rho: MatrixLike, sigma: MatrixLike) -> float:
    """Quantum relative entropy tr rho (log2 rho - log2 sigma).

    Returns ``math.inf`` when the support of rho leaks outside the support of
    sigma (within the eigenvalue cutoff); nonnegative otherwise.
    """
    r = _as_matrix(rho)
    s = _as_matrix(sigma)
    if r.shape != s.shape:
        raise ValueError("relative entropy arguments must have equal shape")
    wr, vr = np.linalg.eigh(r)
    ws, vs = np.linalg.eigh(s)
    wr = np.where(wr < EIG_CUTOFF, 0.0, np.real(wr))
    ws = np.where(ws < EIG_CUTOFF, 0.0, np.real(ws))
    overlap = np.abs(vr.conj().T @ vs) ** 2  # overlap[i, j] = |<r_i|s_j>|^2
    outside = ws <= 0.0
    if np.any(outside):
        mass = float(np.sum(wr[:, None] * overlap[:, outside]))
        if mass > 1e-10:
            return math.inf
    term_rho = float(np.sum(wr[wr > 0] * np.log2(wr[wr > 0])))
    logs = np.zeros_like(ws)
    inside = ws > 0.0
    logs[inside] = np.log2(ws[inside])
    cross = float(np.sum((wr[:, None] * overlap) * logs[None, :]))
    value = term_rho - cross
    if -1e-9 < value < 0.0:
        value = 0.0
    return value


def random_unitary(dim: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-random unitary via QR of a complex Ginibre matrix."""
    z = (rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))) / math.sqrt(2)
    q, r = np.linalg.qr(z)
    diag = r.diagonal()
    return q * (diag / np.abs(diag))


def random_density_matrix(
    dims: Sequence[int] | int, rng: np.random.Generator, rank: int | None = None
) -> DensityMatrix:
    """Random full-rank (or fixed-rank) state drawn from the Ginibre ensemble."""
    if isinstance(dims, int):
        dims = (dims,)
    dims = tuple(int(d) for d in dims)
    side = int(np.prod(dims))
    r = side if rank is None else int(rank)
    g = rng.standard_normal((side, r)) + 1j * rng.standard_normal((side, r))
    mat = g @ g.conj().T
    mat /= mat.trace().real
    return DensityMatrix(mat, dims)
