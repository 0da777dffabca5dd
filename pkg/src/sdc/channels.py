"""Displacement (Weyl) operators and the Pauli channel family.

A Pauli channel conjugates the state by tensor products of displacement
operators, drawn from a probability table.  Tables are stored sparsely as a
dict mapping a tuple of ``(shift, phase)`` index pairs (one per noisy
subsystem) to a probability, so fully correlated multiparty channels stay
small.  Channels with no displacement on a subsystem act as the identity
there.
"""

from __future__ import annotations

import itertools
from typing import Dict, Iterable, Mapping, Sequence, Tuple

import numpy as np

from sdc.linalg import DensityMatrix, kron, random_density_matrix

WeylKey = Tuple[int, int]
ProbTable = Dict[WeylKey, float]

# Qubit displacement labels in conventional Pauli order: I, X, XZ (~Y), Z.
QUBIT_PAULI_KEYS: Tuple[WeylKey, ...] = ((0, 0), (1, 0), (1, 1), (0, 1))

_PROB_TOL = 1e-9


def weyl_op(d: int, m: int, n: int) -> np.ndarray:
    """Unitary displacement operator: cyclic shift by m with phase index n.

    Entry (k, k+m mod d) carries exp(2 pi i k n / d).  For d=2 the four
    operators are the identity and the Pauli matrices (up to a phase on XZ).
    """
    if not (0 <= m < d and 0 <= n < d):
        raise ValueError(f"indices (m={m}, n={n}) out of range for dimension {d}")
    op = np.zeros((d, d), dtype=complex)
    for k in range(d):
        op[k, (k + m) % d] = np.exp(2j * np.pi * k * n / d)
    return op


def weyl_keys(d: int) -> list[WeylKey]:
    """All d^2 displacement index pairs in row-major order."""
    return [(m, n) for m in range(d) for n in range(d)]


def weyl_product_ops(dims: Sequence[int]) -> list[np.ndarray]:
    """All tensor products of displacement operators over the given factors."""
    factors = [[weyl_op(d, m, n) for (m, n) in weyl_keys(d)] for d in dims]
    return [kron(*combo) if len(combo) > 1 else combo[0] for combo in itertools.product(*factors)]


def depolarising_probs(d: int, p: float) -> ProbTable:
    """Single-use depolarising table: identity keeps 1-p+p/d^2, rest p/d^2 each."""
    if not 0 <= p <= 1:
        raise ValueError(f"p must be in [0, 1], got {p}")
    base = p / d**2
    table = {key: base for key in weyl_keys(d)}
    table[(0, 0)] = 1.0 - p + base
    return table


def quasiclassical_probs(d: int, p: float) -> ProbTable:
    """Single-use quasi-classical table: uniform over pure phase shifts.

    Probability (1-p)/d on each m=0 key and p/(d(d-1)) on every other key.
    For d=2 this is the X/Y-versus-I/Z split with weights p/2 and (1-p)/2.
    """
    if not 0 <= p <= 1:
        raise ValueError(f"p must be in [0, 1], got {p}")
    if d < 2:
        raise ValueError(f"d must be at least 2, got {d}")
    table: ProbTable = {}
    for key in weyl_keys(d):
        table[key] = (1.0 - p) / d if key[0] == 0 else p / (d * (d - 1))
    return table


def correlate_pairwise(q: Mapping[WeylKey, float], mu: float) -> Dict[tuple, float]:
    """Two-use table (1-mu) q_a q_b + mu q_a [a == b].

    mu=0 gives independent uses, mu=1 forces both uses to draw the same
    displacement.
    """
    if not 0 <= mu <= 1:
        raise ValueError(f"mu must be in [0, 1], got {mu}")
    table: Dict[tuple, float] = {}
    for a, qa in q.items():
        for b, qb in q.items():
            val = (1.0 - mu) * qa * qb
            if a == b:
                val += mu * qa
            if val != 0.0:
                table[(a, b)] = val
    return table


def multiparty_correlated_probs(
    q: Mapping[WeylKey, float], mus, parties: int
) -> Dict[tuple, float]:
    """Correlated table over several channel uses with pairwise degrees.

    ``mus`` is a scalar or a sequence over the lexicographically ordered pairs
    (0,1), (0,2), ..., of which there are parties*(parties-1)/2.  Each term of
    the expansion activates a subset of pairs: active pairs force their two
    uses to draw equal displacements and the single-use factor of the larger
    index is dropped.  Patterns whose active subsets leave duplicate factors
    inside one fused group (e.g. two pairs that both anchor on the last use)
    do not produce a normalized table and are rejected rather than repaired.

    Always exact for parties=2, for all-zero degrees (independent product),
    and for all-one degrees (fully correlated diagonal).
    """
    if parties < 2:
        raise ValueError(f"parties must be at least 2, got {parties}")
    pairs = [(j, l) for j in range(parties) for l in range(j + 1, parties)]
    if np.isscalar(mus):
        mu_list = [float(mus)] * len(pairs)
    else:
        mu_list = [float(m) for m in mus]
        if len(mu_list) != len(pairs):
            raise ValueError(
                f"expected {len(pairs)} correlation degrees for {parties} uses, got {len(mu_list)}"
            )
    if any(not 0 <= m <= 1 for m in mu_list):
        raise ValueError("correlation degrees must be in [0, 1]")

    keys = list(q)
    table: Dict[tuple, float] = {}
    for active in itertools.product((0, 1), repeat=len(pairs)):
        weight = 1.0
        for flag, mu in zip(active, mu_list):
            weight *= mu if flag else 1.0 - mu
        if weight == 0.0:
            continue
        chosen = [pairs[i] for i, flag in enumerate(active) if flag]
        # Fuse equality constraints into groups (connected components).
        group = list(range(parties))

        def find(x):
            while group[x] != x:
                group[x] = group[group[x]]
                x = group[x]
            return x

        for j, l in chosen:
            rj, rl = find(j), find(l)
            if rj != rl:
                group[max(rj, rl)] = min(rj, rl)
        dropped = {l for _, l in chosen}
        components: Dict[int, list[int]] = {}
        for i in range(parties):
            components.setdefault(find(i), []).append(i)
        comp_list = list(components.values())
        for assignment in itertools.product(keys, repeat=len(comp_list)):
            entry = [None] * parties
            factor = weight
            for members, key in zip(comp_list, assignment):
                for i in members:
                    entry[i] = key
                    if i not in dropped:
                        factor *= q[key]
            if factor != 0.0:
                tup = tuple(entry)
                table[tup] = table.get(tup, 0.0) + factor
    total = sum(table.values())
    if abs(total - 1.0) > _PROB_TOL:
        raise ValueError(
            f"unsupported correlation pattern: table sums to {total:.9f} instead of 1 "
            f"(degrees {mu_list})"
        )
    return table


def _validate_table(probs: Mapping[tuple, float], noisy_dims: Sequence[int]) -> Dict[tuple, float]:
    clean: Dict[tuple, float] = {}
    total = 0.0
    for key, p in probs.items():
        key = tuple(key)
        if len(key) != len(noisy_dims):
            raise ValueError(
                f"table key {key} must hold one index pair per noisy subsystem "
                f"({len(noisy_dims)} expected)"
            )
        for (m, n), d in zip(key, noisy_dims):
            if not (0 <= m < d and 0 <= n < d):
                raise ValueError(f"index pair ({m}, {n}) out of range for dimension {d}")
        p = float(p)
        if p < -1e-12:
            raise ValueError(f"negative probability {p} for key {key}")
        total += p
        if p > 0.0:
            clean[key] = p
    if abs(total - 1.0) > _PROB_TOL:
        raise ValueError(f"probabilities must sum to 1, got {total:.12f}")
    return clean


class PauliChannel:
    """Mixture of displacement conjugations over listed noisy subsystems.

    ``probs`` maps tuples of (shift, phase) pairs, one per noisy subsystem in
    order, to probabilities.  Subsystems outside ``noisy`` are untouched.
    Application is an explicit Kraus sum; operators are built lazily and
    cached.
    """

    def __init__(self, dims: Sequence[int], probs: Mapping[tuple, float], noisy=None):
        self.dims = tuple(int(d) for d in dims)
        if noisy is None:
            noisy = (True,) * len(self.dims)
        self.noisy = tuple(bool(b) for b in noisy)
        if len(self.noisy) != len(self.dims):
            raise ValueError("noisy mask length must match number of subsystems")
        if not any(self.noisy):
            raise ValueError("at least one subsystem must be noisy")
        noisy_dims = [d for d, b in zip(self.dims, self.noisy) if b]
        self.probs = _validate_table(probs, noisy_dims)
        self._kraus: np.ndarray | None = None

    @property
    def dim(self) -> int:
        return int(np.prod(self.dims))

    def _kraus_stack(self) -> np.ndarray:
        if self._kraus is None:
            ops = []
            for key, p in self.probs.items():
                factors = []
                it = iter(key)
                for d, b in zip(self.dims, self.noisy):
                    if b:
                        m, n = next(it)
                        factors.append(weyl_op(d, m, n))
                    else:
                        factors.append(np.eye(d, dtype=complex))
                op = kron(*factors) if len(factors) > 1 else factors[0]
                ops.append(np.sqrt(p) * op)
            self._kraus = np.stack(ops)
        return self._kraus

    def apply_matrix(self, mat: np.ndarray) -> np.ndarray:
        """Kraus sum on a raw matrix; no validation (hot path)."""
        ks = self._kraus_stack()
        left = np.matmul(ks, mat)
        return np.einsum("kij,kmj->im", left, ks.conj())

    def apply(self, rho: DensityMatrix) -> DensityMatrix:
        if rho.dims != self.dims:
            raise ValueError(f"state dims {rho.dims} do not match channel dims {self.dims}")
        return DensityMatrix(self.apply_matrix(rho.mat), self.dims)


class KrausChannel:
    """Completely positive trace preserving map given by explicit Kraus operators."""

    def __init__(self, kraus_ops: Iterable[np.ndarray], dims: Sequence[int] | None = None):
        ops = [np.asarray(k, dtype=complex) for k in kraus_ops]
        if not ops:
            raise ValueError("at least one Kraus operator required")
        side = ops[0].shape[0]
        for k in ops:
            if k.shape != (side, side):
                raise ValueError("Kraus operators must be square and equal-sized")
        self.dims = (side,) if dims is None else tuple(int(d) for d in dims)
        if int(np.prod(self.dims)) != side:
            raise ValueError("dims do not multiply to the Kraus operator side")
        total = sum(k.conj().T @ k for k in ops)
        residual = np.max(np.abs(total - np.eye(side)))
        if residual > 1e-9:
            raise ValueError(f"Kraus operators are not trace preserving (residual {residual:.2e})")
        choi = self.choi_matrix_of(ops)
        lo = float(np.linalg.eigvalsh(choi)[0])
        if lo < -1e-9:
            raise ValueError(f"Choi matrix not positive semidefinite (min eig {lo:.2e})")
        self.kraus_ops = tuple(ops)
        self._stack = np.stack(ops)

    @staticmethod
    def choi_matrix_of(ops: Sequence[np.ndarray]) -> np.ndarray:
        vecs = [np.asarray(k, dtype=complex).T.ravel() for k in ops]
        return sum(np.outer(v, v.conj()) for v in vecs)

    def choi_matrix(self) -> np.ndarray:
        return self.choi_matrix_of(self.kraus_ops)

    @property
    def dim(self) -> int:
        return int(np.prod(self.dims))

    def apply_matrix(self, mat: np.ndarray) -> np.ndarray:
        left = np.matmul(self._stack, mat)
        return np.einsum("kij,kmj->im", left, self._stack.conj())

    def apply(self, rho: DensityMatrix) -> DensityMatrix:
        if rho.dims != self.dims:
            raise ValueError(f"state dims {rho.dims} do not match channel dims {self.dims}")
        return DensityMatrix(self.apply_matrix(rho.mat), self.dims)


class ChannelSequence:
    """Composition of channels applied in order (first entry acts first).

    Used for independent multi-subsystem noise, where materializing the full
    product table would be needlessly large.
    """

    def __init__(self, channels: Sequence):
        if not channels:
            raise ValueError("at least one channel required")
        dims = channels[0].dims
        for ch in channels[1:]:
            if ch.dims != dims:
                raise ValueError("all channels in a sequence must share dims")
        self.channels = tuple(channels)
        self.dims = dims

    @property
    def dim(self) -> int:
        return int(np.prod(self.dims))

    def apply_matrix(self, mat: np.ndarray) -> np.ndarray:
        for ch in self.channels:
            mat = ch.apply_matrix(mat)
        return mat

    def apply(self, rho: DensityMatrix) -> DensityMatrix:
        if rho.dims != self.dims:
            raise ValueError(f"state dims {rho.dims} do not match channel dims {self.dims}")
        return DensityMatrix(self.apply_matrix(rho.mat), self.dims)


def one_sided(q: Mapping[WeylKey, float], d: int, side: str = "sender") -> PauliChannel:
    """Bipartite channel whose noise hits only one subsystem."""
    if side not in ("sender", "receiver"):
        raise ValueError(f"side must be 'sender' or 'receiver', got {side!r}")
    idx = 0 if side == "sender" else 1
    probs = {(key,): p for key, p in q.items()}
    noisy = tuple(i == idx for i in range(2))
    return PauliChannel((d, d), probs, noisy)


def correlated_channel(q: Mapping[WeylKey, float], mu: float, d: int) -> PauliChannel:
    """Two-sided channel from a single-use table and a correlation degree."""
    return PauliChannel((d, d), correlate_pairwise(q, mu))


def quasiclassical_channel(p: float, mu: float) -> PauliChannel:
    """Correlated two-qubit quasi-classical channel."""
    return correlated_channel(quasiclassical_probs(2, p), mu, 2)


def fully_correlated_channel(q4: Sequence[float], subsystems: int = 2) -> PauliChannel:
    """Same qubit Pauli applied to every subsystem, drawn with weights q4.

    ``q4`` is ordered (identity, x, y, z).
    """
    if subsystems < 1:
        raise ValueError("subsystems must be positive")
    q4 = [float(x) for x in q4]
    if len(q4) != 4:
        raise ValueError(f"expected 4 probabilities, got {len(q4)}")
    probs = {(key,) * subsystems: p for key, p in zip(QUBIT_PAULI_KEYS, q4)}
    return PauliChannel((2,) * subsystems, probs)


def independent_channel(
    q: Mapping[WeylKey, float], dims: Sequence[int], noisy: Sequence[bool] | None = None
) -> ChannelSequence:
    """Same single-use table applied independently to each noisy subsystem."""
    dims = tuple(int(d) for d in dims)
    if noisy is None:
        noisy = (True,) * len(dims)
    parts = []
    for i, (d, b) in enumerate(zip(dims, noisy)):
        if not b:
            continue
        mask = tuple(j == i for j in range(len(dims)))
        parts.append(PauliChannel(dims, {(key,): p for key, p in q.items()}, mask))
    if not parts:
        raise ValueError("at least one subsystem must be noisy")
    return ChannelSequence(parts)


def twirl(xi: np.ndarray) -> np.ndarray:
    """Uniform average of displacement conjugations: projects onto (tr/d) I."""
    xi = np.asarray(xi, dtype=complex)
    d = xi.shape[0]
    acc = np.zeros_like(xi)
    for m, n in weyl_keys(d):
        v = weyl_op(d, m, n)
        acc += v @ xi @ v.conj().T
    return acc / d**2


def verify_covariance(ch, n_senders: int | None = None, samples: int = 3, seed: int = 0) -> float:
    """Worst-case covariance residual of a channel over random states.

    Checks | ch(V rho V+) - V ch(rho) V+ | for every sender-side displacement
    product V (identity on the remaining subsystems) and a few random states.
    Pauli channels built by this module satisfy this to machine precision.
    """
    dims = ch.dims
    if n_senders is None:
        n_senders = len(dims) - 1
    if not 1 <= n_senders <= len(dims):
        raise ValueError(f"n_senders must be in [1, {len(dims)}]")
    sender_dims = dims[:n_senders]
    rest = int(np.prod(dims[n_senders:])) if n_senders < len(dims) else 1
    eye_rest = np.eye(rest, dtype=complex)
    rng = np.random.default_rng(seed)
    worst = 0.0
    sender_ops = weyl_product_ops(sender_dims)
    for _ in range(samples):
        rho = random_density_matrix(dims, rng).mat
        out = ch.apply_matrix(rho)
        for v in sender_ops:
            full = kron(v, eye_rest) if rest > 1 else v
            lhs = ch.apply_matrix(full @ rho @ full.conj().T)
            rhs = full @ out @ full.conj().T
            worst = max(worst, float(np.max(np.abs(lhs - rhs))))
    return worst
