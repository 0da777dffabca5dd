"""Entropy minimization over sender-side encodings, thresholds and crossovers.

The capacity of a covariant channel reduces to minimizing the channel output
entropy over the sender's pre-processing: over unitaries (parameterized as
exponentials of traceless Hermitian generators) or over all CPTP maps
(parameterized through an isometry into sender x environment).  Minimization
is a seeded multi-start Nelder-Mead simplex search; it corroborates claimed
optima, it cannot certify global optimality.

Root finding for the noise threshold and the pre-processing crossover curves
uses a coarse grid scan plus bisection.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Optional, Sequence, Tuple

import numpy as np
from scipy.optimize import minimize as _scipy_minimize

from sdc import capacity as cap
from sdc import channels as ch_mod
from sdc.linalg import DensityMatrix, binary_entropy, kron, von_neumann_entropy


@dataclass(frozen=True)
class OptResult:
    """Outcome of a multi-start entropy minimization."""

    best_value: float
    best_param: np.ndarray
    best_operator: object  # sender unitary, or tuple of Kraus operators
    restart_values: Tuple[float, ...]
    restarts_used: int
    converged: bool
    seed: int


@lru_cache(maxsize=None)
def generator_basis(d: int) -> np.ndarray:
    """Orthogonal basis of traceless Hermitian d x d generators (d^2 - 1 of them)."""
    mats = []
    for j in range(d):
        for k in range(j + 1, d):
            sym = np.zeros((d, d), dtype=complex)
            sym[j, k] = sym[k, j] = 1.0
            mats.append(sym)
            asym = np.zeros((d, d), dtype=complex)
            asym[j, k] = -1.0j
            asym[k, j] = 1.0j
            mats.append(asym)
    for l in range(1, d):
        diag = np.zeros((d, d), dtype=complex)
        scale = math.sqrt(2.0 / (l * (l + 1)))
        for j in range(l):
            diag[j, j] = scale
        diag[l, l] = -l * scale
        mats.append(diag)
    out = np.stack(mats)
    out.setflags(write=False)
    return out


def unitary_from_generator(theta: np.ndarray, d: int) -> np.ndarray:
    """exp(i H) for H the generator-basis combination with coefficients theta."""
    basis = generator_basis(d)
    theta = np.asarray(theta, dtype=float)
    if theta.shape != (d**2 - 1,):
        raise ValueError(f"expected {d ** 2 - 1} coefficients for dimension {d}")
    h = np.tensordot(theta, basis, axes=1)
    w, v = np.linalg.eigh(h)
    return (v * np.exp(1j * w)) @ v.conj().T


def _local_unitary(theta: np.ndarray, dims: Sequence[int]) -> np.ndarray:
    blocks = []
    offset = 0
    for d in dims:
        n = d**2 - 1
        blocks.append(unitary_from_generator(theta[offset : offset + n], d))
        offset += n
    return kron(*blocks) if len(blocks) > 1 else blocks[0]


def _kraus_from_isometry_params(theta: np.ndarray, d: int, env: int):
    half = d * env * d
    m = theta[:half].reshape(d * env, d) + 1j * theta[half:].reshape(d * env, d)
    q, r = np.linalg.qr(m)
    diag = r.diagonal().copy()
    diag[np.abs(diag) < 1e-12] = 1.0
    q = q * (diag / np.abs(diag))
    return tuple(q[e * d : (e + 1) * d, :] for e in range(env))


def _nelder_mead(fn: Callable, x0: np.ndarray, max_iters: int, tol: float):
    res = _scipy_minimize(
        fn,
        x0,
        method="Nelder-Mead",
        options={
            "maxiter": max_iters,
            "maxfev": 4 * max_iters,
            "fatol": tol,
            "xatol": 1e-6,
        },
    )
    return np.asarray(res.x), float(res.fun), bool(res.success)


def _run_restarts(fn, starts, max_iters, tol, seed):
    best_x, best_f, best_ok = None, math.inf, False
    values = []
    for x0 in starts:
        x, f, ok = _nelder_mead(fn, x0, max_iters, tol)
        values.append(f)
        if f < best_f:
            best_x, best_f, best_ok = x, f, ok
    return best_x, best_f, best_ok, tuple(values)


def min_output_entropy_unitary(
    rho: DensityMatrix,
    ch=None,
    structure: str = "global",
    n_senders: int = 1,
    restarts: int = 32,
    seed: int = 0,
    max_iters: int = 2000,
    tol: float = 1e-9,
) -> OptResult:
    """Minimize S(channel(U rho U+)) over sender-block unitaries.

    ``structure`` is "global" (one unitary on the whole sender block) or
    "local" (a product of per-subsystem unitaries).  The identity is always
    the first start, so the result never exceeds the unencoded entropy.
    Deterministic for a fixed seed.
    """
    if restarts < 1:
        raise ValueError("restarts must be at least 1")
    dims = rho.dims
    sender_dims = dims[:n_senders]
    d_s = int(np.prod(sender_dims))
    d_r = int(np.prod(dims[n_senders:])) if n_senders < len(dims) else 1
    eye_r = np.eye(d_r, dtype=complex)
    if structure == "global":
        nparams = d_s**2 - 1
        build = lambda th: unitary_from_generator(th, d_s)
    elif structure == "local":
        nparams = sum(d**2 - 1 for d in sender_dims)
        build = lambda th: _local_unitary(th, sender_dims)
    else:
        raise ValueError(f"structure must be 'global' or 'local', got {structure!r}")

    rho_mat = rho.mat

    def objective(theta):
        u = build(theta)
        full = kron(u, eye_r) if d_r > 1 else u
        out = full @ rho_mat @ full.conj().T
        if ch is not None:
            out = ch.apply_matrix(out)
        return von_neumann_entropy(out)

    starts = [np.zeros(nparams)]
    for i in range(1, restarts):
        rng = np.random.default_rng([seed, i])
        starts.append(rng.normal(0.0, 1.0, nparams))
    best_x, best_f, ok, values = _run_restarts(objective, starts, max_iters, tol, seed)
    return OptResult(
        best_value=best_f,
        best_param=best_x,
        best_operator=build(best_x),
        restart_values=values,
        restarts_used=len(starts),
        converged=ok,
        seed=seed,
    )


def min_output_entropy_cptp(
    rho: DensityMatrix,
    ch=None,
    n_senders: int = 1,
    restarts: int = 32,
    seed: int = 0,
    max_iters: int = 2000,
    tol: float = 1e-9,
) -> OptResult:
    """Minimize the output entropy over all CPTP pre-maps on the sender block.

    The map is parameterized by an isometry into sender x environment with
    environment dimension d^2 (enough for any Kraus rank at this size), kept
    exactly CPTP at every search point via QR orthonormalization.  Structured
    starts (identity map, reset maps onto each basis state) precede the random
    ones.
    """
    if restarts < 1:
        raise ValueError("restarts must be at least 1")
    dims = rho.dims
    sender_dims = dims[:n_senders]
    d_s = int(np.prod(sender_dims))
    env = d_s**2
    d_r = int(np.prod(dims[n_senders:])) if n_senders < len(dims) else 1
    eye_r = np.eye(d_r, dtype=complex)
    nparams = 2 * d_s * env * d_s
    rho_mat = rho.mat

    def kraus_of(theta):
        return _kraus_from_isometry_params(np.asarray(theta, float), d_s, env)

    def objective(theta):
        out = np.zeros_like(rho_mat)
        for k in kraus_of(theta):
            lifted = kron(k, eye_r) if d_r > 1 else k
            out = out + lifted @ rho_mat @ lifted.conj().T
        if ch is not None:
            out = ch.apply_matrix(out)
        return von_neumann_entropy(out)

    structured = []
    ident = np.zeros(nparams)
    ident[: d_s * d_s] = np.eye(d_s).ravel()  # environment slot 0 holds the identity
    structured.append(ident)
    for j in range(d_s):
        reset = np.zeros(nparams)
        for e in range(d_s):
            # Kraus slot e is |j><e|: real entry at row e*d_s + j, column e.
            reset[(e * d_s + j) * d_s + e] = 1.0
        structured.append(reset)
    starts = structured[:restarts]
    for i in range(len(starts), restarts):
        rng = np.random.default_rng([seed, i])
        starts.append(rng.normal(0.0, 1.0, nparams))
    best_x, best_f, ok, values = _run_restarts(objective, starts, max_iters, tol, seed)
    return OptResult(
        best_value=best_f,
        best_param=best_x,
        best_operator=kraus_of(best_x),
        restart_values=values,
        restarts_used=len(starts),
        converged=ok,
        seed=seed,
    )


def _bisect(fn: Callable[[float], float], lo: float, hi: float, tol: float) -> float:
    flo, fhi = fn(lo), fn(hi)
    if flo == 0.0:
        return lo
    if fhi == 0.0:
        return hi
    if flo * fhi > 0:
        raise ValueError(f"no sign change on [{lo}, {hi}]")
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        fmid = fn(mid)
        if fmid == 0.0:
            return mid
        if (fmid < 0) == (flo < 0):
            lo, flo = mid, fmid
        else:
            hi, fhi = mid, fmid
    return 0.5 * (lo + hi)


def _scan_bracket(fn, grid):
    vals = [fn(x) for x in grid]
    for (x0, v0), (x1, v1) in zip(zip(grid, vals), zip(grid[1:], vals[1:])):
        if v0 == 0.0:
            return x0, x0
        if v0 * v1 < 0:
            return x0, x1
    return None


def depolarising_transition_threshold(tol: float = 1e-5) -> float:
    """Noise level where the Bell-state and separable capacities cross (d=2).

    Root of [2 - S(Werner((1-p)^2))] - [1 - h2(p/2)]; below it entangled
    inputs win, above it separable inputs do.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")

    def f(p):
        return (2.0 - cap.werner_entropy((1.0 - p) ** 2)) - (1.0 - binary_entropy(p / 2.0))

    grid = [i / 100.0 for i in range(1, 100)]
    bracket = _scan_bracket(f, grid)
    if bracket is None:
        raise ValueError("no sign change found for the transition threshold")
    if bracket[0] == bracket[1]:
        return bracket[0]
    return _bisect(f, bracket[0], bracket[1], tol)


def crossover_mu_tilde(p: float, tol: float = 1e-5) -> Optional[float]:
    """Correlation degree where unitary encoding catches the fixed pre-map.

    Root in mu of C_un(Bell, quasi-classical, p, mu) - (1 - h2(p)); returns
    None when unitary encoding dominates for every mu (no crossover).
    """
    if not 0 < p < 1:
        raise ValueError(f"p must be in (0, 1), got {p}")
    target = cap.transferred_info_quasiclassical_gamma(p)

    def f(mu):
        return cap.c_quasiclassical_werner(1.0, p, mu) - target

    grid = [i / 100.0 for i in range(101)]
    bracket = _scan_bracket(f, grid)
    if bracket is None:
        return None
    if bracket[0] == bracket[1]:
        return bracket[0]
    return _bisect(f, bracket[0], bracket[1], tol)


def crossover_p_range(
    mu: float, tol: float = 1e-5, scan_points: int = 101
) -> Optional[Tuple[float, float]]:
    """First noise interval where the fixed pre-map beats unitary encoding.

    Scans h(p) = (1 - h2(p)) - C_un(p, mu) over [0, 1] and refines the first
    maximal region with h > 0.  Returns None when no such region exists.  A
    mirrored region around 1 - p exists by symmetry and is not reported.
    """
    if not 0 <= mu <= 1:
        raise ValueError(f"mu must be in [0, 1], got {mu}")
    if scan_points < 3:
        raise ValueError("scan_points must be at least 3")

    def h(p):
        gamma = 1.0 - binary_entropy(p)
        return gamma - cap.c_quasiclassical_werner(1.0, p, mu)

    grid = np.linspace(0.0, 1.0, scan_points)
    vals = [h(p) for p in grid]
    eps = 1e-12
    i0 = next((i for i, v in enumerate(vals) if v > eps), None)
    if i0 is None:
        return None
    if i0 == 0:
        lo = 0.0
    elif vals[i0 - 1] < -eps:
        lo = _bisect(h, grid[i0 - 1], grid[i0], tol)
    else:
        lo = float(grid[i0 - 1])
    j = i0 + 1
    hi = 1.0
    while j < len(vals):
        if vals[j] < -eps:
            hi = _bisect(h, grid[j - 1], grid[j], tol)
            break
        j += 1
    else:
        hi = float(grid[-1])
    return lo, hi


def crossover_eta_tilde(q: float, tol: float = 1e-5) -> float:
    """Werner weight where unitary encoding catches the fixed pre-map.

    Root in eta of (2 - S(Werner(eta))) - (1 - h2(q)); at q in {0, 1} this is
    the largest crossover weight (about 0.747), at q = 0.5 it collapses to 0.
    """
    if not 0 <= q <= 1:
        raise ValueError(f"q must be in [0, 1], got {q}")
    target = cap.transferred_info_fully_gamma(q)

    def f(eta):
        return (2.0 - cap.werner_entropy(eta)) - target

    if abs(f(0.0)) < 1e-12:
        return 0.0
    return _bisect(f, 0.0, 1.0, tol)


def _grid(steps: int) -> np.ndarray:
    if steps < 1:
        raise ValueError("steps must be at least 1")
    if steps == 1:
        return np.array([0.0])
    return np.linspace(0.0, 1.0, steps)


def _sweep_fig1(steps, **fixed):
    header = ["p", "c_classical", "c_channel_dep2", "c_one_sided", "c_two_sided"]
    rows = []
    for p in _grid(steps):
        q = ch_mod.depolarising_probs(2, p)
        one = cap.c_one_sided_pauli_bell(2, q)
        two = 2.0 - cap.werner_entropy((1.0 - p) ** 2)
        rows.append((float(p), 1.0, cap.classical_capacity_dep_qubit(p), one, two))
    return header, rows


def _sweep_fig2(steps, **fixed):
    header = ["p", "mu", "c_un"]
    rows = []
    for p in _grid(steps):
        for mu in _grid(steps):
            rows.append((float(p), float(mu), cap.c_quasiclassical_werner(1.0, p, mu)))
    return header, rows


def _sweep_fig3(steps, p=0.05, **fixed):
    header = ["mu", "eta", "c_un"]
    rows = []
    for mu in _grid(steps):
        for eta in _grid(steps):
            rows.append((float(mu), float(eta), cap.c_quasiclassical_werner(eta, p, mu)))
    return header, rows


def _sweep_fig4(steps, tol=1e-5, **fixed):
    header = ["p", "mu_tilde"]
    rows = []
    for p in _grid(steps):
        if 0.0 < p < 1.0:
            mu = crossover_mu_tilde(p, tol)
        else:
            mu = None
        rows.append((float(p), math.nan if mu is None else mu))
    return header, rows


def _sweep_fig5(steps, mu=0.2, **fixed):
    header = ["p", "c_un", "c_gamma"]
    rows = []
    for p in _grid(steps):
        rows.append(
            (
                float(p),
                cap.c_quasiclassical_werner(1.0, p, mu),
                cap.transferred_info_quasiclassical_gamma(p),
            )
        )
    return header, rows


def _sweep_fig6(steps, p=0.05, **fixed):
    header = ["mu", "c_un", "c_gamma"]
    gamma = cap.transferred_info_quasiclassical_gamma(p)
    rows = []
    for mu in _grid(steps):
        rows.append((float(mu), cap.c_quasiclassical_werner(1.0, p, mu), gamma))
    return header, rows


def _sweep_fig7(steps, **fixed):
    header = ["eta", "q", "c_un", "c_gamma"]
    rows = []
    for eta in _grid(steps):
        c_un = cap.c_fully_correlated_werner(eta)
        for q in _grid(steps):
            rows.append((float(eta), float(q), c_un, cap.transferred_info_fully_gamma(q)))
    return header, rows


def _sweep_fig8(steps, tol=1e-5, **fixed):
    header = ["q", "eta_tilde"]
    rows = []
    for q in _grid(steps):
        rows.append((float(q), crossover_eta_tilde(q, tol)))
    return header, rows


_SWEEPS = {
    "fig1": _sweep_fig1,
    "fig2": _sweep_fig2,
    "fig3": _sweep_fig3,
    "fig4": _sweep_fig4,
    "fig5": _sweep_fig5,
    "fig6": _sweep_fig6,
    "fig7": _sweep_fig7,
    "fig8": _sweep_fig8,
}


def sweep(case_id: str, steps: int = 101, **fixed):
    """Tabulate a named capacity sweep; returns (header, rows).

    Known ids are "fig1" .. "fig8" (the published comparison curves and
    surfaces).  Rows come back in deterministic grid order.
    """
    if case_id not in _SWEEPS:
        raise ValueError(f"unknown sweep case: {case_id!r} (known: {sorted(_SWEEPS)})")
    return _SWEEPS[case_id](steps, **fixed)
