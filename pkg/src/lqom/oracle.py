"""Brute-force reference built on truncated Fock matrices.

Nothing here uses the squeeze/displace algebra: each photon sector of the
Hamiltonian is diagonalized numerically, the elementary unitaries
``V_k = exp(-i k H / gamma)`` are applied in that eigenbasis and the Poisson
mixture over ``k`` is summed term by term. When the mean ``gamma t`` is too
large for a direct sum, the interval is split into ``2**m`` equal pieces, the
mixture is summed explicitly on one piece and the resulting channel is composed
with itself ``m`` times (the Milburn map is a semigroup in ``t``).
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import poisson
from .errors import DimensionMismatch, NonConvergence
from .model import SystemParams, check_stable
from .states import CoherentCoherent, InitialState, NumberCoherent, NumberNumber

DEFAULT_N_MAX = 80
DEFAULT_K_CAP = 64
MAX_DOUBLINGS = 80
RESIDUE_TOL = 1e-10


def annihilation(dim: int) -> np.ndarray:
    return np.diag(np.sqrt(np.arange(1, dim, dtype=float)), 1).astype(complex)


def number_op(dim: int) -> np.ndarray:
    return np.diag(np.arange(dim, dtype=float)).astype(complex)


def quadrature_op(dim: int) -> np.ndarray:
    a = annihilation(dim)
    return a + a.conj().T


@dataclass(frozen=True)
class FockBlock:
    n: int
    dim: int
    matrix: np.ndarray


def build_block(p: SystemParams, n: int, N_max: int = DEFAULT_N_MAX) -> FockBlock:
    if N_max < 8:
        raise ValueError("N_max must be at least 8")
    dim = N_max + 1
    b = annihilation(dim)
    x = b + b.conj().T
    # (b^dag + b)^2 in normal-ordered form; x @ x would corrupt the last diagonal entry.
    H = (
        p.omega_c * n * np.eye(dim)
        + p.omega_m * number_op(dim)
        - p.g_l * n * x
        + p.g_q * n * (b @ b + b.conj().T @ b.conj().T + 2 * number_op(dim) + np.eye(dim))
    )
    return FockBlock(n, dim, H)


@lru_cache(maxsize=256)
def _eigensystem(p: SystemParams, n: int, N_max: int):
    vals, vecs = np.linalg.eigh(build_block(p, n, N_max).matrix)
    vals.flags.writeable = False
    vecs.flags.writeable = False
    return vals, vecs


def block_spectrum(p: SystemParams, n: int, N_max: int = DEFAULT_N_MAX) -> np.ndarray:
    return _eigensystem(p, n, N_max)[0].copy()


def poisson_phase_average(phi, mu: float, k_cap: int = DEFAULT_K_CAP) -> np.ndarray:
    """``sum_k Poisson(k; mu) exp(i k phi)`` by explicit summation.

    Large means are handled by splitting ``mu`` into ``2**m`` equal parts,
    summing the part explicitly and squaring ``m`` times.
    """
    phi = np.asarray(phi, dtype=float)
    if mu < 0:
        raise ValueError("mu must be non-negative")
    m = 0
    part = mu
    while poisson.tail_cutoff(part) > k_cap:
        part /= 2.0
        m += 1
        if m > MAX_DOUBLINGS:
            raise NonConvergence(f"Poisson mean {mu:.6g} needs more than {MAX_DOUBLINGS} halvings")
    K = poisson.tail_cutoff(part)
    w = poisson.weights(part, K)
    k = np.arange(K + 1)
    f = np.exp(1j * np.multiply.outer(phi, k)) @ w
    for _ in range(m):
        f = f * f
    return f


def _phase_factors(p: SystemParams, dlam, t: float, k_cap: int) -> np.ndarray:
    """Channel factor for eigen-energy differences ``dlam`` = lambda_i - lambda_j.

    Heisenberg-picture operators pick up ``sum_k P_k exp(i k dlam / gamma)``;
    Schrodinger-picture density matrices use the conjugate.
    """
    if t < 0:
        raise ValueError("t must be non-negative")
    if p.unitary:
        return np.exp(1j * np.asarray(dlam) * t)
    return poisson_phase_average(np.asarray(dlam) / p.gamma, p.gamma * t, k_cap)


def _phase_path(p: SystemParams, dlam, times, k_cap: int):
    """Yield channel factors along an increasing time grid.

    Successive points are reached by composing with the factor of the
    increment, which is computed once per distinct step length.
    """
    steps = {}
    F = None
    prev = 0.0
    for t in times:
        dt = float(t) - prev
        if dt < 0:
            raise ValueError("times must be non-decreasing")
        key = round(dt, 12)
        if key not in steps:
            steps[key] = _phase_factors(p, dlam, dt, k_cap)
        F = steps[key] if F is None else F * steps[key]
        prev = float(t)
        yield F


def mirror_vector(s: InitialState, dim: int) -> np.ndarray:
    """Initial mirror ket in the truncated number basis."""
    if isinstance(s, NumberNumber):
        if s.N >= dim:
            raise DimensionMismatch(f"phonon number {s.N} outside cutoff {dim - 1}")
        v = np.zeros(dim, dtype=complex)
        v[s.N] = 1.0
        return v
    beta = s.beta
    v = np.empty(dim, dtype=complex)
    v[0] = math.exp(-0.5 * abs(beta) ** 2)
    for k in range(1, dim):
        v[k] = v[k - 1] * beta / math.sqrt(k)
    norm2 = float(np.vdot(v, v).real)
    if 1.0 - norm2 > RESIDUE_TOL:
        raise DimensionMismatch(
            f"coherent amplitude {beta} not resolved by cutoff {dim - 1} (residue {1 - norm2:.2e})"
        )
    return v / math.sqrt(norm2)


def _sectors(p, s):
    sectors = s.sectors()
    for n, _ in sectors:
        check_stable(p, n)
    return sectors


@dataclass
class MilburnState:
    """Block-diagonal density matrix: list of (n, weight, rho_n) plus the time."""

    blocks: list
    t: float

    def trace(self) -> float:
        return float(sum(w * np.trace(r).real for _, w, r in self.blocks))

    def purity(self) -> float:
        return float(sum(w * w * np.vdot(r, r).real for _, w, r in self.blocks))


def evolve_milburn(
    p: SystemParams,
    s: InitialState,
    t: float,
    N_max: int = DEFAULT_N_MAX,
    K_cap: int = DEFAULT_K_CAP,
) -> MilburnState:
    blocks = []
    for n, w in _sectors(p, s):
        vals, U = _eigensystem(p, n, N_max)
        psi = U.conj().T @ mirror_vector(s, N_max + 1)
        rho = np.outer(psi, psi.conj())
        F = _phase_factors(p, np.subtract.outer(vals, vals), t, K_cap).conj()
        blocks.append((n, w, U @ (rho * F) @ U.conj().T))
    return MilburnState(blocks, t)


def unitary_state(p: SystemParams, s: InitialState, t: float, N_max: int = DEFAULT_N_MAX):
    """Plain Schrodinger evolution via ``exp(-i H t)``; used as the gamma -> inf reference."""
    from scipy.linalg import expm

    blocks = []
    for n, w in _sectors(p, s):
        U = expm(-1j * t * build_block(p, n, N_max).matrix)
        psi = U @ mirror_vector(s, N_max + 1)
        blocks.append((n, w, np.outer(psi, psi.conj())))
    return MilburnState(blocks, t)


def heisenberg(p: SystemParams, n: int, op: np.ndarray, t: float,
               N_max: int = DEFAULT_N_MAX, K_cap: int = DEFAULT_K_CAP) -> np.ndarray:
    """Poisson-averaged ``sum_k P_k V_k^dag op V_k`` in the number basis."""
    check_stable(p, n)
    vals, U = _eigensystem(p, n, N_max)
    if op.shape != (N_max + 1, N_max + 1):
        raise DimensionMismatch(f"operator shape {op.shape} vs cutoff {N_max}")
    F = _phase_factors(p, np.subtract.outer(vals, vals), t, K_cap)
    return U @ ((U.conj().T @ op @ U) * F) @ U.conj().T


def heisenberg_b(p: SystemParams, n: int, t: float, N_max: int = DEFAULT_N_MAX,
                 K_cap: int = DEFAULT_K_CAP) -> np.ndarray:
    return heisenberg(p, n, annihilation(N_max + 1), t, N_max, K_cap)


def expectation(state, op: np.ndarray) -> complex:
    """``tr(rho A)`` for a MilburnState or density matrix, ``<psi|A|psi>`` for a ket."""
    if isinstance(state, MilburnState):
        return sum(w * expectation(r, op) for _, w, r in state.blocks)
    state = np.asarray(state)
    if state.shape[0] != op.shape[0] or op.shape[0] != op.shape[1]:
        raise DimensionMismatch(f"state {state.shape} vs operator {op.shape}")
    if state.ndim == 1:
        return complex(np.vdot(state, op @ state))
    if state.shape != op.shape:
        raise DimensionMismatch(f"state {state.shape} vs operator {op.shape}")
    return complex(np.einsum("ij,ji->", state, op))


def observables_series(p: SystemParams, s: InitialState, times, N_max: int = DEFAULT_N_MAX,
                       K_cap: int = DEFAULT_K_CAP):
    """(<N>(t), <X>(t)) arrays on ``times`` from the evolved density matrix.

    Only eigenbasis entries carrying weight in ``rho_ij A_ji`` are propagated.
    """
    times = np.atleast_1d(np.asarray(times, dtype=float))
    dim = N_max + 1
    N_op, X_op = number_op(dim), quadrature_op(dim)
    outN = np.zeros(times.shape, dtype=complex)
    outX = np.zeros(times.shape, dtype=complex)
    for n, w in _sectors(p, s):
        vals, U = _eigensystem(p, n, N_max)
        psi = U.conj().T @ mirror_vector(s, dim)
        rho = np.outer(psi, psi.conj())
        cN = rho * (U.conj().T @ N_op @ U).T
        cX = rho * (U.conj().T @ X_op @ U).T
        mag = np.maximum(np.abs(cN), np.abs(cX))
        keep = mag > 1e-18 * mag.max()
        dl = np.subtract.outer(vals, vals)[keep]
        cN, cX = cN[keep], cX[keep]
        for i, F in enumerate(_phase_path(p, dl, times, K_cap)):
            F = F.conj()
            outN[i] += w * (cN @ F)
            outX[i] += w * (cX @ F)
    return outN.real, outX.real


def _b_trajectory(p, n, psi, times, N_max, K_cap):
    """Columns ``b_gamma(t_j) psi`` in the eigenbasis (a unitary change of frame)."""
    vals, U = _eigensystem(p, n, N_max)
    bt = U.conj().T @ annihilation(N_max + 1) @ U
    cols = np.nonzero(np.abs(psi) > 1e-15 * np.abs(psi).max())[0]
    dl = np.subtract.outer(vals, vals[cols])
    B = bt[:, cols] * psi[cols]
    out = np.empty((len(vals), len(times)), dtype=complex)
    for j, F in enumerate(_phase_path(p, dl, times, K_cap)):
        out[:, j] = (B * F).sum(axis=1)
    return out


def correlation_numeric(p: SystemParams, s: InitialState, t1: float, t2: float,
                        N_max: int = DEFAULT_N_MAX, K_cap: int = DEFAULT_K_CAP) -> complex:
    """<b_gamma^dag(t1) b_gamma(t2)> from the Poisson-averaged Heisenberg matrices."""
    total = 0j
    for n, w in _sectors(p, s):
        psi = mirror_vector(s, N_max + 1)
        B1 = heisenberg_b(p, n, t1, N_max, K_cap)
        B2 = heisenberg_b(p, n, t2, N_max, K_cap)
        total += w * np.vdot(B1 @ psi, B2 @ psi)
    return total


def spectrum_numeric(p: SystemParams, s: InitialState, Gamma: float, omega, t: float,
                     grid_steps: int = 400, N_max: int = DEFAULT_N_MAX,
                     K_cap: int = DEFAULT_K_CAP) -> np.ndarray:
    """Trapezoidal double quadrature of the filtered two-time correlation.

    ``grid_steps`` intervals per time axis; the correlation matrix
    ``C_ij = <b^dag(t_i) b(t_j)>`` is assembled on the full square grid.
    """
    if grid_steps < 100:
        raise ValueError("grid_steps must be at least 100")
    if not Gamma > 0:
        raise ValueError("Gamma must be > 0")
    omega = np.atleast_1d(np.asarray(omega, dtype=float))
    if t == 0:
        return np.zeros(omega.shape)
    times = np.linspace(0.0, t, grid_steps + 1)
    wts = np.full(times.shape, t / grid_steps)
    wts[[0, -1]] *= 0.5
    u = wts[:, None] * np.exp(np.multiply.outer(times, Gamma + 1j * omega) - Gamma * t)
    total = np.zeros(omega.shape)
    for n, w in _sectors(p, s):
        vals, U = _eigensystem(p, n, N_max)
        psi = U.conj().T @ mirror_vector(s, N_max + 1)
        Phi = _b_trajectory(p, n, psi, times, N_max, K_cap)
        C = Phi.conj().T @ Phi
        total += w * np.einsum("iw,ij,jw->w", u.conj(), C, u).real
    return 2.0 * Gamma * total


def with_cutoff_delta(fn, N_max: int = DEFAULT_N_MAX):
    """Evaluate ``fn(N_max)`` and ``fn(2 N_max)``; return the first value and the max deviation."""
    a = np.asarray(fn(N_max))
    b = np.asarray(fn(2 * N_max))
    return a, float(np.max(np.abs(a - b)))
