"""Poisson weights and the truncation rule shared by every resummed series."""
from __future__ import annotations

import math

import numpy as np
from scipy import stats

from .errors import NonConvergence


def tail_cutoff(mu: float) -> int:
    """Index K past which the Poisson(mu) tail is negligible for our purposes."""
    return math.ceil(mu + 10 * math.sqrt(mu + 1) + 20)


def adaptive_cutoff(mu: float, tol: float, cap: int) -> int:
    """Smallest K with P(k > K) < tol; raise if that exceeds ``cap``."""
    if tol <= 0:
        raise ValueError("tol must be positive")
    if mu == 0:
        return 0
    k = int(stats.poisson.isf(tol, mu))
    while stats.poisson.sf(k, mu) >= tol:
        k += 1
    if k > cap:
        raise NonConvergence(f"Poisson cutoff {k} for mean {mu:.6g} exceeds cap {cap}")
    return k


def weights(mu: float, K: int) -> np.ndarray:
    """Poisson(mu) probabilities for k = 0..K."""
    if mu == 0:
        w = np.zeros(K + 1)
        w[0] = 1.0
        return w
    return stats.poisson.pmf(np.arange(K + 1), mu)


def sector_weights(mean_photons: float, cap: int = 100_000):
    """(n, weight) pairs of a coherent photon distribution with <n> = mean_photons."""
    K = tail_cutoff(mean_photons)
    if K > cap:
        raise NonConvergence(f"photon-sector cutoff {K} exceeds cap {cap}")
    w = weights(mean_photons, K)
    return [(n, float(wn)) for n, wn in enumerate(w) if wn > 0.0]
