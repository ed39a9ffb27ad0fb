"""Mean phonon number and position quadrature X = b + b^dag."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .coefficients import nu_array, zeta_matrix
from .model import SystemParams, check_stable
from .states import InitialState, MirrorMoments

HERMITICITY_TOL = 1e-10


@dataclass(frozen=True)
class DynamicsSample:
    t: float
    phonon_number: float
    quadrature: float


def check_support(p: SystemParams, s: InitialState):
    sectors = s.sectors()
    for n, _ in sectors:
        check_stable(p, n)
    return sectors


def phonon_number_sector(p: SystemParams, n: int, m: MirrorMoments, t) -> np.ndarray:
    """Complex-valued <N(t)> in one photon sector; the imaginary part is roundoff."""
    Z = zeta_matrix(p, n, t)
    z1, z2, z3 = Z[0, 0], Z[1, 1], Z[2, 2]
    z12, z13, z23 = Z[0, 1], Z[0, 2], Z[1, 2]
    bd_coef = z13 + z23.conj()
    return (
        m.number * (z1 + z2)
        + m.bd2 * z12
        + np.conj(m.bd2) * z12.conj()
        + m.bd * bd_coef
        + np.conj(m.bd) * bd_coef.conj()
        + z2
        + z3
    )


def quadrature_sector(p: SystemParams, n: int, m: MirrorMoments, t) -> np.ndarray:
    nu1, nu2, nu3 = nu_array(p, n, t)
    return 2.0 * np.real(m.bd * (nu1 + nu2.conj())) + 2.0 * nu3.real


def _average(p, s, t, fn):
    m = s.moments()
    total = 0.0
    for n, w in check_support(p, s):
        total = total + w * fn(p, n, m, t)
    return total


def _scalar(x):
    return x.item() if np.ndim(x) == 0 else x


def phonon_number(p: SystemParams, s: InitialState, t):
    val = np.asarray(_average(p, s, t, phonon_number_sector))
    scale = 1.0 + np.max(np.abs(val), initial=0.0)
    if np.max(np.abs(val.imag), initial=0.0) > HERMITICITY_TOL * scale:
        raise ArithmeticError("assembled phonon number has a non-negligible imaginary part")
    return _scalar(val.real)


def quadrature(p: SystemParams, s: InitialState, t):
    return _scalar(np.asarray(_average(p, s, t, quadrature_sector)))


def dynamics_sweep(p: SystemParams, s: InitialState, grid) -> list[DynamicsSample]:
    grid = np.asarray(grid, dtype=float)
    if grid.ndim != 1:
        raise ValueError("time grid must be one-dimensional")
    if np.any(grid < 0) or np.any(np.diff(grid) <= 0):
        raise ValueError("time grid must be non-negative and strictly increasing")
    if grid.size == 0:
        return []
    N = np.atleast_1d(phonon_number(p, s, grid))
    X = np.atleast_1d(quadrature(p, s, grid))
    return [DynamicsSample(float(t), float(a), float(b)) for t, a, b in zip(grid, N, X)]
