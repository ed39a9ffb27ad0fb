"""Heisenberg coefficients of the mirror operators under intrinsic decoherence.

Each elementary evolution ``V(k/gamma)`` maps ``b^dag`` to
``chi1 b^dag + chi2 b + chi3``; every chi is a combination of the harmonics
``exp(i j k omega_bar / gamma)`` with ``j`` in {-1, 0, 1}. Poisson averaging
over ``k`` turns a harmonic ``j`` into ``exp(t * rate_j)`` with
``rate_j = gamma (exp(i j omega_bar / gamma) - 1)``, which is what the closed
forms below evaluate. ``nu_series`` performs the truncated sum directly and is
kept as an independent check of the resummation.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import poisson
from .model import SystemParams, check_stable, dressed

HARMONICS = (-1, 0, 1)
PAIR_HARMONICS = (-2, -1, 0, 1, 2)
DEFAULT_SERIES_CAP = 5_000_000


@dataclass(frozen=True)
class ChiSet:
    chi1: complex
    chi2: complex
    chi3: complex
    k: int
    n: int


@dataclass(frozen=True)
class NuSet:
    """Time-dependent coefficients; fields are scalars or arrays matching ``t``."""

    nu1: complex | np.ndarray
    nu2: complex | np.ndarray
    nu3: complex | np.ndarray
    t: float | np.ndarray
    n: int

    def as_array(self) -> np.ndarray:
        return np.array([self.nu1, self.nu2, self.nu3])


@dataclass(frozen=True)
class ZetaSet:
    zeta1: float | np.ndarray
    zeta2: float | np.ndarray
    zeta3: float | np.ndarray
    zeta12: complex | np.ndarray
    zeta13: complex | np.ndarray
    zeta23: complex | np.ndarray
    t: float | np.ndarray
    n: int


def damping_kernel(p: SystemParams, n: int) -> complex:
    """``exp(i omega_bar/gamma) - 1``; zero in the unitary limit."""
    if p.unitary:
        check_stable(p, n)
        return 0j
    theta = dressed(p, n).omega_bar / p.gamma
    return complex(-2.0 * math.sin(0.5 * theta) ** 2, math.sin(theta))


def harmonic_rate(p: SystemParams, n: int, j: int) -> complex:
    """Resummed exponent ``gamma (exp(i j omega_bar/gamma) - 1)`` of harmonic ``j``.

    Tends to ``i j omega_bar`` as gamma -> inf; that value is returned exactly
    for ``gamma = inf``. The real part is never positive.
    """
    wb = dressed(p, n).omega_bar
    if p.unitary:
        return 1j * j * wb
    theta = j * wb / p.gamma
    return p.gamma * complex(-2.0 * math.sin(0.5 * theta) ** 2, math.sin(theta))


@lru_cache(maxsize=4096)
def chi_harmonics(p: SystemParams, n: int) -> np.ndarray:
    """Coefficients ``c[l, j]`` with ``chi_l = sum_j c[l, j] exp(i j k omega_bar/gamma)``.

    Columns follow ``HARMONICS``. The returned array is read-only.
    """
    d = dressed(p, n)
    ch, sh = math.cosh(d.r), math.sinh(d.r)
    s2 = math.sinh(2 * d.r)
    c = np.array(
        [
            [-sh * sh, 0.0, ch * ch],
            [-0.5 * s2, 0.0, 0.5 * s2],
            [-d.alpha * sh, -d.alpha * math.exp(-d.r), d.alpha * ch],
        ],
        dtype=complex,
    )
    c.flags.writeable = False
    return c


@lru_cache(maxsize=4096)
def zeta_harmonics(p: SystemParams, n: int) -> np.ndarray:
    """``C[l, m, h]`` with ``chi_l chi_m^* = sum_h C[l, m, h] exp(i h k omega_bar/gamma)``.

    ``h`` runs over ``PAIR_HARMONICS`` (index ``h + 2``).
    """
    c = chi_harmonics(p, n)
    C = np.zeros((3, 3, 5), dtype=complex)
    for a, ja in enumerate(HARMONICS):
        for b, jb in enumerate(HARMONICS):
            C[:, :, ja - jb + 2] += np.outer(c[:, a], c[:, b].conj())
    C.flags.writeable = False
    return C


def _rates(p, n, harmonics):
    return np.array([harmonic_rate(p, n, j) for j in harmonics])


def _resummed(p, n, t, harmonics):
    """exp(t * rate_j) for each harmonic; shape (len(harmonics),) + shape(t)."""
    t = np.asarray(t, dtype=float)
    if np.any(t < 0):
        raise ValueError("t must be non-negative")
    rates = _rates(p, n, harmonics)
    return np.exp(np.multiply.outer(rates, t))


def chi(p: SystemParams, n: int, k: int) -> ChiSet:
    if p.unitary:
        raise ValueError("chi(k/gamma) needs a finite gamma")
    d = dressed(p, n)
    theta = k * d.omega_bar / p.gamma
    ep, em = np.exp(1j * theta), np.exp(-1j * theta)
    ch, sh = math.cosh(d.r), math.sinh(d.r)
    return ChiSet(
        chi1=complex(ch * ch * ep - sh * sh * em),
        chi2=complex(0.5 * (ep - em) * math.sinh(2 * d.r)),
        chi3=complex(d.alpha * (ch * ep - sh * em - math.exp(-d.r))),
        k=k,
        n=n,
    )


def nu_array(p: SystemParams, n: int, t) -> np.ndarray:
    """Closed-form (nu1, nu2, nu3) stacked on axis 0."""
    E = _resummed(p, n, t, HARMONICS)
    return np.tensordot(chi_harmonics(p, n), E, axes=(1, 0))


def _pack_nu(arr, t, n):
    if np.ndim(t) == 0:
        return NuSet(complex(arr[0]), complex(arr[1]), complex(arr[2]), float(t), n)
    return NuSet(arr[0], arr[1], arr[2], np.asarray(t, dtype=float), n)


def nu_closed(p: SystemParams, n: int, t) -> NuSet:
    return _pack_nu(nu_array(p, n, t), t, n)


def nu_series(
    p: SystemParams, n: int, t: float, tol: float = 1e-12, cap: int = DEFAULT_SERIES_CAP
) -> NuSet:
    """Direct truncated Poisson sum of ``chi(k/gamma)``.

    The cutoff is the smallest K whose tail mass is below ``tol``.
    """
    if p.unitary:
        raise ValueError("the Poisson series needs a finite gamma")
    if t < 0:
        raise ValueError("t must be non-negative")
    check_stable(p, n)
    mu = p.gamma * t
    K = poisson.adaptive_cutoff(mu, tol, cap)
    w = poisson.weights(mu, K)
    d = dressed(p, n)
    theta = np.arange(K + 1) * d.omega_bar / p.gamma
    ep, em = np.exp(1j * theta), np.exp(-1j * theta)
    ch, sh = math.cosh(d.r), math.sinh(d.r)
    nu1 = w @ (ch * ch * ep - sh * sh * em)
    nu2 = w @ (0.5 * (ep - em)) * math.sinh(2 * d.r)
    nu3 = d.alpha * (w @ (ch * ep - sh * em - math.exp(-d.r)))
    return NuSet(complex(nu1), complex(nu2), complex(nu3), float(t), n)


def zeta_matrix(p: SystemParams, n: int, t) -> np.ndarray:
    """Full Hermitian matrix ``Z[l, m] = zeta_lm(t)`` (diagonal = zeta_l)."""
    E = _resummed(p, n, t, PAIR_HARMONICS)
    return np.tensordot(zeta_harmonics(p, n), E, axes=(2, 0))


def zeta(p: SystemParams, n: int, t, l: int, m: int | None = None):
    """``zeta_l(t)`` (real) when ``m`` is None, else ``zeta_lm(t)``; indices are 1-based."""
    if l not in (1, 2, 3) or m not in (None, 1, 2, 3):
        raise ValueError("indices must be in {1, 2, 3}")
    Z = zeta_matrix(p, n, t)
    if m is None or m == l:
        val = Z[l - 1, l - 1].real
    else:
        val = Z[l - 1, m - 1]
    return val if np.ndim(val) else val.item()


def zeta_set(p: SystemParams, n: int, t) -> ZetaSet:
    Z = zeta_matrix(p, n, t)
    return ZetaSet(
        zeta1=Z[0, 0].real,
        zeta2=Z[1, 1].real,
        zeta3=Z[2, 2].real,
        zeta12=Z[0, 1],
        zeta13=Z[0, 2],
        zeta23=Z[1, 2],
        t=t,
        n=n,
    )


def xi_unitary(p: SystemParams, n: int, t) -> NuSet:
    """Unitary Heisenberg coefficients, written directly in trigonometric form.

    ``xi3`` is the gamma -> inf limit of ``chi3``; the oracle confirms this
    sign convention (the mirror is pushed towards ``-alpha``).
    """
    d = dressed(p, n)
    t = np.asarray(t, dtype=float)
    phase = d.omega_bar * t
    c, s = np.cos(phase), np.sin(phase)
    xi1 = c + 1j * math.cosh(2 * d.r) * s
    xi2 = 1j * math.sinh(2 * d.r) * s
    xi3 = d.alpha * (
        math.cosh(d.r) * np.exp(1j * phase) - math.sinh(d.r) * np.exp(-1j * phase) - math.exp(-d.r)
    )
    return _pack_nu(np.array([xi1, xi2, xi3]), t if t.ndim else float(t), n)
