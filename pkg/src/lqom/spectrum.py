"""Time-dependent physical (Eberly-Wodkiewicz) spectrum of the mirror.

    S(Gamma, omega; t) = 2 Gamma e^{-2 Gamma t}
        int_0^t dt1 e^{(Gamma - i omega) t1} int_0^t dt2 e^{(Gamma + i omega) t2}
        <b^dag(t1) b(t2)>

The two-time correlation factorizes over the nu coefficients, so the double
integral reduces to the three filter integrals ``L_l = int_0^t e^{(Gamma - i
omega) tau} nu_l(tau) dtau``, each a sum of ``(e^{z t} - 1)/z`` terms.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .coefficients import HARMONICS, chi_harmonics, harmonic_rate, nu_array
from .model import SystemParams, check_stable, dressed, dressed_frequency
from .observables import check_support
from .states import InitialState, MirrorMoments, NumberCoherent, CoherentCoherent

TAYLOR_THRESHOLD = 1e-4


@dataclass(frozen=True)
class SpectrumParams:
    Gamma: float
    omega_grid: np.ndarray = field(compare=False)
    t: float

    def __post_init__(self):
        if not self.Gamma > 0:
            raise ValueError(f"Gamma must be > 0, got {self.Gamma}")
        if not self.t >= 0:
            raise ValueError(f"t must be >= 0, got {self.t}")
        grid = np.atleast_1d(np.asarray(self.omega_grid, dtype=float))
        if grid.ndim != 1 or np.any(np.diff(grid) <= 0):
            raise ValueError("omega_grid must be strictly increasing")
        object.__setattr__(self, "omega_grid", grid)


@dataclass(frozen=True)
class LCoeffs:
    L1: np.ndarray
    L2: np.ndarray
    L3: np.ndarray


def scaled_filter_integral(z, t: float, Gamma: float):
    """``e^{-Gamma t} (e^{z t} - 1) / z``, stable for large ``Gamma t`` and ``z -> 0``."""
    z = np.asarray(z, dtype=complex)
    damp = math.exp(-Gamma * t)
    zt = z * t
    small = np.abs(zt) < TAYLOR_THRESHOLD
    mid = ~small & (np.abs(zt) < 1.0)
    big = ~(small | mid)
    out = np.empty_like(z)
    out[big] = (np.exp(zt[big] - Gamma * t) - damp) / z[big]
    # expm1 avoids the cancellation in e^{zt} - 1 for moderate |zt|
    out[mid] = damp * np.expm1(zt[mid]) / z[mid]
    zt_s = zt[small]
    out[small] = damp * t * (1 + zt_s / 2 + zt_s**2 / 6 + zt_s**3 / 24)
    return out


def _scaled_l(p, n, Gamma, omega, t):
    """``e^{-Gamma t} L_l`` for l = 1..3, shape (3,) + shape(omega)."""
    omega = np.asarray(omega, dtype=float)
    base = Gamma - 1j * omega
    I = np.array(
        [scaled_filter_integral(harmonic_rate(p, n, j) + base, t, Gamma) for j in HARMONICS]
    )
    return np.tensordot(chi_harmonics(p, n), I, axes=(1, 0))


def l_coeffs(p: SystemParams, n: int, Gamma: float, omega, t: float) -> LCoeffs:
    if not Gamma > 0:
        raise ValueError("Gamma must be > 0")
    L = _scaled_l(p, n, Gamma, omega, t) * math.exp(Gamma * t)
    return LCoeffs(L[0], L[1], L[2])


def _bilinear(m: MirrorMoments, a, b):
    """<A^dag B> for A^dag = a1 b^dag + a2 b + a3 and B^dag = b1 b^dag + b2 b + b3.

    With ``a = nu(t1)``, ``b = nu(t2)`` this is the two-time correlation
    <b^dag(t1) b(t2)>; with both equal to filter integrals it is the filtered
    intensity.
    """
    a1, a2, a3 = a
    b1, b2, b3 = (np.conj(x) for x in b)
    return (
        m.number * (a1 * b1 + a2 * b2)
        + m.bd2 * a1 * b2
        + np.conj(m.bd2) * a2 * b1
        + m.bd * (a1 * b3 + a3 * b2)
        + np.conj(m.bd) * (a2 * b3 + a3 * b1)
        + a2 * b2
        + a3 * b3
    )


def correlation(p: SystemParams, s: InitialState, t1: float, t2: float) -> complex:
    if t1 < 0 or t2 < 0:
        raise ValueError("times must be non-negative")
    m = s.moments()
    total = 0j
    for n, w in check_support(p, s):
        total += w * complex(_bilinear(m, nu_array(p, n, t1), nu_array(p, n, t2)))
    return total


def spectrum(p: SystemParams, s: InitialState, sp: SpectrumParams) -> np.ndarray:
    """Spectrum over ``sp.omega_grid`` for any supported initial state."""
    m = s.moments()
    total = np.zeros(sp.omega_grid.shape)
    for n, w in check_support(p, s):
        Lh = _scaled_l(p, n, sp.Gamma, sp.omega_grid, sp.t)
        total += w * _bilinear(m, Lh, Lh).real
    return 2.0 * sp.Gamma * total


def spectrum_number(p: SystemParams, n: int, beta: complex, sp: SpectrumParams) -> np.ndarray:
    return spectrum(p, NumberCoherent(n, beta), sp)


def spectrum_coherent(
    p: SystemParams, alpha_tilde: float, beta: complex, sp: SpectrumParams
) -> np.ndarray:
    return spectrum(p, CoherentCoherent(alpha_tilde, beta), sp)


def longtime_spectrum(p: SystemParams, n: int, Gamma: float, omega):
    """t -> inf Lorentzian ``2 Gamma alpha^2 e^{-2r} / (Gamma^2 + omega^2)``.

    Only the decoherence-free part of ``L_3`` survives; the result does not
    depend on the mirror state.
    """
    if p.unitary:
        raise ValueError("the long-time limit requires finite gamma")
    if not Gamma > 0:
        raise ValueError("Gamma must be > 0")
    d = dressed(p, n)
    omega = np.asarray(omega, dtype=float)
    val = 2 * Gamma * d.alpha**2 * math.exp(-2 * d.r) / (Gamma**2 + omega**2)
    return val.item() if val.ndim == 0 else val


def longtime_spectrum_state(p: SystemParams, s: InitialState, Gamma: float, omega):
    total = 0.0
    for n, w in check_support(p, s):
        total = total + w * longtime_spectrum(p, n, Gamma, omega)
    return total


def sideband_frequency(p: SystemParams, n: int) -> float:
    """Decoherence-shifted sideband position ``gamma sin(omega_bar/gamma)``."""
    wb = dressed_frequency(p, n)
    return wb if p.unitary else p.gamma * math.sin(wb / p.gamma)


def default_omega_grid(p: SystemParams, n_max: int, points: int = 801) -> np.ndarray:
    check_stable(p, n_max)
    w = 4 * max(dressed_frequency(p, k) for k in range(n_max + 1))
    return np.linspace(-w, w, points)
