"""System parameters and photon-number-dressed quantities.

Within the sector of ``n`` photons the Hamiltonian

    H_n = omega_c n + omega_m b^dag b - g_l n (b^dag + b) + g_q n (b^dag + b)^2

is brought to diagonal form by a one-mode squeeze followed by a one-mode
displacement of the mirror. Everything the dynamics needs is the triplet
``(r(n), omega_bar(n), alpha(n))`` computed here.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import StabilityError


@dataclass(frozen=True)
class SystemParams:
    """Physical constants in hbar = 1 units.

    ``gamma`` is the intrinsic-decoherence rate; ``math.inf`` selects plain
    unitary evolution.
    """

    omega_c: float
    omega_m: float
    g_l: float
    g_q: float
    gamma: float = math.inf

    def __post_init__(self):
        for name in ("omega_c", "omega_m", "g_l", "g_q"):
            v = getattr(self, name)
            if not isinstance(v, (int, float)) or not math.isfinite(v):
                raise ValueError(f"{name} must be a finite real number, got {v!r}")
        if not self.omega_m > 0:
            raise ValueError(f"omega_m must be > 0, got {self.omega_m}")
        if math.isnan(self.gamma) or not self.gamma > 0:
            raise ValueError(f"gamma must be > 0 or inf, got {self.gamma}")

    @property
    def unitary(self) -> bool:
        return math.isinf(self.gamma)

    def replace(self, **changes) -> "SystemParams":
        from dataclasses import replace

        return replace(self, **changes)


@dataclass(frozen=True)
class DressedQuantities:
    n: int
    r: float
    omega_bar: float
    alpha: float


def _check_n(n):
    if isinstance(n, bool) or not isinstance(n, int) or n < 0:
        raise ValueError(f"photon number must be a non-negative int, got {n!r}")


def check_stable(p: SystemParams, n: int) -> None:
    _check_n(n)
    if not p.omega_m + 4 * p.g_q * n > 0:
        raise StabilityError(n, p.omega_m, p.g_q)


def first_unstable_sector(p: SystemParams, n_max: int):
    """Smallest n <= n_max whose sector is unstable, or None."""
    if p.g_q >= 0:
        return None
    n = math.ceil(-p.omega_m / (4 * p.g_q))
    return n if n <= n_max else None


def squeeze_param(p: SystemParams, n: int) -> float:
    check_stable(p, n)
    return 0.25 * math.log1p(4 * p.g_q * n / p.omega_m)


def dressed_frequency(p: SystemParams, n: int) -> float:
    check_stable(p, n)
    return math.sqrt(p.omega_m * (p.omega_m + 4 * p.g_q * n))


def displacement(p: SystemParams, n: int) -> float:
    r = squeeze_param(p, n)
    return -p.g_l * n * math.exp(-r) / dressed_frequency(p, n)


def dressed(p: SystemParams, n: int) -> DressedQuantities:
    r = squeeze_param(p, n)
    wb = dressed_frequency(p, n)
    return DressedQuantities(n=n, r=r, omega_bar=wb, alpha=-p.g_l * n * math.exp(-r) / wb)


def zero_point_shift(p: SystemParams, n: int) -> float:
    """Constant ``(omega_bar - omega_m)/2`` produced by squeezing ``b^dag b``.

    The diagonal form drops it; it is needed to compare with the raw spectrum
    of ``H_n``.
    """
    return 0.5 * (dressed_frequency(p, n) - p.omega_m)


def eigenvalue(p: SystemParams, n: int, N: int, zero_point: bool = False) -> float:
    """Level E_{n,N} of the diagonalized Hamiltonian.

    With ``zero_point=True`` the squeeze vacuum shift is added back so the
    result equals the N-th eigenvalue of the untransformed block.
    """
    _check_n(N)
    d = dressed(p, n)
    e = p.omega_c * n + d.omega_bar * N - p.g_l**2 * n**2 * math.exp(-2 * d.r) / d.omega_bar
    if zero_point:
        e += zero_point_shift(p, n)
    return e
