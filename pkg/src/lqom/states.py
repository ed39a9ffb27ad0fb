"""Initial states: number or coherent cavity field times number or coherent mirror.

Mirror observables only involve operators diagonal in the photon number, so a
coherent field enters as a Poisson-weighted mixture over photon sectors.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

from . import poisson


@dataclass(frozen=True)
class MirrorMoments:
    """<b^dag b>, <b^dag^2>, <b^dag> of the initial mirror state."""

    number: float
    bd2: complex
    bd: complex


@dataclass(frozen=True)
class NumberNumber:
    n: int
    N: int

    def __post_init__(self):
        _nonneg_int("n", self.n)
        _nonneg_int("N", self.N)

    def sectors(self):
        return [(self.n, 1.0)]

    def moments(self) -> MirrorMoments:
        return MirrorMoments(float(self.N), 0j, 0j)


@dataclass(frozen=True)
class NumberCoherent:
    n: int
    beta: complex = 0j

    def __post_init__(self):
        _nonneg_int("n", self.n)
        object.__setattr__(self, "beta", complex(self.beta))

    def sectors(self):
        return [(self.n, 1.0)]

    def moments(self) -> MirrorMoments:
        b = self.beta.conjugate()
        return MirrorMoments(abs(self.beta) ** 2, b * b, b)


@dataclass(frozen=True)
class CoherentCoherent:
    alpha_tilde: float
    beta: complex = 0j

    def __post_init__(self):
        if not (math.isfinite(self.alpha_tilde) and self.alpha_tilde >= 0):
            raise ValueError(f"alpha_tilde must be finite and >= 0, got {self.alpha_tilde}")
        object.__setattr__(self, "beta", complex(self.beta))

    def sectors(self):
        return poisson.sector_weights(self.alpha_tilde**2)

    def moments(self) -> MirrorMoments:
        return NumberCoherent(0, self.beta).moments()


InitialState = Union[NumberNumber, NumberCoherent, CoherentCoherent]


def _nonneg_int(name, v):
    if isinstance(v, bool) or not isinstance(v, int) or v < 0:
        raise ValueError(f"{name} must be a non-negative int, got {v!r}")
