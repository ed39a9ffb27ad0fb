"""Linear-quadratic optomechanics under intrinsic (Milburn) decoherence.

Closed-form mirror dynamics and time-dependent spectra, each cross-checked by
a truncated Fock-space oracle.
"""
__version__ = "0.1.0"

from .errors import NonConvergence, StabilityError
from .model import SystemParams
from .states import CoherentCoherent, NumberCoherent, NumberNumber

__all__ = [
    "SystemParams",
    "NumberNumber",
    "NumberCoherent",
    "CoherentCoherent",
    "StabilityError",
    "NonConvergence",
]
