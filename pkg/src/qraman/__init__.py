"""Quantum stimulated Raman signals of an exciton trimer from photon pairs.

The package propagates a small Frenkel-exciton system under a Lindblad
master equation and evaluates the coincidence-detected stimulated Raman
signal driven by entangled, uncorrelated, or classical photon pairs, via
a closed-form impulsive expression and a direct double-time quadrature.
"""

from .constants import HBAR_EV_FS
from .errors import (
    ConfigError,
    ConvergenceError,
    InvalidInputError,
    InvalidModelError,
    QRamanError,
    TimelineRangeError,
    UnsupportedKindError,
)
from .excitons import (
    DensityMatrixTimeline,
    EigenSystem,
    ExcitonModel,
    TimelineInterpolator,
    build_site_hamiltonian,
    dephasing_rates,
    diagonalize,
    lindblad_generator,
    propagate,
    site_localized_state,
)
from .photons import KINDS, JointAmplitude, PhotonSourceSpec, jsa, jta
from .engine import (
    EXCHANGE_VARIANTS,
    DelayScan,
    PolarizabilityMatrix,
    RamanEngine,
    SpectralGrid,
    overlap_w,
)

__version__ = "0.1.0"

__all__ = [
    "HBAR_EV_FS",
    "QRamanError",
    "ConfigError",
    "ConvergenceError",
    "InvalidInputError",
    "InvalidModelError",
    "TimelineRangeError",
    "UnsupportedKindError",
    "ExcitonModel",
    "EigenSystem",
    "DensityMatrixTimeline",
    "TimelineInterpolator",
    "build_site_hamiltonian",
    "diagonalize",
    "lindblad_generator",
    "propagate",
    "dephasing_rates",
    "site_localized_state",
    "KINDS",
    "PhotonSourceSpec",
    "JointAmplitude",
    "jsa",
    "jta",
    "EXCHANGE_VARIANTS",
    "RamanEngine",
    "PolarizabilityMatrix",
    "SpectralGrid",
    "DelayScan",
    "overlap_w",
    "__version__",
]
