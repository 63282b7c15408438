"""Two-photon amplitude models: entangled, uncorrelated and classical.

The entangled joint spectral amplitude is a narrowband Lorentzian pump
correlating the difference frequency (width sigma0) times a Lorentzian
phase-matching factor in the sum frequency (width 2*hbar/tau0), with the
phase-matching phase exp(i*k*L/2) kept explicitly.  Its time-domain
counterpart is evaluated in closed form (contour integration over both
Lorentzian poles):

    jta(t1, t2) = 1/(2*hbar*tau0) * theta(t1+t2-tau0)
                  * exp(-(t1+t2-tau0)/tau0)
                  * exp(-sigma0*|t1-t2|/(2*hbar))
                  * exp(-i*(b1*t1 + b2*t2)/hbar)

with carriers b1 = (omega_plus+omega_minus)/2 on the first slot (s arm)
and b2 = (omega_plus-omega_minus)/2 on the second (i arm).  The Fourier
convention is exp(-i*omega*t/hbar) with a symmetric 1/(4 pi^2) factor and
frequency integrals taken over omega/hbar.

The non-entangled baselines use Lorentzian line shapes of half-width
sigma_tilde0 so that all three kinds stay analytically transformable.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .constants import HBAR_EV_FS as HBAR
from .errors import InvalidInputError, UnsupportedKindError

KINDS = ("entangled", "uncorrelated", "classical")


@dataclass(frozen=True)
class PhotonSourceSpec:
    """Source parameters; omega_minus is the scanned Raman-shift setting."""

    kind: str = "entangled"
    omega_plus: float = 0.3  # eV
    omega_minus: float = 0.0  # eV
    sigma0: float = 1e-3  # eV
    tau0: float = 25.0  # fs
    sigma_tilde0: float | None = None  # eV; default hbar/(2 tau0)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise InvalidInputError(f"unknown photon-source kind {self.kind!r}")
        if self.sigma0 <= 0 or self.tau0 <= 0:
            raise InvalidInputError("sigma0 and tau0 must be positive")
        if self.sigma_tilde0 is None:
            object.__setattr__(self, "sigma_tilde0", HBAR / (2.0 * self.tau0))
        if self.sigma_tilde0 <= 0:
            raise InvalidInputError("sigma_tilde0 must be positive")
        if self.kind == "entangled" and self.sigma0 > 0.5 * HBAR / self.tau0:
            warnings.warn(
                "sigma0 is not small against hbar/tau0; the impulsive "
                "closed form assumes a narrowband pump",
                stacklevel=2,
            )

    def with_omega_minus(self, omega_minus: float) -> "PhotonSourceSpec":
        return PhotonSourceSpec(
            kind=self.kind,
            omega_plus=self.omega_plus,
            omega_minus=omega_minus,
            sigma0=self.sigma0,
            tau0=self.tau0,
            sigma_tilde0=self.sigma_tilde0,
        )

    @property
    def carrier_s(self) -> float:
        return 0.5 * (self.omega_plus + self.omega_minus)

    @property
    def carrier_i(self) -> float:
        return 0.5 * (self.omega_plus - self.omega_minus)


def _require(spec: PhotonSourceSpec, kind: str):
    if spec.kind != kind:
        raise UnsupportedKindError(
            f"evaluator needs kind={kind!r}, spec has {spec.kind!r}"
        )


def pump_lineshape(omega, sigma0):
    """Narrowband pump amplitude A(omega) = sigma0/(omega^2 + sigma0^2)."""
    omega = np.asarray(omega, dtype=float)
    return sigma0 / (omega**2 + sigma0**2)


def sum_lineshape(u, tau0):
    """Phase-matching factor phi(u) = (2i hbar/tau0)/(u + 2i hbar/tau0)."""
    b = 2.0 * HBAR / tau0
    return 1j * b / (np.asarray(u, dtype=complex) + 1j * b)


def jsa(spec: PhotonSourceSpec, omega_s, omega_i):
    """Entangled joint spectral amplitude Phi(omega_s, omega_i)."""
    _require(spec, "entangled")
    omega_s = np.asarray(omega_s, dtype=float)
    omega_i = np.asarray(omega_i, dtype=float)
    u = omega_s + omega_i - spec.omega_plus
    v = omega_s - omega_i - spec.omega_minus
    phase = np.exp(1j * u * spec.tau0 / (2.0 * HBAR))
    return pump_lineshape(v, spec.sigma0) * sum_lineshape(u, spec.tau0) * phase


def jta(spec: PhotonSourceSpec, t1, t2):
    """Closed-form time-domain twin-photon wave packet."""
    _require(spec, "entangled")
    t1 = np.asarray(t1, dtype=float)
    t2 = np.asarray(t2, dtype=float)
    s = t1 + t2 - spec.tau0
    support = s >= 0
    env = np.where(
        support,
        np.exp(np.where(support, -s / spec.tau0, 0.0))
        * np.exp(-spec.sigma0 * np.abs(t1 - t2) / (2.0 * HBAR)),
        0.0,
    )
    carrier = np.exp(-1j * (spec.carrier_s * t1 + spec.carrier_i * t2) / HBAR)
    return env * carrier / (2.0 * HBAR * spec.tau0)


def phi_tilde(x):
    """Normalized time-domain phase-matching profile: 2*theta(x)*exp(-2x)."""
    x = np.asarray(x, dtype=float)
    return np.where(x >= 0, 2.0 * np.exp(np.where(x >= 0, -2.0 * x, 0.0)), 0.0)


def jsa_factorized(spec: PhotonSourceSpec, omega_s, omega_i):
    """Rank-1 amplitude g_s(omega_s) g_i(omega_i) for uncorrelated pairs."""
    _require(spec, "uncorrelated")
    omega_s = np.asarray(omega_s, dtype=float)
    omega_i = np.asarray(omega_i, dtype=float)
    g_s = pump_lineshape(omega_s - spec.carrier_s, spec.sigma_tilde0)
    g_i = pump_lineshape(omega_i - spec.carrier_i, spec.sigma_tilde0)
    shift = np.exp(1j * (omega_s + omega_i) * spec.tau0 / (2.0 * HBAR))
    return g_s * g_i * shift


def _pulse_envelope(t, carrier, width, center):
    t = np.asarray(t, dtype=float)
    return np.exp(-width * np.abs(t - center) / HBAR) * np.exp(
        -1j * carrier * (t - center) / HBAR
    )


def classical_pulses(spec: PhotonSourceSpec, t):
    """Deterministic c-number envelopes (s arm, i arm) at time t."""
    _require(spec, "classical")
    center = spec.tau0 / 2.0
    e_s = _pulse_envelope(t, spec.carrier_s, spec.sigma_tilde0, center)
    e_i = _pulse_envelope(t, spec.carrier_i, spec.sigma_tilde0, center)
    return e_s, e_i


@dataclass(frozen=True)
class JointAmplitude:
    """Evaluator handle pairing frequency- and time-domain amplitudes."""

    spec: PhotonSourceSpec
    closed_form: bool = True

    def freq(self, omega_s, omega_i):
        if self.spec.kind == "entangled":
            return jsa(self.spec, omega_s, omega_i)
        if self.spec.kind == "uncorrelated":
            return jsa_factorized(self.spec, omega_s, omega_i)
        # classical pulses share the factorized Lorentzian spectrum
        fake = PhotonSourceSpec(
            kind="uncorrelated",
            omega_plus=self.spec.omega_plus,
            omega_minus=self.spec.omega_minus,
            sigma0=self.spec.sigma0,
            tau0=self.spec.tau0,
            sigma_tilde0=self.spec.sigma_tilde0,
        )
        return jsa_factorized(fake, omega_s, omega_i)

    def time(self, t1, t2):
        spec = self.spec
        if spec.kind == "entangled":
            return jta(spec, t1, t2)
        center = spec.tau0 / 2.0
        f1 = _pulse_envelope(t1, spec.carrier_s, spec.sigma_tilde0, center)
        f2 = _pulse_envelope(t2, spec.carrier_i, spec.sigma_tilde0, center)
        return f1 * f2 / (4.0 * HBAR**2)

    def norm2(self) -> float:
        """Frequency-integrated intensity of the unnormalized amplitude."""
        spec = self.spec
        if spec.kind == "entangled":
            return np.pi**2 * HBAR / (2.0 * spec.sigma0 * spec.tau0)
        return (np.pi / (2.0 * spec.sigma_tilde0)) ** 2

    def time_normalized(self, t1, t2):
        """Time-domain amplitude rescaled to unit frequency-integrated intensity."""
        return self.time(t1, t2) / np.sqrt(self.norm2())
