"""Open-system dynamics of a one-exciton chain.

Builds the nearest-neighbour site Hamiltonian, diagonalizes it, and
propagates the reduced density matrix in the eigenbasis under a secular
Lindblad generator: downhill jumps between eigenstates plus pure dephasing
on every eigenstate projector.

Conventions
-----------
* Energies in eV, times in fs, rates in 1/fs; hbar enters only through
  :data:`qraman.constants.HBAR_EV_FS`.
* The coherent part is ``drho/dt = -(i/hbar)[H, rho]``, so an eigenbasis
  element |e_a><e_b| evolves as ``exp(-i*(eps_a - eps_b)*t/hbar)``,
  i.e. as ``exp(+i*omega_ba*t/hbar)``.
* The pure-dephasing dissipator uses jump operators ``sqrt(2*gamma_pd)*P_a``
  (one per eigenstate projector), so a two-level coherence decays as
  ``exp(-2*gamma_pd*t)`` with each projector contributing gamma_pd.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import expm

from .constants import HBAR_EV_FS
from .errors import InvalidInputError, InvalidModelError, TimelineRangeError

HERMITICITY_TOL = 1e-10
TRACE_TOL = 1e-9
UNITARITY_TOL = 1e-12


@dataclass(frozen=True)
class ExcitonModel:
    """Site energies, hopping and relaxation rates defining the open chain.

    ``downhill_rates`` maps eigenstate index pairs ``(j, i)`` with ``j > i``
    (energy-ordered, 0-based) to jump rates in 1/fs.
    """

    site_energies: tuple  # eV, one per site
    hopping: float  # J, eV
    downhill_rates: dict = field(default_factory=dict)  # (j, i) -> 1/fs
    pure_dephasing: float = 0.0  # gamma_pd, 1/fs

    @property
    def n_sites(self) -> int:
        return len(self.site_energies)

    def __post_init__(self):
        if self.n_sites < 1:
            raise InvalidModelError("model needs at least one site")
        if not np.isreal(self.hopping):
            raise InvalidModelError("hopping J must be real")
        if self.pure_dephasing < 0:
            raise InvalidModelError("pure_dephasing must be >= 0")
        for (j, i), rate in self.downhill_rates.items():
            if not (0 <= i < j < self.n_sites):
                raise InvalidModelError(
                    f"rate ({j}->{i}) does not connect downhill eigenstates"
                )
            if rate < 0:
                raise InvalidModelError(f"rate ({j}->{i}) is negative")
        object.__setattr__(self, "site_energies", tuple(float(e) for e in self.site_energies))
        object.__setattr__(self, "downhill_rates", dict(self.downhill_rates))


@dataclass(frozen=True)
class EigenSystem:
    """Eigen-decomposition of the one-exciton Hamiltonian.

    ``energies`` ascending (eV); ``vectors`` has eigenvectors in columns
    (site -> eigen); ``gaps[a, b] = energies[a] - energies[b]``.
    """

    energies: np.ndarray
    vectors: np.ndarray

    @property
    def n(self) -> int:
        return len(self.energies)

    @property
    def gaps(self) -> np.ndarray:
        return self.energies[:, None] - self.energies[None, :]


@dataclass(frozen=True)
class DensityMatrixTimeline:
    """rho(t) sampled on a uniform grid in the eigenbasis."""

    t0: float  # fs
    dt: float  # fs
    samples: np.ndarray  # (n_times, n, n) complex

    @property
    def times(self) -> np.ndarray:
        return self.t0 + self.dt * np.arange(self.samples.shape[0])

    @property
    def t_end(self) -> float:
        return self.t0 + self.dt * (self.samples.shape[0] - 1)

    def covers(self, t: float) -> bool:
        return self.t0 - 1e-9 <= t <= self.t_end + 1e-9


def build_site_hamiltonian(model: ExcitonModel) -> np.ndarray:
    """Site-basis Hamiltonian: site energies on the diagonal, -J on (n, n±1)."""
    n = model.n_sites
    h = np.diag(np.asarray(model.site_energies, dtype=float)).astype(complex)
    for k in range(n - 1):
        h[k, k + 1] = -model.hopping
        h[k + 1, k] = -model.hopping
    return h


def diagonalize(h: np.ndarray) -> EigenSystem:
    """Eigen-decomposition with ascending energies; rejects non-Hermitian input."""
    h = np.asarray(h, dtype=complex)
    if h.ndim != 2 or h.shape[0] != h.shape[1]:
        raise InvalidModelError("Hamiltonian must be a square matrix")
    if np.max(np.abs(h - h.conj().T)) > 1e-10:
        raise InvalidModelError("Hamiltonian is not Hermitian")
    energies, vectors = np.linalg.eigh(h)
    return EigenSystem(energies=energies, vectors=vectors)


def _jump_operators(eig: EigenSystem, model: ExcitonModel):
    """(rate, L) pairs for downhill jumps plus the dephasing projectors."""
    n = eig.n
    ops = []
    for (j, i), rate in model.downhill_rates.items():
        if not (0 <= i < j < n):
            raise InvalidModelError(f"rate ({j}->{i}) outside the eigenbasis")
        if rate == 0:
            continue
        L = np.zeros((n, n), dtype=complex)
        L[i, j] = 1.0
        ops.append((rate, L))
    if model.pure_dephasing > 0:
        for a in range(n):
            P = np.zeros((n, n), dtype=complex)
            P[a, a] = 1.0
            ops.append((2.0 * model.pure_dephasing, P))
    return ops


def lindblad_generator(eig: EigenSystem, model: ExcitonModel) -> np.ndarray:
    """Dense superoperator L acting on vectorized eigenbasis matrices.

    L rho = -(i/hbar)[diag(eps), rho] + sum_k r_k (L_k rho L_k^+
            - 1/2 {L_k^+ L_k, rho}), trace-free column-wise.
    """
    n = eig.n
    eye = np.eye(n, dtype=complex)
    hd = np.diag(eig.energies).astype(complex)
    gen = (-1j / HBAR_EV_FS) * (np.kron(hd, eye) - np.kron(eye, hd.T))
    for rate, L in _jump_operators(eig, model):
        LdL = L.conj().T @ L
        gen += rate * (
            np.kron(L, L.conj())
            - 0.5 * (np.kron(LdL, eye) + np.kron(eye, LdL.T))
        )
    return gen


def apply_generator(gen: np.ndarray, rho: np.ndarray) -> np.ndarray:
    """Evaluate L rho for a vectorized superoperator."""
    n = rho.shape[0]
    return (gen @ rho.reshape(-1)).reshape(n, n)


def dephasing_rates(eig: EigenSystem, model: ExcitonModel) -> np.ndarray:
    """Secular linewidths gamma_ab in eV, consistent with the generator.

    For a != b: hbar * (1/2 (sum_out(a) + sum_out(b)) + 2*gamma_pd);
    for a == b: hbar * sum_out(a), the depopulation rate of |a><a|.
    """
    n = eig.n
    out = np.zeros(n)
    for (j, i), rate in model.downhill_rates.items():
        out[j] += rate
    gamma = 0.5 * (out[:, None] + out[None, :]) + 2.0 * model.pure_dephasing
    np.fill_diagonal(gamma, out)
    return HBAR_EV_FS * gamma


def _check_state(rho: np.ndarray):
    if np.max(np.abs(rho - rho.conj().T)) > HERMITICITY_TOL:
        raise InvalidInputError("initial state is not Hermitian")
    if abs(np.trace(rho).real - 1.0) > 1e-6:
        raise InvalidInputError("initial state is not trace-normalized")


def propagate(
    gen: np.ndarray,
    rho0: np.ndarray,
    horizon: float,
    dt: float,
) -> DensityMatrixTimeline:
    """Propagate rho0 on a uniform grid via the step propagator exp(gen*dt).

    The matrix exponential of the (time-independent) generator is computed
    once and applied repeatedly, so step halving reproduces the same
    samples to rounding error.
    """
    if dt <= 0:
        raise InvalidInputError("dt must be positive")
    if horizon < 0:
        raise InvalidInputError("horizon must be non-negative")
    rho0 = np.asarray(rho0, dtype=complex)
    _check_state(rho0)
    n = rho0.shape[0]
    n_steps = int(round(horizon / dt))
    samples = np.empty((n_steps + 1, n, n), dtype=complex)
    samples[0] = rho0
    if n_steps > 0:
        step = expm(gen * dt)
        vec = rho0.reshape(-1)
        for k in range(1, n_steps + 1):
            vec = step @ vec
            samples[k] = vec.reshape(n, n)
    # re-symmetrize rounding noise; keeps the Hermiticity invariant tight
    samples = 0.5 * (samples + np.conj(np.swapaxes(samples, 1, 2)))
    return DensityMatrixTimeline(t0=0.0, dt=dt, samples=samples)


def site_localized_state(eig: EigenSystem, site: int) -> np.ndarray:
    """Pure state |site><site| expressed in the eigenbasis."""
    if not (0 <= site < eig.n):
        raise InvalidInputError(f"site index {site} out of range")
    u = eig.vectors[site, :]  # <site|e_a> components
    return np.outer(u.conj(), u)


class TimelineInterpolator:
    """Cubic interpolation of every rho entry over the timeline grid.

    Reads before t0 return the zero matrix (the excited manifold is empty
    before the pump); reads beyond the horizon raise.
    """

    def __init__(self, timeline: DensityMatrixTimeline):
        from scipy.interpolate import CubicSpline

        self._timeline = timeline
        t = timeline.times
        n = timeline.samples.shape[1]
        flat = timeline.samples.reshape(len(t), n * n)
        if len(t) >= 4:
            self._spline = CubicSpline(t, flat, axis=0)
        else:
            self._spline = None
        self._n = n

    @property
    def t0(self) -> float:
        return self._timeline.t0

    @property
    def t_end(self) -> float:
        return self._timeline.t_end

    def at(self, t):
        """rho(t) for scalar or 1-D array t; shape (..., n, n)."""
        t = np.asarray(t, dtype=float)
        scalar = t.ndim == 0
        t = np.atleast_1d(t)
        if np.any(t > self.t_end + 1e-9):
            raise TimelineRangeError(
                f"t={t.max():.3f} fs beyond propagated horizon {self.t_end:.3f} fs"
            )
        before = t < self.t0 - 1e-9
        t_eval = np.where(before, self.t0, t)
        if self._spline is not None:
            out = self._spline(t_eval).reshape(len(t), self._n, self._n)
        else:
            idx = np.clip(
                np.round((t_eval - self.t0) / self._timeline.dt).astype(int),
                0,
                len(self._timeline.times) - 1,
            )
            out = self._timeline.samples[idx]
        out[before] = 0.0
        return out[0] if scalar else out
