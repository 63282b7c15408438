"""Self-contained invariant suite behind the ``validate`` CLI mode.

Each check returns its measured value and bound so the report doubles as
a numerical health summary.  The suite needs no input files and runs in
well under a minute.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad
from scipy.linalg import expm

from .constants import HBAR_EV_FS as HBAR
from .engine import PolarizabilityMatrix, RamanEngine, overlap_w
from .excitons import (
    ExcitonModel,
    build_site_hamiltonian,
    diagonalize,
    lindblad_generator,
    propagate,
    site_localized_state,
)
from .photons import JointAmplitude, PhotonSourceSpec, jsa, jta, pump_lineshape, sum_lineshape


@dataclass(frozen=True)
class CheckResult:
    name: str
    ok: bool
    measured: float
    bound: float
    note: str = ""

    def line(self) -> str:
        status = "PASS" if self.ok else "FAIL"
        note = f"  ({self.note})" if self.note else ""
        return f"{status}  {self.name}: measured {self.measured:.3e} vs bound {self.bound:.3e}{note}"


def _reference_trimer(pure_dephasing: float = 0.003, rates: bool = True) -> ExcitonModel:
    return ExcitonModel(
        site_energies=(2.25, 2.10, 2.10),
        hopping=0.03,
        downhill_rates=(
            {(2, 1): 1 / 200, (1, 0): 1 / 500, (2, 0): 1 / 1000} if rates else {}
        ),
        pure_dephasing=pure_dephasing,
    )


def check_lindblad_propagation() -> list[CheckResult]:
    model = _reference_trimer()
    eig = diagonalize(build_site_hamiltonian(model))
    gen = lindblad_generator(eig, model)
    rho0 = site_localized_state(eig, 0)
    tl = propagate(gen, rho0, horizon=900.0, dt=1.0)
    traces = np.einsum("tii->t", tl.samples).real
    trace_dev = float(np.max(np.abs(traces - 1.0)))
    herm_dev = float(
        np.max(np.abs(tl.samples - np.conj(np.swapaxes(tl.samples, 1, 2))))
    )
    min_eig = float(min(np.linalg.eigvalsh(r).min() for r in tl.samples))
    # propagator against the direct superoperator exponential at t = 500 fs
    direct = (expm(gen * 500.0) @ rho0.reshape(-1)).reshape(3, 3)
    prop_dev = float(np.max(np.abs(direct - tl.samples[500])))
    return [
        CheckResult("lindblad trace preservation", trace_dev < 1e-10, trace_dev, 1e-10),
        CheckResult("lindblad hermiticity", herm_dev < 1e-10, herm_dev, 1e-10),
        CheckResult("lindblad positivity", min_eig > -1e-10, min_eig, -1e-10, "min eigenvalue"),
        CheckResult("propagator vs superoperator exponential", prop_dev < 1e-7, prop_dev, 1e-7),
    ]


def check_overlap_w() -> list[CheckResult]:
    tau0 = 25.0
    worst = 0.0
    for omega, d_t in ((0.0, 0.0), (0.05, 0.0), (0.1, 12.0), (-0.08, -30.0), (0.2, 7.0)):
        def integrand_re(x):
            phi1 = 2.0 * np.exp(-2.0 * x) if x >= 0 else 0.0
            x2 = x + d_t / tau0
            phi2 = 2.0 * np.exp(-2.0 * x2) if x2 >= 0 else 0.0
            return phi1 * phi2 * np.cos(omega * tau0 * x / HBAR)

        def integrand_im(x):
            phi1 = 2.0 * np.exp(-2.0 * x) if x >= 0 else 0.0
            x2 = x + d_t / tau0
            phi2 = 2.0 * np.exp(-2.0 * x2) if x2 >= 0 else 0.0
            return -phi1 * phi2 * np.sin(omega * tau0 * x / HBAR)

        lo = max(0.0, -d_t / tau0)
        re = quad(integrand_re, lo, lo + 30.0, limit=400)[0]
        im = quad(integrand_im, lo, lo + 30.0, limit=400)[0]
        closed = complex(overlap_w(omega, d_t, tau0))
        worst = max(worst, abs(closed - (re + 1j * im)))
    return [CheckResult("overlap W closed form vs quadrature", worst < 1e-8, worst, 1e-8)]


def check_fourier_consistency() -> list[CheckResult]:
    """Closed-form time-domain pair amplitude vs direct Fourier integrals.

    In rotated frequency variables u = omega_s + omega_i (phase matching)
    and v = omega_s - omega_i (pump) the spectral amplitude factorizes, so
    the 2D transform splits into two adaptive 1D integrals.
    """
    spec = PhotonSourceSpec(kind="entangled", sigma0=0.01, tau0=10.0)
    b = 2.0 * HBAR / spec.tau0  # phase-matching half-width

    def lorentz_cos(width, t, cutoff):
        """2 * int_0^U cos(u t / hbar) / (u^2 + width^2) du, oscillatory rule."""
        return 2.0 * quad(
            lambda u: 1.0 / (u**2 + width**2),
            0.0,
            cutoff,
            weight="cos",
            wvar=t / HBAR,
            limit=2000,
        )[0]

    def transform(t1, t2):
        # exp(-i(w_s t1 + w_i t2)/hbar) in rotated variables; tp includes
        # the built-in exp(i u tau0 / 2 hbar) phase-matching phase.  The
        # even Lorentzian parts integrate numerically; the odd 1/u part of
        # the phase-matching line uses the standard Fourier-pair
        # int u/(u^2+b^2) e^{iut/hbar} du = i pi sign(t) e^{-b|t|/hbar},
        # whose tail would otherwise dominate the truncation error.
        tp = 0.5 * spec.tau0 - 0.5 * (t1 + t2)
        tm = -0.5 * (t1 - t2)
        iu = b**2 * lorentz_cos(b, tp, 3000.0 * b) - np.pi * b * np.sign(tp) * np.exp(
            -b * abs(tp) / HBAR
        )
        iv = spec.sigma0 * lorentz_cos(spec.sigma0, tm, 5000.0 * spec.sigma0)
        carrier = np.exp(-1j * (spec.carrier_s * t1 + spec.carrier_i * t2) / HBAR)
        return 0.5 * iu * iv * carrier / (4.0 * np.pi**2 * HBAR**2)

    points = ((12.0, 4.0), (16.0, 2.0), (9.0, 8.0), (6.0, 1.0))  # last: before onset
    ref = max(abs(complex(jta(spec, t1, t2))) for t1, t2 in points)
    worst = max(
        abs(transform(t1, t2) - complex(jta(spec, t1, t2))) / ref for t1, t2 in points
    )
    return [CheckResult("time-domain amplitude vs Fourier integral", worst < 1e-6, worst, 1e-6)]


def check_schmidt_witness() -> list[CheckResult]:
    axis_s = np.linspace(0.13, 0.17, 64)
    axis_i = np.linspace(0.13, 0.17, 64)
    ent = PhotonSourceSpec(kind="entangled", sigma0=2e-3, tau0=25.0)
    grid_e = jsa(ent, axis_s[:, None], axis_i[None, :])
    sv_e = np.linalg.svd(grid_e, compute_uv=False)
    unc = PhotonSourceSpec(kind="uncorrelated", sigma0=2e-3, tau0=25.0)
    grid_u = JointAmplitude(unc).freq(axis_s[:, None], axis_i[None, :])
    sv_u = np.linalg.svd(grid_u, compute_uv=False)
    ratio_e = float(sv_e[1] / sv_e[0])
    ratio_u = float(sv_u[1] / sv_u[0])
    return [
        CheckResult("entangled kernel second Schmidt weight", ratio_e > 0.1, ratio_e, 0.1, "> bound"),
        CheckResult("factorized kernel rank-1", ratio_u < 1e-10, ratio_u, 1e-10),
    ]


def _default_engine(kind: str, pure_dephasing=0.003, rates=True, horizon=800.0):
    model = _reference_trimer(pure_dephasing, rates)
    eig = diagonalize(build_site_hamiltonian(model))
    gen = lindblad_generator(eig, model)
    tl = propagate(gen, site_localized_state(eig, 0), horizon=horizon, dt=1.0)
    return RamanEngine(eig, model, tl, PhotonSourceSpec(kind=kind))


def check_engine_agreement() -> list[CheckResult]:
    model = _reference_trimer(pure_dephasing=0.0005, rates=False)
    eig = diagonalize(build_site_hamiltonian(model))
    gen = lindblad_generator(eig, model)
    rho0 = np.diag([0.5, 0.3, 0.2]).astype(complex)
    tl = propagate(gen, rho0, horizon=3200.0, dt=2.0)
    eng = RamanEngine(eig, model, tl, PhotonSourceSpec(), quad_s_max=5300.0)
    w = np.linspace(-0.25, 0.25, 41)
    imp = eng.signal_impulsive(w, 2500.0, 2500.0)
    num = eng.signal_numeric(w, 2500.0, 2500.0)
    rel = float(np.linalg.norm(num - imp) / np.linalg.norm(imp))
    return [CheckResult("impulsive vs quadrature path (impulsive regime)", rel <= 0.10, rel, 0.10)]


def check_classical_symmetry() -> list[CheckResult]:
    eng = _default_engine("classical")
    w = np.linspace(-0.25, 0.25, 81)
    s = np.abs(eng.signal_numeric(w, 600.0, 600.0))
    dev = float(np.max(np.abs(s - s[::-1])) / np.max(s))
    return [CheckResult("classical Stokes/anti-Stokes symmetry", dev < 0.05, dev, 0.05)]


def check_hom_envelope() -> list[CheckResult]:
    eng = _default_engine("entangled")
    dts = np.arange(0.0, 120.0, 1.0)
    scan = eng.hom_scan(0.13, 600.0, dts)
    env = scan.envelope
    beyond = env[dts >= 2 * eng.spec.tau0]
    rises = float(np.max(np.diff(beyond))) if len(beyond) > 1 else 0.0
    return [CheckResult("HOM envelope non-increasing beyond 2*tau0", rises <= 1e-12, rises, 1e-12)]


def check_determinism() -> list[CheckResult]:
    eng = _default_engine("entangled")
    w = np.linspace(-0.2, 0.2, 21)
    ts = np.linspace(100.0, 700.0, 7)
    serial = eng.spectrum_2d(w, ts, workers=1).values
    pooled = eng.spectrum_2d(w, ts, workers=4).values
    same = bool(np.array_equal(serial, pooled))
    return [CheckResult("scan determinism across worker counts", same, 0.0 if same else 1.0, 0.0, "bitwise")]


def run_all() -> tuple[bool, list[CheckResult]]:
    results = []
    results += check_lindblad_propagation()
    results += check_overlap_w()
    results += check_fourier_consistency()
    results += check_schmidt_witness()
    results += check_engine_agreement()
    results += check_classical_symmetry()
    results += check_hom_envelope()
    results += check_determinism()
    return all(r.ok for r in results), results
