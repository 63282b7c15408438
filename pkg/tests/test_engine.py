"""Signal-engine tests: overlap factor, closed form vs quadrature, scans."""

import numpy as np
import pytest
from scipy.integrate import quad

import qraman.engine as engine_mod
from qraman.constants import HBAR_EV_FS as HBAR
from qraman.engine import PolarizabilityMatrix, RamanEngine, overlap_w
from qraman.errors import ConvergenceError, InvalidInputError, UnsupportedKindError
from qraman.excitons import (
    ExcitonModel,
    build_site_hamiltonian,
    diagonalize,
    lindblad_generator,
    propagate,
)
from qraman.photons import PhotonSourceSpec, phi_tilde

from conftest import make_engine


def two_level_engine(gpd=0.001, sigma0=1e-3, **kw):
    model = ExcitonModel(
        site_energies=(2.0, 2.1), hopping=0.0, downhill_rates={}, pure_dephasing=gpd
    )
    eig = diagonalize(build_site_hamiltonian(model))
    gen = lindblad_generator(eig, model)
    rho0 = np.diag([1.0, 0.0]).astype(complex)
    tl = propagate(gen, rho0, horizon=400.0, dt=1.0)
    spec = PhotonSourceSpec(kind="entangled", sigma0=sigma0, tau0=25.0)
    return RamanEngine(eig, model, tl, spec, **kw), eig, spec


class TestOverlapW:
    def test_reference_point(self):
        # a = Omega*tau0/hbar = 4 at zero delay: W = 4/(4+4i)
        val = overlap_w(4 * HBAR / 25.0, 0.0, 25.0)
        assert val == pytest.approx(0.5 - 0.5j, abs=1e-12)
        assert abs(val) == pytest.approx(1 / np.sqrt(2), abs=1e-12)

    def test_unity_on_resonance(self):
        assert overlap_w(0.0, 0.0, 25.0) == pytest.approx(1.0)

    @pytest.mark.parametrize(
        "omega,delta_t", [(0.05, 0.0), (0.02, 10.0), (-0.03, -15.0), (0.0, 5.0)]
    )
    def test_against_quadrature(self, omega, delta_t):
        # literal overlap of the shifted normalized profiles
        tau0 = 25.0
        a = omega * tau0 / HBAR
        d = delta_t / tau0

        def f(x, part):
            val = np.exp(-1j * a * x) * phi_tilde(x) * phi_tilde(x + d)
            return val.real if part == "re" else val.imag

        pts = [0.0, -d]
        re, _ = quad(f, -5, 30, args=("re",), points=pts, limit=400)
        im, _ = quad(f, -5, 30, args=("im",), points=pts, limit=400)
        assert abs((re + 1j * im) - overlap_w(omega, delta_t, tau0)) < 1e-8

    def test_delay_decay_symmetric_in_magnitude(self):
        assert abs(overlap_w(0.02, 12.0, 25.0)) == pytest.approx(
            abs(overlap_w(0.02, -12.0, 25.0)), rel=1e-12
        )

    def test_invalid_tau0(self):
        with pytest.raises(InvalidInputError):
            overlap_w(0.1, 0.0, -1.0)


class TestPolarizability:
    def test_ones(self):
        assert np.all(PolarizabilityMatrix.ones(3).values == 1.0)

    def test_rejects_non_square(self):
        with pytest.raises(InvalidInputError):
            PolarizabilityMatrix(np.ones((2, 3)))


class TestImpulsivePath:
    def test_zero_before_excitation(self, entangled_engine):
        # all density-matrix reads fall before the excitation time
        w = np.linspace(-0.2, 0.2, 11)
        assert np.all(entangled_engine.signal_impulsive(w, -300.0, -300.0) == 0.0)

    def test_single_transition_lorentzian_width(self):
        # isolated coherence peak: FWHM of |S|^2 equals 2*(sigma0 + gamma)
        engine, eig, spec = two_level_engine()
        gap = eig.gaps[1, 0]
        width = spec.sigma0 + engine.gamma[1, 0]
        w = np.linspace(gap - 8 * width, gap + 8 * width, 2001)
        mag2 = np.abs(engine.signal_impulsive(w, 200.0, 200.0)) ** 2
        half = np.where(mag2 >= 0.5 * mag2.max())[0]
        fwhm = w[half[-1]] - w[half[0]]
        assert fwhm == pytest.approx(2 * width, rel=0.02)
        assert w[np.argmax(mag2)] == pytest.approx(gap, abs=width / 10)

    def test_stationary_state_time_shift_invariance(self):
        engine, _, _ = two_level_engine()
        w = np.linspace(-0.2, 0.2, 21)
        a = engine.signal_impulsive(w, 150.0, 150.0)
        b = engine.signal_impulsive(w, 250.0, 250.0)
        assert np.allclose(a, b, rtol=1e-10)

    def test_mirror_exchange_even_at_zero_delay(self):
        engine, _, _ = two_level_engine(exchange="mirror")
        w = np.linspace(-0.2, 0.2, 41)
        s = engine.signal_impulsive(w, 200.0, 200.0)
        assert np.max(np.abs(s - s[::-1])) < 1e-14 * np.max(np.abs(s))

    def test_requires_entangled_kind(self, classical_engine):
        with pytest.raises(UnsupportedKindError):
            classical_engine.signal_impulsive(0.1, 100.0, 100.0)

    def test_scalar_input_gives_scalar(self, entangled_engine):
        out = entangled_engine.signal_impulsive(0.06, 300.0, 300.0)
        assert isinstance(out, complex)

    def test_unknown_exchange_rejected(self):
        with pytest.raises(InvalidInputError):
            two_level_engine(exchange="bogus")


class TestNumericPath:
    """The quadrature engine must reproduce the closed form when the
    frequency-domain overlap dressing is switched off (the kernel itself is
    overlap-free), which validates envelope, carrier split, axes and weights
    in one shot."""

    @staticmethod
    def _stationary_engine(**kw):
        # short-memory source (large sigma0) so the finite timeline covers
        # the full response history
        return make_engine(
            kind="entangled",
            pure_dephasing=0.0005,
            rates=False,
            horizon=1200.0,
            dt=2.0,
            rho0=np.diag([0.5, 0.3, 0.2]).astype(complex),
            sigma0=0.01,
            **kw,
        )

    def test_matches_closed_form_without_overlap_dressing(self, monkeypatch):
        engine = self._stationary_engine()
        w = np.linspace(-0.25, 0.25, 41)
        num = engine.signal_numeric(w, 500.0, 500.0)
        monkeypatch.setattr(
            engine_mod,
            "overlap_w",
            lambda omega, dT, tau0: np.ones_like(np.asarray(omega, dtype=float))
            * (1.0 + 0.0j),
        )
        imp = engine.signal_impulsive(w, 500.0, 500.0)
        assert np.linalg.norm(num - imp) / np.linalg.norm(imp) < 3e-3

    def test_step_halving_converged(self):
        engine = self._stationary_engine()
        w = np.linspace(-0.2, 0.2, 5)
        out = engine.signal_numeric(w, 500.0, 500.0, check_halving=True)
        assert np.all(np.isfinite(out))

    def test_step_halving_raises_when_coarse(self):
        engine = self._stationary_engine(quad_step_divisor=1)
        with pytest.raises(ConvergenceError):
            engine.signal_numeric(
                np.array([0.0591407535684438]),
                500.0,
                500.0,
                check_halving=True,
                halving_tol=1e-4,
            )

    def test_classical_magnitude_symmetric(self):
        engine = make_engine(kind="classical", horizon=900.0)
        w = np.linspace(-0.25, 0.25, 41)
        s = np.abs(engine.signal_classical(w, 400.0))
        assert np.max(np.abs(s - s[::-1])) < 1e-3 * s.max()

    def test_classical_guard(self, entangled_engine):
        with pytest.raises(UnsupportedKindError):
            entangled_engine.signal_classical(0.1, 100.0)


class TestScans:
    def test_single_cell_matches_direct_call(self, entangled_engine):
        grid = entangled_engine.spectrum_2d([0.06], [300.0])
        direct = entangled_engine.signal_impulsive(np.array([0.06]), 300.0, 300.0)
        assert grid.values[0, 0] == direct[0]

    def test_worker_count_is_bitwise_irrelevant(self, entangled_engine):
        w = np.linspace(-0.2, 0.2, 21)
        t = np.linspace(0.0, 400.0, 9)
        serial = entangled_engine.spectrum_2d(w, t, workers=0)
        threaded = entangled_engine.spectrum_2d(w, t, workers=4)
        assert np.array_equal(serial.values, threaded.values)

    def test_empty_axis_rejected(self, entangled_engine):
        with pytest.raises(InvalidInputError):
            entangled_engine.spectrum_2d([], [100.0])

    def test_grid_metadata(self, entangled_engine):
        grid = entangled_engine.spectrum_2d([0.06], [300.0], delta_t=5.0)
        assert grid.meta["kind"] == "entangled"
        assert grid.meta["delta_t_fs"] == 5.0

    def test_hom_scan_envelope_monotone_in_tail(self, entangled_engine):
        tau0 = entangled_engine.spec.tau0
        dts = np.arange(0.0, 4 * tau0, 1.0)
        scan = entangled_engine.hom_scan(0.0591407535684438, 300.0, dts)
        tail = scan.envelope[dts >= 2 * tau0]
        assert np.all(np.diff(tail) <= 1e-12)
        assert np.all(scan.envelope > 0)

    def test_hom_scan_envelope_bounds_signal(self, entangled_engine):
        dts = np.linspace(-50.0, 50.0, 41)
        scan = entangled_engine.hom_scan(0.0591407535684438, 300.0, dts)
        assert np.all(np.abs(scan.values) <= scan.envelope + 1e-15)

    def test_hom_scan_requires_entangled(self, classical_engine):
        with pytest.raises(UnsupportedKindError):
            classical_engine.hom_scan(0.06, 300.0, [0.0, 1.0])
