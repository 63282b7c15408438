"""Turn a validated run configuration into propagation, scans, and CSVs.

Outputs per mode:

* spectrum: ``spectrum.csv`` (omega_minus_eV, T_fs, re, im, abs)
* homscan:  ``homscan.csv``  (dT_fs, re, im, abs, envelope)
* dynamics: ``dynamics.csv`` (t_fs, then re/im columns per rho entry)
* compare:  one spectrum table per source kind, shared axes
* validate: ``validation.txt`` invariant report

Every run also writes ``effective_config.ini``, the fully resolved
configuration echo.  CSV bodies contain no timestamps, so identical
configurations yield byte-identical files.
"""

from __future__ import annotations

import hashlib
import os

import numpy as np

from . import __version__
from .config import RunConfig
from .engine import PolarizabilityMatrix, RamanEngine
from .errors import ConfigError
from .excitons import (
    ExcitonModel,
    build_site_hamiltonian,
    diagonalize,
    lindblad_generator,
    propagate,
    site_localized_state,
)
from .photons import PhotonSourceSpec


def _fmt(x: float) -> str:
    return format(float(x), ".12g")


def build_model(cfg: RunConfig) -> ExcitonModel:
    m = cfg.molecule
    rates = {(j - 1, i - 1): k for (j, i), k in m.rates.items()}
    return ExcitonModel(
        site_energies=tuple(m.site_energies),
        hopping=m.hopping,
        downhill_rates=rates,
        pure_dephasing=m.pure_dephasing,
    )


def initial_state(cfg: RunConfig, eig) -> np.ndarray:
    selector, _, idx = cfg.molecule.initial_state.partition(":")
    k = int(idx) - 1
    if selector == "site":
        return site_localized_state(eig, k)
    rho = np.zeros((eig.n, eig.n), dtype=complex)
    rho[k, k] = 1.0
    return rho


def default_horizon(cfg: RunConfig) -> float:
    """Timeline horizon covering every rho read of the configured scan."""
    s, p = cfg.scan, cfg.photons
    if s.mode == "homscan":
        latest = s.t_fixed + max(abs(s.dt_min), abs(s.dt_max))
    elif s.mode == "dynamics":
        latest = s.t_max
    else:
        latest = s.t_max + abs(s.delta_t)
    guard = max(10.0 * p.tau0, 100.0)
    return latest + guard


def build_engine(cfg: RunConfig, kind: str | None = None) -> RamanEngine:
    model = build_model(cfg)
    eig = diagonalize(build_site_hamiltonian(model))
    gen = lindblad_generator(eig, model)
    horizon = cfg.numerics.horizon or default_horizon(cfg)
    timeline = propagate(gen, initial_state(cfg, eig), horizon=horizon, dt=cfg.numerics.dt)
    spec = PhotonSourceSpec(
        kind=kind or cfg.photons.kind,
        omega_plus=cfg.photons.omega_plus,
        sigma0=cfg.photons.sigma0,
        tau0=cfg.photons.tau0,
        sigma_tilde0=cfg.photons.sigma_tilde0,
    )
    alpha = None
    if cfg.molecule.alpha is not None:
        alpha = PolarizabilityMatrix(np.asarray(cfg.molecule.alpha, dtype=complex))
    return RamanEngine(
        eig,
        model,
        timeline,
        spec,
        alpha=alpha,
        exchange=cfg.numerics.exchange,
        quad_step_divisor=cfg.numerics.quad_divisor,
        quad_window=cfg.numerics.quad_window,
        quad_s_max=cfg.numerics.quad_s_max,
        theta_restriction=cfg.numerics.theta_restriction,
    )


def _provenance(cfg: RunConfig, mode: str, engine_path: str, kind: str) -> str:
    digest = hashlib.sha256(cfg.to_text().encode()).hexdigest()[:16]
    return (
        f"# qraman {__version__} mode={mode} engine={engine_path} "
        f"kind={kind} config={digest}"
    )


def _write_csv(path: str, provenance: str, header: list[str], rows) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(provenance + "\n")
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(_fmt(v) for v in row) + "\n")


def _write_effective_config(cfg: RunConfig, out_dir: str) -> None:
    with open(
        os.path.join(out_dir, "effective_config.ini"), "w", encoding="utf-8", newline="\n"
    ) as fh:
        fh.write(cfg.to_text())


def _spectrum_rows(grid):
    for i, t in enumerate(grid.time_axis):
        for j, w in enumerate(grid.omega_axis):
            v = grid.values[i, j]
            yield (w, t, v.real, v.imag, abs(v))


def run_spectrum(cfg: RunConfig, out_dir: str, kind: str | None = None, name: str = "spectrum") -> str:
    s, n = cfg.scan, cfg.numerics
    use_kind = kind or cfg.photons.kind
    engine = build_engine(cfg, kind=use_kind)
    path = "impulsive" if (n.engine == "impulsive" and use_kind == "entangled") else "numeric"
    omega = np.linspace(s.omega_min, s.omega_max, s.omega_count)
    times = np.linspace(s.t_min, s.t_max, s.t_count)
    grid = engine.spectrum_2d(omega, times, delta_t=s.delta_t, path=path, workers=n.workers or os.cpu_count())
    out = os.path.join(out_dir, f"{name}.csv")
    _write_csv(
        out,
        _provenance(cfg, "spectrum", path, use_kind),
        ["omega_minus_eV", "T_fs", "re", "im", "abs"],
        _spectrum_rows(grid),
    )
    return out


def run_homscan(cfg: RunConfig, out_dir: str) -> str:
    s = cfg.scan
    engine = build_engine(cfg, kind="entangled")
    dts = np.linspace(s.dt_min, s.dt_max, s.dt_count)
    scan = engine.hom_scan(s.omega_minus, s.t_fixed, dts)
    out = os.path.join(out_dir, "homscan.csv")
    rows = (
        (d, v.real, v.imag, abs(v), e)
        for d, v, e in zip(scan.dt_axis, scan.values, scan.envelope)
    )
    _write_csv(
        out,
        _provenance(cfg, "homscan", "impulsive", "entangled"),
        ["dT_fs", "re", "im", "abs", "envelope"],
        rows,
    )
    return out


def run_dynamics(cfg: RunConfig, out_dir: str) -> str:
    model = build_model(cfg)
    eig = diagonalize(build_site_hamiltonian(model))
    gen = lindblad_generator(eig, model)
    horizon = cfg.numerics.horizon or cfg.scan.t_max
    timeline = propagate(gen, initial_state(cfg, eig), horizon=horizon, dt=cfg.numerics.dt)
    n = eig.n
    header = ["t_fs"]
    for a in range(n):
        for b in range(n):
            header += [f"rho_{a + 1}_{b + 1}_re", f"rho_{a + 1}_{b + 1}_im"]
    rows = []
    for t, rho in zip(timeline.times, timeline.samples):
        row = [t]
        for a in range(n):
            for b in range(n):
                row += [rho[a, b].real, rho[a, b].imag]
        rows.append(row)
    out = os.path.join(out_dir, "dynamics.csv")
    _write_csv(out, _provenance(cfg, "dynamics", "lindblad", "-"), header, rows)
    return out


def run_compare(cfg: RunConfig, out_dir: str) -> list[str]:
    written = []
    for kind in ("entangled", "uncorrelated", "classical"):
        written.append(run_spectrum(cfg, out_dir, kind=kind, name=f"spectrum_{kind}"))
    return written


def run_validate(cfg: RunConfig, out_dir: str) -> bool:
    from .validate import run_all

    ok, results = run_all()
    path = os.path.join(out_dir, "validation.txt")
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(f"# qraman {__version__} invariant suite\n")
        for r in results:
            fh.write(r.line() + "\n")
        fh.write("RESULT: " + ("PASS" if ok else "FAIL") + "\n")
    return ok


def run(cfg: RunConfig, out_dir: str, mode: str | None = None) -> bool:
    """Execute the configured mode; returns False on validation failure."""
    mode = mode or cfg.scan.mode
    os.makedirs(out_dir, exist_ok=True)
    _write_effective_config(cfg, out_dir)
    if mode == "spectrum":
        run_spectrum(cfg, out_dir)
    elif mode == "homscan":
        run_homscan(cfg, out_dir)
    elif mode == "dynamics":
        run_dynamics(cfg, out_dir)
    elif mode == "compare":
        run_compare(cfg, out_dir)
    elif mode == "validate":
        return run_validate(cfg, out_dir)
    else:
        raise ConfigError(f"unknown mode {mode!r}")
    return True
