"""Declarative INI run configuration: parsing, validation, echoing.

Sections: [molecule], [photons], [scan], [numerics].  Every key has a
default; unknown keys and duplicate keys are rejected so typos cannot
silently fall back to defaults.  ``RunConfig.to_text`` writes the fully
resolved configuration, and ``parse_config(to_text(cfg))`` round-trips.
"""

from __future__ import annotations

import configparser
import io
from dataclasses import dataclass, field

from .engine import EXCHANGE_VARIANTS
from .errors import ConfigError
from .photons import KINDS

MODES = ("spectrum", "homscan", "dynamics", "compare", "validate")


@dataclass
class MoleculeConfig:
    site_energies: tuple = (2.25, 2.10, 2.10)  # eV
    hopping: float = 0.03  # eV, magnitude; the builder applies -J
    # downhill rates fs^-1 keyed by 1-based "upper->lower" eigenstate labels
    rates: dict = field(
        default_factory=lambda: {(3, 2): 1 / 200, (2, 1): 1 / 500, (3, 1): 1 / 1000}
    )
    pure_dephasing: float = 0.003  # fs^-1
    initial_state: str = "site:1"  # site:<1-based index> or eigen:<1-based index>
    alpha: tuple | None = None  # optional Hermitian matrix rows


@dataclass
class PhotonsConfig:
    kind: str = "entangled"
    omega_plus: float = 0.3  # eV
    sigma0: float = 1e-3  # eV
    tau0: float = 25.0  # fs
    sigma_tilde0: float | None = None  # eV; default hbar/(2 tau0)


@dataclass
class ScanConfig:
    mode: str = "spectrum"
    omega_min: float = -0.25  # eV
    omega_max: float = 0.25  # eV
    omega_count: int = 241
    t_min: float = 0.0  # fs
    t_max: float = 700.0  # fs
    t_count: int = 81
    delta_t: float = 0.0  # fs, optical delay for spectrum/compare
    omega_minus: float = 0.13  # eV, fixed shift for homscan
    t_fixed: float = 0.0  # fs, fixed arrival time for homscan
    dt_min: float = -75.0  # fs, delay axis for homscan
    dt_max: float = 75.0
    dt_count: int = 301


@dataclass
class NumericsConfig:
    dt: float = 1.0  # fs timeline step
    horizon: float | None = None  # fs; default derived from the scan
    engine: str = "impulsive"  # impulsive | numeric
    quad_divisor: int = 40
    quad_window: float = 6.0
    quad_s_max: float = 2000.0  # fs
    theta_restriction: bool = True
    exchange: str = "delay"
    workers: int = 0  # 0 = machine parallelism


@dataclass
class RunConfig:
    molecule: MoleculeConfig = field(default_factory=MoleculeConfig)
    photons: PhotonsConfig = field(default_factory=PhotonsConfig)
    scan: ScanConfig = field(default_factory=ScanConfig)
    numerics: NumericsConfig = field(default_factory=NumericsConfig)

    def to_text(self) -> str:
        """Serialize the fully resolved configuration (round-trips)."""
        out = io.StringIO()
        m = self.molecule
        out.write("[molecule]\n")
        out.write("site_energies = " + ", ".join(_fmt(e) for e in m.site_energies) + "\n")
        out.write(f"hopping = {_fmt(m.hopping)}\n")
        out.write(
            "rates = "
            + ", ".join(f"{j}->{i}:{_fmt(k)}" for (j, i), k in sorted(m.rates.items()))
            + "\n"
        )
        out.write(f"pure_dephasing = {_fmt(m.pure_dephasing)}\n")
        out.write(f"initial_state = {m.initial_state}\n")
        if m.alpha is not None:
            out.write(
                "alpha = "
                + "; ".join(", ".join(_fmt(v) for v in row) for row in m.alpha)
                + "\n"
            )
        p = self.photons
        out.write("\n[photons]\n")
        out.write(f"kind = {p.kind}\n")
        out.write(f"omega_plus = {_fmt(p.omega_plus)}\n")
        out.write(f"sigma0 = {_fmt(p.sigma0)}\n")
        out.write(f"tau0 = {_fmt(p.tau0)}\n")
        if p.sigma_tilde0 is not None:
            out.write(f"sigma_tilde0 = {_fmt(p.sigma_tilde0)}\n")
        s = self.scan
        out.write("\n[scan]\n")
        out.write(f"mode = {s.mode}\n")
        for key in (
            "omega_min",
            "omega_max",
            "omega_count",
            "t_min",
            "t_max",
            "t_count",
            "delta_t",
            "omega_minus",
            "t_fixed",
            "dt_min",
            "dt_max",
            "dt_count",
        ):
            out.write(f"{key} = {_fmt(getattr(s, key))}\n")
        n = self.numerics
        out.write("\n[numerics]\n")
        out.write(f"dt = {_fmt(n.dt)}\n")
        if n.horizon is not None:
            out.write(f"horizon = {_fmt(n.horizon)}\n")
        out.write(f"engine = {n.engine}\n")
        out.write(f"quad_divisor = {n.quad_divisor}\n")
        out.write(f"quad_window = {_fmt(n.quad_window)}\n")
        out.write(f"quad_s_max = {_fmt(n.quad_s_max)}\n")
        out.write(f"theta_restriction = {'true' if n.theta_restriction else 'false'}\n")
        out.write(f"exchange = {n.exchange}\n")
        out.write(f"workers = {n.workers}\n")
        return out.getvalue()


def _fmt(x) -> str:
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, int):
        return str(x)
    return format(float(x), ".12g")


def _parse_float(section: str, key: str, raw: str) -> float:
    try:
        return float(raw)
    except ValueError:
        raise ConfigError(f"[{section}] {key}: not a number: {raw!r}") from None


def _parse_int(section: str, key: str, raw: str) -> int:
    try:
        return int(raw)
    except ValueError:
        raise ConfigError(f"[{section}] {key}: not an integer: {raw!r}") from None


def _parse_bool(section: str, key: str, raw: str) -> bool:
    low = raw.strip().lower()
    if low in ("true", "yes", "on", "1"):
        return True
    if low in ("false", "no", "off", "0"):
        return False
    raise ConfigError(f"[{section}] {key}: not a boolean: {raw!r}")


def _parse_rates(raw: str) -> dict:
    rates = {}
    for part in raw.split(","):
        part = part.strip()
        if not part:
            continue
        try:
            pair, value = part.split(":")
            upper, lower = pair.split("->")
            j, i = int(upper), int(lower)
            k = float(value)
        except ValueError:
            raise ConfigError(
                f"[molecule] rates: expected 'j->i:rate' entries, got {part!r}"
            ) from None
        if j <= i:
            raise ConfigError(
                f"[molecule] rates: {part!r} is not downhill (need upper > lower)"
            )
        if k < 0:
            raise ConfigError(f"[molecule] rates: negative rate in {part!r}")
        if (j, i) in rates:
            raise ConfigError(f"[molecule] rates: duplicate pair {j}->{i}")
        rates[(j, i)] = k
    return rates


def _parse_alpha(raw: str) -> tuple:
    rows = []
    for row in raw.split(";"):
        try:
            rows.append(tuple(float(v) for v in row.split(",")))
        except ValueError:
            raise ConfigError(f"[molecule] alpha: not numeric: {row!r}") from None
    if any(len(r) != len(rows) for r in rows):
        raise ConfigError("[molecule] alpha: matrix must be square")
    return tuple(rows)


_KNOWN_KEYS = {
    "molecule": {
        "site_energies",
        "hopping",
        "rates",
        "pure_dephasing",
        "initial_state",
        "alpha",
    },
    "photons": {"kind", "omega_plus", "sigma0", "tau0", "sigma_tilde0"},
    "scan": {
        "mode",
        "omega_min",
        "omega_max",
        "omega_count",
        "t_min",
        "t_max",
        "t_count",
        "delta_t",
        "omega_minus",
        "t_fixed",
        "dt_min",
        "dt_max",
        "dt_count",
    },
    "numerics": {
        "dt",
        "horizon",
        "engine",
        "quad_divisor",
        "quad_window",
        "quad_s_max",
        "theta_restriction",
        "exchange",
        "workers",
    },
}


def parse_config(text: str) -> RunConfig:
    """Parse and validate an INI run configuration."""
    parser = configparser.ConfigParser(
        strict=True, interpolation=None, inline_comment_prefixes=("#",)
    )
    try:
        parser.read_string(text)
    except configparser.DuplicateOptionError as exc:
        raise ConfigError(f"duplicate key {exc.option!r} in [{exc.section}]") from None
    except configparser.DuplicateSectionError as exc:
        raise ConfigError(f"duplicate section [{exc.section}]") from None
    except configparser.Error as exc:
        raise ConfigError(f"malformed config: {exc}") from None

    for section in parser.sections():
        if section not in _KNOWN_KEYS:
            raise ConfigError(f"unknown section [{section}]")
        for key in parser[section]:
            if key not in _KNOWN_KEYS[section]:
                raise ConfigError(f"unknown key {key!r} in [{section}]")

    cfg = RunConfig()
    if parser.has_section("molecule"):
        sec = parser["molecule"]
        m = cfg.molecule
        if "site_energies" in sec:
            try:
                m.site_energies = tuple(
                    float(v) for v in sec["site_energies"].split(",")
                )
            except ValueError:
                raise ConfigError(
                    "[molecule] site_energies: not a comma-separated number list"
                ) from None
        if "hopping" in sec:
            m.hopping = _parse_float("molecule", "hopping", sec["hopping"])
            if m.hopping < 0:
                raise ConfigError(
                    "[molecule] hopping: must be non-negative (the magnitude J; "
                    "the Hamiltonian builder applies the -J sign)"
                )
        if "rates" in sec:
            m.rates = _parse_rates(sec["rates"])
        if "pure_dephasing" in sec:
            m.pure_dephasing = _parse_float(
                "molecule", "pure_dephasing", sec["pure_dephasing"]
            )
            if m.pure_dephasing < 0:
                raise ConfigError("[molecule] pure_dephasing: must be non-negative")
        if "initial_state" in sec:
            m.initial_state = sec["initial_state"].strip()
        if "alpha" in sec:
            m.alpha = _parse_alpha(sec["alpha"])
        n_sites = len(m.site_energies)
        if n_sites < 1:
            raise ConfigError("[molecule] site_energies: need at least one site")
        for (j, i) in m.rates:
            if not (1 <= i < j <= n_sites):
                raise ConfigError(
                    f"[molecule] rates: pair {j}->{i} outside 1..{n_sites}"
                )
        if m.alpha is not None and len(m.alpha) != n_sites:
            raise ConfigError("[molecule] alpha: size must match the site count")
        kind_sel, _, idx = m.initial_state.partition(":")
        if kind_sel not in ("site", "eigen") or not idx.isdigit():
            raise ConfigError(
                "[molecule] initial_state: expected 'site:<k>' or 'eigen:<k>'"
            )
        if not (1 <= int(idx) <= n_sites):
            raise ConfigError(
                f"[molecule] initial_state: index outside 1..{n_sites}"
            )

    if parser.has_section("photons"):
        sec = parser["photons"]
        p = cfg.photons
        if "kind" in sec:
            p.kind = sec["kind"].strip()
            if p.kind not in KINDS:
                raise ConfigError(
                    f"[photons] kind: {p.kind!r} not one of {', '.join(KINDS)}"
                )
        for key in ("omega_plus", "sigma0", "tau0", "sigma_tilde0"):
            if key in sec:
                setattr(cfg.photons, key, _parse_float("photons", key, sec[key]))
        if p.sigma0 <= 0 or p.tau0 <= 0:
            raise ConfigError("[photons] sigma0 and tau0 must be positive")
        if p.sigma_tilde0 is not None and p.sigma_tilde0 <= 0:
            raise ConfigError("[photons] sigma_tilde0 must be positive")

    if parser.has_section("scan"):
        sec = parser["scan"]
        s = cfg.scan
        if "mode" in sec:
            s.mode = sec["mode"].strip()
            if s.mode not in MODES:
                raise ConfigError(
                    f"[scan] mode: {s.mode!r} not one of {', '.join(MODES)}"
                )
        for key in (
            "omega_min",
            "omega_max",
            "t_min",
            "t_max",
            "delta_t",
            "omega_minus",
            "t_fixed",
            "dt_min",
            "dt_max",
        ):
            if key in sec:
                setattr(s, key, _parse_float("scan", key, sec[key]))
        for key in ("omega_count", "t_count", "dt_count"):
            if key in sec:
                setattr(s, key, _parse_int("scan", key, sec[key]))
        for lo, hi, count in (
            ("omega_min", "omega_max", "omega_count"),
            ("t_min", "t_max", "t_count"),
            ("dt_min", "dt_max", "dt_count"),
        ):
            if getattr(s, count) < 1:
                raise ConfigError(f"[scan] {count}: must be >= 1")
            if getattr(s, lo) > getattr(s, hi):
                raise ConfigError(f"[scan] {lo} must not exceed {hi}")
        if s.t_min < 0:
            raise ConfigError("[scan] t_min: arrival times precede the preparation")

    if parser.has_section("numerics"):
        sec = parser["numerics"]
        n = cfg.numerics
        if "dt" in sec:
            n.dt = _parse_float("numerics", "dt", sec["dt"])
            if n.dt <= 0:
                raise ConfigError("[numerics] dt: must be positive")
        if "horizon" in sec:
            n.horizon = _parse_float("numerics", "horizon", sec["horizon"])
            if n.horizon <= 0:
                raise ConfigError("[numerics] horizon: must be positive")
        if "engine" in sec:
            n.engine = sec["engine"].strip()
            if n.engine not in ("impulsive", "numeric"):
                raise ConfigError("[numerics] engine: must be impulsive or numeric")
        if "quad_divisor" in sec:
            n.quad_divisor = _parse_int("numerics", "quad_divisor", sec["quad_divisor"])
            if n.quad_divisor < 1:
                raise ConfigError("[numerics] quad_divisor: must be >= 1")
        if "quad_window" in sec:
            n.quad_window = _parse_float("numerics", "quad_window", sec["quad_window"])
            if n.quad_window <= 0:
                raise ConfigError("[numerics] quad_window: must be positive")
        if "quad_s_max" in sec:
            n.quad_s_max = _parse_float("numerics", "quad_s_max", sec["quad_s_max"])
            if n.quad_s_max <= 0:
                raise ConfigError("[numerics] quad_s_max: must be positive")
        if "theta_restriction" in sec:
            n.theta_restriction = _parse_bool(
                "numerics", "theta_restriction", sec["theta_restriction"]
            )
        if "exchange" in sec:
            n.exchange = sec["exchange"].strip()
            if n.exchange not in EXCHANGE_VARIANTS:
                raise ConfigError(
                    f"[numerics] exchange: must be one of {', '.join(EXCHANGE_VARIANTS)}"
                )
        if "workers" in sec:
            n.workers = _parse_int("numerics", "workers", sec["workers"])
            if n.workers < 0:
                raise ConfigError("[numerics] workers: must be >= 0")

    return cfg
