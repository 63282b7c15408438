"""Panel renderers and the machine-readable stats sidecar.

Rendering is pure file-to-file.  The sidecar (extrema, peak list, fitted
decay constant) is the deterministic, tested artifact; image bytes may vary
across matplotlib backends.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .io import Table, check_schema, load_table

__version__ = "0.1.0"

ZOOM_T_MAX_FS = 100.0  # short-time window rendered by the zoom panel


def _fmt(x: float) -> str:
    return format(float(x), ".6g")


def _grid(table: Table, value: str):
    """Reshape the long-format (omega, T, value) rows into a 2D grid."""
    omega = table.column("omega_minus_eV")
    times = table.column("T_fs")
    vals = table.column(value)
    w_axis = np.unique(omega)
    t_axis = np.unique(times)
    grid = np.full((len(t_axis), len(w_axis)), np.nan)
    iw = np.searchsorted(w_axis, omega)
    it = np.searchsorted(t_axis, times)
    grid[it, iw] = vals
    return w_axis, t_axis, grid


def find_peaks(w_axis: np.ndarray, profile: np.ndarray, floor: float = 0.01):
    """Interior local maxima of the profile above floor * global max."""
    if len(profile) < 3:
        return []
    mask = (profile[1:-1] > profile[:-2]) & (profile[1:-1] > profile[2:])
    mask &= profile[1:-1] >= floor * profile.max()
    return [float(w) for w in w_axis[1:-1][mask]]


def fit_decay(dt_axis: np.ndarray, envelope: np.ndarray) -> float:
    """Decay constant (fs) of the envelope tail at positive delay.

    Points past the e^-1 crossing of the envelope maximum form the clean
    exponential tail; a log-linear fit there is insensitive to the beat
    structure near zero delay.
    """
    pos = dt_axis > 0
    x, y = dt_axis[pos], envelope[pos]
    tail = y <= envelope.max() / np.e
    if np.count_nonzero(tail) < 5:
        tail = np.ones_like(x, dtype=bool)
    good = tail & (y > 0)
    slope = np.polyfit(x[good], np.log(y[good]), 1)[0]
    if slope >= 0:
        return float("inf")
    return float(-1.0 / slope)


def _color_policy(value: str, grid: np.ndarray):
    if value == "re":
        bound = float(np.nanmax(np.abs(grid))) or 1.0
        return {"cmap": "RdBu_r", "vmin": -bound, "vmax": bound}
    return {"cmap": "viridis", "vmin": 0.0, "vmax": float(np.nanmax(grid)) or 1.0}


def _sidecar_header(panel: str, value: str, tables) -> list[str]:
    lines = [f"# figkit {__version__} panel={panel} value={value}"]
    for t in tables:
        lines.append(f"input: {t.path}")
        if t.provenance:
            lines.append(f"provenance: {t.provenance.lstrip('# ')}")
    return lines


def render_heatmap(tables, value: str, out: str, zoom: bool = False) -> list[str]:
    fig, axes = plt.subplots(
        1, len(tables), figsize=(5.0 * len(tables), 4.0), squeeze=False
    )
    stats = _sidecar_header("zoom" if zoom else "heatmap", value, tables)
    for ax, table in zip(axes[0], tables):
        w_axis, t_axis, grid = _grid(table, value)
        if zoom:
            keep = t_axis <= ZOOM_T_MAX_FS
            t_axis, grid = t_axis[keep], grid[keep]
        mesh = ax.pcolormesh(w_axis, t_axis, grid, **_color_policy(value, grid))
        fig.colorbar(mesh, ax=ax, label=value)
        ax.set_xlabel(r"$\omega_-$ (eV)")
        ax.set_ylabel("T (fs)")
        ax.set_title(table.path.rsplit("/", 1)[-1])
        profile = np.nanmax(np.abs(grid), axis=0)
        peaks = find_peaks(w_axis, profile)
        stats += [
            f"min: {_fmt(np.nanmin(grid))}",
            f"max: {_fmt(np.nanmax(grid))}",
            "peaks_omega_eV: " + ", ".join(_fmt(p) for p in peaks),
        ]
    fig.tight_layout()
    fig.savefig(out, dpi=150)
    plt.close(fig)
    return stats


def render_delay_scan(tables, value: str, out: str) -> list[str]:
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    stats = _sidecar_header("delay-scan", value, tables)
    for table in tables:
        dt = table.column("dT_fs")
        y = table.column(value if value in table.columns else "abs")
        env = table.column("envelope")
        label = table.path.rsplit("/", 1)[-1]
        ax.plot(dt, y, lw=0.8, label=label)
        ax.plot(dt, env, "--", lw=1.2, label=f"{label} envelope")
        decay = fit_decay(dt, env)
        stats += [
            f"min: {_fmt(y.min())}",
            f"max: {_fmt(y.max())}",
            f"decay_fs: {_fmt(decay)}",
        ]
    ax.set_xlabel(r"$\Delta T$ (fs)")
    ax.set_ylabel(value)
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(out, dpi=150)
    plt.close(fig)
    return stats


def render_dynamics(tables, value: str, out: str) -> list[str]:
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    stats = _sidecar_header("dynamics", value, tables)
    for table in tables:
        t = table.column("t_fs")
        pops = [
            c
            for c in table.columns
            if c.startswith("rho_") and c.endswith("_re")
            and c.split("_")[1] == c.split("_")[2]
        ]
        for c in sorted(pops):
            y = table.column(c)
            ax.plot(t, y, label=c.replace("_re", ""))
            stats += [
                f"column: {c}",
                f"min: {_fmt(y.min())}",
                f"max: {_fmt(y.max())}",
                f"final: {_fmt(y[-1])}",
            ]
    ax.set_xlabel("t (fs)")
    ax.set_ylabel("population")
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(out, dpi=150)
    plt.close(fig)
    return stats


def render(panel: str, inputs, value: str, out: str) -> str:
    """Render one job; returns the sidecar path."""
    tables = [load_table(p) for p in inputs]
    for table in tables:
        check_schema(table, panel, value)
    if panel == "heatmap":
        stats = render_heatmap(tables, value, out)
    elif panel == "zoom":
        stats = render_heatmap(tables, value, out, zoom=True)
    elif panel == "delay-scan":
        stats = render_delay_scan(tables, value, out)
    else:
        stats = render_dynamics(tables, value, out)
    sidecar = out + ".stats.txt"
    with open(sidecar, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(stats) + "\n")
    return sidecar
