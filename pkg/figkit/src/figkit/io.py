"""CSV table loading and schema validation for figure jobs."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


class SchemaError(ValueError):
    """The input CSV does not match the panel's expected columns."""


# required columns per panel kind; dynamics columns are validated separately
PANEL_SCHEMAS = {
    "heatmap": ("omega_minus_eV", "T_fs"),
    "zoom": ("omega_minus_eV", "T_fs"),
    "delay-scan": ("dT_fs", "re", "im", "abs", "envelope"),
    "dynamics": ("t_fs",),
}

VALUE_COLUMNS = ("re", "abs")


@dataclass(frozen=True)
class Table:
    path: str
    provenance: str
    columns: tuple
    data: np.ndarray  # shape (rows, columns)

    def column(self, name: str) -> np.ndarray:
        if name not in self.columns:
            raise SchemaError(f"{self.path}: missing column {name!r}")
        return self.data[:, self.columns.index(name)]


def load_table(path: str) -> Table:
    """Read a delimited result table with optional '#' provenance line."""
    with open(path, "r", encoding="utf-8") as fh:
        lines = [ln.rstrip("\n") for ln in fh]
    provenance = ""
    if lines and lines[0].startswith("#"):
        provenance = lines.pop(0)
    if not lines:
        raise SchemaError(f"{path}: no header line")
    columns = tuple(c.strip() for c in lines.pop(0).split(","))
    rows = [ln for ln in lines if ln.strip()]
    if not rows:
        raise SchemaError(f"{path}: no data rows")
    try:
        data = np.array([[float(v) for v in ln.split(",")] for ln in rows])
    except ValueError as exc:
        raise SchemaError(f"{path}: non-numeric cell ({exc})") from None
    if data.shape[1] != len(columns):
        raise SchemaError(
            f"{path}: {data.shape[1]} cells per row but {len(columns)} header columns"
        )
    return Table(path, provenance, columns, data)


def check_schema(table: Table, panel: str, value: str) -> None:
    """Verify the table carries the columns the panel needs."""
    if panel not in PANEL_SCHEMAS:
        raise SchemaError(f"unknown panel kind {panel!r}")
    missing = [c for c in PANEL_SCHEMAS[panel] if c not in table.columns]
    if panel in ("heatmap", "zoom") and value not in table.columns:
        missing.append(value)
    if panel == "dynamics":
        if not any(c.startswith("rho_") and c.endswith("_re") for c in table.columns):
            missing.append("rho_<a>_<b>_re")
    if missing:
        raise SchemaError(
            f"{table.path}: missing columns for panel {panel!r}: {', '.join(missing)}"
        )
