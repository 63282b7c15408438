"""figkit: publication-style figures and stats sidecars from qraman CSVs."""

from .io import PANEL_SCHEMAS, SchemaError, Table, check_schema, load_table
from .panels import find_peaks, fit_decay, render

__version__ = "0.1.0"

__all__ = [
    "PANEL_SCHEMAS",
    "SchemaError",
    "Table",
    "check_schema",
    "load_table",
    "find_peaks",
    "fit_decay",
    "render",
    "__version__",
]
