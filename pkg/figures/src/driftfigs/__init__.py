"""driftfigs: figures from modedrift run artifacts (CSV + report JSON)."""

__version__ = "0.1.0"

from .render import KINDS, FigureRequest, RunData, SchemaError, load_run, render  # noqa: F401
