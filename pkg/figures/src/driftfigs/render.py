"""Render run artifacts (monitor CSV + report JSON) into figures.

This tool only reads the declared schema; it never recomputes physics.  The
single overlay it draws, the affine channel line in the action plane, is
reconstructed from numbers already present in the report.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402

KINDS = ("actions", "norms", "channel_plane", "distance")


class SchemaError(ValueError):
    """Input files do not match the declared CSV/JSON schema."""


@dataclass(frozen=True)
class FigureRequest:
    csv_path: str
    report_path: str
    kind: str
    out_path: str
    log_y: bool = False
    modes: tuple[int, ...] | None = None
    dpi: int = 130

    def __post_init__(self):
        if self.kind not in KINDS:
            raise SchemaError(f"unknown figure kind {self.kind!r}; expected one of {KINDS}")


@dataclass
class RunData:
    columns: dict[str, list[float]]
    report: dict
    action_modes: list[int] = field(default_factory=list)

    @property
    def times(self) -> list[float]:
        return self.columns["time"]


def load_run(request: FigureRequest) -> RunData:
    with open(request.csv_path, newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise SchemaError("CSV file is empty (no header row)") from None
        rows = [row for row in reader if row]
    if "time" not in header:
        raise SchemaError("CSV schema mismatch: missing columns ['time']")
    if not rows:
        raise SchemaError("CSV has a header but no samples; refusing to draw an empty figure")
    columns = {name: [] for name in header}
    for row in rows:
        if len(row) != len(header):
            raise SchemaError("CSV row width disagrees with the header")
        for name, value in zip(header, row):
            columns[name].append(float(value))
    with open(request.report_path) as fh:
        report = json.load(fh)
    modes = sorted(int(name.split("_", 1)[1]) for name in header if name.startswith("action_"))
    return RunData(columns, report, modes)


def _require(data: RunData, names: list[str]) -> None:
    missing = [n for n in names if n not in data.columns]
    if missing:
        raise SchemaError(f"CSV schema mismatch: missing columns {missing}")


def _selected_modes(data: RunData, request: FigureRequest) -> list[int]:
    if request.modes is None:
        return data.action_modes
    missing = [j for j in request.modes if j not in data.action_modes]
    if missing:
        raise SchemaError(f"CSV schema mismatch: missing columns "
                          f"{[f'action_{j}' for j in missing]}")
    return list(request.modes)


def _new_axes():
    fig, ax = plt.subplots(figsize=(6.0, 4.0), constrained_layout=True)
    return fig, ax


def _render_actions(data: RunData, request: FigureRequest, ax) -> None:
    modes = _selected_modes(data, request)
    if not modes:
        raise SchemaError("CSV schema mismatch: missing columns ['action_<j>']")
    for j in modes:
        ax.plot(data.times, data.columns[f"action_{j}"], label=f"mode {j}", linewidth=1.2)
    ax.set_xlabel("time")
    ax.set_ylabel("action |z_j|^2")
    ax.set_title("mode actions along the run")
    ax.legend(loc="best", fontsize=8)
    if request.log_y:
        ax.set_yscale("log")


def _sobolev_column(data: RunData) -> str:
    names = [n for n in data.columns if n.startswith("sobolev_")]
    if not names:
        raise SchemaError("CSV schema mismatch: missing columns ['sobolev_<s>']")
    return names[0]


def _render_norms(data: RunData, request: FigureRequest, ax) -> None:
    name = _sobolev_column(data)
    ax.plot(data.times, data.columns[name], color="tab:purple", linewidth=1.4)
    ax.set_xlabel("time")
    ax.set_ylabel(f"H^{name.split('_', 1)[1]} norm")
    ax.set_title("Sobolev norm along the run")
    if request.log_y:
        ax.set_yscale("log")


def _channel_modes(data: RunData) -> tuple[int, int]:
    """Donating and receiving modes of the channel plane."""
    config = data.report.get("provenance", {}).get("config", {})
    if config.get("equation") == "wave":
        p = config.get("p")
        if p is None or p not in data.action_modes or 1 not in data.action_modes:
            raise SchemaError("report/CSV mismatch: wave channel plane needs action_1 and action_p")
        return 1, p
    tang = config.get("tangential")
    if not tang or tang[0] not in data.action_modes or tang[3] not in data.action_modes:
        raise SchemaError("report/CSV mismatch: channel plane needs the tangential actions")
    return tang[0], tang[3]


def _render_channel_plane(data: RunData, request: FigureRequest, ax) -> None:
    low, high = _channel_modes(data)
    x = data.columns[f"action_{low}"]
    y = data.columns[f"action_{high}"]
    ax.plot(x, y, color="tab:blue", linewidth=1.4, label="run trajectory")
    ax.plot(x[0], y[0], "o", color="tab:green", markersize=5, label="start")
    ax.plot(x[-1], y[-1], "s", color="tab:red", markersize=5, label="end")
    config = data.report.get("provenance", {}).get("config", {})
    initial = data.report.get("channel_initial_actions") or {}
    mu = config.get("mu")
    if mu and str(low) in initial and str(high) in initial:
        weight = config.get("p", 1) if config.get("equation") == "wave" else 1
        level = (initial[str(low)] + weight * initial[str(high)]) / mu ** 2
        xs = [min(x) * 0.98, max(x) * 1.02]
        ax.plot(xs, [(level - v) / weight for v in xs], "--", color="gray",
                linewidth=1.0, label="channel line")
    ax.set_xlabel(f"action of mode {low}")
    ax.set_ylabel(f"action of mode {high}")
    ax.set_title("orbit in the channel plane")
    ax.legend(loc="best", fontsize=8)


def _render_distance(data: RunData, request: FigureRequest, ax) -> None:
    _require(data, ["model_distance"])
    series = data.columns["model_distance"]
    ax.plot(data.times, series, color="tab:orange", linewidth=1.4)
    reported = data.report.get("max_model_distance") or 0.0
    top = 1.05 * max(max(series), reported)
    ax.set_ylim(0.0, top if top > 0 else 1.0)
    ax.axhline(reported, linestyle="--", color="gray", linewidth=0.9)
    ax.set_xlabel("time")
    ax.set_ylabel("l1 distance to the rescaled model")
    ax.set_title("model distance along the run")
    if request.log_y:
        ax.set_yscale("log")


_RENDERERS = {
    "actions": _render_actions,
    "norms": _render_norms,
    "channel_plane": _render_channel_plane,
    "distance": _render_distance,
}


def render(request: FigureRequest) -> str:
    """Draw the requested figure; returns the output path.

    Output bytes are deterministic for identical inputs and library versions
    (fixed layout, fixed dpi, no timestamps in the PNG metadata).
    """
    data = load_run(request)
    fig, ax = _new_axes()
    try:
        _RENDERERS[request.kind](data, request, ax)
        fig.savefig(request.out_path, dpi=request.dpi, metadata={"Software": "driftfigs"})
    finally:
        plt.close(fig)
    return request.out_path
