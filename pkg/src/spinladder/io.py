"""CSV trajectories, run manifests and gnuplot script emission."""
from __future__ import annotations

import hashlib
import json
from pathlib import Path

import numpy as np

from .analysis import ObservableSeries, SweepRow

CSV_COLUMNS = ("t", "sx", "sy", "sz", "sf", "stotal", "norm")
_SERIES_FIELDS = ("times", "sx", "sy", "sz", "s_fidelity", "s_total", "norm")
_THIN = {"sx", "sy", "stotal"}
_ALIASES = {"s_fidelity": "sf", "s_total": "stotal", "time": "t"}


def population_column(m: float) -> str:
    """``p_10``, ``p_9_5``, ``p_-10``, ``p_-9_5``."""
    m = float(m)
    if m.is_integer():
        return f"p_{int(m)}"
    return "p_" + f"{m:.1f}".replace(".", "_")


def _fmt(x: float) -> str:
    return repr(float(x))


def write_csv(series: ObservableSeries, path, populations: bool = False) -> None:
    path = Path(path)
    header = list(CSV_COLUMNS)
    cols = [getattr(series, name) for name in _SERIES_FIELDS]
    if populations:
        header += [population_column(m) for m in series.spin.m_values()]
        cols += list(series.populations.T)
    lines = [",".join(header)]
    for row in zip(*cols):
        lines.append(",".join(_fmt(v) for v in row))
    try:
        with open(path, "w", newline="\n") as fh:
            fh.write("\n".join(lines) + "\n")
    except OSError as exc:
        raise OSError(f"cannot write {path}: {exc.strerror or exc}") from exc


def read_csv_header(path) -> list[str]:
    try:
        with open(path) as fh:
            return fh.readline().strip().split(",")
    except OSError as exc:
        raise OSError(f"cannot read {path}: {exc.strerror or exc}") from exc


def read_csv(path) -> dict[str, np.ndarray]:
    header = read_csv_header(path)
    data = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
    if data.size == 0:
        return {h: np.empty(0) for h in header}
    return {h: data[:, i] for i, h in enumerate(header)}


def write_sweep_csv(rows: list[SweepRow], axis: str, path) -> None:
    header = [axis, "period", "first_minimum_time", "min_value", "min_sz_reduced",
              "max_norm_error", "max_s_total_error", "error"]
    lines = [",".join(header)]
    for r in rows:
        p = r.period
        cells = [r.value,
                 p.period if p else None, p.first_minimum_time if p else None, p.min_value if p else None,
                 r.min_sz_reduced, r.max_norm_error, r.max_s_total_error]
        text = ["" if c is None else _fmt(c) for c in cells]
        text.append("" if r.error is None else '"' + r.error.replace('"', "'") + '"')
        lines.append(",".join(text))
    Path(path).write_text("\n".join(lines) + "\n")


def file_digest(path) -> dict:
    data = Path(path).read_bytes()
    return {"sha256": hashlib.sha256(data).hexdigest(), "bytes": len(data)}


def write_manifest(path, payload: dict, files) -> None:
    """Write ``payload`` plus a checksum inventory of ``files`` (which must already be complete)."""
    path = Path(path)
    body = dict(payload)
    body["files"] = {Path(f).name: file_digest(f) for f in files}
    path.write_text(json.dumps(body, indent=2, sort_keys=True, default=_json_default) + "\n")


def _json_default(obj):
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    raise TypeError(f"not JSON serialisable: {type(obj).__name__}")


def _spin_from_manifest(csv_path) -> float | None:
    manifest = Path(csv_path).with_name("manifest.json")
    if not manifest.exists():
        return None
    twice_s = json.loads(manifest.read_text()).get("config", {}).get("twice_s")
    return None if twice_s is None else twice_s / 2


def emit_plot_script(csv_path, columns, normalize_by_s: bool = True, s: float | None = None) -> str:
    """Gnuplot script plotting ``columns`` of a trajectory CSV against t.

    Spin components are divided by S and s_f / total spin by S^2 when
    ``normalize_by_s`` is set.  S is taken from ``s`` or from the
    ``manifest.json`` next to the CSV.  Sx, Sy and the total spin are drawn
    thin, everything else bold.
    """
    columns = [_ALIASES.get(c, c) for c in columns]
    if not columns:
        raise ValueError("no columns to plot")
    header = read_csv_header(csv_path)
    for c in columns:
        if c not in header or c == "t":
            raise ValueError(f"unknown column {c!r}; CSV has {', '.join(header[1:])}")
    if normalize_by_s and s is None:
        s = _spin_from_manifest(csv_path)
        if s is None:
            raise ValueError("normalisation needs S: pass s or keep manifest.json beside the CSV")
    if normalize_by_s:
        s = float(s)  # a bare integer would be integer division in gnuplot
    squared = {"sf", "stotal"}
    spin_cols = {"sx", "sy", "sz"}
    all_spin = all(c in spin_cols for c in columns)
    lines = [
        f"# gnuplot script for {Path(csv_path).name}",
        "set datafile separator ','",
        "set key top right",
        "set xlabel 't'",
    ]
    if normalize_by_s:
        lines.append("set ylabel 'reduced component'")
        if all_spin:
            lines.append("set yrange [-1:1]")
    plots = []
    for c in columns:
        col = header.index(c) + 1
        if normalize_by_s and c in spin_cols:
            expr, title = f"(${col}/{s!r})", f"{c}/S"
        elif normalize_by_s and c in squared:
            expr, title = f"(${col}/{s * s!r})", f"{c}/S^2"
        else:
            expr, title = f"{col}", c
        width = 1 if c in _THIN else 3
        plots.append(f"'{csv_path}' using 1:{expr} with lines lw {width} title '{title}'")
    lines.append("plot " + ", \\\n     ".join(plots))
    return "\n".join(lines) + "\n"
