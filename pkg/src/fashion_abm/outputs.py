"""CSV tables and SVG figures for a finished run."""

from __future__ import annotations

import csv
from pathlib import Path

import numpy as np

from . import svg
from .engine import TRACKED, MetricsSeries, Snapshot
from .model import ATTRIBUTE_NAMES

FILENAMES = {
    "timeseries_csv": "timeseries.csv",
    "final_snapshot_csv": "final_snapshot.csv",
    "histogram_csv": "histogram.csv",
    "svg_lines": "changes.svg",
    "svg_histogram": "final_distribution.svg",
}

TIMESERIES_HEADER = ("tick", "attr", "mean", "variance", "net_change")
SNAPSHOT_HEADER = ("id",) + ATTRIBUTE_NAMES + ("s_pp", "s_sm", "s_gov", "purchase_prob")
HISTOGRAM_HEADER = ("bin_start", "bin_end", "count")
BIN_WIDTH = 0.05


def histogram_counts(values: np.ndarray, bin_width: float = BIN_WIDTH):
    n_bins = int(round(1.0 / bin_width))
    edges = np.round(np.linspace(0.0, 1.0, n_bins + 1), 10)
    counts, _ = np.histogram(values, bins=edges)
    return edges, counts


def _num(v: float) -> str:
    return repr(float(v))


def _write_timeseries(metrics: MetricsSeries, path: Path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(TIMESERIES_HEADER)
        for attr in TRACKED:
            net = metrics.net_change(attr)
            for k, tick in enumerate(metrics.ticks):
                w.writerow([int(tick), attr, _num(metrics.means[attr][k]),
                            _num(metrics.variances[attr][k]), _num(net[k])])


def _write_snapshot(snapshot: Snapshot, path: Path) -> None:
    cols = snapshot.columns
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(SNAPSHOT_HEADER)
        for i in range(snapshot.n_agents):
            w.writerow([i] + [_num(cols[k][i]) for k in SNAPSHOT_HEADER[1:]])


def _write_histogram(snapshot: Snapshot, path: Path) -> None:
    edges, counts = histogram_counts(snapshot.columns["purchase_prob"])
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(HISTOGRAM_HEADER)
        for lo, hi, c in zip(edges[:-1], edges[1:], counts):
            w.writerow([_num(lo), _num(hi), int(c)])


def _write_lines(metrics: MetricsSeries, path: Path, title: str) -> None:
    xs = metrics.ticks.tolist()
    attrs = [a for a in TRACKED if a != "s_gov"]
    panels = [
        (f"{title}: changes in average values", "mean(t) - mean(0)",
         {a: (xs, metrics.net_change(a).tolist()) for a in attrs}),
        (f"{title}: variances", "variance", {a: (xs, metrics.variances[a].tolist()) for a in attrs}),
    ]
    path.write_text(svg.line_panels(panels), encoding="utf-8")


def _write_hist_svg(snapshot: Snapshot, path: Path, title: str) -> None:
    edges, counts = histogram_counts(snapshot.columns["purchase_prob"])
    path.write_text(svg.histogram(edges.tolist(), counts.tolist(), f"{title}: final purchase probability",
                                  "probability to buy fast fashion"), encoding="utf-8")


def emit_outputs(metrics: MetricsSeries, snapshot: Snapshot, outputs, out_dir, title: str = "run") -> list[Path]:
    """Write the requested outputs into ``out_dir``.

    On any failure the files written so far by this call are removed and
    the error propagates.
    """
    out_dir = Path(out_dir)
    unknown = [o for o in outputs if o not in FILENAMES]
    if unknown:
        raise ValueError(f"unknown outputs {unknown}")
    written = []
    try:
        out_dir.mkdir(parents=True, exist_ok=True)
        for kind in outputs:
            path = out_dir / FILENAMES[kind]
            written.append(path)
            if kind == "timeseries_csv":
                _write_timeseries(metrics, path)
            elif kind == "final_snapshot_csv":
                _write_snapshot(snapshot, path)
            elif kind == "histogram_csv":
                _write_histogram(snapshot, path)
            elif kind == "svg_lines":
                _write_lines(metrics, path, title)
            else:
                _write_hist_svg(snapshot, path, title)
    except BaseException:
        for path in written:
            path.unlink(missing_ok=True)
        raise
    return written


SWEEP_HEADER = ("cell", "params", "attr", "n_seeds", "mean_final_net_change", "std_final_net_change")


def write_sweep_summary(cells, path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(SWEEP_HEADER)
        for idx, cell in enumerate(cells):
            label = ";".join(f"{k}={v}" for k, v in cell.params.items())
            for attr in TRACKED:
                w.writerow([idx, label, attr, len(cell.seeds), _num(cell.mean(attr)), _num(cell.std(attr))])
