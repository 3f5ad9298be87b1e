"""Run the shipped presets and write per-preset sweep summaries.

For each preset every grid cell is run under ``--seeds`` seeds; the
summary CSV holds the mean and spread of each final net change. The
first seed of every cell also gets the full set of run outputs (CSVs and
SVG charts) under ``<out>/<preset>/<cell>/``.

    python scripts/reproduce_presets.py --presets A1 C4 --seeds 5 --out results
"""

from __future__ import annotations

import argparse
import time
from dataclasses import replace
from pathlib import Path

from fashion_abm.cli import cell_dirname
from fashion_abm.engine import run, run_sweep
from fashion_abm.outputs import emit_outputs, write_sweep_summary
from fashion_abm.scenario import PRESETS, get_preset


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--presets", nargs="*", default=list(PRESETS))
    ap.add_argument("--seeds", type=int, default=5)
    ap.add_argument("--ticks", type=int, help="override the 500-tick horizon")
    ap.add_argument("--workers", type=int, default=1)
    ap.add_argument("--out", default="results")
    args = ap.parse_args()

    for name in args.presets:
        cfg = get_preset(name)
        if args.ticks is not None:
            stop = cfg.engine.campaign_stop_tick
            stop = None if stop is None else min(stop, args.ticks)
            cfg = replace(cfg, engine=replace(cfg.engine, ticks=args.ticks, campaign_stop_tick=stop))
        out = Path(args.out) / name
        out.mkdir(parents=True, exist_ok=True)
        t0 = time.perf_counter()
        cells = run_sweep(cfg, None, range(args.seeds), workers=args.workers)
        write_sweep_summary(cells, out / "sweep_summary.csv")
        for params, cell in cfg.cells():
            metrics, snap = run(cell)
            emit_outputs(metrics, snap, cfg.outputs, out / (cell_dirname(params) or "run"),
                         title=f"{name} {cell_dirname(params)}".strip())
        print(f"{name}: {len(cells)} cells x {args.seeds} seeds in {time.perf_counter() - t0:.1f}s")
        for cell in cells:
            label = cell_dirname(cell.params) or "-"
            print(f"  {label:28s} purchase_prob {cell.mean('purchase_prob'):+.4f}  "
                  f"env {cell.mean('env'):+.4f}  wca {cell.mean('wca'):+.4f}  know {cell.mean('know'):+.4f}")


if __name__ == "__main__":
    main()
