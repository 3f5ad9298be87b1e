"""Command-line front end.

Exit status: 0 success, 1 usage or configuration error, 2 runtime error.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import replace
from pathlib import Path

from .engine import run, run_sweep
from .outputs import emit_outputs, write_sweep_summary
from .population import InvalidSpecError
from .scenario import PRESETS, ConfigError, ScenarioConfig, canonical_key, dump_config, get_preset, parse_config

EXIT_OK, EXIT_USAGE, EXIT_RUNTIME = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _load(path: str) -> ScenarioConfig:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise UsageError(f"cannot read config {path}: {e.strerror}") from None
    return parse_config(text)


def _seed(value: str) -> int:
    v = int(value)
    if not 0 <= v < 2**64:
        raise argparse.ArgumentTypeError("seed must be a 64-bit unsigned integer")
    return v


def cell_dirname(params: dict) -> str:
    return "_".join(f"{k.rpartition('.')[2]}={v}" for k, v in params.items())


def cmd_run(args) -> int:
    cfg = _load(args.config)
    if args.seed is not None:
        cfg = replace(cfg, engine=replace(cfg.engine, seed=args.seed))
    out = Path(args.out)
    cells = cfg.cells()
    for params, cell in cells:
        target = out / cell_dirname(params) if len(cells) > 1 else out
        metrics, snapshot = run(cell)
        title = cfg.name + (f" ({cell_dirname(params)})" if params else "")
        written = emit_outputs(metrics, snapshot, cfg.outputs, target, title=title)
        print(f"{title}: wrote {len(written)} files to {target}")
    return EXIT_OK


def cmd_preset(args) -> int:
    if args.show:
        sys.stdout.write(dump_config(get_preset(args.show)))
    else:
        for name, cfg in PRESETS.items():
            axes = ", ".join(f"{k.rpartition('.')[2]}={list(v)}" for k, v in cfg.grid)
            print(f"{name}\t{axes}")
    return EXIT_OK


def _parse_param(text: str) -> tuple[str, tuple]:
    key, sep, values = text.partition("=")
    if not sep or not values:
        raise UsageError(f"--param expects key=v1,v2,..., got {text!r}")
    key = canonical_key(key.strip())
    parsed = []
    for raw in values.split(","):
        raw = raw.strip()
        if raw.lower() in ("none", "n/a"):
            parsed.append(None)
            continue
        try:
            parsed.append(int(raw) if raw.lstrip("-").isdigit() and not key.startswith("kernels.") else float(raw))
        except ValueError:
            raise UsageError(f"--param {key}: cannot parse {raw!r}") from None
    return key, tuple(parsed)


def cmd_sweep(args) -> int:
    cfg = _load(args.config)
    grid = dict(_parse_param(p) for p in args.param)
    if args.seeds < 1:
        raise UsageError("--seeds must be at least 1")
    base_seed = cfg.engine.seed if args.seed is None else args.seed
    seeds = [base_seed + i for i in range(args.seeds)]
    cells = run_sweep(cfg, grid, seeds, workers=args.workers)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    path = out / "sweep_summary.csv"
    write_sweep_summary(cells, path)
    print(f"{len(cells)} cells x {len(seeds)} seeds = {len(cells) * len(seeds)} runs; summary in {path}")
    return EXIT_OK


def cmd_oracle_check(args) -> int:
    from .oracle import compare_traces, engine_trace, reference_run

    if args.agents % 6 or args.agents < 12:
        raise UsageError("--agents must be a multiple of 6 and at least 12")
    cfg = oracle_scenario(args.agents, args.ticks, args.seed, args.preset)
    problems = compare_traces(reference_run(cfg), engine_trace(cfg))
    if problems:
        for line in problems[:20]:
            print(line, file=sys.stderr)
        print(f"oracle-check: {len(problems)} mismatches", file=sys.stderr)
        return EXIT_RUNTIME
    print(f"oracle-check: {args.agents} agents x {args.ticks} ticks, seed {args.seed}: bit-identical")
    return EXIT_OK


def oracle_scenario(agents: int, ticks: int, seed: int, preset: str = "C5") -> ScenarioConfig:
    """Small scenario with every mechanism switched on, for oracle comparison."""
    cfg = get_preset(preset).without_grid()
    stop = None if cfg.engine.campaign_stop_tick is None else max(ticks - 1, 0)
    return replace(cfg,
                   population=replace(cfg.population, n_agents=agents, n_acquaintances=min(10, agents - 6)),
                   engine=replace(cfg.engine, ticks=ticks, seed=seed, campaign_stop_tick=stop))


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="fashion-abm", description="Fast-fashion purchasing agent-based simulator")
    sub = p.add_subparsers(dest="command", parser_class=_Parser)

    r = sub.add_parser("run", help="run one scenario (every cell of its grid)")
    r.add_argument("--config", required=True)
    r.add_argument("--seed", type=_seed)
    r.add_argument("--out", default="out")
    r.set_defaults(func=cmd_run)

    pr = sub.add_parser("preset", help="list or print the shipped scenarios")
    g = pr.add_mutually_exclusive_group(required=True)
    g.add_argument("--list", action="store_true")
    g.add_argument("--show", metavar="NAME")
    pr.set_defaults(func=cmd_preset)

    s = sub.add_parser("sweep", help="run a parameter grid over several seeds")
    s.add_argument("--config", required=True)
    s.add_argument("--param", action="append", default=[], metavar="KEY=V1,V2,...")
    s.add_argument("--seeds", type=int, default=1)
    s.add_argument("--seed", type=_seed, help="first seed (default: the config's)")
    s.add_argument("--workers", type=int, default=1)
    s.add_argument("--out", default="out")
    s.set_defaults(func=cmd_sweep)

    o = sub.add_parser("oracle-check", help="diff the engine against the brute-force reference")
    o.add_argument("--agents", type=int, default=12)
    o.add_argument("--ticks", type=int, default=3)
    o.add_argument("--seed", type=_seed, default=0)
    o.add_argument("--preset", default="C5")
    o.set_defaults(func=cmd_oracle_check)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if not getattr(args, "func", None):
            raise UsageError(parser.format_usage().strip())
        return args.func(args)
    except (UsageError, ConfigError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except (InvalidSpecError, OSError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
