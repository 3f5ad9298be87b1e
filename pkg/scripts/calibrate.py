"""Random search over synthetic-population Beta defaults.

Scores each candidate on the qualitative A-set, C-set and campaign-halt
orderings with a handful of seeds and prints one JSON line per candidate.

    python scripts/calibrate.py --candidates 30 --seeds 2
    python scripts/calibrate.py --refine previous.jsonl --candidates 40 --seeds 3
"""

from __future__ import annotations

import argparse
import json
from dataclasses import replace

import numpy as np

from fashion_abm.engine import run
from fashion_abm.population import DEFAULT_BETAS
from fashion_abm.scenario import get_preset

SHAPES = [(1.5, 6.0), (2.0, 5.0), (2.0, 3.0), (3.0, 3.0), (3.0, 2.0), (5.0, 2.0), (2.0, 8.0), (1.2, 10.0)]


def cell(name, betas, **values):
    cfg = get_preset(name).without_grid()
    for k, v in values.items():
        cfg = cfg.with_value(k, v)
    return replace(cfg, population=replace(cfg.population, attribute_distributions=betas))


def score(betas, seeds):
    def final(cfg, seed):
        return run(cfg, replace(cfg.engine, seed=seed))[0]

    hits = {"a_increasing": 0, "a_env_negative": 0, "c_saturation": 0, "c_pro_beats_anti": 0, "halt_retention": 0}
    for seed in seeds:
        a = [final(cell("A1", betas, delta=d), seed) for d in (0.1, 0.3, 0.5)]
        concern = [(m.final_net_change("wca") + m.final_net_change("know")) / 2 for m in a]
        hits["a_increasing"] += concern[0] < concern[1] < concern[2]
        hits["a_env_negative"] += all(m.final_net_change("env") < 0 for m in a)
        c = {z: final(cell("C1", betas, zeta=z), seed) for z in (0.8, 1.0, 1.2, 1.5)}
        d = {z: m.final_net_change("purchase_prob") for z, m in c.items()}
        hits["c_saturation"] += abs(d[1.5] - d[1.2]) < abs(d[1.2] - d[1.0])
        hits["c_pro_beats_anti"] += c[1.2].means["purchase_prob"][-1] < c[0.8].means["purchase_prob"][-1]
        drift = {}
        for tau in (0.1, 0.3):
            m = final(cell("C4", betas, tau=tau), seed)
            drift[tau] = m.means["wca"][-1] - m.at_tick("wca", 250)
        hits["halt_retention"] += drift[0.3] > drift[0.1]
    return {k: v / len(seeds) for k, v in hits.items()}


def refine(path, n, rng, parents=6):
    with open(path) as fh:
        rows = [json.loads(line) for line in fh if line.startswith("{")]
    # weight the hardest target (pro beats anti) double when ranking parents
    rows.sort(key=lambda r: -(sum(r["score"].values()) + r["score"]["c_pro_beats_anti"]))
    pool = [{k: tuple(v) for k, v in r["betas"].items()} for r in rows[:parents]]
    out = []
    for i in range(n):
        betas = dict(pool[i % len(pool)])
        for k in rng.choice(list(betas), size=int(rng.integers(1, 3)), replace=False):
            betas[k] = SHAPES[rng.integers(len(SHAPES))]
        out.append(betas)
    return out


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--candidates", type=int, default=20)
    ap.add_argument("--seeds", type=int, default=2)
    ap.add_argument("--rng", type=int, default=0)
    ap.add_argument("--refine", metavar="JSONL", help="mutate the best candidates of an earlier search")
    args = ap.parse_args()
    rng = np.random.default_rng(args.rng)
    seeds = list(range(1000, 1000 + args.seeds))
    if args.refine:
        candidates = refine(args.refine, args.candidates, rng)
    else:
        candidates = [dict(DEFAULT_BETAS)]
        for _ in range(args.candidates - 1):
            betas = {k: SHAPES[rng.integers(len(SHAPES))] for k in DEFAULT_BETAS}
            betas["env"] = SHAPES[rng.integers(4, 6)]  # keep initial environmental concern high
            candidates.append(betas)
    for betas in candidates:
        print(json.dumps({"betas": betas, "score": score(betas, seeds)}), flush=True)


if __name__ == "__main__":
    main()
