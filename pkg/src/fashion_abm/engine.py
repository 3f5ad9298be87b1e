"""Tick loop: peer, media and government phases, fatigue, metrics.

Randomness comes from one seed split into independent streams, one per
phase, so switching a mechanism off never shifts the draws of another.
Within a tick the peer phase reads only the start-of-tick state; media
and government read the running state, in that order.
"""

from __future__ import annotations

import itertools
import math
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from ._fast import peer_phase
from .influence import blend, fatigue_step, gov_feedback, sm_feedback
from .model import (ATTRIBUTE_NAMES, DEFAULT_COEFFICIENTS, GOV_TOPICS, PEER_TOPICS, AgentAttributes,
                    AgentState, Susceptibilities, purchase_probability_array)
from .population import (InvalidSpecError, build_graph, draw_contact_plan, load_population_csv,
                         synthesize_population)

TRACKED = ("env", "wca", "know", "trust", "purchase_prob", "s_gov")

STREAMS = {"population": 0, "graph": 1, "topic": 2, "peer": 3, "media": 4, "gov": 5}


@dataclass(frozen=True)
class EngineConfig:
    ticks: int = 500
    campaign_stop_tick: Optional[int] = None
    seed: int = 0
    record_every: int = 1
    disable_peer: bool = False
    disable_media: bool = False
    disable_gov: bool = False

    def validate(self) -> None:
        if self.ticks < 0:
            raise InvalidSpecError("ticks must be non-negative")
        if self.record_every < 1:
            raise InvalidSpecError("record_every must be positive")
        if not 0 <= self.seed < 2**64:
            raise InvalidSpecError("seed must be a 64-bit unsigned integer")
        if self.campaign_stop_tick is not None and not 0 <= self.campaign_stop_tick <= self.ticks:
            raise InvalidSpecError(
                f"campaign_stop_tick={self.campaign_stop_tick} must lie in [0, ticks={self.ticks}]")


def make_streams(seed: int) -> dict[str, np.random.Generator]:
    return {label: np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=(key,))))
            for label, key in STREAMS.items()}


@dataclass
class MetricsSeries:
    ticks: np.ndarray
    means: dict[str, np.ndarray]
    variances: dict[str, np.ndarray]

    def baseline(self, attr: str) -> float:
        return float(self.means[attr][0])

    def net_change(self, attr: str) -> np.ndarray:
        return self.means[attr] - self.means[attr][0]

    def final_net_change(self, attr: str) -> float:
        return float(self.net_change(attr)[-1])

    def at_tick(self, attr: str, tick: int) -> float:
        return float(self.means[attr][np.searchsorted(self.ticks, tick)])


@dataclass
class Snapshot:
    """Per-agent columns: the nine attributes, susceptibilities and ``purchase_prob``."""

    columns: dict[str, np.ndarray]

    @property
    def n_agents(self) -> int:
        return len(self.columns["purchase_prob"])

    def agents(self) -> list[AgentState]:
        c = self.columns
        return [AgentState(i, AgentAttributes(**{k: float(c[k][i]) for k in ATTRIBUTE_NAMES}),
                           Susceptibilities(float(c["s_pp"][i]), float(c["s_sm"][i]), float(c["s_gov"][i])),
                           float(c["purchase_prob"][i]))
                for i in range(self.n_agents)]

    def __eq__(self, other):
        return (isinstance(other, Snapshot) and self.columns.keys() == other.columns.keys()
                and all(np.array_equal(v, other.columns[k]) for k, v in self.columns.items()))


class World:
    """Mutable struct-of-arrays population used inside one run."""

    def __init__(self, agents: list[AgentState], graph, coeffs):
        self.graph = graph
        self.coeffs = coeffs
        self.cols = {k: np.array([getattr(a.attributes, k) for a in agents]) for k in ATTRIBUTE_NAMES}
        self.s_pp = np.array([a.susceptibilities.s_pp for a in agents])
        self.s_sm = np.array([a.susceptibilities.s_sm for a in agents])
        self.s_gov = np.array([a.susceptibilities.s_gov for a in agents])
        self.p = np.array([a.purchase_prob for a in agents])
        self.contacts = np.ascontiguousarray(graph.contacts)

    @property
    def n(self) -> int:
        return len(self.p)

    def value(self, attr: str) -> np.ndarray:
        if attr == "purchase_prob":
            return self.p
        if attr == "s_gov":
            return self.s_gov
        return self.cols[attr]

    def snapshot(self) -> Snapshot:
        cols = {k: v.copy() for k, v in self.cols.items()}
        cols.update(s_pp=self.s_pp.copy(), s_sm=self.s_sm.copy(), s_gov=self.s_gov.copy(),
                    purchase_prob=self.p.copy())
        return Snapshot(cols)


def initial_population(scenario, rng: np.random.Generator) -> list[AgentState]:
    spec = scenario.population
    spec.validate()
    if spec.source == "csv":
        return load_population_csv(spec.csv_path, scenario.coefficients, rng, spec.susceptibility_range)
    return synthesize_population(spec, rng, scenario.coefficients)


def media_share(sigma: float, n: int) -> int:
    """Agents reached by social media: 2*sigma of the population, rounded."""
    return min(n, int(round(2.0 * sigma * n)))


def step(world: World, tick: int, kernels, engine: EngineConfig, streams) -> None:
    n = world.n
    topic = GOV_TOPICS[streams["topic"].integers(0, len(GOV_TOPICS))]

    if not engine.disable_peer:
        rng = streams["peer"]
        talkers = np.flatnonzero(rng.random(n) < 2.0 * kernels.delta)
        contacts = world.contacts
        count, keys = draw_contact_plan(len(talkers), contacts.shape[1], rng)
        opinions = np.stack([world.cols[a] for a in PEER_TOPICS])
        tau = -1.0 if kernels.tau is None else kernels.tau
        opinions = peer_phase(opinions, world.p, world.s_pp, contacts, talkers, count, keys,
                              tau, kernels.tau is not None)
        for a, row in zip(PEER_TOPICS, opinions):
            world.cols[a] = row

    if not engine.disable_media:
        rng = streams["media"]
        chosen = rng.permutation(n)[:media_share(kernels.sigma, n)]
        s = world.s_sm[chosen]
        for attr in PEER_TOPICS:
            x = world.cols[attr]
            prior = x[chosen]
            x[chosen] = blend(prior, sm_feedback(prior, s, kernels.beta), s, kernels.blend_gamma)

    campaign_on = (kernels.zeta is not None and not engine.disable_gov
                   and (engine.campaign_stop_tick is None or tick < engine.campaign_stop_tick))
    if campaign_on:
        rng = streams["gov"]
        x = world.cols[topic]
        promoted = gov_feedback(math.fsum(x) / n, kernels.zeta)
        exposed = rng.random(n) < kernels.gov_exposure_prob
        world.cols[topic] = np.where(exposed, blend(x, promoted, world.s_gov, kernels.blend_gamma), x)
        world.s_gov = fatigue_step(world.s_gov, tick, kernels.fatigue_rate)

    world.p = purchase_probability_array(world.cols, world.coeffs)


def run(scenario, engine: Optional[EngineConfig] = None,
        on_tick: Optional[Callable[[int, World], None]] = None) -> tuple[MetricsSeries, Snapshot]:
    """Simulate one scenario; returns the metrics series and final snapshot.

    ``engine`` defaults to ``scenario.engine``. ``on_tick(t, world)`` is
    called with the initial state (``t = 0``) and after every tick.
    """
    engine = engine or scenario.engine
    engine.validate()
    kernels = scenario.kernels
    if getattr(scenario, "grid", ()):
        raise InvalidSpecError("scenario has a parameter grid; run its cells or use run_sweep")
    streams = make_streams(engine.seed)
    agents = initial_population(scenario, streams["population"])
    graph = build_graph(len(agents), streams["graph"], scenario.population.n_acquaintances)
    world = World(agents, graph, scenario.coefficients)

    recorded = [0] + [t for t in range(1, engine.ticks + 1) if t % engine.record_every == 0]
    means = {a: np.empty(len(recorded)) for a in TRACKED}
    variances = {a: np.empty(len(recorded)) for a in TRACKED}

    def record(slot):
        for a in TRACKED:
            v = world.value(a)
            means[a][slot] = v.mean()
            variances[a][slot] = v.var()

    record(0)
    if on_tick:
        on_tick(0, world)
    slot = 1
    for t in range(engine.ticks):
        step(world, t, kernels, engine, streams)
        if on_tick:
            on_tick(t + 1, world)
        if (t + 1) % engine.record_every == 0:
            record(slot)
            slot += 1
    return MetricsSeries(np.array(recorded), means, variances), world.snapshot()


@dataclass
class SweepCell:
    params: dict
    seeds: list
    final_net_change: dict[str, np.ndarray]  # attr -> per-seed values
    runs: list = field(default_factory=list, repr=False)

    def mean(self, attr: str) -> float:
        return float(np.mean(self.final_net_change[attr]))

    def std(self, attr: str) -> float:
        return float(np.std(self.final_net_change[attr]))


def _job(args):
    scenario, seed = args
    from dataclasses import replace
    metrics, _ = run(scenario, replace(scenario.engine, seed=seed))
    return metrics


def expand_grid(base, param_grid: dict) -> list[tuple[dict, object]]:
    """Cartesian product of ``param_grid`` applied onto ``base``.

    Every value is checked against its range before anything runs.
    """
    grid = dict(getattr(base, "grid", ()))
    grid.update({k: tuple(v) for k, v in (param_grid or {}).items()})
    base = base.without_grid() if hasattr(base, "without_grid") else base
    keys = list(grid)
    cells = []
    for combo in itertools.product(*(grid[k] for k in keys)):
        params = dict(zip(keys, combo))
        cfg = base
        for k, v in params.items():
            cfg = cfg.with_value(k, v)
        cells.append((params, cfg))
    return cells


def run_sweep(base, param_grid: Optional[dict], seeds, workers: int = 1,
              schedule_seed: Optional[int] = None, keep_runs: bool = False) -> list[SweepCell]:
    """Run every grid cell under every seed and aggregate final net changes.

    Results do not depend on ``workers`` or on the execution order, which
    ``schedule_seed`` shuffles for testing.
    """
    seeds = list(seeds)
    if not seeds:
        raise InvalidSpecError("sweep needs at least one seed")
    cells = expand_grid(base, param_grid)
    for _, cfg in cells:
        cfg.engine.validate()
    jobs = [(ci, cfg, s) for ci, (_, cfg) in enumerate(cells) for s in seeds]
    order = list(range(len(jobs)))
    if schedule_seed is not None:
        random.Random(schedule_seed).shuffle(order)
    results = [None] * len(jobs)
    if workers > 1:
        with ProcessPoolExecutor(workers) as pool:
            for idx, metrics in zip(order, pool.map(_job, [(jobs[i][1], jobs[i][2]) for i in order])):
                results[idx] = metrics
    else:
        for idx in order:
            results[idx] = _job((jobs[idx][1], jobs[idx][2]))

    out = []
    for ci, (params, _) in enumerate(cells):
        runs = [results[k] for k, job in enumerate(jobs) if job[0] == ci]
        finals = {a: np.array([m.final_net_change(a) for m in runs]) for a in TRACKED}
        out.append(SweepCell(params, seeds, finals, runs if keep_runs else []))
    return out
