"""Brute-force reference simulator used to cross-check the engine.

Plain Python floats and loops, one agent at a time, no shared kernels.
It consumes the engine's random streams in the same order and shapes,
so for equal seeds both must produce identical states at every tick.
"""

from __future__ import annotations

import math

import numpy as np

from .engine import World, initial_population, make_streams
from .model import ATTRIBUTE_NAMES
from .population import build_graph

TOPICS = ["env", "wca", "know", "trust"]
TALK_TOPICS = ["env", "wca", "know"]


def _clamp(v, lo, hi):
    return lo if v < lo else hi if v > hi else v


def _prob(agent, c):
    p = c.b0 + c.b1 * agent["sex"]
    p = p + c.b2 * agent["age"]
    p = p + c.b3 * agent["env"]
    p = p + c.b4 * agent["exp"]
    p = p + c.b5 * agent["wca"]
    p = p + c.b6 * agent["know"]
    p = p + c.b7 * agent["trust"]
    p = p + c.b8 * agent["access"]
    p = p + c.b9 * agent["freq"]
    return _clamp(p, 0.01, 0.99)


def _damped(prior, target, s, gamma):
    if s == 1.0:
        return target
    d = target - prior
    g = gamma
    if 1.0 - s > 0.0 and 1.0 / (1.0 - s) < g:
        g = 1.0 / (1.0 - s)
    return _clamp(prior + s * d * math.exp(-g * (1.0 - s) * abs(d)), 0.0, 1.0)


def _feed(x, s, bias):
    b = 50.0 * s
    y = b * (x * x * x) - (1.5 * b) * (x * x) + (0.75 * b) * x + (0.5 - b / 8.0) + bias
    if y > 1.0:
        return 0.95
    if y < 0.0:
        return 0.05
    return y


def reference_run(scenario, engine=None):
    """Return the list of per-tick states, each a list of agent dicts."""
    engine = engine or scenario.engine
    k = scenario.kernels
    c = scenario.coefficients
    streams = make_streams(engine.seed)
    agents0 = initial_population(scenario, streams["population"])
    graph = build_graph(len(agents0), streams["graph"], scenario.population.n_acquaintances)
    contacts = graph.contacts.tolist()
    n = len(agents0)

    agents = []
    for a in agents0:
        d = {name: getattr(a.attributes, name) for name in ATTRIBUTE_NAMES}
        d.update(s_pp=a.susceptibilities.s_pp, s_sm=a.susceptibilities.s_sm,
                 s_gov=a.susceptibilities.s_gov, purchase_prob=a.purchase_prob)
        agents.append(d)
    trace = [[dict(a) for a in agents]]

    for tick in range(engine.ticks):
        topic = TOPICS[int(streams["topic"].integers(0, 4))]

        if not engine.disable_peer:
            rng = streams["peer"]
            u = rng.random(n)
            talkers = [i for i in range(n) if u[i] < 2.0 * k.delta]
            degree = len(contacts[0])
            spread = rng.integers(1, 5, len(talkers))
            up = rng.integers(0, 2, len(talkers))
            keys = rng.random((len(talkers), degree))
            start = [dict(a) for a in agents]
            for r, i in enumerate(talkers):
                count = 10 + int(spread[r]) if up[r] else 10 - int(spread[r])
                count = min(count, degree)
                order = sorted(range(degree), key=lambda q: keys[r][q])
                partners = [contacts[i][q] for q in order[:count]]
                me = start[i]
                for attr in TALK_TOPICS:
                    total = 0.0
                    heard = 0
                    for j in partners:
                        peer = start[j]
                        if not peer["s_pp"] < me["s_pp"]:
                            continue
                        o = peer[attr]
                        b = 1.0 - peer["purchase_prob"]
                        if k.tau is not None and abs(o - me[attr]) > k.tau:
                            o, b = 1.0 - o, 1.0 - b
                        total = total + (o / 3.0 + 2.0 * b / 3.0)
                        heard += 1
                    if heard:
                        s = me["s_pp"]
                        agents[i][attr] = _clamp((1.0 - s) * me[attr] + (s / heard) * total, 0.0, 1.0)

        if not engine.disable_media:
            rng = streams["media"]
            m = min(n, int(round(2.0 * k.sigma * n)))
            for i in rng.permutation(n)[:m].tolist():
                a = agents[i]
                for attr in TALK_TOPICS:
                    a[attr] = _damped(a[attr], _feed(a[attr], a["s_sm"], k.beta), a["s_sm"], k.blend_gamma)

        campaign = (k.zeta is not None and not engine.disable_gov
                    and (engine.campaign_stop_tick is None or tick < engine.campaign_stop_tick))
        if campaign:
            rng = streams["gov"]
            mean = math.fsum(a[topic] for a in agents) / n
            promoted = _clamp(k.zeta * mean, 0.05, 0.95)
            u = rng.random(n)
            for i, a in enumerate(agents):
                if u[i] < k.gov_exposure_prob:
                    a[topic] = _damped(a[topic], promoted, a["s_gov"], k.blend_gamma)
            weeks = tick // 7
            for a in agents:
                a["s_gov"] = a["s_gov"] * math.exp(-k.fatigue_rate * weeks)

        for a in agents:
            a["purchase_prob"] = _prob(a, c)
        trace.append([dict(a) for a in agents])
    return trace


def engine_trace(scenario, engine=None):
    """Per-tick states from :func:`fashion_abm.engine.run`, in oracle layout."""
    from .engine import run

    states = []

    def grab(t, world: World):
        cols = world.snapshot().columns
        keys = list(ATTRIBUTE_NAMES) + ["s_pp", "s_sm", "s_gov", "purchase_prob"]
        states.append([{key: float(cols[key][i]) for key in keys} for i in range(world.n)])

    run(scenario, engine, on_tick=grab)
    return states


def compare_traces(expected, actual) -> list[str]:
    """Describe every bitwise difference; empty when the traces agree."""
    problems = []
    if len(expected) != len(actual):
        return [f"trace lengths differ: {len(expected)} vs {len(actual)}"]
    for t, (xs, ys) in enumerate(zip(expected, actual)):
        for i, (x, y) in enumerate(zip(xs, ys)):
            for key, v in x.items():
                if np.float64(v).tobytes() != np.float64(y[key]).tobytes():
                    problems.append(f"tick {t} agent {i} {key}: oracle {v!r} engine {y[key]!r}")
    return problems
