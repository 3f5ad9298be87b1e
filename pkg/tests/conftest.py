from dataclasses import replace

import hypothesis
import numpy as np
import pytest

from fashion_abm.scenario import get_preset

hypothesis.settings.register_profile("default", max_examples=100, deadline=None)
hypothesis.settings.register_profile("fast", max_examples=20, deadline=None)
hypothesis.settings.load_profile("default")

ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def small(preset="C5", n_agents=60, ticks=20, seed=0, **values):
    """A cheap single-cell scenario derived from a preset."""
    cfg = get_preset(preset).without_grid()
    for k, v in values.items():
        cfg = cfg.with_value(k, v)
    stop = cfg.engine.campaign_stop_tick
    if stop is not None:
        stop = min(stop, ticks // 2)
    return replace(cfg,
                   population=replace(cfg.population, n_agents=n_agents,
                                      n_acquaintances=min(10, n_agents - 6)),
                   engine=replace(cfg.engine, ticks=ticks, seed=seed, campaign_stop_tick=stop))
