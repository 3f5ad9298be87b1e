"""Synthetic agentsets, survey-CSV ingestion, and the friendship graph."""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

import numpy as np

from .model import (AGE_BRACKETS, ATTRIBUTE_NAMES, DEFAULT_COEFFICIENTS, AgentAttributes,
                    AgentState, RegressionCoefficients, Susceptibilities, make_agent)

CLIQUE_SIZE = 6
N_ACQUAINTANCES = 10
BASE_CONTACTS = 10
MAX_SPREAD = 4

BETA_ATTRIBUTES = ("env", "exp", "wca", "know", "trust", "access", "freq")

# Calibrated against the qualitative communication, stance and campaign-halt
# orderings (scripts/calibrate.py, seeds 1000+): low initial trust in
# government and moderately low access.
DEFAULT_BETAS = {
    "env": (5.0, 2.0),
    "wca": (2.0, 3.0),
    "know": (2.0, 3.0),
    "exp": (2.0, 4.0),
    "trust": (1.2, 10.0),
    "access": (2.0, 5.0),
    "freq": (3.0, 3.0),
}


class InvalidSpecError(ValueError):
    pass


class CsvSchemaError(InvalidSpecError):
    def __init__(self, message: str, row: Optional[int] = None, column: Optional[str] = None):
        self.row, self.column = row, column
        where = []
        if row is not None:
            where.append(f"row {row}")
        if column is not None:
            where.append(f"column {column}")
        super().__init__(f"{', '.join(where)}: {message}" if where else message)


@dataclass(frozen=True)
class PopulationSpec:
    n_agents: int = 1050
    female_fraction: float = 0.80
    young_fraction: float = 0.50
    attribute_distributions: dict = field(default_factory=lambda: dict(DEFAULT_BETAS))
    susceptibility_range: tuple = (0.1, 0.9)
    source: str = "synthetic"
    csv_path: Optional[str] = None
    n_acquaintances: int = N_ACQUAINTANCES

    def validate(self) -> None:
        if self.source not in ("synthetic", "csv"):
            raise InvalidSpecError(f"unknown population source {self.source!r}")
        if self.source == "csv" and not self.csv_path:
            raise InvalidSpecError("csv source needs csv_path")
        if self.source == "synthetic":
            if self.n_agents <= 0 or self.n_agents % CLIQUE_SIZE:
                raise InvalidSpecError(f"n_agents={self.n_agents} must be a positive multiple of {CLIQUE_SIZE}")
        for name in ("female_fraction", "young_fraction"):
            v = getattr(self, name)
            if not 0.0 <= v <= 1.0:
                raise InvalidSpecError(f"{name}={v} outside [0, 1]")
        missing = set(BETA_ATTRIBUTES) - set(self.attribute_distributions)
        if missing:
            raise InvalidSpecError(f"no Beta distribution for {sorted(missing)}")
        for name, (a, b) in self.attribute_distributions.items():
            if name not in BETA_ATTRIBUTES:
                raise InvalidSpecError(f"{name} has no Beta distribution slot")
            if not (a > 0 and b > 0):
                raise InvalidSpecError(f"Beta({a}, {b}) for {name} needs positive parameters")
        lo, hi = self.susceptibility_range
        if not 0.0 <= lo <= hi <= 1.0:
            raise InvalidSpecError(f"susceptibility_range {self.susceptibility_range} not within [0, 1]")
        if self.n_acquaintances < 0:
            raise InvalidSpecError("n_acquaintances must be non-negative")


def _sample_susceptibilities(n: int, rng: np.random.Generator, bounds) -> np.ndarray:
    lo, hi = bounds
    # columns: s_pp, s_sm, s_gov
    return np.column_stack([rng.uniform(lo, hi, n) for _ in range(3)])


def synthesize_population(spec: PopulationSpec, rng: np.random.Generator,
                          coeffs: RegressionCoefficients = DEFAULT_COEFFICIENTS) -> list[AgentState]:
    spec.validate()
    n = spec.n_agents
    cols = {"sex": (rng.random(n) < spec.female_fraction).astype(float)}
    young = rng.random(n) < spec.young_fraction
    older = rng.integers(1, len(AGE_BRACKETS), n)
    cols["age"] = np.where(young, 0.0, np.asarray(AGE_BRACKETS)[older])
    for name in BETA_ATTRIBUTES:
        a, b = spec.attribute_distributions[name]
        cols[name] = rng.beta(a, b, n)
    sus = _sample_susceptibilities(n, rng, spec.susceptibility_range)
    return [
        make_agent(i, AgentAttributes(**{k: float(cols[k][i]) for k in ATTRIBUTE_NAMES}),
                   Susceptibilities(*map(float, sus[i])), coeffs)
        for i in range(n)
    ]


def load_population_csv(path, coeffs: RegressionCoefficients = DEFAULT_COEFFICIENTS,
                        rng: Optional[np.random.Generator] = None,
                        susceptibility_range=(0.1, 0.9)) -> list[AgentState]:
    """Read one agent per row from a normalized survey export.

    The header must name exactly the nine attribute columns. Errors carry
    the 1-based data row and the column at fault.
    """
    rng = rng if rng is not None else np.random.default_rng()
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh, quoting=csv.QUOTE_NONE, strict=True)
        header = next(reader, None)
        if not header:
            raise InvalidSpecError(f"{path}: empty population file")
        header = [h.strip() for h in header]
        if sorted(header) != sorted(ATTRIBUTE_NAMES) or len(header) != len(ATTRIBUTE_NAMES):
            raise CsvSchemaError(f"header {header} does not match {list(ATTRIBUTE_NAMES)}", row=0)
        rows = []
        for lineno, record in enumerate(reader, start=1):
            if not record:
                continue
            if len(record) != len(header):
                raise CsvSchemaError(f"expected {len(header)} fields, got {len(record)}", row=lineno)
            values = {}
            for col, text in zip(header, record):
                try:
                    v = float(text)
                except ValueError:
                    raise CsvSchemaError(f"cannot parse {text!r} as a number", row=lineno, column=col) from None
                if not 0.0 <= v <= 1.0:
                    raise CsvSchemaError(f"value {v} outside [0, 1]", row=lineno, column=col)
                values[col] = v
            rows.append(values)
    if not rows:
        raise InvalidSpecError(f"{path}: population file has no agents")
    sus = _sample_susceptibilities(len(rows), rng, susceptibility_range)
    return [make_agent(i, AgentAttributes(**row), Susceptibilities(*map(float, sus[i])), coeffs)
            for i, row in enumerate(rows)]


def write_population_csv(agents: list[AgentState], path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(ATTRIBUTE_NAMES)
        for a in agents:
            w.writerow([repr(getattr(a.attributes, k)) for k in ATTRIBUTE_NAMES])


@dataclass(frozen=True)
class SocialGraph:
    """Inner circles (cliques of six) plus directed acquaintance lists."""

    inner: np.ndarray  # (n, 5)
    outer: np.ndarray  # (n, n_acquaintances)

    @property
    def n_agents(self) -> int:
        return len(self.inner)

    @property
    def contacts(self) -> np.ndarray:
        return np.hstack([self.inner, self.outer])

    def __eq__(self, other):
        return (isinstance(other, SocialGraph) and np.array_equal(self.inner, other.inner)
                and np.array_equal(self.outer, other.outer))


def build_graph(n_agents: int, rng: np.random.Generator, n_acquaintances: int = N_ACQUAINTANCES) -> SocialGraph:
    """Tile consecutive ids into cliques of six, then pick acquaintances.

    Each agent draws ``n_acquaintances`` distinct ids uniformly from the
    agents outside its own clique.
    """
    if n_agents <= 0 or n_agents % CLIQUE_SIZE:
        raise InvalidSpecError(f"n_agents={n_agents} must be a positive multiple of {CLIQUE_SIZE}")
    outside = n_agents - CLIQUE_SIZE
    if outside < n_acquaintances:
        raise InvalidSpecError(
            f"{n_agents} agents leave {outside} acquaintance candidates, need {n_acquaintances}")
    ids = np.arange(n_agents)
    start = ids - ids % CLIQUE_SIZE
    member = start[:, None] + np.arange(CLIQUE_SIZE)
    inner = member[member != ids[:, None]].reshape(n_agents, CLIQUE_SIZE - 1)
    outer = np.empty((n_agents, n_acquaintances), dtype=np.int64)
    for i in range(n_agents):
        pick = rng.choice(outside, size=n_acquaintances, replace=False)
        # skip over the agent's own clique
        outer[i] = np.where(pick < start[i], pick, pick + CLIQUE_SIZE)
    return SocialGraph(inner.astype(np.int64), outer)


def draw_contact_plan(m: int, degree: int, rng: np.random.Generator):
    """Random draws behind one day of conversations for ``m`` agents.

    Returns ``(count, keys)``. ``count`` is ``10 + a`` or ``10 - a`` with
    ``a`` uniform on {1, 2, 3, 4} and a fair-coin sign, capped at
    ``degree``. Sorting a row of ``keys`` gives a uniform permutation of
    the agent's contacts; the first ``count`` of them are today's partners.
    """
    spread = rng.integers(1, MAX_SPREAD + 1, m)
    up = rng.integers(0, 2, m).astype(bool)
    count = np.minimum(BASE_CONTACTS + np.where(up, spread, -spread), degree)
    keys = rng.random((m, degree))
    return count, keys


def sample_contacts(graph: SocialGraph, rng: np.random.Generator, agent_ids=None):
    """Draw today's conversation partners for many agents at once.

    Returns ``(partners, used)``: row ``r`` of ``partners`` is a random
    permutation of the agent's contacts and ``used`` flags its leading
    ``count`` slots, the ones actually drawn.
    """
    contacts = graph.contacts
    if agent_ids is not None:
        contacts = contacts[np.asarray(agent_ids)]
    m, degree = contacts.shape
    count, keys = draw_contact_plan(m, degree, rng)
    order = np.argsort(keys, axis=1)
    partners = contacts[np.arange(m)[:, None], order]
    used = np.arange(degree)[None, :] < count[:, None]
    return partners, used


def sample_daily_contacts(agent_id: int, graph: SocialGraph, rng: np.random.Generator) -> list[int]:
    partners, used = sample_contacts(graph, rng, [agent_id])
    return [int(j) for j in partners[0][used[0]]]
