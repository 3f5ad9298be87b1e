"""Agent schema and the linear purchase-probability rule."""

from __future__ import annotations

from dataclasses import astuple, dataclass, fields, replace

import numpy as np

ATTRIBUTE_NAMES = ("sex", "age", "env", "exp", "wca", "know", "trust", "access", "freq")
PEER_TOPICS = ("env", "wca", "know")
GOV_TOPICS = ("env", "wca", "know", "trust")

P_MIN = 0.01
P_MAX = 0.99

# Six survey age brackets, youngest first.
AGE_BRACKETS = (0.0, 0.2, 0.4, 0.6, 0.8, 1.0)


@dataclass(frozen=True)
class AgentAttributes:
    """Normalized attribute vector of one agent.

    ``sex`` is 0 for male and 1 for female. ``age`` takes one of
    :data:`AGE_BRACKETS`. Every other field is a unit-interval score.
    """

    sex: float
    age: float
    env: float
    exp: float
    wca: float
    know: float
    trust: float
    access: float
    freq: float

    def __post_init__(self):
        for f in fields(self):
            v = getattr(self, f.name)
            if not 0.0 <= v <= 1.0:
                raise ValueError(f"attribute {f.name}={v} outside [0, 1]")

    def as_array(self) -> np.ndarray:
        return np.array(astuple(self), dtype=float)

    def with_values(self, **changes) -> AgentAttributes:
        return replace(self, **changes)


@dataclass(frozen=True)
class Susceptibilities:
    s_pp: float
    s_sm: float
    s_gov: float


@dataclass(frozen=True)
class RegressionCoefficients:
    b0: float = 0.7450
    b1: float = -0.0101  # sex
    b2: float = 0.0200  # age
    b3: float = -0.0179  # env
    b4: float = -0.0488  # exp
    b5: float = -0.1783  # wca
    b6: float = -0.1414  # know
    b7: float = 0.0320  # trust
    b8: float = 0.0360  # access
    b9: float = 0.2181  # freq

    @property
    def slopes(self) -> tuple[float, ...]:
        """Coefficients b1..b9 in :data:`ATTRIBUTE_NAMES` order."""
        return (self.b1, self.b2, self.b3, self.b4, self.b5, self.b6, self.b7, self.b8, self.b9)


DEFAULT_COEFFICIENTS = RegressionCoefficients()


@dataclass(frozen=True)
class AgentState:
    id: int
    attributes: AgentAttributes
    susceptibilities: Susceptibilities
    purchase_prob: float


def linear_predictor(attrs: AgentAttributes, coeffs: RegressionCoefficients = DEFAULT_COEFFICIENTS) -> float:
    """Unclamped regression output b0 + b1*sex + ... + b9*freq."""
    total = coeffs.b0
    for b, name in zip(coeffs.slopes, ATTRIBUTE_NAMES):
        total = total + b * getattr(attrs, name)
    return total


def purchase_probability(attrs: AgentAttributes, coeffs: RegressionCoefficients = DEFAULT_COEFFICIENTS) -> float:
    return min(max(linear_predictor(attrs, coeffs), P_MIN), P_MAX)


def purchase_probability_array(columns: dict[str, np.ndarray], coeffs: RegressionCoefficients = DEFAULT_COEFFICIENTS) -> np.ndarray:
    """Vectorized :func:`purchase_probability` over per-attribute columns.

    Terms are accumulated left to right, in the same order as the scalar
    version, so both paths agree to the last bit.
    """
    total = np.full(len(columns["sex"]), coeffs.b0)
    for b, name in zip(coeffs.slopes, ATTRIBUTE_NAMES):
        total = total + b * columns[name]
    return np.clip(total, P_MIN, P_MAX)


def behavior_proxy(purchase_prob):
    """Sustainable-behavior level of an agent, ``1 - purchase_prob``.

    Accepts an :class:`AgentState`, a float, or an array.
    """
    if isinstance(purchase_prob, AgentState):
        purchase_prob = purchase_prob.purchase_prob
    return 1.0 - purchase_prob


def make_agent(id: int, attrs: AgentAttributes, sus: Susceptibilities,
               coeffs: RegressionCoefficients = DEFAULT_COEFFICIENTS) -> AgentState:
    return AgentState(id, attrs, sus, purchase_probability(attrs, coeffs))
