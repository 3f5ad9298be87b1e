"""Influence kernels: peer pressure, social media, government, fatigue.

Every kernel is a pure function. The scalar kernels accept numpy arrays
as well, which is how the engine applies them to a whole population at
once.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from ._fast import exp_array

SM_CAP_HIGH = 0.95
SM_CAP_LOW = 0.05
GOV_MIN = 0.05
GOV_MAX = 0.95
DAYS_PER_WEEK = 7

# Closed ranges accepted for the scenario parameters.
PARAM_RANGES = {
    "delta": (0.05, 0.5),
    "tau": (0.05, 0.5),
    "sigma": (0.05, 0.5),
    "beta": (-0.30, 0.30),
    "zeta": (0.5, 1.5),
    "gov_exposure_prob": (0.0, 1.0),
    "blend_gamma": (0.0, float("inf")),
    "fatigue_rate": (0.0, float("inf")),
}


class ParameterRangeError(ValueError):
    def __init__(self, key: str, value, bounds: tuple[float, float]):
        self.key, self.value, self.bounds = key, value, bounds
        super().__init__(f"{key}={value} outside permitted range [{bounds[0]}, {bounds[1]}]")


def check_range(key: str, value) -> None:
    lo, hi = PARAM_RANGES[key]
    # tolerate binary representation noise of decimal literals such as 0.3
    if not (lo - 1e-12 <= value <= hi + 1e-12):
        raise ParameterRangeError(key, value, (lo, hi))


@dataclass(frozen=True)
class KernelParams:
    delta: float = 0.1
    tau: Optional[float] = None
    sigma: float = 0.1
    beta: float = 0.0
    zeta: Optional[float] = None
    gov_exposure_prob: float = 0.5
    blend_gamma: float = 2.0
    fatigue_rate: float = 0.00125

    def __post_init__(self):
        for key in PARAM_RANGES:
            value = getattr(self, key)
            if value is not None:
                check_range(key, value)

    @property
    def polarized(self) -> bool:
        return self.tau is not None


def peer_update(self_opinion: float, s_pp_self: float,
                peer_terms: Sequence[tuple[float, float, float]],
                tau: Optional[float] = None) -> float:
    """One agent's opinion after talking to its sampled peers.

    ``peer_terms`` holds ``(opinion, behavior, s_pp)`` for each peer. Only
    peers less susceptible than the agent are heard. With a tolerance
    ``tau``, a peer whose opinion is further than ``tau`` away is heard
    inverted: both its opinion and behavior enter as ``1 - value``.
    """
    total = 0.0
    k = 0
    for opinion, behavior, s_peer in peer_terms:
        if not s_peer < s_pp_self:
            continue
        if tau is not None and abs(opinion - self_opinion) > tau:
            opinion, behavior = 1.0 - opinion, 1.0 - behavior
        total = total + peer_contribution(opinion, behavior)
        k += 1
    if k == 0:
        return self_opinion
    out = (1.0 - s_pp_self) * self_opinion + (s_pp_self / k) * total
    return min(max(out, 0.0), 1.0)


def peer_contribution(opinion, behavior):
    """Behavior weighs twice as much as stated opinion."""
    return opinion / 3.0 + 2.0 * behavior / 3.0


def sm_feedback(opinion, s_sm, beta=0.0):
    """Opinion a tailored feed shows back to an agent.

    A cubic centred on (0.5, 0.5) with steepness ``50 * s_sm`` plus the
    platform bias. Outputs above 1 are replaced by 0.95 and negative
    outputs by 0.05; anything already in [0, 1] passes through.
    """
    raw = sm_feedback_raw(opinion, s_sm, beta)
    if np.ndim(raw) == 0:
        if raw > 1.0:
            return SM_CAP_HIGH
        if raw < 0.0:
            return SM_CAP_LOW
        return raw
    return np.where(raw > 1.0, SM_CAP_HIGH, np.where(raw < 0.0, SM_CAP_LOW, raw))


def sm_feedback_raw(opinion, s_sm, beta=0.0):
    b = 50.0 * s_sm
    x = opinion
    return b * (x * x * x) - (1.5 * b) * (x * x) + (0.75 * b) * x + (0.5 - b / 8.0) + beta


def effective_gamma(susceptibility, gamma):
    """Damping strength capped at ``1 / (1 - S)`` to keep blend monotone."""
    slack = 1.0 - susceptibility
    if np.ndim(slack) == 0:
        return gamma if slack <= 0.0 else min(gamma, 1.0 / slack)
    with np.errstate(divide="ignore"):
        cap = np.where(slack > 0.0, 1.0 / np.where(slack > 0.0, slack, 1.0), np.inf)
    return np.minimum(gamma, cap)


def blend(prior, promoted, susceptibility, gamma=2.0):
    """Move ``prior`` toward ``promoted`` by a damped fraction ``S``.

    ``prior + S * d * exp(-g * (1 - S) * |d|)`` with ``d = promoted - prior``.
    No change at ``S = 0`` or when ``promoted == prior``; a plain jump to
    ``promoted`` at ``S = 1``; larger gaps are closed proportionally less.
    """
    d = promoted - prior
    g = effective_gamma(susceptibility, gamma)
    rate = -g * (1.0 - susceptibility) * np.abs(d)
    if np.ndim(rate):
        out = prior + susceptibility * d * exp_array(np.ascontiguousarray(rate, dtype=float))
        # full susceptibility lands on promoted without rounding residue
        out = np.where(np.asarray(susceptibility) == 1.0, promoted, out)
        return np.clip(out, 0.0, 1.0)
    if susceptibility == 1.0:
        return float(promoted)
    out = prior + susceptibility * d * math.exp(rate)
    return float(min(max(out, 0.0), 1.0))


def gov_feedback(mean_opinion, zeta):
    return np.clip(zeta * mean_opinion, GOV_MIN, GOV_MAX) if np.ndim(mean_opinion) \
        else float(min(max(zeta * mean_opinion, GOV_MIN), GOV_MAX))


def fatigue_step(s_gov, tick: int, fatigue_rate: float = 0.00125):
    """Campaign fatigue: shrink government susceptibility by elapsed weeks."""
    weeks = tick // DAYS_PER_WEEK
    factor = math.exp(-fatigue_rate * weeks)
    return s_gov * factor if np.ndim(s_gov) else float(s_gov * factor)
