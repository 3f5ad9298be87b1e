"""Agent-based simulation of fast-fashion purchasing decisions.

Agents carry nine survey-style attributes that feed a fixed linear
purchase-probability model. Each tick, peer conversations, a tailored
social-media feed and an optional government campaign shift the dynamic
opinions (environmental concern, working-condition awareness, knowledge,
trust in government), and every probability is recomputed.
"""

from .engine import EngineConfig, MetricsSeries, Snapshot, run, run_sweep
from .influence import KernelParams, blend, fatigue_step, gov_feedback, peer_update, sm_feedback
from .model import AgentAttributes, AgentState, Susceptibilities, behavior_proxy, purchase_probability
from .population import PopulationSpec, build_graph, sample_daily_contacts, synthesize_population
from .scenario import PRESETS, ScenarioConfig, get_preset, parse_config

__version__ = "0.1.0"

__all__ = [
    "AgentAttributes", "AgentState", "EngineConfig", "KernelParams", "MetricsSeries", "PRESETS",
    "PopulationSpec", "ScenarioConfig", "Snapshot", "Susceptibilities", "behavior_proxy", "blend",
    "build_graph", "fatigue_step", "get_preset", "gov_feedback", "parse_config", "peer_update",
    "purchase_probability", "run", "run_sweep", "sample_daily_contacts", "sm_feedback",
    "synthesize_population",
]
