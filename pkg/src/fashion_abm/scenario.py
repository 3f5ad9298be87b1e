"""Scenario configs, the preset catalog, and the TOML config format.

A config file is TOML. Kernel, engine and population settings live under
``[kernels]``, ``[engine]`` and ``[population]`` (dotted keys such as
``kernels.delta = 0.3`` work too), and the common scenario parameters may
be given bare at the top level (``zeta = 1.2``). ``preset = "A1"`` starts
from a catalog entry. A list value on a scalar parameter turns it into a
sweep axis. ``tau = "none"`` selects the non-polarized agentset, which is
also what an absent ``tau`` means.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field, fields, replace
from typing import Optional

try:
    import tomllib as tomli
except ModuleNotFoundError:  # Python < 3.11
    import tomli

from .engine import EngineConfig
from .influence import KernelParams, ParameterRangeError
from .model import DEFAULT_COEFFICIENTS, RegressionCoefficients
from .population import BETA_ATTRIBUTES, InvalidSpecError, PopulationSpec

OUTPUT_KINDS = ("timeseries_csv", "final_snapshot_csv", "histogram_csv", "svg_lines", "svg_histogram")

SECTIONS = {
    "kernels": KernelParams,
    "engine": EngineConfig,
    "population": PopulationSpec,
}

ALIASES = {
    "delta": "kernels.delta",
    "tau": "kernels.tau",
    "sigma": "kernels.sigma",
    "beta": "kernels.beta",
    "zeta": "kernels.zeta",
    "seed": "engine.seed",
    "ticks": "engine.ticks",
    "campaign_stop_tick": "engine.campaign_stop_tick",
    "n_agents": "population.n_agents",
}

OPTIONAL_KEYS = {"kernels.tau", "kernels.zeta", "engine.campaign_stop_tick", "population.csv_path"}
NONE_WORDS = {"none", "n/a", "na", "off"}


class ConfigError(ValueError):
    def __init__(self, message: str, key: Optional[str] = None, line: Optional[int] = None,
                 bounds: Optional[tuple] = None):
        self.key, self.line, self.bounds = key, line, bounds
        prefix = f"line {line}: " if line is not None else ""
        super().__init__(prefix + message)


def canonical_key(key: str) -> str:
    key = ALIASES.get(key, key)
    section, _, name = key.partition(".")
    if section not in SECTIONS or name not in {f.name for f in fields(SECTIONS[section])}:
        raise ConfigError(f"unknown parameter {key!r}", key=key)
    return key


@dataclass(frozen=True)
class ScenarioConfig:
    name: str = "custom"
    population: PopulationSpec = field(default_factory=PopulationSpec)
    kernels: KernelParams = field(default_factory=KernelParams)
    engine: EngineConfig = field(default_factory=EngineConfig)
    outputs: tuple = OUTPUT_KINDS
    grid: tuple = ()  # ((dotted key, (values...)), ...)
    coefficients: RegressionCoefficients = DEFAULT_COEFFICIENTS

    def get(self, key: str):
        section, _, name = canonical_key(key).partition(".")
        return getattr(getattr(self, section), name)

    def with_value(self, key: str, value) -> ScenarioConfig:
        section, _, name = canonical_key(key).partition(".")
        try:
            part = replace(getattr(self, section), **{name: value})
        except ParameterRangeError as e:
            raise ConfigError(str(e), key=key, bounds=e.bounds) from None
        return replace(self, **{section: part})

    def without_grid(self) -> ScenarioConfig:
        return replace(self, grid=())

    def cells(self) -> list[tuple[dict, ScenarioConfig]]:
        from .engine import expand_grid
        return expand_grid(self, {})

    def validate(self) -> None:
        self.population.validate()
        self.engine.validate()
        for key, values in self.grid:
            for v in values:
                self.with_value(key, v)


def _preset(name, delta, sigma, beta=0.0, tau=None, zeta=None, stop=None) -> ScenarioConfig:
    cfg = ScenarioConfig(name=name, engine=EngineConfig(campaign_stop_tick=stop))
    grid = []
    for key, value in (("kernels.delta", delta), ("kernels.tau", tau), ("kernels.sigma", sigma),
                       ("kernels.beta", beta), ("kernels.zeta", zeta)):
        if isinstance(value, (list, tuple)):
            grid.append((key, tuple(value)))
            value = value[0]
        cfg = cfg.with_value(key, value)
    return replace(cfg, grid=tuple(grid))


ZETAS = [0.5, 0.8, 1.0, 1.2, 1.5]
BIASES = [-0.30, -0.15, 0.0, 0.15, 0.30]

PRESETS = {
    "A1": _preset("A1", delta=[0.1, 0.3, 0.5], sigma=0.1),
    "A2": _preset("A2", delta=[0.1, 0.3, 0.5], sigma=0.1, tau=0.15),
    "A3": _preset("A3", delta=[0.1, 0.3, 0.5], sigma=0.1, tau=[0.05, 0.15, 0.25, 0.5]),
    "B1": _preset("B1", delta=0.1, sigma=[0.1, 0.3, 0.5]),
    "B2": _preset("B2", delta=0.1, sigma=0.1, beta=BIASES),
    "B3": _preset("B3", delta=0.4, sigma=0.4, beta=[-0.15, 0.15]),
    "B4": _preset("B4", delta=0.4, sigma=[0.1, 0.3, 0.5], tau=0.15),
    "B5": _preset("B5", delta=0.1, sigma=0.35, tau=0.15, beta=BIASES),
    "C1": _preset("C1", delta=0.4, sigma=0.1, zeta=ZETAS),
    "C2": _preset("C2", delta=0.4, sigma=0.1, tau=0.15, zeta=ZETAS),
    "C3": _preset("C3", delta=0.4, sigma=0.4, tau=0.15, beta=[-0.30, 0.0, 0.30], zeta=1.2),
    "C4": _preset("C4", delta=0.4, sigma=0.1, tau=[0.10, 0.20, 0.30], zeta=1.2, stop=250),
    "C5": _preset("C5", delta=0.4, sigma=0.1, tau=0.15, beta=[-0.30, 0.30], zeta=1.2, stop=250),
}


def get_preset(name: str) -> ScenarioConfig:
    try:
        return PRESETS[name.upper()]
    except KeyError:
        raise ConfigError(f"unknown preset {name!r}; choose from {', '.join(PRESETS)}") from None


def _flatten(table: dict, prefix: str = "") -> dict:
    flat = {}
    for k, v in table.items():
        key = f"{prefix}{k}"
        if isinstance(v, dict) and key != "population.attribute_distributions":
            if key == "population.beta":
                flat["population.attribute_distributions"] = v
                continue
            flat.update(_flatten(v, key + "."))
        else:
            flat[key] = v
    return flat


def _line_of(text: str, key: str) -> Optional[int]:
    name = key.rpartition(".")[2]
    pattern = re.compile(rf"^\s*([\w.]*\.)?{re.escape(name)}\s*=")
    for i, line in enumerate(text.splitlines(), start=1):
        if pattern.match(line):
            return i
    return None


def _coerce(key: str, value):
    if isinstance(value, str) and value.strip().lower() in NONE_WORDS:
        if key not in OPTIONAL_KEYS:
            raise ConfigError(f"{key} cannot be unset", key=key)
        return None
    if key == "population.attribute_distributions":
        dists = dict(value)
        for name, pair in dists.items():
            if name not in BETA_ATTRIBUTES or not isinstance(pair, list) or len(pair) != 2:
                raise ConfigError(f"population.beta.{name} must be [alpha, beta] for one of {BETA_ATTRIBUTES}",
                                  key=key)
            dists[name] = (float(pair[0]), float(pair[1]))
        return dists
    if key == "population.susceptibility_range":
        if not isinstance(value, list) or len(value) != 2:
            raise ConfigError("susceptibility_range must be [low, high]", key=key)
        return (float(value[0]), float(value[1]))
    return value


def parse_config(text: str) -> ScenarioConfig:
    """Parse and fully validate a scenario config."""
    try:
        table = tomli.loads(text)
    except tomli.TOMLDecodeError as e:
        raise ConfigError(f"parse error: {e}", line=getattr(e, "lineno", None)) from None

    preset = table.pop("preset", None)
    cfg = get_preset(preset) if preset is not None else ScenarioConfig()
    if "name" in table:
        cfg = replace(cfg, name=str(table.pop("name")))
    if "outputs" in table:
        outs = table.pop("outputs")
        bad = [o for o in outs if o not in OUTPUT_KINDS]
        if bad:
            raise ConfigError(f"unknown outputs {bad}; choose from {OUTPUT_KINDS}", key="outputs")
        cfg = replace(cfg, outputs=tuple(outs))
    if "coefficients" in table:
        coeffs = table.pop("coefficients")
        try:
            cfg = replace(cfg, coefficients=replace(cfg.coefficients, **{k: float(v) for k, v in coeffs.items()}))
        except TypeError as e:
            raise ConfigError(f"bad coefficients table: {e}", key="coefficients") from None

    grid = dict(cfg.grid)
    population_updates = {}
    for raw_key, value in _flatten(table).items():
        try:
            key = canonical_key(raw_key)
        except ConfigError as e:
            raise ConfigError(str(e), key=raw_key, line=_line_of(text, raw_key)) from None
        if isinstance(value, list) and key not in ("population.susceptibility_range",):
            if not value:
                raise ConfigError(f"{raw_key} has an empty value list", key=raw_key)
            values = tuple(_coerce(key, v) for v in value)
            if len(values) > 1:
                grid[key] = values
            else:
                grid.pop(key, None)
            value = values[0]
        else:
            grid.pop(key, None)
            value = _coerce(key, value)
        if key.startswith("population."):
            population_updates[key.partition(".")[2]] = value
            continue
        try:
            cfg = cfg.with_value(key, value)
        except ConfigError as e:
            raise ConfigError(str(e), key=raw_key, line=_line_of(text, raw_key), bounds=e.bounds) from None
        except (TypeError, ValueError) as e:
            raise ConfigError(f"{raw_key}: {e}", key=raw_key, line=_line_of(text, raw_key)) from None

    if population_updates:
        dists = population_updates.get("attribute_distributions")
        if dists is not None:
            population_updates["attribute_distributions"] = {**cfg.population.attribute_distributions, **dists}
        if "csv_path" in population_updates and "source" not in population_updates:
            population_updates["source"] = "csv"
        cfg = replace(cfg, population=replace(cfg.population, **population_updates))

    cfg = replace(cfg, grid=tuple(grid.items()))
    try:
        cfg.validate()
    except ParameterRangeError as e:
        raise ConfigError(str(e), key=e.key, line=_line_of(text, e.key), bounds=e.bounds) from None
    except ConfigError as e:
        raise ConfigError(str(e), key=e.key, line=_line_of(text, e.key or ""), bounds=e.bounds) from None
    except InvalidSpecError as e:
        raise ConfigError(str(e)) from None
    return cfg


def _toml_value(v) -> str:
    if v is None:
        return '"none"'
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, (int, float)):
        return repr(v)
    if isinstance(v, str):
        return '"' + v.replace("\\", "\\\\").replace('"', '\\"') + '"'
    if isinstance(v, (list, tuple)):
        return "[" + ", ".join(_toml_value(x) for x in v) + "]"
    raise TypeError(f"cannot serialize {v!r}")


def dump_config(cfg: ScenarioConfig) -> str:
    """Serialize every field so that ``parse_config`` rebuilds ``cfg`` exactly."""
    grid = dict(cfg.grid)
    lines = [f"name = {_toml_value(cfg.name)}", f"outputs = {_toml_value(cfg.outputs)}", ""]
    for section in ("kernels", "engine", "population"):
        lines.append(f"[{section}]")
        part = getattr(cfg, section)
        for f in fields(part):
            if f.name == "attribute_distributions":
                continue
            key = f"{section}.{f.name}"
            value = grid.get(key, getattr(part, f.name))
            lines.append(f"{f.name} = {_toml_value(value)}")
        lines.append("")
    lines.append("[population.beta]")
    for name, pair in cfg.population.attribute_distributions.items():
        lines.append(f"{name} = {_toml_value(pair)}")
    lines.append("")
    lines.append("[coefficients]")
    for f in fields(cfg.coefficients):
        lines.append(f"{f.name} = {_toml_value(getattr(cfg.coefficients, f.name))}")
    return "\n".join(lines) + "\n"
