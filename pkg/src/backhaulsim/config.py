"""Run configuration: defaults, strict file loading, and provenance hashing.

Configuration is a YAML mapping that mirrors the model parameters, with
the 39 GHz system defaults baked in.  Unknown keys are rejected (no
silent typos), command-line flags override file values, and the resolved
configuration's digest is embedded in every output artifact.
"""

import dataclasses
from dataclasses import dataclass, field

import yaml

from backhaulsim.antenna import ArrayConfig, SectorPattern, hub_array, small_cell_array
from backhaulsim.metrics import config_digest
from backhaulsim.propagation import NoiseModel, PathLossModel
from backhaulsim.simulator import SimConfig

__all__ = [
    "ConfigError",
    "RunConfig",
    "NetworkSettings",
    "LinkBudgetSettings",
    "StatmuxSettings",
    "SimulationSettings",
    "load_config",
    "resolve_config",
    "default_config_dict",
    "dump_default_yaml",
]


class ConfigError(Exception):
    """Invalid configuration file, key, or value."""


@dataclass(frozen=True)
class NetworkSettings:
    hub_radius_m: float = 1000.0
    sectors_per_hub: int = 3
    min_hub_cell_distance_m: float = 100.0


@dataclass(frozen=True)
class LinkBudgetSettings:
    cell_edge_m: float = 1000.0
    median_m: float | None = None  # defaults to cell_edge / sqrt(2)
    k_streams: int = 4
    bandwidth_hz: float = 500e6
    se_cap_bps_hz: float | None = None


@dataclass(frozen=True)
class StatmuxSettings:
    n_cells: int = 32
    availability: float = 0.99
    mean_rate_mbps: float = 100.0
    mc_samples: int = 10**6
    seed: int = 1
    peak_rate_mbps: float | None = None
    curve_n: tuple = (1, 2, 4, 8, 16, 32, 64, 128)


@dataclass(frozen=True)
class SimulationSettings:
    per_sector_cells: int = 1
    streams_per_slot: int = 4
    n_drops: int = 10000
    rings: int = 2
    measurement_scope: str = "center_hub"
    include_interference: bool = True
    se_cap_bps_hz: float | None = None
    master_seed: int = 1
    workers: int = 1


@dataclass(frozen=True)
class RunConfig:
    """Resolved configuration for all CLI workflows."""

    path_loss: PathLossModel = field(default_factory=PathLossModel)
    noise: NoiseModel = field(default_factory=NoiseModel)
    hub_array: ArrayConfig = field(default_factory=hub_array)
    cell_array: ArrayConfig = field(default_factory=small_cell_array)
    sector_pattern: SectorPattern = field(default_factory=SectorPattern)
    network: NetworkSettings = field(default_factory=NetworkSettings)
    linkbudget: LinkBudgetSettings = field(default_factory=LinkBudgetSettings)
    statmux: StatmuxSettings = field(default_factory=StatmuxSettings)
    simulation: SimulationSettings = field(default_factory=SimulationSettings)

    def config_hash(self) -> str:
        return config_digest(_as_plain_dict(self))

    def sim_config(self) -> SimConfig:
        sim = self.simulation
        return SimConfig(
            hub_radius_m=self.network.hub_radius_m,
            rings=sim.rings,
            sectors_per_hub=self.network.sectors_per_hub,
            min_hub_cell_distance_m=self.network.min_hub_cell_distance_m,
            hub_array=self.hub_array,
            cell_array=self.cell_array,
            sector_pattern=self.sector_pattern,
            path_loss=self.path_loss,
            noise=self.noise,
            bandwidth_hz=self.linkbudget.bandwidth_hz,
            per_sector_cells=sim.per_sector_cells,
            streams_per_slot=sim.streams_per_slot,
            n_drops=sim.n_drops,
            measurement_scope=sim.measurement_scope,
            include_interference=sim.include_interference,
            se_cap_bps_hz=sim.se_cap_bps_hz,
            master_seed=sim.master_seed,
        )


def _as_plain_dict(obj) -> dict:
    data = dataclasses.asdict(obj)

    def convert(value):
        if isinstance(value, dict):
            return {k: convert(v) for k, v in value.items()}
        if isinstance(value, (list, tuple)):
            return [convert(v) for v in value]
        return value

    return convert(data)


def default_config_dict() -> dict:
    return _as_plain_dict(RunConfig())


def _merge_strict(default: dict, user: dict, path: str = "") -> dict:
    out = dict(default)
    for key, value in user.items():
        if key not in default:
            raise ConfigError(f"unknown configuration key: {path}{key}")
        if isinstance(default[key], dict):
            if not isinstance(value, dict):
                raise ConfigError(f"configuration key {path}{key} must be a mapping")
            out[key] = _merge_strict(default[key], value, f"{path}{key}.")
        else:
            out[key] = value
    return out


_SECTIONS = {
    "path_loss": PathLossModel,
    "noise": NoiseModel,
    "hub_array": ArrayConfig,
    "cell_array": ArrayConfig,
    "sector_pattern": SectorPattern,
    "network": NetworkSettings,
    "linkbudget": LinkBudgetSettings,
    "statmux": StatmuxSettings,
    "simulation": SimulationSettings,
}


def resolve_config(user: dict | None = None) -> RunConfig:
    """Defaults merged with `user`; unknown keys and bad values raise
    ConfigError naming the offending key."""
    merged = _merge_strict(default_config_dict(), user or {})
    kwargs = {}
    for section, cls in _SECTIONS.items():
        values = dict(merged[section])
        if section == "statmux":
            values["curve_n"] = tuple(values["curve_n"])
        try:
            kwargs[section] = cls(**values)
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"invalid value in section '{section}': {exc}") from exc
    return RunConfig(**kwargs)


def load_config(path=None, overrides: dict | None = None) -> RunConfig:
    """Load YAML from `path` (optional) and apply `overrides` on top.

    Precedence: built-in defaults < file < overrides.
    """
    data: dict = {}
    if path is not None:
        try:
            with open(path) as fh:
                loaded = yaml.safe_load(fh)
        except OSError as exc:
            raise ConfigError(f"cannot read configuration file: {exc}") from exc
        except yaml.YAMLError as exc:
            raise ConfigError(f"malformed configuration file: {exc}") from exc
        if loaded is None:
            loaded = {}
        if not isinstance(loaded, dict):
            raise ConfigError("configuration file must contain a mapping")
        data = loaded
    if overrides:
        data = _nested_update(data, overrides)
    return resolve_config(data)


def _nested_update(base: dict, extra: dict) -> dict:
    out = dict(base)
    for key, value in extra.items():
        if isinstance(value, dict) and isinstance(out.get(key), dict):
            out[key] = _nested_update(out[key], value)
        else:
            out[key] = value
    return out


def dump_default_yaml() -> str:
    """The full configuration schema with default values, as YAML."""
    return yaml.safe_dump(default_config_dict(), sort_keys=False)
