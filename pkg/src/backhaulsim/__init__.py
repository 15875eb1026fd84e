"""System-level toolkit for point-to-multipoint mmWave Gbps backhaul networks.

Covers the full planning workflow for a hub-and-small-cell deployment at
39 GHz: deterministic link budgets, statistical-multiplexing capacity
headroom, and seeded Monte-Carlo network simulation with phased-array
beam models and hexagonal layouts.
"""

__version__ = "0.1.0"

from backhaulsim.antenna import ArrayConfig, SectorPattern, hub_array, small_cell_array
from backhaulsim.linkbudget import LinkBudgetInput, LinkBudgetRow, build_table
from backhaulsim.propagation import NoiseModel, PathLossModel
from backhaulsim.simulator import SimConfig, run_campaign, run_drop
from backhaulsim.statmux import HeadroomQuery, headroom_factor, required_capacity_mbps
from backhaulsim.topology import NetworkLayout, build_layout, drop_small_cells

__all__ = [
    "ArrayConfig",
    "SectorPattern",
    "hub_array",
    "small_cell_array",
    "LinkBudgetInput",
    "LinkBudgetRow",
    "build_table",
    "NoiseModel",
    "PathLossModel",
    "SimConfig",
    "run_campaign",
    "run_drop",
    "HeadroomQuery",
    "headroom_factor",
    "required_capacity_mbps",
    "NetworkLayout",
    "build_layout",
    "drop_small_cells",
    "__version__",
]
