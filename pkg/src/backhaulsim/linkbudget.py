"""End-to-end link budget for the hub/small-cell backhaul link.

Builds the four canonical design points of the 39 GHz system — downlink
and uplink, at the 1 km cell edge with a single stream and at the median
distance (cell_edge / sqrt(2)) with 4-stream multi-user MIMO — from the
propagation and antenna models.

Conventions:
  * "received power" is EIRP minus path loss, excluding receive array gain.
  * Downlink splits both PA power and aperture across streams at the hub;
    uplink splits only the hub's receive aperture (each small cell
    transmits its own stream with full power), see
    `antenna.stream_partition_penalty_db`.
  * Spectral efficiency is uncapped Shannon by default; an optional
    per-stream ceiling supports modulation-limit studies.
"""

import math
from dataclasses import dataclass, field

from backhaulsim import antenna
from backhaulsim.antenna import ArrayConfig, hub_array, small_cell_array
from backhaulsim.propagation import (
    NoiseModel,
    PathLossModel,
    noise_power_dbm,
    path_loss_db,
)

__all__ = [
    "DOWNLINK",
    "UPLINK",
    "LinkBudgetInput",
    "LinkBudgetRow",
    "partition_penalty_db",
    "snr_per_stream_db",
    "spectral_efficiency_bps_hz",
    "compute_row",
    "build_table",
]

DOWNLINK = "downlink"
UPLINK = "uplink"


@dataclass(frozen=True)
class LinkBudgetInput:
    """One link-budget scenario (direction, arrays, geometry, radio models)."""

    direction: str
    tx_array: ArrayConfig
    rx_array: ArrayConfig
    distance_m: float
    k_streams: int = 1
    bandwidth_hz: float = 500e6
    path_loss: PathLossModel = field(default_factory=PathLossModel)
    noise: NoiseModel = field(default_factory=NoiseModel)
    se_cap_bps_hz: float | None = None  # per-stream ceiling, off by default

    def __post_init__(self):
        if self.direction not in (DOWNLINK, UPLINK):
            raise ValueError(f"direction must be '{DOWNLINK}' or '{UPLINK}'")
        if self.distance_m <= 0:
            raise ValueError("distance_m must be > 0")
        if self.k_streams < 1:
            raise ValueError("k_streams must be >= 1")
        if self.bandwidth_hz <= 0:
            raise ValueError("bandwidth_hz must be > 0")


@dataclass(frozen=True)
class LinkBudgetRow:
    """Computed budget for one scenario; throughput = SE * bandwidth."""

    label: str
    direction: str
    k_streams: int
    distance_m: float
    total_tx_power_dbm: float
    eirp_dbm: float
    path_loss_db: float
    received_power_dbm: float
    snr_per_stream_db: float
    se_total_bps_hz: float
    throughput_mbps: float


def partition_penalty_db(direction: str, k_streams: int) -> float:
    """Stream-partition penalty for the given direction.

    The hub is the splitting side in both directions: transmitting k
    streams it divides power and aperture; receiving k uplink streams it
    divides aperture only.
    """
    if direction == DOWNLINK:
        return antenna.stream_partition_penalty_db(
            k_streams, splits_power=True, splits_aperture=True
        )
    if direction == UPLINK:
        return antenna.stream_partition_penalty_db(
            k_streams, splits_power=False, splits_aperture=True
        )
    raise ValueError(f"unknown direction {direction!r}")


def snr_per_stream_db(inp: LinkBudgetInput) -> float:
    """Per-stream SNR: EIRP - path loss + rx gain - rx loss - noise - penalty."""
    return (
        antenna.eirp_dbm(inp.tx_array)
        - path_loss_db(inp.path_loss, inp.distance_m)
        + antenna.array_gain_db(inp.rx_array)
        - inp.noise.rx_impl_loss_db
        - noise_power_dbm(inp.noise, inp.bandwidth_hz)
        - partition_penalty_db(inp.direction, inp.k_streams)
    )


def spectral_efficiency_bps_hz(
    snr_per_stream_db: float, k_streams: int = 1, cap_bps_hz: float | None = None
) -> float:
    """Total Shannon SE over k streams, optionally capped per stream."""
    if k_streams < 1:
        raise ValueError("k_streams must be >= 1")
    per_stream = math.log2(1.0 + 10.0 ** (snr_per_stream_db / 10.0))
    if cap_bps_hz is not None:
        per_stream = min(per_stream, cap_bps_hz)
    return k_streams * per_stream


def compute_row(inp: LinkBudgetInput, label: str = "") -> LinkBudgetRow:
    eirp = antenna.eirp_dbm(inp.tx_array)
    loss = path_loss_db(inp.path_loss, inp.distance_m)
    snr = snr_per_stream_db(inp)
    se = spectral_efficiency_bps_hz(snr, inp.k_streams, inp.se_cap_bps_hz)
    return LinkBudgetRow(
        label=label or f"{inp.direction} {inp.k_streams}-stream",
        direction=inp.direction,
        k_streams=inp.k_streams,
        distance_m=inp.distance_m,
        total_tx_power_dbm=antenna.total_tx_power_dbm(inp.tx_array),
        eirp_dbm=eirp,
        path_loss_db=loss,
        received_power_dbm=eirp - loss,
        snr_per_stream_db=snr,
        se_total_bps_hz=se,
        throughput_mbps=se * inp.bandwidth_hz / 1e6,
    )


def build_table(
    hub: ArrayConfig | None = None,
    small_cell: ArrayConfig | None = None,
    cell_edge_m: float = 1000.0,
    median_m: float | None = None,
    k_streams: int = 4,
    bandwidth_hz: float = 500e6,
    path_loss: PathLossModel | None = None,
    noise: NoiseModel | None = None,
    se_cap_bps_hz: float | None = None,
) -> list[LinkBudgetRow]:
    """The four design-point rows: DL/UL cell edge, DL/UL multi-stream.

    The multi-stream rows sit at the median link distance of a uniform
    drop, cell_edge / sqrt(2), unless `median_m` overrides it.
    """
    hub = hub or hub_array()
    small_cell = small_cell or small_cell_array()
    path_loss = path_loss or PathLossModel()
    noise = noise or NoiseModel()
    if median_m is None:
        median_m = cell_edge_m / math.sqrt(2.0)

    common = dict(
        bandwidth_hz=bandwidth_hz,
        path_loss=path_loss,
        noise=noise,
        se_cap_bps_hz=se_cap_bps_hz,
    )
    scenarios = [
        ("Downlink cell edge", DOWNLINK, hub, small_cell, cell_edge_m, 1),
        ("Uplink cell edge", UPLINK, small_cell, hub, cell_edge_m, 1),
        (f"Downlink {k_streams}-stream", DOWNLINK, hub, small_cell, median_m, k_streams),
        (f"Uplink {k_streams}-stream", UPLINK, small_cell, hub, median_m, k_streams),
    ]
    return [
        compute_row(
            LinkBudgetInput(
                direction=direction,
                tx_array=tx,
                rx_array=rx,
                distance_m=dist,
                k_streams=k,
                **common,
            ),
            label=label,
        )
        for label, direction, tx, rx, dist, k in scenarios
    ]
