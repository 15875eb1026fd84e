"""Seeded Monte-Carlo campaign over random small-cell drops.

Each drop places cells, points beams, builds the per-sector schedule, and
computes downlink SINR, spectral efficiency, and throughput per scheduled
link.  With more cells than streams per slot, a sector partitions its
cells into groups of `streams_per_slot` chosen greedily for maximum
intra-group azimuth separation; groups share airtime equally and every
cell in the active group receives one stream (with the corresponding
power/aperture partition penalty).  All other sectors of every hub are
always transmitting (full buffer), and their active beams form the
interference floor.

Reproducibility: drop k draws from PCG64 seeded with
SeedSequence((master_seed, k)); campaign batches are a fixed size, so
results are bit-identical for any worker count.
"""

import dataclasses
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from backhaulsim import antenna
from backhaulsim.antenna import (
    BEAM_GAIN_FLOOR_DB,
    ArrayConfig,
    SectorPattern,
    _uniform_factor_mag,
    beam_gain_db,
    hub_array,
    small_cell_array,
)
from backhaulsim.metrics import MetricsBundle, config_digest
from backhaulsim.propagation import (
    NoiseModel,
    PathLossModel,
    noise_power_dbm,
    path_loss_db,
)
from backhaulsim.topology import NetworkLayout, build_layout, drop_small_cells, wrap_angle_deg

__all__ = [
    "SimConfig",
    "DropResult",
    "compute_sinr_db",
    "schedule_groups",
    "run_drop",
    "run_campaign",
    "evaluate_positions",
    "drop_seed_sequence",
]

CENTER_HUB = "center_hub"
ALL_HUBS = "all_hubs"

#: Drops per evaluation batch.  Fixed so that campaign output is
#: independent of the worker count.
BATCH_DROPS = 250


@dataclass(frozen=True)
class SimConfig:
    """Full parameter set of one simulation campaign."""

    hub_radius_m: float = 1000.0
    rings: int = 2
    sectors_per_hub: int = 3
    min_hub_cell_distance_m: float = 100.0
    hub_array: ArrayConfig = field(default_factory=hub_array)
    cell_array: ArrayConfig = field(default_factory=small_cell_array)
    sector_pattern: SectorPattern = field(default_factory=SectorPattern)
    path_loss: PathLossModel = field(default_factory=PathLossModel)
    noise: NoiseModel = field(default_factory=NoiseModel)
    bandwidth_hz: float = 500e6
    per_sector_cells: int = 1
    streams_per_slot: int = 4
    n_drops: int = 10000
    measurement_scope: str = CENTER_HUB
    include_interference: bool = True
    se_cap_bps_hz: float | None = None
    master_seed: int = 1

    def __post_init__(self):
        if self.per_sector_cells < 1:
            raise ValueError("per_sector_cells must be >= 1")
        if self.streams_per_slot < 1:
            raise ValueError("streams_per_slot must be >= 1")
        if (
            self.per_sector_cells > self.streams_per_slot
            and self.per_sector_cells % self.streams_per_slot != 0
        ):
            raise ValueError(
                "per_sector_cells must be a multiple of streams_per_slot when scheduling"
            )
        if self.n_drops < 1:
            raise ValueError("n_drops must be >= 1")
        if self.measurement_scope not in (CENTER_HUB, ALL_HUBS):
            raise ValueError(f"measurement_scope must be '{CENTER_HUB}' or '{ALL_HUBS}'")
        if self.bandwidth_hz <= 0:
            raise ValueError("bandwidth_hz must be > 0")

    @property
    def group_size(self) -> int:
        """Streams served simultaneously by one sector."""
        return min(self.streams_per_slot, self.per_sector_cells)

    @property
    def n_groups(self) -> int:
        return self.per_sector_cells // self.group_size

    def layout(self) -> NetworkLayout:
        return build_layout(
            radius_m=self.hub_radius_m,
            rings=self.rings,
            sectors_per_hub=self.sectors_per_hub,
            min_hub_cell_distance_m=self.min_hub_cell_distance_m,
        )

    def measured_hubs(self, layout: NetworkLayout) -> np.ndarray:
        if self.measurement_scope == CENTER_HUB:
            return np.array([0])
        return np.arange(layout.n_hubs)


def drop_seed_sequence(master_seed: int, drop_index: int) -> np.random.SeedSequence:
    """Seed-stream mixing rule: drop k draws from SeedSequence((master, k))."""
    return np.random.SeedSequence(entropy=(int(master_seed), int(drop_index)))


@dataclass
class DropResult:
    """Per-cell records of one drop (measured hubs only)."""

    drop_index: int
    hub: np.ndarray
    sector: np.ndarray
    slot: np.ndarray
    cell_xy: np.ndarray
    distance_m: np.ndarray
    snr_db: np.ndarray
    sinr_db: np.ndarray
    se_bps_hz: np.ndarray
    airtime: np.ndarray
    throughput_mbps: np.ndarray
    sector_se_bps_hz: np.ndarray  # one aggregate per measured sector

    @property
    def n_cells(self) -> int:
        return self.sinr_db.size


def compute_sinr_db(signal_dbm: float, interferer_dbm, noise_dbm: float) -> float:
    """Linear-domain S / (sum of I + N), returned in dB."""
    i_lin = float(np.sum(10.0 ** (np.asarray(interferer_dbm, dtype=float) / 10.0)))
    denom = i_lin + 10.0 ** (noise_dbm / 10.0)
    return 10.0 * math.log10(10.0 ** (signal_dbm / 10.0) / denom)


def schedule_groups(azimuths_deg, group_size: int) -> np.ndarray:
    """Partition a sector's cells into groups maximizing azimuth spread.

    Greedy: each group is seeded with the most isolated unassigned cell
    (largest minimum separation to the other unassigned cells), then grown
    by repeatedly adding the unassigned cell with the largest minimum
    separation to the group.  Ties resolve to the lowest cell index, so
    the result is deterministic.  Returns an (n_groups, group_size) index
    array; raises if group_size does not divide the cell count.
    """
    az = np.atleast_2d(np.asarray(azimuths_deg, dtype=float))
    groups = _schedule_groups_batch(az, group_size)
    return groups[0]


def _schedule_groups_batch(az: np.ndarray, group_size: int) -> np.ndarray:
    """Lockstep greedy over a stack of sectors; az has shape (S, n)."""
    n_sectors, n = az.shape
    if group_size < 1:
        raise ValueError("group_size must be >= 1")
    if n % group_size != 0:
        raise ValueError(f"group size {group_size} does not divide cell count {n}")
    n_groups = n // group_size

    diff = np.abs(az[:, :, None] - az[:, None, :]) % 360.0
    sep = np.minimum(diff, 360.0 - diff)
    idx = np.arange(n)
    sep[:, idx, idx] = np.inf

    rows = np.arange(n_sectors)
    unassigned = np.ones((n_sectors, n), dtype=bool)
    groups = np.empty((n_sectors, n_groups, group_size), dtype=np.int64)
    for g in range(n_groups):
        masked = np.where(unassigned[:, None, :], sep, np.inf)
        isolation = np.where(unassigned, masked.min(axis=2), -np.inf)
        seed = isolation.argmax(axis=1)
        groups[:, g, 0] = seed
        unassigned[rows, seed] = False
        to_group = sep[rows, seed]
        for t in range(1, group_size):
            score = np.where(unassigned, to_group, -np.inf)
            pick = score.argmax(axis=1)
            groups[:, g, t] = pick
            unassigned[rows, pick] = False
            to_group = np.minimum(to_group, sep[rows, pick])
    return groups


def _sample_positions(cfg: SimConfig, layout: NetworkLayout, drop_index: int) -> np.ndarray:
    drop = drop_small_cells(
        layout, cfg.per_sector_cells, drop_seed_sequence(cfg.master_seed, drop_index)
    )
    return drop.cell_xy.reshape(
        layout.n_hubs, layout.n_sectors, cfg.per_sector_cells, 2
    )


def _evaluate_batch(cfg: SimConfig, layout: NetworkLayout, pos: np.ndarray) -> dict:
    """Evaluate a batch of drops; pos has shape (B, H, S, C, 2)."""
    B, H, S, C = pos.shape[:4]
    k = cfg.group_size
    n_groups = cfg.n_groups
    boresights = np.asarray(layout.sector_boresights_deg, dtype=float)
    pattern = cfg.sector_pattern

    hub_gain = antenna.array_gain_db(cfg.hub_array)
    cell_gain = antenna.array_gain_db(cfg.cell_array)
    p_hub = antenna.total_tx_power_dbm(cfg.hub_array)
    split_db = 2.0 * 10.0 * math.log10(k)  # downlink: power and aperture
    rx_loss = cfg.noise.rx_impl_loss_db
    n_dbm = noise_power_dbm(cfg.noise, cfg.bandwidth_hz)
    n_lin = 10.0 ** (n_dbm / 10.0)

    # geometry in each serving sector's frame
    rel = pos - layout.hub_xy[None, :, None, None, :]
    dist_serv = np.sqrt(np.einsum("bhsci,bhsci->bhsc", rel, rel))
    az_serv = wrap_angle_deg(
        np.degrees(np.arctan2(rel[..., 1], rel[..., 0])) - boresights[None, None, :, None]
    )

    groups = _schedule_groups_batch(
        az_serv.reshape(B * H * S, C), k
    ).reshape(B, H, S, n_groups, k)
    slot = np.empty((B, H, S, C), dtype=np.int64)
    flat_slot = slot.reshape(B * H * S, C)
    flat_groups = groups.reshape(B * H * S, n_groups, k)
    sector_rows = np.arange(B * H * S)[:, None, None]
    flat_slot[sector_rows, flat_groups] = np.arange(n_groups)[None, :, None]

    # victims: all cells of the measured hubs, ordered (hub, sector, cell)
    mh = cfg.measured_hubs(layout)
    v_hub = np.repeat(mh, S * C)
    v_sector = np.tile(np.repeat(np.arange(S), C), mh.size)
    v_cell = np.tile(np.arange(C), mh.size * S)
    V = v_hub.size

    v_pos = pos[:, v_hub, v_sector, v_cell, :]  # (B, V, 2)
    v_dist = dist_serv[:, v_hub, v_sector, v_cell]
    v_az = az_serv[:, v_hub, v_sector, v_cell]
    v_slot = slot[:, v_hub, v_sector, v_cell]

    sig_dbm = (
        p_hub
        + hub_gain
        - split_db
        + antenna.element_pattern_db(pattern, v_az)
        - path_loss_db(cfg.path_loss, v_dist)
        + cell_gain
        - rx_loss
    )
    snr_db = sig_dbm - n_dbm

    if cfg.include_interference:
        sinr_db = np.empty_like(snr_db)
        # victim-to-hub geometry, shared by every slot
        delta = v_pos[:, :, None, :] - layout.hub_xy[None, None, :, :]
        d_vh = np.sqrt(np.einsum("bvhi,bvhi->bvh", delta, delta))
        pl_vh = path_loss_db(cfg.path_loss, d_vh)
        th_hv = np.degrees(np.arctan2(delta[..., 1], delta[..., 0]))  # hub -> victim
        az_tx = wrap_angle_deg(th_hv[..., None] - boresights[None, None, None, :])
        elem_tx = antenna.element_pattern_db(pattern, az_tx)
        sin_tx = np.sin(np.radians(az_tx))
        # victim receive beam is locked on its serving hub
        th_serv = th_hv[:, np.arange(V), v_hub]
        rx_off = wrap_angle_deg(th_hv - th_serv[:, :, None])
        g_rx = beam_gain_db(cfg.cell_array, pattern, 0.0, rx_off)

        const_i = p_hub + hub_gain - split_db - rx_loss
        spacing = cfg.hub_array.element_spacing_wavelengths
        serving_mask = np.zeros((V, H, S), dtype=bool)
        serving_mask[np.arange(V), v_hub, v_sector] = True

        for g in range(n_groups):
            b_idx, v_idx = np.nonzero(v_slot == g)
            steer_az = np.take_along_axis(az_serv, groups[:, :, :, g, :], axis=3)
            sin_steer = np.sin(np.radians(steer_az))  # (B, H, S, k)
            delta_u = sin_tx[b_idx, v_idx][..., None] - sin_steer[b_idx][:, :, :, :]
            af = _uniform_factor_mag(delta_u, cfg.hub_array.cols, spacing)
            with np.errstate(divide="ignore"):
                af_db = 20.0 * np.log10(af)
            i_dbm = (
                const_i
                + af_db
                + elem_tx[b_idx, v_idx][..., None]
                - pl_vh[b_idx, v_idx][:, :, None, None]
                + g_rx[b_idx, v_idx][:, :, None, None]
            )
            i_lin = 10.0 ** (np.maximum(i_dbm, BEAM_GAIN_FLOOR_DB) / 10.0)
            i_lin[serving_mask[v_idx]] = 0.0
            i_sum = i_lin.sum(axis=(1, 2, 3))
            sinr_db[b_idx, v_idx] = 10.0 * np.log10(
                10.0 ** (sig_dbm[b_idx, v_idx] / 10.0) / (i_sum + n_lin)
            )
    else:
        sinr_db = snr_db.copy()

    se = np.log2(1.0 + 10.0 ** (sinr_db / 10.0))
    if cfg.se_cap_bps_hz is not None:
        np.minimum(se, cfg.se_cap_bps_hz, out=se)
    airtime = 1.0 / n_groups
    tput = se * cfg.bandwidth_hz * airtime / 1e6
    sector_se = se.reshape(B, mh.size, S, C).sum(axis=3) * airtime

    return {
        "hub": v_hub,
        "sector": v_sector,
        "slot": v_slot,
        "pos": v_pos,
        "distance": v_dist,
        "snr": snr_db,
        "sinr": sinr_db,
        "se": se,
        "tput": tput,
        "sector_se": sector_se,
        "airtime": airtime,
    }


def evaluate_positions(cfg: SimConfig, positions) -> DropResult:
    """Evaluate one explicit placement (n_hubs, n_sectors, per_sector, 2).

    The deterministic entry point for what-if studies and verification:
    bypasses the random drop but runs the identical beam/schedule/SINR
    pipeline as `run_drop`.
    """
    layout = cfg.layout()
    pos = np.asarray(positions, dtype=float)
    expected = (layout.n_hubs, layout.n_sectors, cfg.per_sector_cells, 2)
    if pos.shape != expected:
        raise ValueError(f"positions must have shape {expected}, got {pos.shape}")
    out = _evaluate_batch(cfg, layout, pos[None, ...])
    return _drop_result(out, 0, drop_index=-1)


def _drop_result(batch_out: dict, b: int, drop_index: int) -> DropResult:
    return DropResult(
        drop_index=drop_index,
        hub=batch_out["hub"].copy(),
        sector=batch_out["sector"].copy(),
        slot=batch_out["slot"][b],
        cell_xy=batch_out["pos"][b],
        distance_m=batch_out["distance"][b],
        snr_db=batch_out["snr"][b],
        sinr_db=batch_out["sinr"][b],
        se_bps_hz=batch_out["se"][b],
        airtime=np.full(batch_out["snr"][b].shape, batch_out["airtime"]),
        throughput_mbps=batch_out["tput"][b],
        sector_se_bps_hz=batch_out["sector_se"][b].ravel(),
    )


def run_drop(cfg: SimConfig, drop_index: int = 0) -> DropResult:
    """One drop: place cells, schedule, and evaluate the measured hubs."""
    layout = cfg.layout()
    pos = _sample_positions(cfg, layout, drop_index)
    out = _evaluate_batch(cfg, layout, pos[None, ...])
    return _drop_result(out, 0, drop_index=drop_index)


def _run_batch(cfg: SimConfig, layout: NetworkLayout, drop_indices: np.ndarray) -> dict:
    pos = np.empty(
        (drop_indices.size, layout.n_hubs, layout.n_sectors, cfg.per_sector_cells, 2)
    )
    for i, d in enumerate(drop_indices):
        pos[i] = _sample_positions(cfg, layout, int(d))
    return _evaluate_batch(cfg, layout, pos)


def run_campaign(
    cfg: SimConfig,
    workers: int = 1,
    provenance: dict | None = None,
    drop_records_path=None,
) -> MetricsBundle:
    """Run `cfg.n_drops` drops and pool the per-cell samples.

    Drops are evaluated in fixed-size batches whose seeds depend only on
    (master_seed, drop index), and batch results are merged in drop
    order, so the bundle is identical for any `workers` value.  Optional
    `drop_records_path` writes the full per-cell table as CSV.
    """
    if workers < 1:
        raise ValueError("workers must be >= 1")
    layout = cfg.layout()
    starts = list(range(0, cfg.n_drops, BATCH_DROPS))
    batches = [
        np.arange(s, min(s + BATCH_DROPS, cfg.n_drops), dtype=np.int64) for s in starts
    ]

    if workers == 1:
        results = [_run_batch(cfg, layout, b) for b in batches]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            futures = [pool.submit(_run_batch, cfg, layout, b) for b in batches]
            results = [f.result() for f in futures]

    sinr = np.concatenate([r["sinr"].ravel() for r in results])
    snr = np.concatenate([r["snr"].ravel() for r in results])
    se = np.concatenate([r["se"].ravel() for r in results])
    tput = np.concatenate([r["tput"].ravel() for r in results])
    sector_se = np.concatenate([r["sector_se"].ravel() for r in results])

    if provenance is None:
        provenance = {"config_hash": config_digest(dataclasses.asdict(cfg))}
    meta = {
        "seed": cfg.master_seed,
        "n_drops": cfg.n_drops,
        "per_sector_cells": cfg.per_sector_cells,
        "measurement_scope": cfg.measurement_scope,
        "interference": cfg.include_interference,
        "association": "geometric",
        "scheduler": "greedy-max-min-azimuth",
        "rng": "pcg64/seedseq(master_seed,drop)",
    }
    meta.update(provenance)

    if drop_records_path is not None:
        _write_drop_records(drop_records_path, cfg, results, batches)

    return MetricsBundle.from_samples(
        sinr_db=sinr,
        snr_db=snr,
        se_bps_hz=se,
        sector_se_bps_hz=sector_se,
        throughput_mbps=tput,
        bandwidth_hz=cfg.bandwidth_hz,
        sectors_per_hub=cfg.sectors_per_hub,
        provenance=meta,
    )


def _write_drop_records(path, cfg: SimConfig, results: list, batches: list) -> None:
    import csv

    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(
            [
                "drop",
                "hub",
                "sector",
                "cell",
                "slot",
                "x_m",
                "y_m",
                "distance_m",
                "snr_db",
                "sinr_db",
                "se_bps_hz",
                "airtime",
                "throughput_mbps",
            ]
        )
        for out, drop_idx in zip(results, batches):
            V = out["hub"].size
            cell_ids = np.tile(np.arange(cfg.per_sector_cells), V // cfg.per_sector_cells)
            for b, d in enumerate(drop_idx):
                for v in range(V):
                    w.writerow(
                        [
                            int(d),
                            int(out["hub"][v]),
                            int(out["sector"][v]),
                            int(cell_ids[v]),
                            int(out["slot"][b, v]),
                            repr(float(out["pos"][b, v, 0])),
                            repr(float(out["pos"][b, v, 1])),
                            repr(float(out["distance"][b, v])),
                            repr(float(out["snr"][b, v])),
                            repr(float(out["sinr"][b, v])),
                            repr(float(out["se"][b, v])),
                            repr(float(out["airtime"])),
                            repr(float(out["tput"][b, v])),
                        ]
                    )
