"""Phased-array gain, EIRP, element pattern, and steered-beam models.

Hubs and small cells carry uniform planar patch arrays driven by a bank of
low-power PAs.  Vertical groups of `subarray_rows` elements share one RF
feed and form a fixed elevation beam, so steering is continuous in azimuth
and frozen at broadside in elevation.  Beam gain is the classic separable
array factor of the uniform planar array on top of a parabolic sector
element pattern with a front-to-back floor.

Multi-stream operation divides the hub's PA power and aperture among the
simultaneous streams; `stream_partition_penalty_db` captures the resulting
per-stream SNR reduction (inter-stream leakage is folded into the same
penalty rather than modeled separately).
"""

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "ArrayConfig",
    "SectorPattern",
    "hub_array",
    "small_cell_array",
    "total_tx_power_dbm",
    "array_gain_db",
    "eirp_dbm",
    "element_pattern_db",
    "beam_gain_db",
    "stream_partition_penalty_db",
]

#: Floor applied to beam gain so linear-domain interference sums stay finite.
BEAM_GAIN_FLOOR_DB = -200.0


@dataclass(frozen=True)
class ArrayConfig:
    """Geometry and feed parameters of a uniform planar array.

    rows/cols count radiating elements (N = rows * cols); `n_pa` power
    amplifiers each deliver `pa_power_dbm`.  `element_gain_db` is the net
    per-element gain after feed losses.  `subarray_rows` adjacent vertical
    elements share one RF signal, fixing the elevation beam.
    """

    rows: int
    cols: int
    n_pa: int
    pa_power_dbm: float
    element_gain_db: float = 3.0
    element_spacing_wavelengths: float = 0.5
    subarray_rows: int = 4

    def __post_init__(self):
        if self.rows < 1 or self.cols < 1:
            raise ValueError("rows and cols must be >= 1")
        if self.n_pa < 1:
            raise ValueError("n_pa must be >= 1")
        if self.n_elements % self.n_pa != 0:
            raise ValueError(
                f"element count {self.n_elements} not divisible by n_pa {self.n_pa}"
            )
        if self.subarray_rows < 1 or self.rows % self.subarray_rows != 0:
            raise ValueError(
                f"rows {self.rows} not divisible by subarray_rows {self.subarray_rows}"
            )
        if self.element_spacing_wavelengths <= 0:
            raise ValueError("element_spacing_wavelengths must be > 0")

    @property
    def n_elements(self) -> int:
        return self.rows * self.cols


def hub_array() -> ArrayConfig:
    """Default hub sector array: 16x16 elements, 64 PAs at 10 dBm."""
    return ArrayConfig(rows=16, cols=16, n_pa=64, pa_power_dbm=10.0)


def small_cell_array() -> ArrayConfig:
    """Default small-cell array: 8x8 elements, 16 PAs at 10 dBm."""
    return ArrayConfig(rows=8, cols=8, n_pa=16, pa_power_dbm=10.0)


@dataclass(frozen=True)
class SectorPattern:
    """Parabolic sector element pattern: -min(12*(offset/theta_3db)^2, floor)."""

    theta_3db_deg: float = 70.0
    front_back_floor_db: float = 20.0

    def __post_init__(self):
        if not 0.0 < self.theta_3db_deg < 180.0:
            raise ValueError("theta_3db_deg must be in (0, 180)")
        if self.front_back_floor_db <= 0.0:
            raise ValueError("front_back_floor_db must be > 0")


def total_tx_power_dbm(cfg: ArrayConfig) -> float:
    """Combined conducted power of all PAs in dBm."""
    return cfg.pa_power_dbm + 10.0 * math.log10(cfg.n_pa)


def array_gain_db(cfg: ArrayConfig) -> float:
    """Peak coherent array gain: 10*log10(N) plus per-element gain."""
    return 10.0 * math.log10(cfg.n_elements) + cfg.element_gain_db


def eirp_dbm(cfg: ArrayConfig) -> float:
    """Boresight EIRP: total conducted power plus peak array gain."""
    return total_tx_power_dbm(cfg) + array_gain_db(cfg)


def element_pattern_db(pattern: SectorPattern, offset_deg):
    """Element gain relative to boresight at `offset_deg` off axis.

    Even in the offset, monotone non-increasing in |offset| until the
    front-to-back floor clips it.  Accepts scalars or arrays.
    """
    off = np.asarray(offset_deg, dtype=float)
    loss = np.minimum(
        12.0 * (off / pattern.theta_3db_deg) ** 2, pattern.front_back_floor_db
    )
    if np.ndim(offset_deg) == 0:
        return float(-loss)
    return -loss


def _uniform_factor_mag(delta_u, n: int, spacing_wl: float):
    """|sin(n*psi/2) / (n*sin(psi/2))| for psi = 2*pi*spacing*delta_u.

    The normalized magnitude of an n-element uniform linear array factor,
    with the coherent limit 1 substituted where the denominator vanishes
    (psi = 0 and grating-lobe points).
    """
    half = np.pi * spacing_wl * np.asarray(delta_u, dtype=float)
    den = np.sin(half)
    singular = np.abs(den) < 1e-12
    safe_den = np.where(singular, 1.0, den)
    mag = np.abs(np.sin(n * half)) / (n * np.abs(safe_den))
    return np.where(singular, 1.0, mag)


def beam_gain_db(
    cfg: ArrayConfig,
    pattern: SectorPattern,
    steer_az_deg,
    eval_az_deg,
    eval_el_deg=0.0,
    steer_el_deg=0.0,
):
    """Gain of a beam steered to `steer` evaluated toward `eval`, in dB.

    Steering is azimuth-only (|steer_az| <= 90, the front hemisphere);
    elevation is fixed at the sub-array broadside, so `steer_el_deg` must
    be 0.  Evaluation directions may lie anywhere in [-180, 180] azimuth:
    behind the panel the mirror-symmetric array factor applies and the
    element pattern's front-to-back floor governs the leakage.

    Equals `array_gain_db` exactly when eval == steer == boresight and
    never exceeds it.  Clamped below at BEAM_GAIN_FLOOR_DB.
    """
    steer_az = np.asarray(steer_az_deg, dtype=float)
    steer_el = np.asarray(steer_el_deg, dtype=float)
    ev_az = np.asarray(eval_az_deg, dtype=float)
    ev_el = np.asarray(eval_el_deg, dtype=float)
    if np.any(np.abs(steer_az) > 90.0):
        raise ValueError("steering azimuth must lie in the front hemisphere [-90, 90]")
    if np.any(steer_el != 0.0):
        raise ValueError("elevation steering is fixed at the sub-array broadside (0 deg)")
    if np.any(np.abs(ev_az) > 180.0) or np.any(np.abs(ev_el) > 90.0):
        raise ValueError("evaluation direction out of range")

    az_r = np.radians(ev_az)
    el_r = np.radians(ev_el)
    # direction cosines: u horizontal (columns), v vertical (rows)
    u_eval = np.sin(az_r) * np.cos(el_r)
    v_eval = np.sin(el_r)
    u_steer = np.sin(np.radians(steer_az))

    af = _uniform_factor_mag(u_eval - u_steer, cfg.cols, cfg.element_spacing_wavelengths)
    af = af * _uniform_factor_mag(v_eval, cfg.rows, cfg.element_spacing_wavelengths)

    # pattern offset = full 3-D angle between eval direction and boresight
    cos_off = np.clip(np.cos(el_r) * np.cos(az_r), -1.0, 1.0)
    offset_deg = np.degrees(np.arccos(cos_off))

    with np.errstate(divide="ignore"):
        af_db = 20.0 * np.log10(af)
    gain = array_gain_db(cfg) + af_db + element_pattern_db(pattern, offset_deg)
    gain = np.maximum(gain, BEAM_GAIN_FLOOR_DB)
    if all(np.ndim(a) == 0 for a in (steer_az_deg, eval_az_deg, eval_el_deg, steer_el_deg)):
        return float(gain)
    return gain


def stream_partition_penalty_db(
    k_streams: int, splits_power: bool, splits_aperture: bool
) -> float:
    """Per-stream SNR reduction when one array carries k simultaneous streams.

    Each split the array performs (PA power across streams, aperture across
    streams) costs 10*log10(k).  The side transmitting or receiving a single
    stream with its full array incurs nothing.
    """
    if k_streams < 1:
        raise ValueError("k_streams must be >= 1")
    return 10.0 * math.log10(k_streams) * (int(splits_power) + int(splits_aperture))
