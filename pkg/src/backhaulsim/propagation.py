"""Path-loss and receiver-noise models shared by the link budget and the simulator.

The path-loss model is log-distance with a linear-in-distance excess term:

    L(d) = intercept + slope * log10(d) + excess * d      [dB, d in meters]

With the 39 GHz defaults the intercept matches free-space loss at 1 m and
the 0.015 dB/m excess term is a fixed 15 dB/km margin lumping rain,
reflection, and foliage losses.  All link arithmetic stays in the dB
domain; conversion to linear power happens only where interference terms
are summed.
"""

import math
from dataclasses import dataclass

import numpy as np

__all__ = ["PathLossModel", "NoiseModel", "path_loss_db", "noise_power_dbm"]


@dataclass(frozen=True)
class PathLossModel:
    """Log-distance path loss with a fixed per-meter excess margin."""

    intercept_db: float = 64.26
    slope_db_per_decade: float = 20.0
    excess_db_per_m: float = 0.015

    def __post_init__(self):
        if self.slope_db_per_decade <= 0:
            raise ValueError(f"slope_db_per_decade must be > 0, got {self.slope_db_per_decade}")
        if self.excess_db_per_m < 0:
            raise ValueError(f"excess_db_per_m must be >= 0, got {self.excess_db_per_m}")


@dataclass(frozen=True)
class NoiseModel:
    """Receiver noise: thermal density plus noise figure, with a separate
    implementation loss applied on the signal path (not to the noise floor)."""

    thermal_density_dbm_per_hz: float = -174.0
    noise_figure_db: float = 5.0
    rx_impl_loss_db: float = 3.0

    def __post_init__(self):
        if self.noise_figure_db < 0:
            raise ValueError(f"noise_figure_db must be >= 0, got {self.noise_figure_db}")
        if self.rx_impl_loss_db < 0:
            raise ValueError(f"rx_impl_loss_db must be >= 0, got {self.rx_impl_loss_db}")


def path_loss_db(model: PathLossModel, distance_m):
    """Path loss in dB at `distance_m` meters.

    Accepts a scalar or ndarray of distances; strictly increasing in
    distance.  Raises ValueError for non-positive distances.
    """
    d = np.asarray(distance_m, dtype=float)
    if np.any(d <= 0.0):
        raise ValueError("distance must be > 0 m")
    loss = (
        model.intercept_db
        + model.slope_db_per_decade * np.log10(d)
        + model.excess_db_per_m * d
    )
    if np.ndim(distance_m) == 0:
        return float(loss)
    return loss


def noise_power_dbm(model: NoiseModel, bandwidth_hz: float) -> float:
    """Integrated noise power kTB + NF in dBm over `bandwidth_hz`."""
    if bandwidth_hz <= 0.0:
        raise ValueError("bandwidth must be > 0 Hz")
    return (
        model.thermal_density_dbm_per_hz
        + 10.0 * math.log10(bandwidth_hz)
        + model.noise_figure_db
    )
