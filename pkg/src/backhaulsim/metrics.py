"""Distribution statistics and report payloads for campaign results.

Percentiles use the nearest-rank convention (no interpolation): the p-th
percentile of n sorted samples is the value at rank max(1, ceil(p*n)).
This matches step-CDF semantics and keeps reported values members of the
sample set.
"""

import hashlib
import json
import math
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "empirical_cdf",
    "decimate_cdf",
    "percentile",
    "harmonic_mean_excluding_worst",
    "config_digest",
    "MetricsBundle",
]


def empirical_cdf(samples):
    """Empirical CDF as (sorted values, cumulative probabilities k/n)."""
    x = np.asarray(samples, dtype=float)
    if x.size == 0:
        raise ValueError("empirical_cdf requires at least one sample")
    values = np.sort(x)
    probs = np.arange(1, x.size + 1, dtype=float) / x.size
    return values, probs


def decimate_cdf(values, probs, max_points: int = 2000, keep=(0.01, 0.05, 0.5, 0.95, 0.99)):
    """Thin a CDF to at most `max_points`, preserving the exact sample
    points at the `keep` percentile ranks plus both endpoints."""
    values = np.asarray(values, dtype=float)
    probs = np.asarray(probs, dtype=float)
    n = values.size
    if n <= max_points:
        return values, probs
    idx = np.linspace(0, n - 1, max_points).astype(int)
    keep_idx = [max(1, math.ceil(p * n)) - 1 for p in keep]
    idx = np.unique(np.concatenate([idx, np.asarray(keep_idx, dtype=int)]))
    return values[idx], probs[idx]


def percentile(samples, p: float) -> float:
    """Nearest-rank percentile; p=0 returns the minimum, p=1 the maximum."""
    x = np.asarray(samples, dtype=float)
    if x.size == 0:
        raise ValueError("percentile requires at least one sample")
    if not 0.0 <= p <= 1.0:
        raise ValueError("p must be in [0, 1]")
    x = np.sort(x)
    rank = max(1, math.ceil(p * x.size))
    return float(x[rank - 1])


def harmonic_mean_excluding_worst(samples, exclude_fraction: float = 0.01) -> float:
    """Harmonic mean after dropping the lowest floor(n*exclude_fraction) samples."""
    x = np.asarray(samples, dtype=float)
    if x.size == 0:
        raise ValueError("harmonic mean requires at least one sample")
    if not 0.0 <= exclude_fraction < 1.0:
        raise ValueError("exclude_fraction must be in [0, 1)")
    x = np.sort(x)
    drop = int(math.floor(x.size * exclude_fraction))
    kept = x[drop:]
    if np.any(kept <= 0.0):
        raise ValueError("harmonic mean undefined for non-positive samples")
    return float(kept.size / np.sum(1.0 / kept))


def config_digest(payload) -> str:
    """Stable short digest of a JSON-serializable configuration mapping."""
    canon = json.dumps(payload, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canon.encode("utf-8")).hexdigest()[:16]


@dataclass
class MetricsBundle:
    """Pooled per-cell samples from a campaign plus summary scalars.

    `se_bps_hz` is per scheduled stream; `sector_se_bps_hz` is the
    airtime-weighted aggregate SE of one sector in one drop (the two
    coincide when each sector serves a single full-time cell).
    """

    sinr_db: np.ndarray
    snr_db: np.ndarray
    se_bps_hz: np.ndarray
    sector_se_bps_hz: np.ndarray
    throughput_mbps: np.ndarray
    summary: dict = field(default_factory=dict)
    provenance: dict = field(default_factory=dict)

    @classmethod
    def from_samples(
        cls,
        sinr_db,
        snr_db,
        se_bps_hz,
        sector_se_bps_hz,
        throughput_mbps,
        bandwidth_hz: float,
        sectors_per_hub: int,
        provenance: dict,
    ) -> "MetricsBundle":
        sinr_db = np.asarray(sinr_db, dtype=float)
        snr_db = np.asarray(snr_db, dtype=float)
        se = np.asarray(se_bps_hz, dtype=float)
        sector_se = np.asarray(sector_se_bps_hz, dtype=float)
        tput = np.asarray(throughput_mbps, dtype=float)
        if not (sinr_db.size == snr_db.size == se.size == tput.size):
            raise ValueError("per-cell sample vectors must have equal lengths")

        mean_sector_se = float(np.mean(sector_se))
        summary = {
            "mean_se_bps_hz": mean_sector_se,
            "hub_throughput_gbps": mean_sector_se * sectors_per_hub * bandwidth_hz / 1e9,
            "mean_cell_se_bps_hz": float(np.mean(se)),
            "mean_sinr_db": float(np.mean(sinr_db)),
            "median_sinr_db": percentile(sinr_db, 0.5),
            "p01_se_bps_hz": percentile(se, 0.01),
            "frac_above_2bpshz": float(np.mean(se > 2.0)),
            "harmonic_mean_99_mbps": harmonic_mean_excluding_worst(tput, 0.01),
            "mean_throughput_mbps": float(np.mean(tput)),
            "n_cell_samples": int(se.size),
        }
        return cls(
            sinr_db=sinr_db,
            snr_db=snr_db,
            se_bps_hz=se,
            sector_se_bps_hz=sector_se,
            throughput_mbps=tput,
            summary=summary,
            provenance=dict(provenance),
        )

    def summary_payload(self) -> dict:
        """Summary scalars merged with provenance, ready for JSON output."""
        payload = dict(self.summary)
        payload.update(self.provenance)
        return payload

    def summary_json(self) -> str:
        return json.dumps(self.summary_payload(), sort_keys=True, indent=2) + "\n"

    def cdf(self, which: str, max_points: int = 2000):
        """Decimated CDF of one sample vector ('sinr', 'se', or 'throughput')."""
        arrays = {
            "sinr": self.sinr_db,
            "se": self.se_bps_hz,
            "throughput": self.throughput_mbps,
        }
        if which not in arrays:
            raise ValueError(f"unknown metric {which!r}")
        values, probs = empirical_cdf(arrays[which])
        return decimate_cdf(values, probs, max_points=max_points)
