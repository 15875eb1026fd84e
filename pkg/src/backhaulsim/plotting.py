"""Figure rendering for the CLI reports.

Figures are written straight to files (Agg backend) next to the CSV data
they visualize; nothing here opens a display.
"""

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np


def save_headroom_figure(curve, availability: float, path) -> None:
    """Headroom factor versus aggregated cell count, log-x."""
    n = [point[0] for point in curve]
    factor = [point[1] for point in curve]
    fig, ax = plt.subplots(figsize=(7, 4.5))
    ax.semilogx(n, factor, "o-", color="tab:blue", base=2)
    ax.axhline(1.0, color="gray", linestyle=":", alpha=0.6)
    ax.set_xlabel("Aggregated small cells n")
    ax.set_ylabel("Required capacity / mean aggregate rate")
    ax.set_title(f"Statistical multiplexing headroom at {availability:.0%} availability")
    ax.grid(True, which="both", alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def save_cdf_figure(series: dict, xlabel: str, title: str, path) -> None:
    """Overlay CDF curves; `series` maps label -> (values, probs)."""
    fig, ax = plt.subplots(figsize=(7, 4.5))
    for label, (values, probs) in series.items():
        ax.plot(values, probs, label=label)
    ax.set_xlabel(xlabel)
    ax.set_ylabel("CDF")
    ax.set_ylim(0.0, 1.0)
    ax.set_title(title)
    ax.grid(True, alpha=0.3)
    if len(series) > 1:
        ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def save_pattern_figure(angles_deg, gains_db, title: str, path) -> None:
    """Beam pattern cut: gain versus azimuth."""
    fig, ax = plt.subplots(figsize=(7, 4.5))
    ax.plot(angles_deg, gains_db, color="tab:blue")
    ax.set_xlabel("Azimuth (deg)")
    ax.set_ylabel("Gain (dB)")
    ax.set_title(title)
    peak = float(np.max(gains_db))
    ax.set_ylim(peak - 60.0, peak + 3.0)
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def save_linkbudget_figure(distances_m, se_curves: dict, design_points, path) -> None:
    """Spectral efficiency versus distance with the design points marked.

    `se_curves` maps label -> SE array over `distances_m`; `design_points`
    is a list of (distance_m, se, label) markers.
    """
    fig, ax = plt.subplots(figsize=(7, 4.5))
    for label, se in se_curves.items():
        ax.plot(distances_m, se, label=label)
    for dist, se, label in design_points:
        ax.plot([dist], [se], "k*", markersize=10)
        ax.annotate(label, (dist, se), textcoords="offset points", xytext=(6, 4), fontsize=8)
    ax.set_xlabel("Hub-cell distance (m)")
    ax.set_ylabel("Spectral efficiency (bps/Hz)")
    ax.set_title("Link budget: spectral efficiency vs distance")
    ax.grid(True, alpha=0.3)
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
