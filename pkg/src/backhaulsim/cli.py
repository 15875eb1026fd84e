"""Command-line entry point for the backhaul planning workflows.

Subcommands:
  linkbudget    render the four-column link budget (text, CSV, figure)
  statmux       headroom planning report with curve CSV and figure
  simulate      Monte-Carlo campaign: summary JSON, CDF CSVs, figures
  dump-pattern  steered-beam gain cut as (angle, gain) CSV and figure
  dump-config   print the resolved configuration (the full schema) as YAML

Exit codes: 0 success, 2 configuration error, 3 runtime error.  Every
output artifact embeds the resolved configuration digest and the seed it
was produced with, so identical (config, seed) runs are byte-identical.
"""

import argparse
import csv
import json
import math
import sys
import time
from pathlib import Path

import numpy as np

from backhaulsim import __version__, antenna, linkbudget, metrics, plotting, statmux
from backhaulsim.config import ConfigError, RunConfig, dump_default_yaml, load_config
from backhaulsim.simulator import run_campaign

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_RUNTIME = 3


def _out_dir(args) -> Path:
    path = Path(args.output_dir)
    path.mkdir(parents=True, exist_ok=True)
    return path


def _write_csv(path: Path, header, rows, config_hash: str, seed) -> None:
    with open(path, "w", newline="") as fh:
        fh.write(f"# config_hash={config_hash} seed={seed}\n")
        writer = csv.writer(fh)
        writer.writerow(header)
        writer.writerows(rows)


def _set_if(overrides: dict, section: str, key: str, value) -> None:
    if value is not None:
        overrides.setdefault(section, {})[key] = value


# ---------------------------------------------------------------------------
# linkbudget


def _fmt2(x: float) -> str:
    return f"{x:.2f}"


def _render_table(cfg: RunConfig, rows) -> str:
    tx_of = {linkbudget.DOWNLINK: cfg.hub_array, linkbudget.UPLINK: cfg.cell_array}
    quantities = [
        ("PA output (dBm)", lambda r: _fmt2(tx_of[r.direction].pa_power_dbm)),
        ("Number of PAs", lambda r: str(tx_of[r.direction].n_pa)),
        ("Total power (dBm)", lambda r: _fmt2(r.total_tx_power_dbm)),
        ("EIRP (dBm)", lambda r: _fmt2(r.eirp_dbm)),
        ("Distance (m)", lambda r: f"{r.distance_m:.0f}"),
        ("Total path loss (dB)", lambda r: _fmt2(r.path_loss_db)),
        ("Received power (dBm)", lambda r: _fmt2(r.received_power_dbm)),
        ("Bandwidth (MHz)", lambda r: f"{cfg.linkbudget.bandwidth_hz / 1e6:.0f}"),
        ("Noise figure (dB)", lambda r: _fmt2(cfg.noise.noise_figure_db)),
        ("Number of streams", lambda r: str(r.k_streams)),
        ("Receiver loss (dB)", lambda r: _fmt2(cfg.noise.rx_impl_loss_db)),
        ("SNR per stream (dB)", lambda r: _fmt2(r.snr_per_stream_db)),
        ("Spectral efficiency (bps/Hz)", lambda r: _fmt2(r.se_total_bps_hz)),
        ("Throughput (Mbps)", lambda r: f"{r.throughput_mbps:,.0f}"),
    ]
    headers = [""] + [r.label for r in rows]
    table = [[name] + [fmt(r) for r in rows] for name, fmt in quantities]
    widths = [max(len(line[c]) for line in [headers] + table) for c in range(len(headers))]
    lines = ["  ".join(h.ljust(w) for h, w in zip(headers, widths)).rstrip()]
    lines.append("  ".join("-" * w for w in widths))
    for line in table:
        lines.append("  ".join(v.ljust(w) for v, w in zip(line, widths)).rstrip())
    return "\n".join(lines)


def cmd_linkbudget(args, cfg: RunConfig) -> int:
    out = _out_dir(args)
    lb = cfg.linkbudget
    rows = linkbudget.build_table(
        hub=cfg.hub_array,
        small_cell=cfg.cell_array,
        cell_edge_m=lb.cell_edge_m,
        median_m=lb.median_m,
        k_streams=lb.k_streams,
        bandwidth_hz=lb.bandwidth_hz,
        path_loss=cfg.path_loss,
        noise=cfg.noise,
        se_cap_bps_hz=lb.se_cap_bps_hz,
    )
    print(_render_table(cfg, rows))

    chash = cfg.config_hash()
    seed = cfg.simulation.master_seed
    header = [
        "label",
        "direction",
        "k_streams",
        "distance_m",
        "total_tx_power_dbm",
        "eirp_dbm",
        "path_loss_db",
        "received_power_dbm",
        "snr_per_stream_db",
        "se_total_bps_hz",
        "throughput_mbps",
    ]
    _write_csv(
        out / "linkbudget.csv",
        header,
        [
            [
                r.label,
                r.direction,
                r.k_streams,
                repr(r.distance_m),
                repr(r.total_tx_power_dbm),
                repr(r.eirp_dbm),
                repr(r.path_loss_db),
                repr(r.received_power_dbm),
                repr(r.snr_per_stream_db),
                repr(r.se_total_bps_hz),
                repr(r.throughput_mbps),
            ]
            for r in rows
        ],
        chash,
        seed,
    )

    distances = np.linspace(100.0, max(lb.cell_edge_m * 1.3, 200.0), 200)
    curves = {}
    for direction, tx, rx in (
        ("downlink 1-stream", cfg.hub_array, cfg.cell_array),
        ("uplink 1-stream", cfg.cell_array, cfg.hub_array),
    ):
        se = [
            linkbudget.spectral_efficiency_bps_hz(
                linkbudget.snr_per_stream_db(
                    linkbudget.LinkBudgetInput(
                        direction=direction.split()[0],
                        tx_array=tx,
                        rx_array=rx,
                        distance_m=float(d),
                        k_streams=1,
                        bandwidth_hz=lb.bandwidth_hz,
                        path_loss=cfg.path_loss,
                        noise=cfg.noise,
                    )
                ),
                1,
                lb.se_cap_bps_hz,
            )
            for d in distances
        ]
        curves[direction] = se
    points = [(r.distance_m, r.se_total_bps_hz, r.label) for r in rows if r.k_streams == 1]
    plotting.save_linkbudget_figure(distances, curves, points, out / "linkbudget.png")
    print(f"\nwrote {out / 'linkbudget.csv'} and {out / 'linkbudget.png'}  [config {chash}]")
    return EXIT_OK


# ---------------------------------------------------------------------------
# statmux


def cmd_statmux(args, cfg: RunConfig) -> int:
    out = _out_dir(args)
    sm = cfg.statmux
    chash = cfg.config_hash()

    factor = statmux.headroom_factor(sm.n_cells, sm.availability)
    query = statmux.HeadroomQuery(sm.n_cells, sm.availability, sm.mean_rate_mbps)
    capacity = statmux.required_capacity_mbps(query)
    mc = statmux.headroom_factor_mc(sm.n_cells, sm.availability, sm.mc_samples, sm.seed)

    print(f"cells aggregated:        {sm.n_cells}")
    print(f"availability target:     {sm.availability:.4f}")
    print(f"headroom factor:         {factor:.4f}")
    print(f"  monte-carlo check:     {mc:.4f}  ({sm.mc_samples} samples, seed {sm.seed})")
    print(f"mean rate per cell:      {sm.mean_rate_mbps:.1f} Mbps")
    print(f"required capacity:       {capacity:.1f} Mbps")
    clipped = None
    if sm.peak_rate_mbps is not None:
        if sm.mean_rate_mbps <= 0:
            raise ConfigError("statmux.mean_rate_mbps must be > 0 to apply a peak rate")
        ratio = sm.peak_rate_mbps / sm.mean_rate_mbps
        clipped = statmux.clipped_headroom_factor_mc(
            sm.n_cells, sm.availability, ratio, sm.mc_samples, sm.seed
        )
        print(
            f"peak-clipped variant:    factor {clipped:.4f}, capacity "
            f"{sm.n_cells * sm.mean_rate_mbps * clipped:.1f} Mbps "
            f"(rates clipped at {sm.peak_rate_mbps:.1f} Mbps)"
        )

    curve = statmux.headroom_curve(sm.availability, sm.curve_n)
    _write_csv(
        out / "headroom_curve.csv",
        ["n_cells", "headroom_factor"],
        [[n, repr(f)] for n, f in curve],
        chash,
        sm.seed,
    )
    plotting.save_headroom_figure(curve, sm.availability, out / "headroom_curve.png")

    payload = {
        "n_cells": sm.n_cells,
        "availability": sm.availability,
        "headroom_factor": factor,
        "headroom_factor_mc": mc,
        "mean_rate_mbps": sm.mean_rate_mbps,
        "required_capacity_mbps": capacity,
        "peak_clipped_factor": clipped,
        "config_hash": chash,
        "seed": sm.seed,
    }
    (out / "statmux.json").write_text(json.dumps(payload, sort_keys=True, indent=2) + "\n")
    print(f"wrote {out / 'headroom_curve.csv'}, headroom_curve.png, statmux.json  [config {chash}]")
    return EXIT_OK


# ---------------------------------------------------------------------------
# simulate


def cmd_simulate(args, cfg: RunConfig) -> int:
    out = _out_dir(args)
    chash = cfg.config_hash()
    sim_cfg = cfg.sim_config()

    started = time.perf_counter()
    bundle = run_campaign(
        sim_cfg,
        workers=cfg.simulation.workers,
        provenance={"config_hash": chash},
        drop_records_path=args.dump_drops,
    )
    elapsed = time.perf_counter() - started

    (out / "summary.json").write_text(bundle.summary_json())
    for which, stem, xlabel in (
        ("sinr", "sinr_cdf", "SINR (dB)"),
        ("se", "se_cdf", "Spectral efficiency per stream (bps/Hz)"),
        ("throughput", "throughput_cdf", "Throughput per cell (Mbps)"),
    ):
        values, probs = bundle.cdf(which)
        _write_csv(
            out / f"{stem}.csv",
            ["value", "prob"],
            [[repr(float(v)), repr(float(p))] for v, p in zip(values, probs)],
            chash,
            sim_cfg.master_seed,
        )
        plotting.save_cdf_figure(
            {f"{sim_cfg.per_sector_cells} cells/sector": (values, probs)},
            xlabel,
            f"Campaign CDF ({sim_cfg.n_drops} drops)",
            out / f"{stem}.png",
        )

    s = bundle.summary
    print(f"drops:                   {sim_cfg.n_drops} ({elapsed:.1f} s)")
    print(f"mean sector SE:          {s['mean_se_bps_hz']:.3f} bps/Hz")
    print(f"mean hub throughput:     {s['hub_throughput_gbps']:.3f} Gbps")
    print(f"fraction SE > 2 bps/Hz:  {s['frac_above_2bpshz']:.4f}")
    print(f"harmonic mean (top 99%): {s['harmonic_mean_99_mbps']:.1f} Mbps")
    print(f"wrote summary.json and CDF csv/png files in {out}  [config {chash}]")
    return EXIT_OK


# ---------------------------------------------------------------------------
# dump-pattern


def cmd_dump_pattern(args, cfg: RunConfig) -> int:
    out = _out_dir(args)
    chash = cfg.config_hash()
    array = cfg.hub_array if args.array == "hub" else cfg.cell_array
    if abs(args.steer) > 90.0:
        raise ConfigError("--steer must lie within [-90, 90] degrees")
    if args.step <= 0:
        raise ConfigError("--step must be > 0")
    angles = np.arange(-180.0, 180.0 + args.step / 2, args.step)
    gains = antenna.beam_gain_db(array, cfg.sector_pattern, args.steer, angles)
    _write_csv(
        out / "pattern.csv",
        ["angle_deg", "gain_db"],
        [[repr(float(a)), repr(float(g))] for a, g in zip(angles, gains)],
        chash,
        cfg.simulation.master_seed,
    )
    plotting.save_pattern_figure(
        angles,
        gains,
        f"{args.array} array azimuth cut, steered {args.steer:+.1f} deg",
        out / "pattern.png",
    )
    print(f"wrote {out / 'pattern.csv'} and pattern.png  [config {chash}]")
    return EXIT_OK


def cmd_dump_config(args, cfg: RunConfig) -> int:
    sys.stdout.write(dump_default_yaml())
    return EXIT_OK


# ---------------------------------------------------------------------------
# parser


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", metavar="FILE", help="YAML configuration file")
    parser.add_argument(
        "--output-dir", default="out", metavar="DIR", help="directory for output artifacts"
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="backhaulsim",
        description=__doc__,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    fmt = argparse.ArgumentDefaultsHelpFormatter

    p = sub.add_parser(
        "linkbudget",
        formatter_class=fmt,
        help="render the link budget table (text, CSV, figure)",
    )
    _add_common(p)
    p.add_argument("--distance", type=float, help="cell-edge distance in meters (default 1000)")
    p.add_argument(
        "--median-distance",
        type=float,
        help="multi-stream design distance in meters (default cell edge / sqrt(2))",
    )
    p.add_argument("--streams", type=int, help="stream count of the multi-stream columns (default 4)")
    p.add_argument("--se-cap", type=float, help="per-stream spectral-efficiency ceiling in bps/Hz")
    p.set_defaults(func=cmd_linkbudget, overrides=_linkbudget_overrides)

    p = sub.add_parser(
        "statmux",
        formatter_class=fmt,
        help="statistical-multiplexing headroom report and curve",
    )
    _add_common(p)
    p.add_argument("--cells", type=int, help="number of aggregated small cells (default 32)")
    p.add_argument("--availability", type=float, help="availability target in (0,1) (default 0.99)")
    p.add_argument("--mean-rate", type=float, help="mean rate per cell in Mbps (default 100)")
    p.add_argument("--samples", type=int, help="Monte-Carlo sample count (default 10^6)")
    p.add_argument("--seed", type=int, help="Monte-Carlo seed (default 1)")
    p.add_argument("--peak-rate", type=float, help="optional per-cell peak rate in Mbps for the clipped variant")
    p.set_defaults(func=cmd_statmux, overrides=_statmux_overrides)

    p = sub.add_parser(
        "simulate",
        formatter_class=fmt,
        help="run a Monte-Carlo campaign (summary JSON, CDF CSVs, figures)",
    )
    _add_common(p)
    p.add_argument("--per-sector", type=int, help="small cells per sector (default 1)")
    p.add_argument("--drops", type=int, help="number of drops (default 10000)")
    p.add_argument("--seed", type=int, help="master seed (default 1)")
    p.add_argument(
        "--scope",
        choices=["center_hub", "all_hubs"],
        help="hubs whose cells enter the statistics (default center_hub)",
    )
    p.add_argument("--workers", type=int, help="parallel evaluation threads; never changes results")
    p.add_argument("--no-interference", action="store_true", help="disable interference (SINR = SNR)")
    p.add_argument("--se-cap", type=float, help="per-stream spectral-efficiency ceiling in bps/Hz")
    p.add_argument("--dump-drops", metavar="FILE", help="also write the full per-cell drop table as CSV")
    p.set_defaults(func=cmd_simulate, overrides=_simulate_overrides)

    p = sub.add_parser(
        "dump-pattern",
        formatter_class=fmt,
        help="emit a steered-beam azimuth cut as (angle, gain) CSV and figure",
    )
    _add_common(p)
    p.add_argument("--array", choices=["hub", "cell"], default="hub", help="which array to cut")
    p.add_argument("--steer", type=float, default=0.0, help="steering azimuth in degrees")
    p.add_argument("--step", type=float, default=0.25, help="angular resolution in degrees")
    p.set_defaults(func=cmd_dump_pattern, overrides=lambda a: {})

    p = sub.add_parser(
        "dump-config",
        formatter_class=fmt,
        help="print the resolved default configuration (the schema) as YAML",
    )
    _add_common(p)
    p.set_defaults(func=cmd_dump_config, overrides=lambda a: {})

    return parser


def _linkbudget_overrides(args) -> dict:
    over: dict = {}
    _set_if(over, "linkbudget", "cell_edge_m", args.distance)
    _set_if(over, "linkbudget", "median_m", args.median_distance)
    _set_if(over, "linkbudget", "k_streams", args.streams)
    _set_if(over, "linkbudget", "se_cap_bps_hz", args.se_cap)
    return over


def _statmux_overrides(args) -> dict:
    over: dict = {}
    _set_if(over, "statmux", "n_cells", args.cells)
    _set_if(over, "statmux", "availability", args.availability)
    _set_if(over, "statmux", "mean_rate_mbps", args.mean_rate)
    _set_if(over, "statmux", "mc_samples", args.samples)
    _set_if(over, "statmux", "seed", args.seed)
    _set_if(over, "statmux", "peak_rate_mbps", args.peak_rate)
    return over


def _simulate_overrides(args) -> dict:
    over: dict = {}
    _set_if(over, "simulation", "per_sector_cells", args.per_sector)
    _set_if(over, "simulation", "n_drops", args.drops)
    _set_if(over, "simulation", "master_seed", args.seed)
    _set_if(over, "simulation", "measurement_scope", args.scope)
    _set_if(over, "simulation", "workers", args.workers)
    _set_if(over, "simulation", "se_cap_bps_hz", args.se_cap)
    if args.no_interference:
        _set_if(over, "simulation", "include_interference", False)
    return over


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = load_config(args.config, args.overrides(args))
        return args.func(args, cfg)
    except (ConfigError, ValueError) as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except Exception as exc:  # noqa: BLE001 - the CLI boundary reports and exits
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
