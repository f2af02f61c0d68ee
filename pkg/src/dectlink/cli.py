"""Command-line interface.

Subcommands: `model eval`, `model sweep`, `analyze`, `fit`, `plan`,
`report`. Exit codes are script-friendly: 0 for success (including
"threshold unreachable" planning outcomes), 2 for usage and domain errors,
1 for unexpected internal failures.

Human-readable output rounds dB and meters to two decimals; CSV output
carries full precision so downstream plotting loses nothing. CSV bytes are
deterministic for identical inputs and configuration.
"""

from __future__ import annotations

import argparse
import csv
import io
import os
import sys
from dataclasses import fields
from pathlib import Path
from typing import Sequence

from .budget import (
    ThresholdUnreachable,
    allowed_path_loss_db,
    max_link_distance,
    noise_floor_dbm,
)
from .campaign import CampaignRecord, load_capture, max_reliable_distance, summarize
from .config import CONFIG_ENV_VAR, RunConfig, load_config
from .fitting import fit_log_distance, fit_log_distance_iterative
from .fixtures import load_pathloss_comparison
from .propagation import MODEL_KINDS, evaluate_sweep

_CONFIG_FIELD_NAMES = tuple(f.name for f in fields(RunConfig))

_REPORT_MODEL_COLUMNS = (
    ("fspl", "fspl_db"),
    ("two-ray", "two_ray_db"),
    ("okumura-hata", "okumura_hata_db"),
    ("cost231-hata", "cost231_db"),
)


def _num(value: float | None) -> str:
    """Full-precision CSV cell; empty for missing values."""
    return "" if value is None else repr(float(value))


def _fmt2(value: float | None) -> str:
    return "-" if value is None else f"{value:.2f}"


def _emit(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        Path(out).write_text(text, encoding="utf-8", newline="")


def _csv_text(header: Sequence[str], rows: Sequence[Sequence[str]]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


def _add_config_flags(parser: argparse.ArgumentParser) -> None:
    g = parser.add_argument_group(
        "configuration",
        "Flags override the config file, which overrides built-in defaults. "
        f"The config file path may also come from ${CONFIG_ENV_VAR}.",
    )
    g.add_argument("--config", metavar="PATH", help="key=value config file")
    g.add_argument("--f", dest="frequency_hz", type=float, metavar="HZ",
                   help="carrier frequency in Hz (e.g. 1.899e9)")
    g.add_argument("--bandwidth", dest="bandwidth_hz", type=float, metavar="HZ",
                   help="channel bandwidth in Hz")
    g.add_argument("--tx-power", dest="tx_power_dbm", type=float, metavar="DBM",
                   help="transmit power in dBm")
    g.add_argument("--correction-tx", dest="correction_tx_db", type=float, metavar="DB",
                   help="TX-side gain-minus-loss correction in dB")
    g.add_argument("--correction-rx", dest="correction_rx_db", type=float, metavar="DB",
                   help="RX-side gain-minus-loss correction in dB")
    g.add_argument("--noise-figure", dest="noise_figure_db", type=float, metavar="DB",
                   help="receiver noise figure in dB")
    g.add_argument("--min-sr", dest="min_success_rate", type=float, metavar="PCT",
                   help="success-rate floor in percent (strict)")
    g.add_argument("--rssi-floor-indoor", dest="rssi_floor_indoor_dbm", type=float,
                   metavar="DBM", help="indoor RSSI floor in dBm")
    g.add_argument("--rssi-floor-outdoor", dest="rssi_floor_outdoor_dbm", type=float,
                   metavar="DBM", help="outdoor RSSI floor in dBm")
    g.add_argument("--snr-floor-indoor", dest="snr_floor_indoor_db", type=float,
                   metavar="DB", help="indoor SNR floor in dB")
    g.add_argument("--snr-floor-outdoor", dest="snr_floor_outdoor_db", type=float,
                   metavar="DB", help="outdoor SNR floor in dB")
    g.add_argument("--h-tx", dest="h_tx_m", type=float, metavar="M",
                   help="TX antenna height in m (required by two-ray and Hata models)")
    g.add_argument("--h-rx", dest="h_rx_m", type=float, metavar="M",
                   help="RX antenna height in m (required by two-ray and Hata models)")
    g.add_argument("--antenna-gain", dest="antenna_gain", type=float, metavar="G",
                   help="combined linear antenna gain for the two-ray model")
    g.add_argument("--city-size", dest="city_size", choices=("small-medium", "large"),
                   help="Hata mobile-height correction variant")
    g.add_argument("--area-class", dest="area_class", choices=("urban", "suburban-open"),
                   help="COST-231 area term")


def _resolve_config(args: argparse.Namespace) -> RunConfig:
    path = args.config or os.environ.get(CONFIG_ENV_VAR) or None
    overrides = {
        name: getattr(args, name)
        for name in _CONFIG_FIELD_NAMES
        if getattr(args, name, None) is not None
    }
    return load_config(path, overrides)


def _parse_model_list(arg: str) -> tuple[str, ...]:
    if arg == "all":
        return MODEL_KINDS
    kinds = tuple(k.strip() for k in arg.split(",") if k.strip())
    if not kinds:
        raise ValueError("no models given")
    for kind in kinds:
        if kind not in MODEL_KINDS:
            raise ValueError(f"unknown model {kind!r}; expected one of {MODEL_KINDS} or 'all'")
    return kinds


def cmd_model_eval(args: argparse.Namespace) -> int:
    cfg = _resolve_config(args)
    model = cfg.model(args.model)
    pl = model.path_loss(args.d)
    print(f"{pl:.2f} dB")
    for flag in model.flags(args.d):
        print(f"flag {flag.code}: {flag.detail}")
    return 0


def cmd_model_sweep(args: argparse.Namespace) -> int:
    cfg = _resolve_config(args)
    kinds = _parse_model_list(args.models)
    models = [cfg.model(kind) for kind in kinds]
    sweeps = [
        evaluate_sweep(model, args.start, args.end, args.points, args.spacing)
        for model in models
    ]
    distances = [d for d, _ in sweeps[0]]
    header = ["distance_m"] + [f"{kind}_db" for kind in kinds]
    rows = [
        [_num(distances[i])] + [_num(sweep[i][1]) for sweep in sweeps]
        for i in range(len(distances))
    ]
    _emit(_csv_text(header, rows), args.out)
    return 0


_ANALYZE_COLUMNS = (
    "location_id",
    "distance_m",
    "setting",
    "propagation",
    "p_tx_dbm",
    "request_count",
    "sr_pcc_pct",
    "sr_pdc_pct",
    "mean_pcc_rssi_dbm",
    "mean_pdc_rssi_dbm",
    "std_pcc_rssi_db",
    "min_pcc_rssi_dbm",
    "max_pcc_rssi_dbm",
    "mean_snr_db",
    "empirical_pl_pcc_db",
    "empirical_pl_pdc_db",
    "reliable",
)


def _analyze_row(r: CampaignRecord) -> list[str]:
    return [
        r.location_id,
        _num(r.distance_m),
        r.setting,
        r.propagation,
        _num(r.p_tx_dbm),
        str(r.request_count),
        _num(r.sr_pcc_pct),
        _num(r.sr_pdc_pct),
        _num(r.mean_pcc_rssi_dbm),
        _num(r.mean_pdc_rssi_dbm),
        _num(r.std_pcc_rssi_db),
        _num(r.min_pcc_rssi_dbm),
        _num(r.max_pcc_rssi_dbm),
        _num(r.mean_snr_db),
        _num(r.empirical_pl_pcc_db),
        _num(r.empirical_pl_pdc_db),
        "1" if r.reliable else "0",
    ]


def cmd_analyze(args: argparse.Namespace) -> int:
    cfg = _resolve_config(args)
    budget = cfg.budget()
    thresholds = cfg.thresholds()
    records = [summarize(load_capture(path), budget, thresholds) for path in args.captures]
    records.sort(key=lambda r: (r.distance_m, r.location_id))

    if args.format == "csv":
        rows = [_analyze_row(r) for r in records]
        _emit(_csv_text(_ANALYZE_COLUMNS, rows), args.out)
        return 0

    lines = []
    head = (
        f"{'location':<28} {'d (m)':>9} {'SR pcc':>7} {'SR pdc':>7} "
        f"{'RSSI (dBm)':>11} {'std':>6} {'PL (dB)':>8} {'ok':>3}"
    )
    lines.append(head)
    lines.append("-" * len(head))
    for r in records:
        lines.append(
            f"{r.location_id:<28} {r.distance_m:>9.2f} {r.sr_pcc_pct:>7.2f} "
            f"{r.sr_pdc_pct:>7.2f} {_fmt2(r.mean_pcc_rssi_dbm):>11} "
            f"{r.std_pcc_rssi_db:>6.2f} {_fmt2(r.empirical_pl_pcc_db):>8} "
            f"{'yes' if r.reliable else 'no':>3}"
        )
    try:
        best = max_reliable_distance(records, thresholds)
        lines.append(
            f"max reliable distance: {best.distance_m:.2f} m ({best.location_id})"
        )
    except ValueError:
        lines.append("max reliable distance: none (no location clears the threshold)")
    _emit("\n".join(lines) + "\n", args.out)
    return 0


def _read_points_csv(path: str) -> list[tuple[float, float]]:
    """Read (distance_m, pl_db) fit input; '#' comment lines are skipped."""
    points: list[tuple[float, float]] = []
    with open(path, newline="") as fh:
        header_seen = False
        for line_no, row in enumerate(csv.reader(fh), start=1):
            if not row or (len(row) == 1 and row[0].startswith("#")):
                continue
            cells = [c.strip() for c in row]
            if not header_seen:
                if cells != ["distance_m", "pl_db"]:
                    raise ValueError(
                        f"{path} line {line_no}: expected header distance_m,pl_db, got {row!r}"
                    )
                header_seen = True
                continue
            if len(cells) != 2:
                raise ValueError(f"{path} line {line_no}: expected 2 columns, got {len(cells)}")
            try:
                d, pl = float(cells[0]), float(cells[1])
            except ValueError:
                raise ValueError(f"{path} line {line_no}: non-numeric row {row!r}") from None
            points.append((d, pl))
    if not header_seen:
        raise ValueError(f"{path}: no header row found")
    return points


def cmd_fit(args: argparse.Namespace) -> int:
    points = _read_points_csv(args.input)
    if args.engine == "closed-form":
        result = fit_log_distance(points, d0_m=args.d0)
    else:
        result = fit_log_distance_iterative(points, d0_m=args.d0)
    pl0, exponent = result.params
    print(f"pl0_db: {pl0:.2f}")
    print(f"exponent: {exponent:.4f}")
    print(f"rmse_db: {result.rmse_db:.2f}")
    print(f"points: {len(points)}")
    print(f"engine: {args.engine}")
    print(f"iterations: {result.iterations}")
    print(f"converged: {'yes' if result.converged else 'no'}")
    return 0


def cmd_plan(args: argparse.Namespace) -> int:
    cfg = _resolve_config(args)
    budget = cfg.budget()
    thresholds = cfg.thresholds()
    kinds = _parse_model_list(args.models)
    criteria = ("rssi", "snr") if args.criterion == "both" else (args.criterion,)

    rows: list[tuple[str, str, float, float | None]] = []
    for kind in kinds:
        model = cfg.model(kind)
        for criterion in criteria:
            allowed = allowed_path_loss_db(budget, thresholds, args.environment, criterion)
            try:
                d_star = max_link_distance(budget, model, thresholds, args.environment, criterion)
            except ThresholdUnreachable:
                d_star = None
            rows.append((kind, criterion, allowed, d_star))

    # The binding criterion per model is the one allowing the shortest reach.
    binding: dict[str, str] = {}
    for kind in kinds:
        candidates = [(d, crit) for k, crit, _, d in rows if k == kind and d is not None]
        if candidates:
            binding[kind] = min(candidates)[1]

    if args.format == "csv":
        csv_rows = [
            [
                kind,
                criterion,
                _num(allowed),
                "unreachable" if d_star is None else _num(d_star),
                "1" if binding.get(kind) == criterion and len(criteria) > 1 else "0",
            ]
            for kind, criterion, allowed, d_star in rows
        ]
        _emit(
            _csv_text(
                ["model", "criterion", "allowed_pl_db", "max_distance_m", "binding"], csv_rows
            ),
            args.out,
        )
        return 0

    lines = [
        f"environment: {args.environment}   tx power: {budget.p_tx_dbm:.2f} dBm   "
        f"corrections: +{budget.total_correction_db:.2f} dB   "
        f"noise floor: {noise_floor_dbm(budget):.2f} dBm"
    ]
    for kind in kinds:
        lines.append(f"model {kind}:")
        for k, criterion, allowed, d_star in rows:
            if k != kind:
                continue
            mark = "  (binding)" if binding.get(kind) == criterion and len(criteria) > 1 else ""
            if d_star is None:
                lines.append(
                    f"  {criterion}: allowed PL {allowed:.2f} dB -> unreachable "
                    f"(loss already above budget at minimum range)"
                )
            else:
                lines.append(
                    f"  {criterion}: allowed PL {allowed:.2f} dB -> {d_star:.2f} m{mark}"
                )
    _emit("\n".join(lines) + "\n", args.out)
    return 0


def cmd_report(args: argparse.Namespace) -> int:
    cfg = _resolve_config(args)
    tolerance = args.tolerance
    geometry = cfg.geometry()
    rows_out: list[list[str]] = []
    human: list[str] = []

    header = ["scenario", "distance_m", "emp_pcc_db", "emp_pdc_db"]
    for kind, _ in _REPORT_MODEL_COLUMNS:
        stem = kind.replace("-", "_")
        header += [
            f"{stem}_published_db",
            f"{stem}_computed_db",
            f"{stem}_delta_db",
            f"{stem}_status",
        ]

    for row in load_pathloss_comparison():
        out = [row.scenario, _num(row.distance_m), _num(row.emp_pcc_db), _num(row.emp_pdc_db)]
        notes = []
        for kind, attr in _REPORT_MODEL_COLUMNS:
            published = getattr(row, attr)
            needs_geometry = kind != "fspl"
            computed: float | None = None
            if not needs_geometry or geometry is not None:
                computed = cfg.model(kind).path_loss(row.distance_m)
            delta = (
                computed - published if computed is not None and published is not None else None
            )
            if delta is None:
                status = ""
            elif abs(delta) <= tolerance:
                status = "ok"
            else:
                status = "inconsistent"
            out += [_num(published), _num(computed), _num(delta), status]
            if delta is not None:
                marker = "" if status == "ok" else "  INCONSISTENT"
                notes.append(
                    f"  {kind}: published {published:.2f} dB, computed {computed:.2f} dB, "
                    f"delta {delta:+.2f} dB{marker}"
                )
            elif published is not None and computed is None:
                notes.append(f"  {kind}: published {published:.2f} dB, not computed "
                             f"(set --h-tx/--h-rx to compare)")
        rows_out.append(out)
        human.append(f"{row.scenario} at {row.distance_m:.2f} m:")
        human.extend(notes)

    if args.format == "csv":
        _emit(_csv_text(header, rows_out), args.out)
    else:
        _emit("\n".join(human) + "\n", args.out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dectlink",
        description="Link-budget and link-distance planning for DECT-2020 NR class radios.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_model = sub.add_parser("model", help="evaluate path-loss models")
    model_sub = p_model.add_subparsers(dest="model_command", required=True)

    p_eval = model_sub.add_parser("eval", help="evaluate one model at one distance")
    p_eval.add_argument("--model", required=True, choices=MODEL_KINDS)
    p_eval.add_argument("--d", type=float, required=True, metavar="M",
                        help="distance in meters")
    _add_config_flags(p_eval)
    p_eval.set_defaults(handler=cmd_model_eval)

    p_sweep = model_sub.add_parser("sweep", help="evaluate models over a distance grid")
    p_sweep.add_argument("--models", required=True, metavar="KINDS",
                         help="comma-separated model kinds, or 'all'")
    p_sweep.add_argument("--start", type=float, required=True, metavar="M")
    p_sweep.add_argument("--end", type=float, required=True, metavar="M")
    p_sweep.add_argument("--points", type=int, required=True)
    p_sweep.add_argument("--spacing", choices=("log", "linear"), default="log")
    p_sweep.add_argument("--out", metavar="PATH", help="write CSV here instead of stdout")
    _add_config_flags(p_sweep)
    p_sweep.set_defaults(handler=cmd_model_sweep)

    p_analyze = sub.add_parser("analyze", help="summarize measurement captures")
    p_analyze.add_argument("captures", nargs="+", metavar="CAPTURE.csv",
                           help="capture CSVs; each needs a matching .meta sidecar")
    p_analyze.add_argument("--format", choices=("table", "csv"), default="table")
    p_analyze.add_argument("--out", metavar="PATH")
    _add_config_flags(p_analyze)
    p_analyze.set_defaults(handler=cmd_analyze)

    p_fit = sub.add_parser("fit", help="fit a log-distance model to (distance, PL) points")
    p_fit.add_argument("--input", required=True, metavar="POINTS.csv",
                       help="CSV with header distance_m,pl_db")
    p_fit.add_argument("--d0", type=float, default=1.0, metavar="M",
                       help="reference distance (default 1 m)")
    p_fit.add_argument("--engine", choices=("closed-form", "iterative"),
                       default="closed-form")
    p_fit.set_defaults(handler=cmd_fit)

    p_plan = sub.add_parser("plan", help="solve maximum link distance per model and criterion")
    p_plan.add_argument("--environment", required=True, choices=("indoor", "outdoor"))
    p_plan.add_argument("--models", default="fspl", metavar="KINDS",
                        help="comma-separated model kinds, or 'all' (default fspl)")
    p_plan.add_argument("--criterion", choices=("rssi", "snr", "both"), default="both")
    p_plan.add_argument("--format", choices=("table", "csv"), default="table")
    p_plan.add_argument("--out", metavar="PATH")
    _add_config_flags(p_plan)
    p_plan.set_defaults(handler=cmd_plan)

    p_report = sub.add_parser(
        "report", help="compare bundled reference path-loss values with computed models"
    )
    p_report.add_argument("--tolerance", type=float, default=0.25, metavar="DB",
                          help="flag rows whose |computed - published| exceeds this (default 0.25)")
    p_report.add_argument("--format", choices=("table", "csv"), default="table")
    p_report.add_argument("--out", metavar="PATH")
    _add_config_flags(p_report)
    p_report.set_defaults(handler=cmd_report)

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.handler(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ThresholdUnreachable as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # pragma: no cover - defensive
        print(f"internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
