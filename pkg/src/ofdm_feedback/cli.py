"""Command-line front end: config parsing, runs/sweeps/figures, CSV+JSON output."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

from .harness import (
    SCHEMES,
    SWEEP_AXES,
    ExperimentRecord,
    SchemeConfig,
    figure_bundle,
    run_scheme,
    sweep,
)
from .selftest import run_selftest

CSV_HEADER = (
    "scheme,metric,n,m,k,r,b,c_b,p_t,noise_var,snr_db,trials,seed,mean,stderr,"
    "feedback_bits"
)

# Config file key -> (SchemeConfig field, expected type).
CONFIG_KEYS = {
    "n": ("num_subcarriers", int),
    "m": ("num_taps", int),
    "k": ("num_nodes", int),
    "r": ("cluster_size", int),
    "b": ("feedback_bits", int),
    "c_b": ("total_bits", int),
    "p_t": ("total_power", float),
    "noise_var": ("noise_var", float),
    "p_e": ("target_ser", float),
    "trials": ("num_trials", int),
    "seed": ("master_seed", int),
}


def parse_config(text: str, scheme: str, **overrides) -> SchemeConfig:
    """Build a SchemeConfig from a TOML document of flat simulation keys.

    Unspecified keys take the defaults (N=128, sigma_n^2=0.1, P_T=1, C_b=128,
    trials=3000, ...). Overrides with value None are ignored so CLI flags can
    be passed through unconditionally.
    """
    raw = tomllib.loads(text)
    kwargs = {}
    for key, value in raw.items():
        if key not in CONFIG_KEYS:
            raise ValueError(
                f"unknown config key {key!r}; valid keys: "
                + ", ".join(sorted(CONFIG_KEYS))
            )
        field_name, want = CONFIG_KEYS[key]
        ok_types = (int, float) if want is float else (int,)
        if isinstance(value, bool) or not isinstance(value, ok_types):
            raise ValueError(
                f"config key {key!r} expects {want.__name__}, "
                f"got {type(value).__name__}"
            )
        kwargs[field_name] = want(value)
    for field_name, value in overrides.items():
        if value is not None:
            kwargs[field_name] = value
    return SchemeConfig(scheme=scheme, **kwargs)


def _fmt(value) -> str:
    if isinstance(value, float):
        return f"{value:.10g}"
    return str(value)


def _csv_row(rec: ExperimentRecord) -> str:
    fields = (
        rec.scheme,
        rec.metric,
        rec.num_subcarriers,
        rec.num_taps,
        rec.num_nodes,
        rec.cluster_size,
        rec.feedback_budget,
        rec.total_bits,
        rec.total_power,
        rec.noise_var,
        rec.snr_db,
        rec.num_trials,
        rec.master_seed,
        rec.mean,
        rec.stderr,
        rec.feedback_bits_used,
    )
    return ",".join(_fmt(f) for f in fields)


def emit_csv(records: list[ExperimentRecord], path) -> None:
    if not records:
        raise ValueError("no records to write")
    lines = [CSV_HEADER] + [_csv_row(r) for r in records]
    Path(path).write_text("\n".join(lines) + "\n")


def _json_dict(rec: ExperimentRecord) -> dict:
    return {
        "scheme": rec.scheme,
        "metric": rec.metric,
        "n": rec.num_subcarriers,
        "m": rec.num_taps,
        "k": rec.num_nodes,
        "r": rec.cluster_size,
        "b": rec.feedback_budget,
        "c_b": rec.total_bits,
        "p_t": rec.total_power,
        "noise_var": rec.noise_var,
        "snr_db": rec.snr_db,
        "trials": rec.num_trials,
        "seed": rec.master_seed,
        "mean": rec.mean,
        "stderr": rec.stderr,
        "feedback_bits": rec.feedback_bits_used,
        "wall_time_s": rec.wall_time,
    }


def emit_json(records: list[ExperimentRecord], path) -> None:
    if not records:
        raise ValueError("no records to write")
    payload = {"records": [_json_dict(r) for r in records]}
    Path(path).write_text(json.dumps(payload, indent=2) + "\n")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", default="results", help="output directory")
    common.add_argument("--seed", type=int, default=None, help="master seed override")
    common.add_argument(
        "--trials", type=int, default=None, help="Monte Carlo trial count override"
    )
    common.add_argument(
        "--force", action="store_true", help="overwrite existing result files"
    )

    parser = argparse.ArgumentParser(
        prog="ofdm-feedback",
        description="Limited-feedback OFDM power/bit allocation simulator",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run_p = sub.add_parser("run", parents=[common], help="run a single scheme")
    run_p.add_argument("--scheme", required=True, choices=SCHEMES)
    run_p.add_argument("--config", default=None, help="TOML config file")

    sweep_p = sub.add_parser("sweep", parents=[common], help="sweep one parameter")
    sweep_p.add_argument("--scheme", required=True, choices=SCHEMES)
    sweep_p.add_argument("--config", default=None, help="TOML config file")
    sweep_p.add_argument("--axis", required=True, choices=SWEEP_AXES)
    sweep_p.add_argument(
        "--values",
        required=True,
        help="comma-separated axis values (SNR values are linear P_T/noise_var)",
    )

    fig_p = sub.add_parser("figure", parents=[common], help="run a figure bundle")
    fig_p.add_argument("figure", type=int, choices=range(1, 7))

    sub.add_parser("selftest", help="run the built-in example checks")
    return parser


def _parse_axis_values(axis: str, text: str) -> list[float]:
    values = []
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        value = float(part)
        if axis != "SNR" and value != int(value):
            raise ValueError(f"axis {axis} takes integer values, got {part!r}")
        values.append(value)
    if not values:
        raise ValueError("no axis values given")
    return values


def _run_selftest() -> int:
    results = run_selftest()
    failures = [r for r in results if not r[1]]
    for name, _, detail in failures:
        print(f"ERROR: selftest {name} failed: {detail}", file=sys.stderr)
    print(f"selftest: {len(results) - len(failures)}/{len(results)} checks passed")
    return 1 if failures else 0


def _dispatch(args: argparse.Namespace) -> int:
    if args.command == "selftest":
        return _run_selftest()

    config_text = ""
    if getattr(args, "config", None):
        config_text = Path(args.config).read_text()

    if args.command == "run":
        config = parse_config(
            config_text, args.scheme, num_trials=args.trials, master_seed=args.seed
        )
        records = [run_scheme(config)]
        stem = "run"
    elif args.command == "sweep":
        config = parse_config(
            config_text, args.scheme, num_trials=args.trials, master_seed=args.seed
        )
        records = sweep(args.axis, _parse_axis_values(args.axis, args.values), config)
        stem = "sweep"
    else:
        records = figure_bundle(
            args.figure, num_trials=args.trials, master_seed=args.seed
        )
        stem = f"fig{args.figure}"

    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    csv_path = out_dir / f"{stem}.csv"
    json_path = out_dir / f"{stem}.json"
    for path in (csv_path, json_path):
        if path.exists() and not args.force:
            raise FileExistsError(f"refusing to overwrite {path}; pass --force")
    emit_csv(records, csv_path)
    emit_json(records, json_path)
    print(f"wrote {csv_path} and {json_path} ({len(records)} records)")
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code in (0, None) else 2
    try:
        return _dispatch(args)
    except (ValueError, tomllib.TOMLDecodeError, FileNotFoundError) as exc:
        print(f"ERROR: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"ERROR: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
