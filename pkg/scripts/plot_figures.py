#!/usr/bin/env python3
"""Render PNG plots from the figure CSVs produced by run_all_figures.py.

Each figure spec names the x column, the columns whose values split the
records into curves, and the axis scales. Rows whose x column is 0 come
from schemes the swept parameter does not apply to (perfect feedback,
uniform); those are drawn as horizontal reference lines.
"""

import argparse
import csv
import sys
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

_INT_COLS = {"n", "m", "k", "r", "b", "c_b", "trials", "seed", "feedback_bits"}
_FLOAT_COLS = {"p_t", "noise_var", "snr_db", "mean", "stderr"}

FIGSPECS = {
    1: dict(x="k", group=("scheme", "m"), logx=True, logy=False,
            xlabel="clusters K", ylabel="mean capacity (bit/symbol)",
            title="on/off clustering vs cluster count"),
    2: dict(x="k", group=("scheme",), logx=True, logy=False,
            xlabel="nodes K", ylabel="mean capacity (bit/symbol)",
            title="linear vs quadratic interpolation"),
    3: dict(x="k", group=("scheme", "b"), logx=True, logy=False,
            xlabel="nodes K", ylabel="mean capacity (bit/symbol)",
            title="interpolated water-filling vs feedback budget"),
    4: dict(x="snr_db", group=("scheme",), logx=False, logy=False,
            xlabel="total SNR (dB)", ylabel="mean capacity (bit/symbol)",
            title="capacity vs SNR, all schemes"),
    5: dict(x="snr_db", group=("scheme", "r"), logx=False, logy=True,
            xlabel="total SNR (dB)", ylabel="mean BER",
            title="bit loading BER vs SNR"),
    6: dict(x="r", group=("scheme", "m"), logx=True, logy=True,
            xlabel="cluster size R", ylabel="mean BER",
            title="bit loading BER vs cluster size"),
}


def load_rows(path: Path) -> list[dict]:
    rows = []
    with path.open(newline="") as fh:
        for raw in csv.DictReader(fh):
            row = dict(raw)
            for col in _INT_COLS:
                row[col] = int(raw[col])
            for col in _FLOAT_COLS:
                row[col] = float(raw[col])
            rows.append(row)
    return rows


def curve_label(row: dict, group: tuple) -> str:
    parts = [str(row[col]) if col == "scheme" else f"{col}={row[col]}"
             for col in group]
    return " ".join(parts)


def plot_figure(fig_num: int, rows: list[dict], out_path: Path) -> None:
    spec = FIGSPECS[fig_num]
    xcol, group = spec["x"], spec["group"]
    curves: dict[str, list] = {}
    baselines: dict[str, float] = {}
    for row in rows:
        if row[xcol] == 0:
            # Swept parameter not applicable (perfect/uniform baselines);
            # budget and cluster columns are just config echoes there.
            label = curve_label(row, tuple(c for c in group if c in ("scheme", "m")))
            baselines[label] = row["mean"]
        else:
            curves.setdefault(curve_label(row, group), []).append(
                (row[xcol], row["mean"], row["stderr"])
            )

    fig, ax = plt.subplots(figsize=(7, 5))
    for label, points in curves.items():
        points.sort()
        xs, ys, errs = zip(*points)
        ax.errorbar(xs, ys, yerr=errs, marker="o", capsize=2, label=label)
    for label, value in baselines.items():
        ax.axhline(value, linestyle="--", linewidth=1, label=label)

    if spec["logx"]:
        xticks = sorted({x for pts in curves.values() for x, _, _ in pts})
        ax.set_xscale("log", base=2)
        ax.set_xticks(xticks, [str(x) for x in xticks])
    if spec["logy"]:
        ax.set_yscale("log")
    ax.set_xlabel(spec["xlabel"])
    ax.set_ylabel(spec["ylabel"])
    ax.set_title(spec["title"])
    ax.grid(True, which="both", alpha=0.3)
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(out_path, dpi=150)
    plt.close(fig)


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--results", default="results",
                        help="directory holding fig{N}.csv")
    parser.add_argument("--figures", default="1,2,3,4,5,6")
    args = parser.parse_args()

    results = Path(args.results)
    plotted = 0
    for fig in args.figures.split(","):
        fig_num = int(fig.strip())
        csv_path = results / f"fig{fig_num}.csv"
        if not csv_path.exists():
            print(f"skipping figure {fig_num}: {csv_path} not found",
                  file=sys.stderr)
            continue
        out_path = results / f"fig{fig_num}.png"
        plot_figure(fig_num, load_rows(csv_path), out_path)
        print(f"wrote {out_path}")
        plotted += 1
    return 0 if plotted else 1


if __name__ == "__main__":
    sys.exit(main())
