#!/usr/bin/env python3
"""Render one figure dataset (CSV) as a deterministic SVG plot.

Usage:
    python3 render_figure.py --fig fig3 --in fig3.csv --out fig3.svg

The script consumes only the CSV contract: '#' comment lines carry
metadata (``# figure:``, ``# params:`` and, for spectra, ``# slope:``,
``# slope_stderr:``, ``# fit_band:``), the first plain line is the
column header, every following line is one data row.  Each figure id
has a fixed header schema; any mismatch aborts with an expected-versus-
got diff on stderr and exit status 2.  Rendering is deterministic:
the same CSV yields byte-identical SVG.
"""

from __future__ import annotations

import argparse
import math
import re
import sys
from fractions import Fraction
from typing import Optional

import matplotlib

matplotlib.use("Agg")
matplotlib.rcParams["svg.hashsalt"] = "render-figure"
matplotlib.rcParams["svg.fonttype"] = "path"

import matplotlib.pyplot as plt


class SchemaError(ValueError):
    """Raised when a CSV does not match the figure's column contract."""


# column contracts; entries are literal names or (compiled) patterns
_Q_COLUMN = re.compile(r"value_q\d+")

SCHEMAS: dict[str, tuple] = {
    "fig1": ("freq", "power"),
    "fig2": ("q", "rft_b", "mu_over_phi"),
    "fig3": (
        "p",
        "q",
        "center_x_num",
        "center_x_den",
        "center_y_num",
        "center_y_den",
        "radius_num",
        "radius_den",
    ),
    "fig4": ("k", "theta"),
    "fig5": ("q", "value_beta_a", "value_beta_b", "mangoldt_fit"),
    "fig6": ("beta", _Q_COLUMN, _Q_COLUMN),
    "fig7": ("q", "value_beta_a", "value_beta_b", "mangoldt_fit"),
    "fig8": ("q", "pairs_beta0", "pairs_beta1"),
    "fig9": ("t", "normalized_sum"),
    "fig10": ("freq", "power"),
}


def read_csv(path: str) -> tuple[dict[str, str], list[str], list[list[str]]]:
    """Split a dataset into (metadata, header columns, raw rows)."""
    meta: dict[str, str] = {}
    header: Optional[list[str]] = None
    rows: list[list[str]] = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.rstrip("\n")
            if not line.strip():
                continue
            if line.startswith("#"):
                key, sep, value = line[1:].strip().partition(":")
                if sep:
                    meta[key.strip()] = value.strip()
                continue
            if header is None:
                header = line.split(",")
            else:
                rows.append(line.split(","))
    if header is None:
        raise SchemaError(f"{path}: empty dataset, no header row found")
    return meta, header, rows


def _pattern_text(entry) -> str:
    return entry if isinstance(entry, str) else entry.pattern


def validate_schema(figure_id: str, header: list[str], rows: list[list[str]]) -> None:
    """Check the header against the figure contract; diff on mismatch."""
    schema = SCHEMAS[figure_id]
    expected = ",".join(_pattern_text(e) for e in schema)
    got = ",".join(header)
    problems = []
    if len(header) != len(schema):
        problems.append(f"  expected {len(schema)} columns, got {len(header)}")
    for i, (entry, name) in enumerate(zip(schema, header)):
        ok = name == entry if isinstance(entry, str) else bool(entry.fullmatch(name))
        if not ok:
            problems.append(
                f"  column {i + 1}: expected {_pattern_text(entry)!r}, got {name!r}"
            )
    if problems:
        raise SchemaError(
            "\n".join(
                [f"schema mismatch for {figure_id}:",
                 f"  expected: {expected}",
                 f"  got:      {got}", *problems]
            )
        )
    for i, row in enumerate(rows):
        if len(row) != len(header):
            raise SchemaError(
                f"schema mismatch for {figure_id}: row {i + 1} has "
                f"{len(row)} fields, header has {len(header)}"
            )


def _floats(rows: list[list[str]], col: int) -> list[float]:
    return [float(row[col]) for row in rows]


def ford_circles(rows: list[list[str]]) -> list[tuple[Fraction, Fraction, Fraction]]:
    """Exact (center_x, center_y, radius) triples from a fig3 dataset."""
    circles = []
    for row in rows:
        p, q, cxn, cxd, cyn, cyd, rn, rd = (int(f) for f in row)
        cx, cy, r = Fraction(cxn, cxd), Fraction(cyn, cyd), Fraction(rn, rd)
        if cx != Fraction(p, q):
            raise SchemaError(f"circle at {p}/{q} has center x {cx}")
        circles.append((cx, cy, r))
    return circles


def _loglog_spectrum(ax, meta, rows, title: str) -> None:
    freqs = _floats(rows, 0)
    powers = _floats(rows, 1)
    ax.loglog(freqs, powers, lw=0.6, color="#1f77b4", label="periodogram")
    if "slope" in meta and "fit_band" in meta:
        slope = float(meta["slope"])
        lo, hi = (float(v) for v in meta["fit_band"].split(","))
        logf = [math.log10(f) for f, p in zip(freqs, powers) if lo <= f <= hi and p > 0]
        logp = [
            math.log10(p) for f, p in zip(freqs, powers) if lo <= f <= hi and p > 0
        ]
        # anchor the fitted line at the in-band centroid
        intercept = sum(logp) / len(logp) - slope * sum(logf) / len(logf)
        xs = [lo, hi]
        ys = [10 ** (intercept + slope * math.log10(x)) for x in xs]
        ax.loglog(xs, ys, "r--", lw=1.4, label=f"slope {slope:.3f}")
        ax.legend(loc="lower left")
    ax.set_xlabel("frequency")
    ax.set_ylabel("power")
    ax.set_title(title)


def _render_fig1(ax, meta, rows) -> None:
    _loglog_spectrum(ax, meta, rows, "fluctuation power spectrum")


def _render_fig2(ax, meta, rows) -> None:
    qs = _floats(rows, 0)
    ax.axhline(0.0, color="0.7", lw=0.8)
    ax.plot(qs, _floats(rows, 2), "x--", color="0.4", lw=0.8, label="mu/phi")
    ax.plot(qs, _floats(rows, 1), "o", color="#1f77b4", label="projection")
    ax.set_xlabel("q")
    ax.set_ylabel("coefficient")
    ax.set_title("Ramanujan projection coefficients")
    ax.legend(loc="upper right")


def _render_fig3(ax, meta, rows) -> None:
    circles = ford_circles(rows)
    top = 0.0
    for cx, cy, r in circles:
        ax.add_patch(
            plt.Circle(
                (float(cx), float(cy)), float(r),
                fill=False, color="#1f77b4", lw=0.8,
            )
        )
        top = max(top, float(cy + r))
    ax.set_xlim(-0.05, 1.05)
    ax.set_ylim(0.0, top * 1.05)
    ax.set_aspect("equal")
    ax.axhline(0.0, color="0.3", lw=0.8)
    ax.set_xlabel("p/q")
    ax.set_title("Ford circles")


def _render_fig4(ax, meta, rows) -> None:
    ax.plot(_floats(rows, 0), _floats(rows, 1), lw=0.8, color="#1f77b4")
    ax.set_xlabel("k")
    ax.set_ylabel("theta(k)")
    ax.set_title("scattering phase")


def _sweep_over_q(ax, header, rows, title: str) -> None:
    qs = _floats(rows, 0)
    ax.plot(qs, _floats(rows, 1), "o-", ms=2.5, lw=0.6, label=header[1])
    ax.plot(qs, _floats(rows, 2), "s-", ms=2.5, lw=0.6, label=header[2])
    if len(header) > 3:
        ax.plot(qs, _floats(rows, 3), "x", color="0.4", label=header[3])
    ax.set_xlabel("q")
    ax.set_ylabel("expectation")
    ax.set_title(title)
    ax.legend(loc="upper right", fontsize=8)


def _render_fig5(ax, meta, rows, header) -> None:
    _sweep_over_q(ax, header, rows, "locked expectation over q")


def _render_fig6(ax, meta, rows, header) -> None:
    betas = _floats(rows, 0)
    for col in (1, 2):
        ax.plot(betas, _floats(rows, col), lw=0.9, label=header[col])
    ax.set_xlabel("beta")
    ax.set_ylabel("expectation")
    ax.set_title("locked expectation against offset")
    ax.legend(loc="upper right", fontsize=8)


def _render_fig7(ax, meta, rows, header) -> None:
    _sweep_over_q(ax, header, rows, "locked expectation at bound-critical offsets")


def _render_fig8(ax, meta, rows, header) -> None:
    _sweep_over_q(ax, header, rows, "paired-residue expectation over q")


def _render_fig9(ax, meta, rows) -> None:
    ax.plot(_floats(rows, 0), _floats(rows, 1), lw=0.7, color="#1f77b4")
    ax.set_xlabel("t")
    ax.set_ylabel("normalized sum")
    ax.set_title("cumulative Carmichael sum")


def _render_fig10(ax, meta, rows) -> None:
    _loglog_spectrum(ax, meta, rows, "Carmichael sum power spectrum")


def render(figure_id: str, in_path: str, out_path: str) -> None:
    """Read, validate, and plot one dataset; write SVG to out_path."""
    meta, header, rows = read_csv(in_path)
    validate_schema(figure_id, header, rows)
    fig, ax = plt.subplots(figsize=(6.4, 4.8))
    try:
        simple = {
            "fig1": _render_fig1,
            "fig2": _render_fig2,
            "fig3": _render_fig3,
            "fig4": _render_fig4,
            "fig9": _render_fig9,
            "fig10": _render_fig10,
        }
        if figure_id in simple:
            simple[figure_id](ax, meta, rows)
        else:
            with_header = {
                "fig5": _render_fig5,
                "fig6": _render_fig6,
                "fig7": _render_fig7,
                "fig8": _render_fig8,
            }
            with_header[figure_id](ax, meta, rows, header)
        fig.savefig(out_path, format="svg", metadata={"Date": None})
    finally:
        plt.close(fig)


def main(argv: Optional[list[str]] = None) -> int:
    parser = argparse.ArgumentParser(
        description="Render one figure dataset (CSV) as a deterministic SVG."
    )
    parser.add_argument("--fig", required=True, choices=sorted(SCHEMAS),
                        help="figure id the dataset must conform to")
    parser.add_argument("--in", dest="in_path", required=True,
                        help="input CSV path")
    parser.add_argument("--out", required=True, help="output SVG path")
    args = parser.parse_args(argv)
    try:
        render(args.fig, args.in_path, args.out)
    except (ValueError, ZeroDivisionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
