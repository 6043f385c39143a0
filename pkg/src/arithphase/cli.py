"""Command line interface.

Two subcommands:

* ``table``: stream one arithmetic table as CSV (see arith.tabulate).
* ``fig``: write one of the ten canned figure datasets as CSV.

Every dataset is deterministic: resolved parameters are echoed into a
``# params:`` comment so a file is reproducible from its own header.
Floats are printed with 12 significant digits.  Sweeps honor the
ARITHPHASE_THREADS environment variable; the output is byte-identical
regardless of the thread count.
"""

from __future__ import annotations

import argparse
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from contextlib import nullcontext
from dataclasses import dataclass
from math import pi
from typing import IO, Callable, Optional, Union

from . import arith, hyperbolic, phase, signals

__all__ = ["FigureJob", "run_table", "run_figure", "main", "FIGURES"]

ParamValue = Union[int, float, str]


@dataclass(frozen=True)
class FigureJob:
    """A figure dataset request with fully resolved parameters."""

    figure_id: str
    params: dict[str, ParamValue]
    output_path: str


def _fmt(v: ParamValue) -> str:
    if isinstance(v, bool):
        raise TypeError("no boolean columns")
    if isinstance(v, int):
        return str(v)
    if isinstance(v, float):
        return format(v, ".12g")
    return str(v)


def _worker_count() -> int:
    raw = os.environ.get("ARITHPHASE_THREADS", "").strip()
    if not raw:
        return 1
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def _parallel_map(fn: Callable, items: list) -> list:
    """Ordered map, threaded when ARITHPHASE_THREADS > 1."""
    workers = _worker_count()
    if workers == 1 or len(items) < 2:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


Rows = list[tuple]
Build = tuple[list[str], Rows, list[str]]


def _slope_footers(spectrum: signals.SpectrumEstimate) -> list[str]:
    lo, hi = spectrum.fit_band
    return [
        f"# slope: {spectrum.slope:.12g}",
        f"# slope_stderr: {spectrum.slope_stderr:.12g}",
        f"# fit_band: {lo:.12g},{hi:.12g}",
    ]


def _spectrum_build(seq: signals.ArithmeticSequence, params: dict) -> Build:
    spectrum = signals.periodogram(seq)
    fitted = signals.loglog_slope_fit(spectrum, params["f_lo"], params["f_hi"])
    rows = list(zip(fitted.freqs.tolist(), fitted.powers.tolist()))
    return ["freq", "power"], rows, _slope_footers(fitted)


def _fig1(params: dict) -> Build:
    """Power spectrum of the totient-weighted fluctuation signal."""
    return _spectrum_build(signals.epsilon_b_series(params["tmax"]), params)


def _fig2(params: dict) -> Build:
    """Ramanujan projection of the totient-weighted prime-power signal."""
    seq = signals.mangoldt_b_series(params["tmax"])
    rows = []
    for q in range(1, params["qmax"] + 1):
        reference = arith.moebius(q) / arith.euler_totient(q)
        rows.append((q, signals.rft_coefficient(seq, q), reference))
    return ["q", "rft_b", "mu_over_phi"], rows, []


def _fig3(params: dict) -> Build:
    """Ford circles over one Farey row, in exact rationals."""
    rows = []
    for frac in hyperbolic.farey_sequence(params["order"]):
        circle = hyperbolic.ford_circle(frac)
        (cx, cy), r = circle.center, circle.radius
        rows.append(
            (
                frac.numerator,
                frac.denominator,
                cx.numerator,
                cx.denominator,
                cy.numerator,
                cy.denominator,
                r.numerator,
                r.denominator,
            )
        )
    cols = [
        "p",
        "q",
        "center_x_num",
        "center_x_den",
        "center_y_num",
        "center_y_den",
        "radius_num",
        "radius_den",
    ]
    return cols, rows, []


def _fig4(params: dict) -> Build:
    """Modular scattering phase curve."""
    ks, thetas = hyperbolic.scattering_phase_curve(params["kmax"], params["step"])
    return ["k", "theta"], list(zip(ks.tolist(), thetas.tolist())), []


def _locked_sweep(params: dict) -> Build:
    window = phase.IndexRange(params["window"])
    beta_a, beta_b = params["beta_a"], params["beta_b"]

    def one(q: int) -> tuple:
        return (
            q,
            phase.phase_expectation_locked(q, beta_a, window),
            phase.phase_expectation_locked(q, beta_b, window),
            phase.mangoldt_fit(q),
        )

    rows = _parallel_map(one, list(range(2, params["qmax"] + 1)))
    return ["q", "value_beta_a", "value_beta_b", "mangoldt_fit"], rows, []


def _fig5(params: dict) -> Build:
    """Locked expectation over q at two phase offsets, with prime envelope."""
    return _locked_sweep(params)


def _fig6(params: dict) -> Build:
    """Locked expectation against beta at two fixed moduli."""
    window = phase.IndexRange(params["window"])
    q_a, q_b = params["q_a"], params["q_b"]
    step = params["step"]
    count = int(params["beta_max"] / step + 1e-9)
    betas = [i * step for i in range(count + 1)]

    def one(beta: float) -> tuple:
        return (
            beta,
            phase.phase_expectation_locked(q_a, beta, window),
            phase.phase_expectation_locked(q_b, beta, window),
        )

    rows = _parallel_map(one, betas)
    return ["beta", f"value_q{q_a}", f"value_q{q_b}"], rows, []


def _fig7(params: dict) -> Build:
    """Locked expectation sweep at the offsets where variance matters."""
    return _locked_sweep(params)


def _fig8(params: dict) -> Build:
    """Pairs expectation over q at two phase offsets."""
    window = phase.IndexRange(params["window"])
    beta_a, beta_b = params["beta_a"], params["beta_b"]

    def one(q: int) -> tuple:
        return (
            q,
            phase.phase_expectation_pairs(q, beta_a, window),
            phase.phase_expectation_pairs(q, beta_b, window),
        )

    rows = _parallel_map(one, list(range(2, params["qmax"] + 1)))
    return ["q", "pairs_beta0", "pairs_beta1"], rows, []


def _fig9(params: dict) -> Build:
    """Normalized cumulative Carmichael sum."""
    seq = signals.carmichael_normalized(params["tmax"])
    rows = list(zip(range(1, len(seq) + 1), seq.values.tolist()))
    return ["t", "normalized_sum"], rows, []


def _fig10(params: dict) -> Build:
    """Power spectrum of the normalized Carmichael sum."""
    return _spectrum_build(signals.carmichael_normalized(params["tmax"]), params)


FIGURES: dict[str, tuple[dict[str, ParamValue], Callable[[dict], Build], str]] = {
    "fig1": (
        {"tmax": 65536, "f_lo": None, "f_hi": 0.25},
        _fig1,
        "freq,power spectrum of the totient-weighted fluctuation",
    ),
    "fig2": (
        {"tmax": 100000, "qmax": 30},
        _fig2,
        "Ramanujan projection coefficients against mu/phi",
    ),
    "fig3": (
        {"order": 7},
        _fig3,
        "Ford circles over a Farey row (exact rationals)",
    ),
    "fig4": (
        {"kmax": 25.0, "step": 0.01},
        _fig4,
        "modular scattering phase curve",
    ),
    "fig5": (
        {"qmax": 100, "beta_a": 0.0, "beta_b": 1.0, "window": "totient_inclusive"},
        _fig5,
        "locked expectation sweep over q",
    ),
    "fig6": (
        {"q_a": 13, "q_b": 15, "beta_max": 2 * pi, "step": 0.01, "window": "totient_inclusive"},
        _fig6,
        "locked expectation against beta at two moduli",
    ),
    "fig7": (
        {"qmax": 100, "beta_a": 1.0, "beta_b": pi, "window": "totient_inclusive"},
        _fig7,
        "locked expectation sweep at variance-critical offsets",
    ),
    "fig8": (
        {"qmax": 100, "beta_a": 0.0, "beta_b": 1.0, "window": "totient"},
        _fig8,
        "pairs expectation sweep over q",
    ),
    "fig9": (
        {"tmax": 16384},
        _fig9,
        "normalized cumulative Carmichael sum",
    ),
    "fig10": (
        {"tmax": 16384, "f_lo": None, "f_hi": 0.25},
        _fig10,
        "freq,power spectrum of the Carmichael sum",
    ),
}


def _coerce(text: str) -> ParamValue:
    for cast in (int, float):
        try:
            return cast(text)
        except ValueError:
            continue
    return text


def resolve_figure_params(figure_id: str, overrides: dict[str, ParamValue]) -> dict:
    """Merge overrides into the figure defaults, rejecting unknown keys."""
    if figure_id not in FIGURES:
        raise ValueError(f"unknown figure {figure_id!r}; choose from {sorted(FIGURES)}")
    defaults = dict(FIGURES[figure_id][0])
    for key, value in overrides.items():
        if key not in defaults:
            raise ValueError(f"unknown parameter {key!r} for {figure_id}")
        if isinstance(defaults[key], float) and isinstance(value, int):
            value = float(value)
        defaults[key] = value
    if defaults.get("f_lo") is None and "tmax" in defaults:
        defaults["f_lo"] = 4.0 / defaults["tmax"]
    return defaults


def run_figure(job: FigureJob, stream: Optional[IO[str]] = None) -> None:
    """Build one figure dataset and write it as CSV."""
    params = resolve_figure_params(job.figure_id, dict(job.params))
    columns, rows, footers = FIGURES[job.figure_id][1](params)
    ctx = (
        nullcontext(stream)
        if stream is not None
        else open(job.output_path, "w", encoding="utf-8", newline="\n")
    )
    with ctx as fh:
        fh.write(f"# figure: {job.figure_id}\n")
        fh.write(
            "# params: "
            + " ".join(f"{k}={_fmt(v)}" for k, v in sorted(params.items()))
            + "\n"
        )
        fh.write(",".join(columns) + "\n")
        for row in rows:
            fh.write(",".join(_fmt(v) for v in row) + "\n")
        for line in footers:
            fh.write(line + "\n")


def run_table(
    name: str, nmax: int, q: Optional[int], out: Optional[str]
) -> None:
    """Stream one arithmetic table to a file or stdout."""
    if out is None:
        arith.tabulate(name, nmax, sys.stdout, q=q)
        return
    with open(out, "w", encoding="utf-8", newline="\n") as fh:
        arith.tabulate(name, nmax, fh, q=q)


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="arithphase",
        description="Arithmetic tables and figure datasets as deterministic CSV.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    table = sub.add_parser(
        "table",
        help="stream one arithmetic table as CSV",
        description="Tables: " + ", ".join(arith.TABLE_FUNCTIONS)
        + ". Plain tables run n = 1..N; ramanujan runs n = 0..N at fixed q; "
        "kloosterman emits the (n, l) grid at fixed q.",
    )
    table.add_argument("name", help="one of: " + ", ".join(arith.TABLE_FUNCTIONS))
    table.add_argument("--max", "--nmax", dest="nmax", type=int, required=True,
                       help="largest index N")
    table.add_argument("--q", type=int, default=None, help="fixed modulus where required")
    table.add_argument("--out", default=None, help="output path (default: stdout)")

    descriptions = "; ".join(f"{name}: {entry[2]}" for name, entry in FIGURES.items())
    fig = sub.add_parser(
        "fig",
        help="write one canned figure dataset as CSV",
        description="Figures: " + descriptions,
    )
    fig.add_argument("figure", help="one of: " + ", ".join(FIGURES))
    fig.add_argument("--out", default=None, help="output path (default: <figure>.csv)")
    fig.add_argument(
        "--params",
        nargs="*",
        default=[],
        metavar="KEY=VALUE",
        help="override figure defaults; unknown keys are rejected",
    )
    return parser


def main(argv: Optional[list[str]] = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        if args.command == "table":
            run_table(args.name, args.nmax, args.q, args.out)
        else:
            overrides: dict[str, ParamValue] = {}
            for item in args.params:
                key, sep, value = item.partition("=")
                if not sep or not key:
                    raise ValueError(f"--params entries look like key=value, got {item!r}")
                overrides[key] = _coerce(value)
            out = args.out if args.out is not None else f"{args.figure}.csv"
            run_figure(FigureJob(figure_id=args.figure, params=overrides, output_path=out))
    except (ValueError, ZeroDivisionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except Exception as exc:  # pragma: no cover - defensive
        print(f"internal error: {exc!r}", file=sys.stderr)
        return 1
    return 0
