"""Arithmetic signal analysis.

Cumulative prime-power sums and their normalized fluctuations, expansion
of those fluctuations over Ramanujan sums, power spectra with octave-bin
log-log slope fits, and a zero-sum reconstruction of the fluctuation term
driven by an external list of critical-line ordinates.

Sequences are 1-indexed: values[0] is the n = 1 term.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from math import log, pi, sqrt
from typing import Optional, Sequence

import numpy as np

from .arith import (
    carmichael_lambda,
    euler_totient,
    moebius,
    primes_up_to,
    ramanujan_sum,
)

__all__ = [
    "ArithmeticSequence",
    "SpectrumEstimate",
    "RftSpectrum",
    "psi_cumulative",
    "epsilon",
    "b_cumulative",
    "epsilon_b",
    "epsilon_series",
    "epsilon_b_series",
    "mangoldt_b_series",
    "carmichael_normalized",
    "rft_coefficient",
    "rft_spectrum",
    "hardy_expansion_partial",
    "periodogram",
    "loglog_slope_fit",
    "explicit_formula_epsilon",
    "load_zeros_file",
]


@dataclass(frozen=True, eq=False)
class ArithmeticSequence:
    """A finite real sequence indexed from n = 1."""

    values: np.ndarray
    label: str = ""

    def __post_init__(self) -> None:
        arr = np.asarray(self.values, dtype=np.float64)
        if arr.ndim != 1 or arr.size < 1:
            raise ValueError("sequence must be a nonempty vector")
        if not np.all(np.isfinite(arr)):
            raise ValueError("sequence values must be finite")
        object.__setattr__(self, "values", arr)

    def __len__(self) -> int:
        return self.values.size


@dataclass(frozen=True, eq=False)
class SpectrumEstimate:
    """One-sided power spectrum, optionally carrying a fitted slope."""

    freqs: np.ndarray
    powers: np.ndarray
    slope: Optional[float] = None
    slope_stderr: Optional[float] = None
    fit_band: Optional[tuple[float, float]] = None


@dataclass(frozen=True)
class RftSpectrum:
    """Ramanujan-sum projection coefficients a_q of a sequence."""

    coefficients: dict[int, float]
    sample_count: int


def _prime_power_weights(tmax: int, totient_weighted: bool) -> np.ndarray:
    """weights[n-1] = ln p at n = p**k (scaled by 1 - 1/p when weighted)."""
    w = np.zeros(tmax, dtype=np.float64)
    for p in primes_up_to(tmax):
        p = int(p)
        scale = log(p) * (1.0 - 1.0 / p) if totient_weighted else log(p)
        pk = p
        while pk <= tmax:
            w[pk - 1] += scale
            pk *= p
    return w


def psi_cumulative(t: int) -> float:
    """Sum of ln p over prime powers p**k <= t."""
    if t < 1:
        raise ValueError("t must be >= 1")
    total = 0.0
    for p in primes_up_to(t):
        p = int(p)
        k, pk = 1, p
        while pk * p <= t:
            pk *= p
            k += 1
        total += k * log(p)
    return total


def epsilon(t: int) -> float:
    """Normalized fluctuation psi_cumulative(t)/t - 1."""
    return psi_cumulative(t) / t - 1.0


def b_cumulative(t: int) -> float:
    """Totient-weighted variant: sum of ln p * (1 - 1/p) over p**k <= t."""
    if t < 1:
        raise ValueError("t must be >= 1")
    total = 0.0
    for p in primes_up_to(t):
        p = int(p)
        k, pk = 1, p
        while pk * p <= t:
            pk *= p
            k += 1
        total += k * log(p) * (1.0 - 1.0 / p)
    return total


def epsilon_b(t: int) -> float:
    """Normalized fluctuation b_cumulative(t)/t - 1."""
    return b_cumulative(t) / t - 1.0


def _fluctuation_series(tmax: int, totient_weighted: bool, label: str) -> ArithmeticSequence:
    if tmax < 1:
        raise ValueError("tmax must be >= 1")
    cum = np.cumsum(_prime_power_weights(tmax, totient_weighted))
    t = np.arange(1, tmax + 1, dtype=np.float64)
    return ArithmeticSequence(cum / t - 1.0, label=label)


def epsilon_series(tmax: int) -> ArithmeticSequence:
    """epsilon(t) for t = 1..tmax in one pass."""
    return _fluctuation_series(tmax, totient_weighted=False, label="epsilon")


def epsilon_b_series(tmax: int) -> ArithmeticSequence:
    """epsilon_b(t) for t = 1..tmax in one pass."""
    return _fluctuation_series(tmax, totient_weighted=True, label="epsilon_b")


def mangoldt_b_series(tmax: int) -> ArithmeticSequence:
    """mangoldt_b(n) for n = 1..tmax in one sieve pass."""
    if tmax < 1:
        raise ValueError("tmax must be >= 1")
    return ArithmeticSequence(
        _prime_power_weights(tmax, totient_weighted=True), label="mangoldt_b"
    )


def carmichael_normalized(tmax: int) -> ArithmeticSequence:
    """Cumulative carmichael_lambda(n) scaled by t**-1.9, t = 1..tmax.

    The 1.9 exponent keeps the running sum inside a bounded band without
    driving it to a limit; the sequence keeps oscillating at every scale.
    """
    if tmax < 1:
        raise ValueError("tmax must be >= 1")
    lam = np.array([carmichael_lambda(n) for n in range(1, tmax + 1)], dtype=np.float64)
    t = np.arange(1, tmax + 1, dtype=np.float64)
    return ArithmeticSequence(np.cumsum(lam) / t**1.9, label="carmichael_normalized")


def rft_coefficient(x: ArithmeticSequence, q: int) -> float:
    """Projection of x onto ramanujan_sum(q, .): mean of x(n)c_q(n) over phi(q).

    a_q = (1/(phi(q) * N)) * sum_{n=1..N} x(n) * c_q(n).  Requires at
    least q samples so every residue class is represented.
    """
    n_samples = len(x)
    if q < 1:
        raise ValueError("q must be >= 1")
    if n_samples < q:
        raise ValueError(f"need at least q = {q} samples, got {n_samples}")
    row = np.array([ramanujan_sum(q, r) for r in range(q)], dtype=np.float64)
    pattern = row[np.arange(1, n_samples + 1) % q]
    return float(x.values @ pattern) / (euler_totient(q) * n_samples)


def rft_spectrum(x: ArithmeticSequence, qmax: int) -> RftSpectrum:
    """rft_coefficient for every q = 1..qmax."""
    if qmax < 1:
        raise ValueError("qmax must be >= 1")
    if qmax > len(x):
        raise ValueError("qmax cannot exceed the sample count")
    coeffs = {q: rft_coefficient(x, q) for q in range(1, qmax + 1)}
    return RftSpectrum(coefficients=coeffs, sample_count=len(x))


def hardy_expansion_partial(n: int, qmax: int) -> float:
    """Partial expansion sum_{q<=qmax} moebius(q)/phi(q) * c_q(n).

    Truncation of the Ramanujan-sum series whose tail reproduces the
    totient-weighted fluctuation at arguments n >= 2.  At n = 1 the
    series diverges (all terms are positive there), so partial sums at
    n = 1 grow without bound; callers comparing against signals should
    stay on n >= 2.
    """
    if n < 1 or qmax < 1:
        raise ValueError("n and qmax must be >= 1")
    total = 0.0
    for q in range(1, qmax + 1):
        mu = moebius(q)
        if mu == 0:
            continue
        total += mu / euler_totient(q) * ramanujan_sum(q, n)
    return total


def periodogram(x: ArithmeticSequence) -> SpectrumEstimate:
    """One-sided power spectrum of the demeaned sequence.

    Power |X_k|**2 / N at frequencies k/N for k = 1..N//2, where X is the
    discrete Fourier transform of values - mean(values).  Requires at
    least 64 samples.
    """
    n_samples = len(x)
    if n_samples < 64:
        raise ValueError(f"periodogram needs >= 64 samples, got {n_samples}")
    y = x.values - x.values.mean()
    transform = np.fft.rfft(y)
    k = np.arange(1, n_samples // 2 + 1)
    freqs = k / n_samples
    powers = np.abs(transform[k]) ** 2 / n_samples
    return SpectrumEstimate(freqs=freqs, powers=powers)


def loglog_slope_fit(spectrum: SpectrumEstimate, f_lo: float, f_hi: float) -> SpectrumEstimate:
    """Fit a power-law slope to the spectrum inside [f_lo, f_hi].

    Points with positive power are grouped into octave bins anchored at
    f_lo (each edge doubles the previous; the last bin closes at f_hi
    inclusive).  Ordinary least squares on the per-bin means of log10 f
    and log10 power gives the slope; the standard error is 0 when only
    two bins exist.  Requires at least 16 usable points and 2 bins.
    """
    if not 0.0 < f_lo < f_hi <= 0.5:
        raise ValueError("need 0 < f_lo < f_hi <= 0.5")
    mask = (spectrum.freqs >= f_lo) & (spectrum.freqs <= f_hi) & (spectrum.powers > 0)
    if int(mask.sum()) < 16:
        raise ValueError(f"need >= 16 positive in-band points, got {int(mask.sum())}")
    f = spectrum.freqs[mask]
    p = spectrum.powers[mask]
    n_bins = int(np.ceil(np.log2(f_hi / f_lo)))
    idx = np.minimum(np.floor(np.log2(f / f_lo)).astype(int), n_bins - 1)
    xs, ys = [], []
    for j in range(n_bins):
        sel = idx == j
        if sel.any():
            xs.append(np.log10(f[sel]).mean())
            ys.append(np.log10(p[sel]).mean())
    if len(xs) < 2:
        raise ValueError("band spans fewer than 2 octave bins")
    xa = np.array(xs)
    ya = np.array(ys)
    xc = xa - xa.mean()
    slope = float((xc * (ya - ya.mean())).sum() / (xc * xc).sum())
    intercept = float(ya.mean() - slope * xa.mean())
    resid = ya - (slope * xa + intercept)
    if len(xa) == 2:
        stderr = 0.0
    else:
        stderr = float(sqrt((resid**2).sum() / (len(xa) - 2) / (xc * xc).sum()))
    return replace(
        spectrum, slope=slope, slope_stderr=stderr, fit_band=(float(f_lo), float(f_hi))
    )


def explicit_formula_epsilon(t: int, zeros: Sequence[float]) -> float:
    """Reconstruct epsilon(t) from critical-line ordinates.

    Uses the smooth part -ln(2*pi) - ln(1 - t**-2)/2 plus an oscillatory
    sum -2*sqrt(t)*Re(t**(i*g) / (1/2 + i*g)) over the supplied ordinates
    g, all divided by t.  An empty list gives the smooth part alone.
    Requires t >= 2 (the smooth part has a pole at t = 1).
    """
    if t < 2:
        raise ValueError("t must be >= 2")
    g = np.asarray(list(zeros), dtype=np.float64)
    smooth = -log(2.0 * pi) - 0.5 * np.log1p(-float(t) ** -2)
    if g.size:
        phases = np.exp(1j * g * log(t)) / (0.5 + 1j * g)
        oscillatory = -2.0 * sqrt(t) * float(phases.real.sum())
    else:
        oscillatory = 0.0
    return (smooth + oscillatory) / t


def load_zeros_file(path: str) -> list[float]:
    """Read critical-line ordinates: one positive decimal per line.

    Blank lines and lines starting with '#' are skipped.  Values must be
    positive and strictly increasing.
    """
    out: list[float] = []
    with open(path, "r", encoding="utf-8") as fh:
        for raw in fh:
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            value = float(line)
            if value <= 0.0 or (out and value <= out[-1]):
                raise ValueError(f"ordinates must be positive ascending, got {line}")
            out.append(value)
    return out
