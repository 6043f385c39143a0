"""Continued fractions, Farey/Ford geometry, phase locking on the line,
and the modular scattering phase.

Rational arithmetic is exact throughout: fractions.Fraction already
keeps numerator and denominator reduced, so it serves as the reduced
rational type here.  Floats appear only where a quantity is genuinely
real (real continued fraction input, resonance distances, flows, zeta).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import factorial, floor, gcd, sin
from typing import NamedTuple, Optional

import numpy as np

__all__ = [
    "ReducedFraction",
    "ContinuedFraction",
    "BasinEdges",
    "FordCircle",
    "ModularMap",
    "Trajectory",
    "cf_expand",
    "cf_expand_real",
    "convergents",
    "basin_edges",
    "resonance_filter",
    "farey_sequence",
    "ford_circle",
    "ford_tangent",
    "mobius_apply",
    "adler_solve",
    "zeta_complex",
    "scattering_phase",
    "scattering_phase_curve",
]

# Exact reduced rationals; Fraction reduces on construction.
ReducedFraction = Fraction


@dataclass(frozen=True)
class ContinuedFraction:
    """Quotients [a0; a1, a2, ...] with a0 >= 0 and a_i >= 1 beyond it.

    Expansions of rationals produced by cf_expand are canonical (no final
    quotient 1 except the single-term [1]); truncated expansions of reals
    may legitimately end in 1.
    """

    quotients: tuple[int, ...]

    def __post_init__(self) -> None:
        if not self.quotients:
            raise ValueError("need at least one quotient")
        if self.quotients[0] < 0:
            raise ValueError("leading quotient must be >= 0")
        if any(a < 1 for a in self.quotients[1:]):
            raise ValueError("quotients beyond the first must be >= 1")

    def value(self) -> Fraction:
        """Exact rational value by back substitution."""
        acc = Fraction(self.quotients[-1])
        for a in reversed(self.quotients[:-1]):
            acc = a + 1 / acc
        return acc


def cf_expand(p: int, q: int) -> ContinuedFraction:
    """Euclidean continued fraction of p/q, canonical form.

    Requires p >= 0 and q >= 1; the input need not be reduced.
    """
    if p < 0 or q < 1:
        raise ValueError("need p >= 0 and q >= 1")
    quotients = []
    while True:
        a, r = divmod(p, q)
        quotients.append(a)
        if r == 0:
            return ContinuedFraction(tuple(quotients))
        p, q = q, r


def cf_expand_real(x: float, depth: int) -> ContinuedFraction:
    """Continued fraction of a real x >= 0, at most depth quotients.

    Stops early once a fractional remainder drops below 1e-12, which
    means the expansion terminated exactly at float precision; a result
    with exactly depth quotients is a truncation of a longer expansion.
    Depth is capped at 64, past which float remainders carry no signal.
    """
    if x < 0:
        raise ValueError("x must be >= 0")
    if not 1 <= depth <= 64:
        raise ValueError("depth must be in 1..64")
    quotients = []
    for _ in range(depth):
        a = floor(x)
        quotients.append(int(a))
        frac = x - a
        if frac < 1e-12:
            break
        x = 1.0 / frac
    return ContinuedFraction(tuple(quotients))


def convergents(cf: ContinuedFraction) -> list[tuple[Fraction, int]]:
    """Convergents p_i/q_i with their determinants p_i*q_{i-1} - p_{i-1}*q_i.

    The determinant alternates -1, +1, -1, ... from the first convergent.
    """
    p_prev, q_prev = 1, 0
    p_cur, q_cur = cf.quotients[0], 1
    out = [(Fraction(p_cur, q_cur), p_cur * q_prev - p_prev * q_cur)]
    for a in cf.quotients[1:]:
        p_prev, p_cur = p_cur, a * p_cur + p_prev
        q_prev, q_cur = q_cur, a * q_cur + q_prev
        out.append((Fraction(p_cur, q_cur), p_cur * q_prev - p_prev * q_cur))
    return out


class BasinEdges(NamedTuple):
    """Two rationals bounding a locking interval, and their exact gap."""

    direct: Fraction
    split: Fraction
    width: Fraction


def basin_edges(prefix: ContinuedFraction, a: int) -> BasinEdges:
    """Edges of the level-a locking basin below the expansion prefix.

    direct appends a to the prefix; split decrements the last prefix
    quotient and inserts 1 before a, collapsing a zero quotient when the
    last one was 1.  Requires a >= 1, and the prefix must either hold at
    least two quotients or end in a quotient >= 2 so the decrement stays
    legal.
    """
    if a < 1:
        raise ValueError("a must be >= 1")
    qs = list(prefix.quotients)
    if len(qs) < 2 and qs[-1] < 2:
        raise ValueError("prefix too short to split: need >= 2 quotients or last >= 2")
    direct = ContinuedFraction(tuple(qs + [a]))
    if qs[-1] >= 2:
        split = ContinuedFraction(tuple(qs[:-1] + [qs[-1] - 1, 1, a]))
    else:
        # last quotient 1: [..., x, 0, 1, a] collapses to [..., x + 1, a]
        split = ContinuedFraction(tuple(qs[:-2] + [qs[-2] + 1, a]))
    d, s = direct.value(), split.value()
    return BasinEdges(direct=d, split=s, width=abs(d - s))


def resonance_filter(
    nu: float, cutoff_ratio: float, qmax: int
) -> list[tuple[Fraction, float]]:
    """Reduced fractions p/q, q <= qmax, with |q*nu - p| <= cutoff_ratio.

    For each q only the two integers bracketing q*nu can qualify.  The
    result is sorted by distance, then q, then p.  Requires
    0 < cutoff_ratio < 1 and qmax >= 1.
    """
    if not 0.0 < cutoff_ratio < 1.0:
        raise ValueError("cutoff_ratio must be in (0, 1)")
    if qmax < 1:
        raise ValueError("qmax must be >= 1")
    hits = []
    for q in range(1, qmax + 1):
        target = nu * q
        for p in {floor(target), floor(target) + 1}:
            mu = abs(target - p)
            if mu <= cutoff_ratio and gcd(abs(p), q) == 1:
                hits.append((Fraction(p, q), mu))
    hits.sort(key=lambda item: (item[1], item[0].denominator, item[0].numerator))
    return hits


def farey_sequence(order: int) -> list[Fraction]:
    """Ascending reduced fractions in [0, 1] with denominator <= order."""
    if order < 1:
        raise ValueError("order must be >= 1")
    out = [Fraction(0, 1)]
    a, b, c, d = 0, 1, 1, order
    while c <= order:
        k = (order + b) // d
        a, b, c, d = c, d, k * c - a, k * d - b
        out.append(Fraction(a, b))
    return out


@dataclass(frozen=True)
class FordCircle:
    """Circle tangent to the real line above a reduced rational."""

    fraction: Fraction
    center: tuple[Fraction, Fraction]
    radius: Fraction

    def __post_init__(self) -> None:
        r = Fraction(1, 2 * self.fraction.denominator**2)
        if self.radius != r or self.center != (self.fraction, r):
            raise ValueError("center must be (fraction, 1/(2q^2)) with matching radius")


def ford_circle(fraction: Fraction) -> FordCircle:
    """Ford circle of a reduced rational: radius 1/(2q^2), tangent at it."""
    r = Fraction(1, 2 * fraction.denominator**2)
    return FordCircle(fraction=fraction, center=(fraction, r), radius=r)


def ford_tangent(c1: FordCircle, c2: FordCircle) -> bool:
    """Exact tangency test: center distance equals the radius sum."""
    dx = c1.center[0] - c2.center[0]
    dy = c1.center[1] - c2.center[1]
    return dx * dx + dy * dy == (c1.radius + c2.radius) ** 2


@dataclass(frozen=True)
class ModularMap:
    """Integer Moebius map (a*z + b)/(c*z + d) with determinant one."""

    a: int
    b: int
    c: int
    d: int

    def __post_init__(self) -> None:
        if self.a * self.d - self.b * self.c != 1:
            raise ValueError("determinant a*d - b*c must equal 1")


def mobius_apply(m: ModularMap, z: complex) -> complex:
    """Apply the map to a point in the upper half plane (Im z > 0)."""
    z = complex(z)
    if z.imag <= 0:
        raise ValueError("z must satisfy Im z > 0")
    return (m.a * z + m.b) / (m.c * z + m.d)


@dataclass(frozen=True, eq=False)
class Trajectory:
    """Sampled solution of a scalar flow."""

    t: np.ndarray
    theta: np.ndarray


def adler_solve(
    coupling: float, omega_b: float, theta0: float, t_end: float, dt: float
) -> Trajectory:
    """Integrate d(theta)/dt = omega_b - coupling * sin(theta) by RK4.

    The flow locks to a fixed point when coupling >= |omega_b| and drifts
    with mean slope sqrt(omega_b**2 - coupling**2) otherwise.  Requires
    coupling >= 0, positive t_end, and dt <= t_end/100.
    """
    if coupling < 0:
        raise ValueError("coupling must be nonnegative")
    if dt <= 0 or t_end <= 0 or dt > t_end / 100.0:
        raise ValueError("need 0 < dt <= t_end/100")

    def rhs(th: float) -> float:
        return omega_b - coupling * sin(th)

    steps = int(round(t_end / dt))
    t = np.arange(steps + 1, dtype=np.float64) * dt
    theta = np.empty(steps + 1, dtype=np.float64)
    theta[0] = th = theta0
    for i in range(steps):
        k1 = rhs(th)
        k2 = rhs(th + 0.5 * dt * k1)
        k3 = rhs(th + 0.5 * dt * k2)
        k4 = rhs(th + dt * k3)
        th += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        theta[i + 1] = th
    return Trajectory(t=t, theta=theta)


# B_{2k} for k = 1..14 as exact ratios; divided by (2k)! at import.
_BERNOULLI = (
    (1, 6),
    (-1, 30),
    (1, 42),
    (-1, 30),
    (5, 66),
    (-691, 2730),
    (7, 6),
    (-3617, 510),
    (43867, 798),
    (-174611, 330),
    (854513, 138),
    (-236364091, 2730),
    (8553103, 6),
    (-23749461029, 870),
)
_EM_COEFFS = tuple(
    float(Fraction(num, den) / factorial(2 * k)) for k, (num, den) in enumerate(_BERNOULLI, 1)
)


def zeta_complex(s: complex) -> complex:
    """Riemann zeta by Euler-Maclaurin summation.

    Accurate to at least ten significant digits for -1 <= Re s <= 3 away
    from the zeros (relative error at a zero is conditioning-limited, the
    absolute error stays near machine precision).  Requires |Im s| <= 100
    and signals the pole at s = 1.
    """
    s = complex(s)
    if s == 1:
        raise ZeroDivisionError("zeta has its pole at s = 1")
    if abs(s.imag) > 100.0:
        raise ValueError("|Im s| is capped at 100")
    cutoff = max(30, int(10 + 1.6 * abs(s.imag)))
    total = complex(sum(n ** -s for n in range(1, cutoff)))
    total += cutoff ** (1 - s) / (s - 1) + 0.5 * cutoff**-s
    poch = s
    npow = cutoff ** (-s - 1)
    for k, coeff in enumerate(_EM_COEFFS, 1):
        total += coeff * poch * npow
        poch *= (s + 2 * k - 1) * (s + 2 * k)
        npow /= cutoff * cutoff
    return total


def _scattering_args(ks: np.ndarray) -> np.ndarray:
    args = np.array(
        [np.angle(zeta_complex(2j * k) / zeta_complex(1 + 2j * k)) for k in ks]
    )
    return np.unwrap(args)


def scattering_phase_curve(kmax: float, step: float = 0.01) -> tuple[np.ndarray, np.ndarray]:
    """Scattering phase on the grid step, 2*step, ..., kmax.

    theta(k) is half the argument of zeta(2ik)/zeta(1 + 2ik), unwrapped
    along the grid so the curve is continuous.  Requires
    0 < step <= kmax <= 50.
    """
    if not 0.0 < step <= kmax <= 50.0:
        raise ValueError("need 0 < step <= kmax <= 50")
    n = int(round(kmax / step))
    ks = step * np.arange(1, n + 1, dtype=np.float64)
    return ks, 0.5 * _scattering_args(ks)


def scattering_phase(k: float) -> float:
    """Scattering phase at one wavenumber, unwrapped from k = 0.01."""
    if not 0.0 < k <= 50.0:
        raise ValueError("need 0 < k <= 50")
    step = 0.01
    n = int(floor(k / step + 1e-9))
    ks = list(step * np.arange(1, n + 1)) or [k]
    if ks[-1] < k - 1e-12:
        ks.append(k)
    return float(0.5 * _scattering_args(np.array(ks))[-1])
