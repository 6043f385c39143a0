"""Exact arithmetic kernels.

Factorization with certified primality, the classical multiplicative
functions (totient, Moebius, Mangoldt and its weighted variant), Ramanujan
sums in both Hoelder and brute-force form, Kloosterman pairs and sums, and
unit-group cycle structure (Carmichael lambda, primitive roots, power
cycles).  Every quantity that is mathematically an integer is returned as
an exact ``int``; only logarithmic values are floats.

All functions are pure and safe for concurrent use.  The shared prime
sieve grows lazily under a lock and is immutable between growths.
"""

from __future__ import annotations

import operator
import threading
from dataclasses import dataclass
from functools import lru_cache
from itertools import count
from math import gcd, isqrt, lcm, log, pi
from typing import IO, Iterable, Optional

import numpy as np

__all__ = [
    "ResidueError",
    "FactoredInteger",
    "KloostermanPair",
    "CycleTable",
    "MAX_INPUT",
    "SIEVE_CAP",
    "primes_up_to",
    "is_prime",
    "factorize",
    "euler_totient",
    "moebius",
    "mangoldt",
    "mangoldt_b",
    "ramanujan_sum",
    "ramanujan_bruteforce_values",
    "ramanujan_sum_bruteforce",
    "kloosterman_pairs",
    "kloosterman_sum",
    "kloosterman_sum_integer",
    "carmichael_lambda",
    "multiplicative_order",
    "primitive_root",
    "power_cycle",
    "tabulate",
    "TABLE_FUNCTIONS",
]

MAX_INPUT = 2**63 - 1
SIEVE_CAP = 10**7

# Trial division hands over to Miller-Rabin/Brent beyond this bound; any
# remainder below its square that survives trial division is prime.
_TRIAL_LIMIT = 1 << 16

_MR_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


class ResidueError(ArithmeticError):
    """A floating-point sum missed the exact value it is required to hit."""


_sieve_lock = threading.Lock()
_sieve_flags = np.zeros(2, dtype=bool)
_sieve_primes = np.empty(0, dtype=np.int64)


def _ensure_sieve(limit: int) -> None:
    global _sieve_flags, _sieve_primes
    if limit < len(_sieve_flags):
        return
    with _sieve_lock:
        if limit < len(_sieve_flags):
            return
        size = max(limit + 1, 2 * len(_sieve_flags), 1 << 16)
        size = min(size, SIEVE_CAP + 1)
        flags = np.ones(size, dtype=bool)
        flags[:2] = False
        for p in range(2, isqrt(size - 1) + 1):
            if flags[p]:
                flags[p * p :: p] = False
        _sieve_flags = flags
        _sieve_primes = np.nonzero(flags)[0].astype(np.int64)


def primes_up_to(n: int) -> np.ndarray:
    """All primes <= n, ascending.  Requires 0 <= n <= 10**7."""
    if not 0 <= n <= SIEVE_CAP:
        raise ValueError(f"prime table covers 0..{SIEVE_CAP}, got {n}")
    _ensure_sieve(n)
    primes = _sieve_primes
    return primes[: np.searchsorted(primes, n, side="right")].copy()


def is_prime(n: int) -> bool:
    """Deterministic primality test for 0 <= n <= 2**63-1."""
    n = operator.index(n)
    if n < 2:
        return False
    for p in _MR_WITNESSES:
        if n % p == 0:
            return n == p
    d = n - 1
    r = 0
    while d % 2 == 0:
        d //= 2
        r += 1
    # This witness set is deterministic for every n below 3.3 * 10**24.
    for a in _MR_WITNESSES:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _brent_rho(n: int) -> int:
    """A nontrivial factor of an odd composite n with no small factors."""
    for c in count(1):
        y, r, q = 2, 1, 1
        g, xs, m = 1, 0, 128
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                xs = y
                for _ in range(min(m, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                g = gcd(q, n)
                k += m
            r *= 2
        if g == n:
            g = 1
            while g == 1:
                xs = (xs * xs + c) % n
                g = gcd(abs(x - xs), n)
        if g != n:
            return g
        # cycle collapsed for this polynomial, try the next offset


def _split(m: int, out: dict[int, int]) -> None:
    if m == 1:
        return
    if is_prime(m):
        out[m] = out.get(m, 0) + 1
        return
    d = _brent_rho(m)
    _split(d, out)
    _split(m // d, out)


@lru_cache(maxsize=1 << 16)
def _factor_tuple(n: int) -> tuple[tuple[int, int], ...]:
    m = n
    found: dict[int, int] = {}
    _ensure_sieve(_TRIAL_LIMIT)
    for p in _sieve_primes:
        p = int(p)
        if p > _TRIAL_LIMIT or p * p > m:
            break
        if m % p == 0:
            e = 0
            while m % p == 0:
                m //= p
                e += 1
            found[p] = e
    if m > 1:
        if m <= (_TRIAL_LIMIT + 1) ** 2 or is_prime(m):
            # survived trial division below sqrt, hence prime
            found[m] = found.get(m, 0) + 1
        else:
            _split(m, found)
    return tuple(sorted(found.items()))


@dataclass(frozen=True)
class FactoredInteger:
    """A positive integer together with its certified prime factorization."""

    value: int
    factors: tuple[tuple[int, int], ...]

    def __post_init__(self) -> None:
        prod = 1
        prev = 1
        for p, e in self.factors:
            if e < 1:
                raise ValueError(f"exponent {e} < 1 for prime {p}")
            if p <= prev:
                raise ValueError("primes must be strictly increasing")
            if not is_prime(p):
                raise ValueError(f"{p} is not prime")
            prev = p
            prod *= p**e
        if prod != self.value:
            raise ValueError(f"factors multiply to {prod}, not {self.value}")


def _checked_factors(n: int) -> tuple[tuple[int, int], ...]:
    # cached factor tuple without the re-validating wrapper object
    n = operator.index(n)
    if not 1 <= n <= MAX_INPUT:
        raise ValueError(f"factorize requires 1 <= n <= {MAX_INPUT}, got {n}")
    return _factor_tuple(n)


def factorize(n: int) -> FactoredInteger:
    """Full prime factorization of 1 <= n <= 2**63-1.

    factorize(1) carries an empty factor list.  Inputs outside the
    supported range are rejected.
    """
    n = operator.index(n)
    return FactoredInteger(n, _checked_factors(n))


def euler_totient(n: int) -> int:
    """Count of integers in [1, n] coprime to n."""
    result = 1
    for p, e in _checked_factors(n):
        result *= p ** (e - 1) * (p - 1)
    return result


def moebius(n: int) -> int:
    """0 when n has a squared prime factor, else (-1)**(distinct primes)."""
    fs = _checked_factors(n)
    if any(e >= 2 for _, e in fs):
        return 0
    return -1 if len(fs) % 2 else 1


def mangoldt(n: int) -> float:
    """ln p when n = p**r for a prime p, else 0."""
    fs = _checked_factors(n)
    if len(fs) != 1:
        return 0.0
    return log(fs[0][0])


def mangoldt_b(n: int) -> float:
    """Totient-weighted Mangoldt value: mangoldt(n) * totient(n) / n."""
    return mangoldt(n) * euler_totient(n) / n


def ramanujan_sum(q: int, n: int) -> int:
    """Sum of exp(2*pi*i*p*n/q) over p coprime to q, as an exact integer.

    Evaluated through the Hoelder identity mu(q1) * phi(q) / phi(q1) with
    q1 = q / gcd(q, n).  n may be any integer; it is reduced modulo q, and
    gcd(q, 0) is taken as q so that the n = 0 value is phi(q).
    """
    if q < 1:
        raise ValueError("modulus must be positive")
    n %= q
    g = gcd(q, n) if n else q
    q1 = q // g
    # phi(q1) divides phi(q), so the division below is exact
    return moebius(q1) * (euler_totient(q) // euler_totient(q1))


def ramanujan_bruteforce_values(q: int, ns: Iterable[int]) -> np.ndarray:
    """Definitional Ramanujan sums for many n at once.

    Evaluates the complex character sum directly and rounds.  Raises
    ResidueError if any imaginary part or rounding residue exceeds
    1e-9 * phi(q); that would mean the float evaluation broke down.
    """
    if q < 1:
        raise ValueError("modulus must be positive")
    narr = np.asarray(list(ns), dtype=np.int64)
    table = np.exp((2j * pi / q) * np.arange(q))
    ps = np.nonzero(np.gcd(np.arange(q, dtype=np.int64), q) == 1)[0]
    vals = table[(ps[:, None] * narr[None, :]) % q].sum(axis=0)
    rounded = np.round(vals.real)
    bound = 1e-9 * len(ps)
    worst = max(
        float(np.abs(vals.imag).max(initial=0.0)),
        float(np.abs(vals.real - rounded).max(initial=0.0)),
    )
    if worst > bound:
        raise ResidueError(f"character sum residue {worst:.3e} exceeds {bound:.3e}")
    return rounded.astype(np.int64)


def ramanujan_sum_bruteforce(q: int, n: int) -> int:
    """Single-n view of ramanujan_bruteforce_values."""
    return int(ramanujan_bruteforce_values(q, [n])[0])


@dataclass(frozen=True)
class KloostermanPair:
    """Coprime residues p, pbar mod q with p * pbar = -1 (mod q)."""

    p: int
    pbar: int
    q: int

    def __post_init__(self) -> None:
        if not (1 <= self.p < self.q and 1 <= self.pbar < self.q):
            raise ValueError("pair members must lie in [1, q-1]")
        if gcd(self.p, self.q) != 1 or gcd(self.pbar, self.q) != 1:
            raise ValueError("pair members must be coprime to q")
        if (self.p * self.pbar + 1) % self.q != 0:
            raise ValueError("p * pbar must be -1 mod q")


def kloosterman_pairs(q: int) -> list[KloostermanPair]:
    """All pairs (p, pbar) with p coprime to q, sorted by p; length phi(q)."""
    q = operator.index(q)
    if q < 2:
        raise ValueError("pairs need q >= 2")
    out = []
    for p in range(1, q):
        if gcd(p, q) == 1:
            pbar = -pow(p, -1, q) % q
            out.append(KloostermanPair(p, pbar, q))
    return out


def kloosterman_sum(q: int, n: int, l: int) -> complex:
    """Paired exponential sum over kloosterman_pairs(q).

    Sum of exp((2*pi*i/q) * (p*n - pbar*l)).  The value is mathematically
    real but in general irrational, so it is returned as a complex number;
    see kloosterman_sum_integer for the rounded view.
    """
    table = np.exp((2j * pi / q) * np.arange(q))
    total = 0j
    for pair in kloosterman_pairs(q):
        total += table[(pair.p * n - pair.pbar * l) % q]
    return complex(total)


def kloosterman_sum_integer(q: int, n: int, l: int) -> Optional[int]:
    """Rounded Kloosterman sum when within 1e-9 of an integer, else None."""
    v = kloosterman_sum(q, n, l)
    r = round(v.real)
    if abs(v.imag) <= 1e-9 and abs(v.real - r) <= 1e-9:
        return int(r)
    return None


def carmichael_lambda(n: int) -> int:
    """Exponent of the unit group mod n (largest multiplicative order)."""
    result = 1
    for p, e in factorize(n).factors:
        if p == 2:
            part = 1 if e == 1 else 2 if e == 2 else 2 ** (e - 2)
        else:
            part = p ** (e - 1) * (p - 1)
        result = lcm(result, part)
    return result


def multiplicative_order(g: int, q: int) -> int:
    """Least alpha >= 1 with g**alpha = 1 (mod q).  Needs gcd(g, q) = 1."""
    g, q = operator.index(g), operator.index(q)
    if q < 1 or gcd(g, q) != 1:
        raise ValueError("order requires gcd(g, q) = 1 and q >= 1")
    if q == 1:
        return 1
    order = carmichael_lambda(q)
    for p, _ in factorize(order).factors:
        while order % p == 0 and pow(g, order // p, q) == 1:
            order //= p
    return order


def primitive_root(q: int) -> Optional[int]:
    """Smallest unit of order phi(q) mod q, or None when none exists.

    A primitive root exists exactly for q in {2, 4}, odd prime powers, and
    twice odd prime powers.
    """
    if q < 2:
        raise ValueError("primitive roots need q >= 2")
    fs = factorize(q).factors
    odd = [(p, e) for p, e in fs if p != 2]
    two = next((e for p, e in fs if p == 2), 0)
    exists = (
        q in (2, 4)
        or (len(odd) == 1 and two == 0)
        or (len(odd) == 1 and two == 1)
    )
    if not exists:
        return None
    phi = euler_totient(q)
    for g in range(1, q):
        if gcd(g, q) == 1 and multiplicative_order(g, q) == phi:
            return g
    return None  # unreachable for valid q


@dataclass(frozen=True)
class CycleTable:
    """Powers g**alpha mod q for alpha = 1..2*period."""

    g: int
    q: int
    powers: tuple[int, ...]
    period: int

    def __post_init__(self) -> None:
        if len(self.powers) != 2 * self.period:
            raise ValueError("table must cover alpha = 1..2*period")
        for i, value in enumerate(self.powers):
            if value != pow(self.g, i + 1, self.q):
                raise ValueError(f"entry {i} is not g**{i + 1} mod q")
        if carmichael_lambda(self.q) % self.period != 0:
            raise ValueError("period must divide carmichael_lambda(q)")


def power_cycle(g: int, q: int) -> CycleTable:
    """Cycle of g in the units mod q, written out twice over."""
    if q < 2:
        raise ValueError("cycles need q >= 2")
    if gcd(g, q) != 1:
        raise ValueError(f"gcd({g}, {q}) != 1: {g} is not a unit mod {q}")
    period = multiplicative_order(g, q)
    powers = tuple(pow(g, a, q) for a in range(1, 2 * period + 1))
    return CycleTable(g=g, q=q, powers=powers, period=period)


TABLE_FUNCTIONS = (
    "totient",
    "moebius",
    "mangoldt",
    "mangoldt_b",
    "carmichael",
    "ramanujan",
    "kloosterman",
)


def tabulate(function_name: str, nmax: int, sink: IO[str], q: Optional[int] = None) -> int:
    """Stream one of the arithmetic tables as CSV rows into sink.

    Plain functions are tabulated for n = 1..nmax with header ``n,value``.
    ``ramanujan`` (fixed q) runs n = 0..nmax with the same header;
    ``kloosterman`` (fixed q) emits the full (n, l) grid with header
    ``n,l,re,im,integer`` where the last column is empty when the sum is
    not within 1e-9 of an integer.  Returns the number of data rows.
    """
    if nmax < 0:
        raise ValueError("nmax must be nonnegative")
    scalar = {
        "totient": euler_totient,
        "moebius": moebius,
        "mangoldt": mangoldt,
        "mangoldt_b": mangoldt_b,
        "carmichael": carmichael_lambda,
    }
    if function_name in scalar:
        fn = scalar[function_name]
        sink.write("n,value\n")
        rows = 0
        for n in range(1, nmax + 1):
            v = fn(n)
            sink.write(f"{n},{v}\n" if isinstance(v, int) else f"{n},{v:.12g}\n")
            rows += 1
        return rows
    if function_name == "ramanujan":
        if q is None:
            raise ValueError("ramanujan table needs a fixed q")
        sink.write("n,value\n")
        for n in range(nmax + 1):
            sink.write(f"{n},{ramanujan_sum(q, n)}\n")
        return nmax + 1
    if function_name == "kloosterman":
        if q is None:
            raise ValueError("kloosterman table needs a fixed q")
        sink.write("n,l,re,im,integer\n")
        rows = 0
        for n in range(nmax + 1):
            for l in range(nmax + 1):
                v = kloosterman_sum(q, n, l)
                r = kloosterman_sum_integer(q, n, l)
                tail = "" if r is None else str(r)
                sink.write(f"{n},{l},{v.real:.12g},{v.imag:.12g},{tail}\n")
                rows += 1
        return rows
    raise ValueError(f"unknown table {function_name!r}; choose from {TABLE_FUNCTIONS}")
