"""Finite-dimensional phase operators built from arithmetic sums.

The discrete Fourier frame on q points is restricted to index windows
(all residues, the residues coprime to q, or the coprime count plus one).
Ramanujan sums give a real projector and a phase-locking operator on such
windows; Kloosterman pairs give a paired variant.  Expectation values and
variances are evaluated over pure phase states, each by two independent
routes so one can certify the other.

Matrices are plain complex128 ndarrays.  Dimensions are capped at 4096
per operation: every construction here is dense O(q**2) or worse.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from math import pi
from typing import NamedTuple

import numpy as np

from .arith import (
    ResidueError,
    euler_totient,
    kloosterman_pairs,
    mangoldt,
    ramanujan_sum,
)

__all__ = [
    "MAX_DIMENSION",
    "IndexRange",
    "PurePhaseState",
    "PhaseVariance",
    "qft_matrix",
    "is_hermitian",
    "is_unitary",
    "is_real_antisymmetric",
    "locked_projector",
    "kloosterman_matrix",
    "pairs_projector",
    "phase_lock_operator",
    "pairs_phase_operator",
    "number_operator",
    "commutator_lock",
    "locked_phase_probabilities",
    "phase_expectation_locked",
    "phase_expectation_locked_closed_form",
    "modified_ramanujan_sum",
    "modified_expectation_locked",
    "phase_variance_locked",
    "phase_expectation_pairs",
    "pairs_expectation_projector",
    "mangoldt_fit",
]

MAX_DIMENSION = 4096


class IndexRange(Enum):
    """Which block of the q-point frame an operator acts on."""

    FULL = "full"
    TOTIENT = "totient"
    TOTIENT_INCLUSIVE = "totient_inclusive"

    def dimension(self, q: int) -> int:
        if self is IndexRange.FULL:
            return q
        if self is IndexRange.TOTIENT:
            return euler_totient(q)
        return euler_totient(q) + 1

    def window(self, q: int) -> np.ndarray:
        """Indices 0..dimension-1 as an int64 vector."""
        return np.arange(self.dimension(q), dtype=np.int64)


def _check_q(q: int, minimum: int = 2) -> None:
    if q < minimum:
        raise ValueError(f"q must be >= {minimum}, got {q}")
    if q > MAX_DIMENSION:
        raise ValueError(f"q = {q} exceeds the dense cap {MAX_DIMENSION}")


def _roots(q: int) -> np.ndarray:
    """exp(2*pi*i*k/q) for k = 0..q-1."""
    return np.exp((2j * pi / q) * np.arange(q))


@lru_cache(maxsize=256)
def _ramanujan_row(q: int) -> np.ndarray:
    row = np.array([ramanujan_sum(q, r) for r in range(q)], dtype=np.float64)
    row.setflags(write=False)
    return row


@lru_cache(maxsize=256)
def _coprime_residues(q: int) -> np.ndarray:
    ps = np.nonzero(np.gcd(np.arange(q, dtype=np.int64), q) == 1)[0]
    ps.setflags(write=False)
    return ps


def qft_matrix(q: int) -> np.ndarray:
    """Unitary discrete Fourier matrix, entries exp(2*pi*i*n*p/q)/sqrt(q)."""
    _check_q(q, minimum=1)
    grid = np.outer(np.arange(q, dtype=np.int64), np.arange(q, dtype=np.int64)) % q
    return _roots(q)[grid] / np.sqrt(q)


def is_hermitian(m: np.ndarray, tol: float = 1e-10) -> bool:
    return bool(np.abs(m - m.conj().T).max() <= tol)


def is_unitary(m: np.ndarray, tol: float = 1e-10) -> bool:
    eye = np.eye(m.shape[0], dtype=m.dtype)
    return bool(np.abs(m.conj().T @ m - eye).max() <= tol)


def is_real_antisymmetric(m: np.ndarray, tol: float = 1e-10) -> bool:
    return bool(np.abs(m.imag).max() <= tol and np.abs(m + m.T).max() <= tol)


def locked_projector(q: int, index_range: IndexRange = IndexRange.FULL) -> np.ndarray:
    """Matrix with entries ramanujan_sum(q, n - l) / q on the window.

    On the full window this is an exact orthogonal projector of rank
    phi(q); on truncated windows it is the same kernel restricted, which
    is Hermitian but no longer idempotent.
    """
    _check_q(q)
    w = index_range.window(q)
    diff = (w[:, None] - w[None, :]) % q
    return (_ramanujan_row(q)[diff] / q).astype(np.complex128)


def kloosterman_matrix(q: int, index_range: IndexRange = IndexRange.TOTIENT) -> np.ndarray:
    """Grid of paired exponential sums k(n, l) over the window.

    Entry (n, l) sums exp((2*pi*i/q)(p*n - pbar*l)) over the coprime
    pairs; evaluated as a product of two phase matrices so large windows
    stay in BLAS.
    """
    _check_q(q)
    w = index_range.window(q)
    pairs = kloosterman_pairs(q)
    ps = np.array([pr.p for pr in pairs], dtype=np.int64)
    pbars = np.array([pr.pbar for pr in pairs], dtype=np.int64)
    roots = _roots(q)
    left = roots[(ps[:, None] * w[None, :]) % q]
    right = roots[(-pbars[:, None] * w[None, :]) % q]
    return left.T @ right


def pairs_projector(q: int, index_range: IndexRange = IndexRange.TOTIENT) -> np.ndarray:
    """kloosterman_matrix(q) / q."""
    return kloosterman_matrix(q, index_range) / q


def phase_lock_operator(q: int, index_range: IndexRange = IndexRange.FULL) -> np.ndarray:
    """pi times the locked projector."""
    return pi * locked_projector(q, index_range)


def pairs_phase_operator(q: int, index_range: IndexRange = IndexRange.TOTIENT) -> np.ndarray:
    """pi times the pairs projector."""
    return pi * pairs_projector(q, index_range)


def number_operator(q: int, index_range: IndexRange = IndexRange.FULL) -> np.ndarray:
    """Diagonal index operator on the window."""
    _check_q(q)
    return np.diag(index_range.window(q).astype(np.complex128))


def commutator_lock(q: int, index_range: IndexRange = IndexRange.FULL) -> np.ndarray:
    """Commutator of the locking operator with the number operator.

    Entry (n, l) equals (pi/q) * (l - n) * ramanujan_sum(q, l - n), a real
    antisymmetric matrix.
    """
    _check_q(q)
    w = index_range.window(q)
    signed = w[None, :] - w[:, None]
    row = _ramanujan_row(q)
    return ((pi / q) * signed * row[signed % q]).astype(np.complex128)


@dataclass(frozen=True)
class PurePhaseState:
    """Frame state with constant phase increment beta on q points."""

    q: int
    beta: float

    def __post_init__(self) -> None:
        _check_q(self.q)

    def amplitudes(self, index_range: IndexRange = IndexRange.FULL) -> np.ndarray:
        """exp(i*n*beta)/sqrt(q) over the window.

        Normalization always uses the full dimension q, so truncated
        windows carry total weight below one by design.
        """
        w = index_range.window(self.q)
        return np.exp(1j * self.beta * w) / np.sqrt(self.q)


def _dirichlet_power(x: np.ndarray, d: int) -> np.ndarray:
    """|sum_{n<d} exp(i*n*x)|**2 with the d**2 limit at x = 0 mod 2*pi."""
    half = np.sin(x / 2.0)
    out = np.full_like(x, float(d * d))
    ok = np.abs(half) >= 1e-12
    out[ok] = (np.sin(d * x[ok] / 2.0) / half[ok]) ** 2
    return out


def _phase_quadratic(kernel_row: np.ndarray, q: int, beta: float, w: np.ndarray) -> complex:
    """v.T @ K @ conj(v) for K[n, l] = kernel_row[(l - n) % q], v = exp(i*beta*w)."""
    diff = (w[None, :] - w[:, None]) % q
    kern = kernel_row[diff]
    v = np.exp(1j * beta * w)
    return complex(v @ kern @ v.conj())


def phase_expectation_locked(
    q: int, beta: float, index_range: IndexRange = IndexRange.FULL
) -> float:
    """Expectation of the locking phase operator in the beta phase state.

    Evaluates (pi/q**2) * sum over the window of ramanujan_sum(q, l - n)
    * exp(i*beta*(n - l)).  The kernel is real and even so the result is
    real; a residual imaginary part above 1e-9 per dimension raises
    ResidueError.
    """
    _check_q(q)
    w = index_range.window(q)
    total = _phase_quadratic(_ramanujan_row(q).astype(np.complex128), q, beta, w)
    value = (pi / q**2) * total
    if abs(value.imag) > 1e-9 * len(w):
        raise ResidueError(f"imaginary residue {value.imag:.3e} in locked expectation")
    return value.real


def phase_expectation_locked_closed_form(
    q: int, beta: float, index_range: IndexRange = IndexRange.FULL
) -> float:
    """Same expectation via the Dirichlet kernel over coprime residues.

    (pi/q**2) * sum_p |sum_{n in window} exp(i*n*(2*pi*p/q - beta))|**2,
    an independent route used to certify phase_expectation_locked.
    """
    _check_q(q)
    d = index_range.dimension(q)
    x = 2.0 * pi * _coprime_residues(q).astype(np.float64) / q - beta
    return (pi / q**2) * float(_dirichlet_power(x, d).sum())


def locked_phase_probabilities(
    q: int, beta: float, index_range: IndexRange = IndexRange.FULL
) -> tuple[np.ndarray, np.ndarray]:
    """Coprime residues p and weights |<frame_p|state>|**2 on the window.

    The frame vectors are truncated Fourier columns; weights therefore sum
    to at most one and are not renormalized here.
    """
    _check_q(q)
    d = index_range.dimension(q)
    ps = _coprime_residues(q)
    x = beta - 2.0 * pi * ps.astype(np.float64) / q
    weights = _dirichlet_power(x, d) / q**2
    return ps.copy(), weights


def modified_ramanujan_sum(q: int, n: int) -> complex:
    """sum over coprime p of (p/q)**2 * exp(2*pi*i*n*p/q)."""
    if q < 1:
        raise ValueError("modulus must be positive")
    ps = _coprime_residues(q)
    return complex(((ps / q) ** 2 * _roots(q)[(ps * n) % q]).sum())


def modified_expectation_locked(
    q: int, beta: float, index_range: IndexRange = IndexRange.FULL
) -> float:
    """Expectation of the squared-index weighted kernel.

    Same quadratic form as phase_expectation_locked with the kernel row
    replaced by modified_ramanujan_sum; feeds the closed-form variance.
    """
    _check_q(q)
    w = index_range.window(q)
    row = np.array([modified_ramanujan_sum(q, r) for r in range(q)], dtype=np.complex128)
    value = (pi / q**2) * _phase_quadratic(row, q, beta, w)
    if abs(value.imag) > 1e-9 * len(w):
        raise ResidueError(f"imaginary residue {value.imag:.3e} in modified expectation")
    return value.real


class PhaseVariance(NamedTuple):
    """Phase variance by the two routes the module supports."""

    definitional: float
    closed_form: float


def phase_variance_locked(
    q: int, beta: float, index_range: IndexRange = IndexRange.FULL
) -> PhaseVariance:
    """Variance of the measured phase in the beta phase state.

    definitional: weighted variance of the angles 2*pi*p/q under the
    normalized truncated-frame weights (0 when all weight vanishes).
    closed_form: the moment combination 4 * modified expectation
    + (E**2/pi) * (E - 2*pi) with E the locked expectation.  The first
    term is the raw second moment of the angle; the second replaces the
    squared mean by an expectation-weighted correction, so the two
    routes measure spread differently and are reported side by side.
    """
    ps, weights = locked_phase_probabilities(q, beta, index_range)
    total = float(weights.sum())
    thetas = 2.0 * pi * ps.astype(np.float64) / q
    if total < 1e-15:
        definitional = 0.0
    else:
        mean = float((thetas * weights).sum()) / total
        definitional = float(((thetas - mean) ** 2 * weights).sum()) / total
    expectation = pi * total
    closed = 4.0 * modified_expectation_locked(q, beta, index_range) + (
        expectation**2 / pi
    ) * (expectation - 2.0 * pi)
    return PhaseVariance(definitional=definitional, closed_form=closed)


def phase_expectation_pairs(
    q: int, beta: float, index_range: IndexRange = IndexRange.TOTIENT
) -> float:
    """Expectation of the pairs phase operator in the beta phase state.

    (2*pi/q**2) * sum over the window of ktilde(n, l) * exp(i*beta*(n-l))
    where ktilde(n, l) sums p * exp((2*pi*i/q)(p - pbar)(l - n)) over the
    coprime pairs.  The kernel depends on l - n only, so it is evaluated
    through a cyclic residue row.
    """
    _check_q(q)
    w = index_range.window(q)
    pairs = kloosterman_pairs(q)
    roots = _roots(q)
    row = np.zeros(q, dtype=np.complex128)
    for pr in pairs:
        d = (pr.p - pr.pbar) % q
        row += pr.p * roots[(d * np.arange(q)) % q]
    value = (2.0 * pi / q**2) * _phase_quadratic(row, q, beta, w)
    if abs(value.imag) > 1e-8 * len(w):
        raise ResidueError(f"imaginary residue {value.imag:.3e} in pairs expectation")
    return value.real


def pairs_expectation_projector(
    q: int, beta: float, index_range: IndexRange = IndexRange.TOTIENT
) -> float:
    """Same pairs expectation through rank-one frame projectors.

    Writes the operator as q * sum_p theta_p |u(d_p)><u(d_p)| with
    theta_p = 2*pi*p/q, d_p = (p - pbar) mod q and u(d) the truncated
    Fourier column; reduces to a real Dirichlet-kernel sum.  Independent
    check for phase_expectation_pairs.
    """
    _check_q(q)
    d = index_range.dimension(q)
    total = 0.0
    for pr in kloosterman_pairs(q):
        x = beta - 2.0 * pi * ((pr.p - pr.pbar) % q) / q
        total += pr.p * float(_dirichlet_power(np.array([x]), d)[0])
    return (2.0 * pi / q**2) * total


def mangoldt_fit(q: int) -> float:
    """Prime-power envelope pi * mangoldt(q) / ln q used against sweeps."""
    if q < 2:
        raise ValueError("fit envelope needs q >= 2")
    return pi * mangoldt(q) / np.log(q)
