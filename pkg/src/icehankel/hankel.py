"""Izergin-Korepin Hankel determinant, recurrence coefficients and Toda checks.

Moments are the t-derivatives of ``phi(t) = cot(gamma - t) + cot(gamma + t)``
generated exactly from the Riccati recurrences of the two cotangents.  The
Hankel matrix is factored as ``L D L^T``; the pivots are the norms ``h_n`` of
the monic orthogonal polynomials and the first subdiagonal of ``L`` carries
their subleading coefficients.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Sequence

import mpmath as mp

from .errors import ConditioningError, PrecisionError
from .jets import TaylorJet
from .params import ModelParams, workprec
from .precision import (
    DEFAULT_MAX_BITS,
    Certified,
    PrecisionReal,
    adaptive_precision,
    agreement_digits,
    scaled,
    start_bits_for,
)

__all__ = [
    "MomentTable",
    "RecurrenceTable",
    "TodaCheck",
    "RescalingCheck",
    "WORK_BOUND",
    "phi_jet",
    "moment_table",
    "hankel_tau",
    "recurrence_table",
    "certified_recurrence_table",
    "partition_Z",
    "certified_partition_Z",
    "free_energy_F",
    "log_Z_over_N2",
    "toda_check",
    "toda_residual",
    "rescaling_check",
]

log = logging.getLogger(__name__)

# order * log(order) above this raises PrecisionError
WORK_BOUND = 5.0e5


@dataclass(frozen=True)
class MomentTable:
    params: ModelParams
    moments: list
    bits: int

    @property
    def N(self) -> int:
        return (len(self.moments) + 1) // 2


@dataclass(frozen=True)
class RecurrenceTable:
    """h_n, R_n, Q_n for n = 0..n_max of the weight ``e^{t x} m(x)``.

    ``R[0]`` is 0 by the usual convention ``P_{-1} = 0``.  ``certificate`` is
    the number of decimal digits on which the table agreed with a run at half
    the precision (``None`` when not certified).
    """

    params: ModelParams
    h: list
    R: list
    Q: list
    n_max: int
    bits: int
    certificate: float | None = None

    def certificate_view(self):
        out = list(self.h) + list(self.R[1:])
        for n, q in enumerate(self.Q):
            ref = self.R[n + 1] if n + 1 <= self.n_max else self.R[n]
            out.append(scaled(q, mp.sqrt(ref)))
        return out

    def tau(self, N: int) -> mp.mpf:
        """tau_N as the product of the first N pivots."""
        if not 0 <= N <= self.n_max + 1:
            raise IndexError(f"tau_{N} needs h up to n={N - 1}")
        with mp.workprec(self.bits):
            return mp.fprod(self.h[:N]) if N else mp.mpf(1)


@dataclass(frozen=True)
class TodaCheck:
    """Toda residual and the two routes to F_N''."""

    N: int
    residual: mp.mpf
    F2_jet: mp.mpf
    R_over_N2: mp.mpf
    bits: int

    @property
    def F2_mismatch(self) -> mp.mpf:
        return abs(self.F2_jet - self.R_over_N2) / abs(self.R_over_N2)


@dataclass(frozen=True)
class RescalingCheck:
    """Worst relative violation of the N-rescaling identities for h_n, R_n, Q_n and tau_N."""

    N: int
    h_error: mp.mpf
    R_error: mp.mpf
    Q_error: mp.mpf
    tau_error: mp.mpf


# ---------------------------------------------------------------------------
# moments

def _check_work(order: int) -> None:
    if order > 1 and order * math.log(order) > WORK_BOUND:
        raise PrecisionError(
            f"jet order {order} exceeds the work bound ({WORK_BOUND:g} for order*log(order))"
        )


def _phi_coeffs(p: ModelParams, order: int) -> list:
    """Taylor coefficients of phi about t at the current precision."""
    _check_work(order)
    g, t = p.gamma, p.t
    u = [mp.cot(g - t)]
    v = [mp.cot(g + t)]
    for k in range(order):
        su = mp.fdot(u[: k + 1], u[k::-1])
        sv = mp.fdot(v[: k + 1], v[k::-1])
        if k == 0:
            su += 1
            sv += 1
        u.append(su / (k + 1))
        v.append(-sv / (k + 1))
    coeffs = [a + b for a, b in zip(u, v)]
    if p.t_is_zero:
        # phi is even; the two recurrences cancel exactly in exact arithmetic
        for k in range(1, order + 1, 2):
            coeffs[k] = mp.mpf(0)
    return coeffs


def phi_jet(p: ModelParams, order: int, bits: int | None = None) -> TaylorJet:
    """Jet of phi at t to the given order."""
    if order < 0:
        raise ValueError("order must be >= 0")
    with workprec(bits):
        return TaylorJet(_phi_coeffs(p, order))


def _moments(p: ModelParams, count: int) -> list:
    coeffs = _phi_coeffs(p, count - 1)
    out = []
    fact = mp.mpf(1)
    for k, c in enumerate(coeffs):
        if k:
            fact *= k
        out.append(c * fact)
    return out


def moment_table(p: ModelParams, N: int, bits: int) -> MomentTable:
    """mu_k = phi^(k)(t) for k = 0..2N-2."""
    if N < 1:
        raise ValueError("N must be >= 1")
    with mp.workprec(bits):
        return MomentTable(p, _moments(p, 2 * N - 1), bits)


# ---------------------------------------------------------------------------
# factorization

def _dot(xs, ys):
    if xs and isinstance(xs[0], TaylorJet):
        acc = xs[0] * ys[0]
        for a, b in zip(xs[1:], ys[1:]):
            acc = acc + a * b
        return acc
    return mp.fdot(xs, ys)


def _head(x):
    return x.coeffs[0] if isinstance(x, TaylorJet) else x


def _ldl_hankel(moments: Sequence, size: int):
    """Pivots and first subdiagonal of the LDL^T factor of (mu_{i+j}).

    Works over mpf or TaylorJet entries.  Returns ``(d, sub)`` with
    ``sub[k] = L[k+1][k]``.
    """
    if len(moments) < 2 * size - 1:
        raise ValueError("not enough moments for the requested size")
    lost = mp.mpf(2) ** (16 - mp.mp.prec)
    L = [[] for _ in range(size)]
    d = []
    for j in range(size):
        w = [L[j][k] * d[k] for k in range(j)]
        djj = moments[2 * j] - _dot(L[j], w) if j else moments[0]
        head = _head(djj)
        if head <= 0 or abs(head) < abs(_head(moments[2 * j])) * lost:
            raise ConditioningError(
                f"pivot h_{j} = {mp.nstr(head, 5)} is not positive at {mp.mp.prec} bits"
            )
        d.append(djj)
        for i in range(j + 1, size):
            num = moments[i + j] - _dot(L[i], w) if j else moments[i]
            L[i].append(num / djj)
    sub = [L[k + 1][k] for k in range(size - 1)]
    return d, sub


def hankel_tau(p: ModelParams, N: int, bits: int) -> PrecisionReal:
    """det(mu_{i+k-2}) for 1 <= i, k <= N as the product of LDL pivots; tau_0 = 1."""
    if N < 0:
        raise ValueError("N must be >= 0")
    with mp.workprec(bits):
        if N == 0:
            return PrecisionReal(mp.mpf(1), bits)
        d, _ = _ldl_hankel(_moments(p, 2 * N - 1), N)
        return PrecisionReal(mp.fprod(d), bits)


def _recurrence_at(p: ModelParams, n_max: int, bits: int) -> RecurrenceTable:
    size = n_max + 2
    with mp.workprec(bits):
        d, sub = _ldl_hankel(_moments(p, 2 * size - 1), size)
        h = d[: n_max + 1]
        R = [mp.mpf(0)] + [h[n] / h[n - 1] for n in range(1, n_max + 1)]
        # L[n+1][n] = Q_n + L[n][n-1], with L[0][-1] = 0
        Q = [sub[0]] + [sub[n] - sub[n - 1] for n in range(1, n_max + 1)]
        return RecurrenceTable(p, h, R, Q, n_max, bits)


def recurrence_table(p: ModelParams, n_max: int, bits: int | None = None) -> RecurrenceTable:
    """h_n, R_n, Q_n for n <= n_max with a precision certificate.

    The table is computed at ``bits`` and at ``2*bits``; the returned values
    are the higher-precision ones and ``certificate`` is their agreement with
    the lower-precision run.  ``bits`` defaults to ``max(256, 16*n_max)``.
    """
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    if bits is None:
        bits = start_bits_for(n_max)
    low = _recurrence_at(p, n_max, bits)
    high = _recurrence_at(p, n_max, 2 * bits)
    digits = agreement_digits(low, high)
    return RecurrenceTable(p, high.h, high.R, high.Q, n_max, 2 * bits, digits)


def certified_recurrence_table(
    p: ModelParams, n_max: int, target_digits: int = 30, max_bits: int = DEFAULT_MAX_BITS
) -> RecurrenceTable:
    """Recurrence table whose certificate meets ``target_digits`` (doubling precision)."""
    res: Certified = adaptive_precision(
        lambda b: _recurrence_at(p, n_max, b),
        target_digits=target_digits,
        start_bits=start_bits_for(n_max),
        max_bits=max_bits,
    )
    t = res.value
    return RecurrenceTable(p, t.h, t.R, t.Q, n_max, res.bits, res.digits)


# ---------------------------------------------------------------------------
# partition function and free energy

def _log_superfactorial(N: int) -> mp.mpf:
    """ln prod_{n<N} n!"""
    return mp.fsum(mp.loggamma(n + 1) for n in range(N))


def partition_Z(p: ModelParams, N: int, bits: int) -> PrecisionReal:
    """Z_N = [sin(gamma+t) sin(gamma-t)]^{N^2} tau_N / (prod_{n<N} n!)^2."""
    if N < 1:
        raise ValueError("N must be >= 1")
    with mp.workprec(bits):
        tau = hankel_tau(p, N, bits).value
        g, t = p.gamma, p.t
        pref = (mp.sin(g + t) * mp.sin(g - t)) ** (N * N)
        sf = mp.mpf(1)
        for n in range(2, N):
            sf *= mp.factorial(n)
        return PrecisionReal(pref * tau / (sf * sf), bits)


def certified_partition_Z(
    p: ModelParams, N: int, target_digits: int = 30, max_bits: int = DEFAULT_MAX_BITS
) -> Certified:
    return adaptive_precision(
        lambda b: partition_Z(p, N, b),
        target_digits=target_digits,
        start_bits=start_bits_for(N),
        max_bits=max_bits,
    )


def free_energy_F(p: ModelParams, N: int, bits: int) -> PrecisionReal:
    """F_N = N^{-2} ln[tau_N / (prod_{n<N} n!)^2]."""
    if N < 1:
        raise ValueError("N must be >= 1")
    with mp.workprec(bits):
        tau = hankel_tau(p, N, bits).value
        return PrecisionReal((mp.log(tau) - 2 * _log_superfactorial(N)) / (N * N), bits)


def log_Z_over_N2(p: ModelParams, N: int, bits: int) -> PrecisionReal:
    """N^{-2} ln Z_N."""
    with mp.workprec(bits):
        F = free_energy_F(p, N, bits).value
        g, t = p.gamma, p.t
        return PrecisionReal(F + mp.log(mp.sin(g + t) * mp.sin(g - t)), bits)


# ---------------------------------------------------------------------------
# Toda equation

def toda_check(p: ModelParams, N: int, bits: int) -> TodaCheck:
    """Run the factorization over order-2 jets in t.

    Returns the relative residual of ``tau tau'' - tau'^2 = tau_{N+1} tau_{N-1}``
    and ``F_N''`` from the jets next to ``R_N / N^2`` from the pivots.
    """
    if N < 1:
        raise ValueError("N must be >= 1")
    with mp.workprec(bits):
        size = N + 1
        mu = _moments(p, 2 * size + 1)
        jets = [TaylorJet([mu[k], mu[k + 1], mu[k + 2] / 2]) for k in range(2 * size - 1)]
        d, _ = _ldl_hankel(jets, size)
        tau = d[0]
        for k in range(1, N):
            tau = tau * d[k]
        c0, c1, c2 = tau.coeffs
        tau_prev = mp.fprod(x.coeffs[0] for x in d[: N - 1]) if N > 1 else mp.mpf(1)
        tau_next = c0 * d[N].coeffs[0]
        rhs = tau_next * tau_prev
        residual = abs(c0 * 2 * c2 - c1 * c1 - rhs) / abs(rhs)
        F2 = (2 * c2 * c0 - c1 * c1) / (c0 * c0) / (N * N)
        R_N = d[N].coeffs[0] / d[N - 1].coeffs[0]
        return TodaCheck(N, residual, F2, R_N / (N * N), bits)


def toda_residual(p: ModelParams, N: int, bits: int) -> PrecisionReal:
    """|tau_N tau_N'' - tau_N'^2 - tau_{N+1} tau_{N-1}| / |tau_{N+1} tau_{N-1}|."""
    return PrecisionReal(toda_check(p, N, bits).residual, bits)


# ---------------------------------------------------------------------------
# rescaling identities

def rescaling_check(p: ModelParams, N: int, n_max: int, bits: int) -> RescalingCheck:
    """Factor the moments of ``e^{N zeta x} m(N x / gamma)`` directly and compare.

    The rescaled moments are ``(gamma/N)^{k+1} mu_k``; the identities checked
    are ``h_Nn = (gamma/N)^{2n+1} h_n``, ``R_Nn = (gamma/N)^2 R_n``,
    ``Q_Nn = (gamma/N) Q_n`` and ``tau_N = (N/gamma)^{N^2} prod_{n<N} h_Nn``.
    """
    size = n_max + 2
    with mp.workprec(bits):
        s = p.gamma / N
        mu = _moments(p, 2 * size - 1)
        mu_s = [m * s ** (k + 1) for k, m in enumerate(mu)]
        d, sub = _ldl_hankel(mu, size)
        ds, subs = _ldl_hankel(mu_s, size)

        def rel(a, b):
            return abs(a - b) / abs(b) if b != 0 else abs(a)

        h_err = max(rel(ds[n], s ** (2 * n + 1) * d[n]) for n in range(n_max + 1))
        R_err = max(
            rel(ds[n] / ds[n - 1], s * s * d[n] / d[n - 1]) for n in range(1, n_max + 1)
        )
        Q = [sub[0]] + [sub[n] - sub[n - 1] for n in range(1, n_max + 1)]
        Qs = [subs[0]] + [subs[n] - subs[n - 1] for n in range(1, n_max + 1)]
        scale = max(abs(q) for q in Q) or mp.mpf(1)
        Q_err = max(abs(qs - s * q) / (s * scale) for q, qs in zip(Q, Qs))
        n_tau = min(N, n_max + 1)
        tau = mp.fprod(d[:n_tau])
        tau_s = mp.fprod(ds[:n_tau])
        tau_err = rel((1 / s) ** (n_tau * n_tau) * tau_s, tau)
        return RescalingCheck(N, h_err, R_err, Q_err, tau_err)
