"""Closed-form large-n constants of the recurrence coefficients and the partition function.

Notation: ``q = pi/(2 gamma)`` and ``p = q - 1``, so that the oscillatory
exponents are ``kappa_j = 1 + 2j/p`` and the kernel ``f`` decays like
``exp(-2 p mu)``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

import mpmath as mp
import numpy as np

from .errors import DegenerateFit, QuadratureError
from .hankel import RecurrenceTable, recurrence_table
from .params import ModelParams, f_kernel
from .precision import PrecisionReal

__all__ = [
    "DEFAULT_BITS",
    "Mode",
    "AsymptoticConstants",
    "bulk_constants",
    "mode_list",
    "varphi_exponent",
    "oscillation_c_j",
    "constant_c",
    "predicted_R_n",
    "free_energy_limits",
    "kappa_exponent",
    "kappa_rational",
    "asymptotic_constants",
    "ResidualRow",
    "ResidualScan",
    "residual_scan",
    "fit_kappa",
    "special_point_log_Z",
]

DEFAULT_BITS = 128
QUAD_TOL = 1e-12


def _pr(x, bits) -> PrecisionReal:
    return PrecisionReal(+x, bits)


def _cos_half(p: ModelParams):
    return mp.cos(mp.pi * p.zeta / 2)


def _p_exact(p: ModelParams) -> Fraction | None:
    r = p.gamma_over_pi
    return None if r is None else 1 / (2 * r) - 1


def bulk_constants(p: ModelParams, bits: int = DEFAULT_BITS) -> tuple[PrecisionReal, PrecisionReal]:
    """(R, omega) with R = (pi / (2 cos(pi zeta/2)))^2 and omega = pi (1 + zeta)."""
    with mp.workprec(bits):
        R = (mp.pi / (2 * _cos_half(p))) ** 2
        omega = mp.pi * (1 + p.zeta)
        return _pr(R, bits), _pr(omega, bits)


@dataclass(frozen=True)
class Mode:
    j: int
    y: mp.mpf
    kappa: mp.mpf
    kappa_exact: Fraction | None = None


def mode_list(p: ModelParams, bits: int = DEFAULT_BITS) -> list[Mode]:
    """All oscillatory modes with kappa_j <= 2, i.e. j <= p/2.

    When gamma is a rational multiple of pi the cutoff is decided in exact
    arithmetic, so gamma = pi/6 keeps its boundary mode j = 1.
    """
    exact = _p_exact(p)
    with mp.workprec(bits):
        pv = mp.pi / (2 * p.gamma) - 1
        if exact is not None:
            jmax = math.floor(exact / 2)
        else:
            jmax = int(mp.floor(pv / 2))
        out = []
        for j in range(1, jmax + 1):
            k_ex = None if exact is None else 1 + Fraction(2 * j) / exact
            out.append(Mode(j, mp.pi * j / pv, 1 + 2 * j / pv, k_ex))
        return out


def _panels(pv, tol: float):
    L = (math.log(1 / tol) + 10) / (2 * pv)
    width = min(mp.mpf(1), 1 / pv)
    n = max(4, int(mp.ceil(L / width)))
    return [L * k / n for k in range(n + 1)], L


def varphi_exponent(y, p: ModelParams, bits: int = DEFAULT_BITS, tol: float = QUAD_TOL) -> PrecisionReal:
    """phi(y) = -(2y/pi) ln(2 pi cos(pi zeta/2)) + (2/pi)[y ln y - y - I(y)].

    ``I(y) = int_0^inf atan2(y, mu) f(mu) dmu`` is integrated with
    Gauss-Legendre panels on [0, L]; the tail beyond L is bounded by the
    exponential decay of f.
    """
    with mp.workprec(bits):
        y = mp.mpf(y)
        if y <= 0:
            raise ValueError("y must be positive")
        pv = mp.pi / (2 * p.gamma) - 1
        pts, L = _panels(pv, tol)
        integrand = lambda mu: mp.atan2(y, mu) * f_kernel(mu, p)
        I, err = mp.quad(integrand, pts, method="gauss-legendre", error=True)
        # |f(mu)| <= 2(q + p) e^{-2 p mu} past the first panel, atan2 <= pi/2
        tail = mp.pi / 2 * 2 * (2 * pv + 1) * mp.exp(-2 * pv * L) / (2 * pv)
        if err > tol or tail > tol:
            raise QuadratureError(f"varphi quadrature error {mp.nstr(err, 3)}, tail {mp.nstr(tail, 3)}")
        val = -2 * y / mp.pi * mp.log(2 * mp.pi * _cos_half(p)) + 2 / mp.pi * (y * mp.log(y) - y - I)
        return _pr(val, bits)


def oscillation_c_j(p: ModelParams, j: int, bits: int = DEFAULT_BITS) -> PrecisionReal:
    """c_j = (2 gamma e^{phi(y_j)} / cos(pi zeta/2)) (-1)^j sin(pi j / (1 - 2 gamma/pi))."""
    if j < 1:
        raise ValueError("j must be >= 1")
    with mp.workprec(bits):
        g = p.gamma
        pv = mp.pi / (2 * g) - 1
        y = mp.pi * j / pv
        phi = varphi_exponent(y, p, bits).value
        s = mp.sin(mp.pi * j / (1 - 2 * g / mp.pi))
        val = 2 * g * mp.exp(phi) / _cos_half(p) * (-1) ** j * s
        return _pr(val, bits)


def constant_c(p: ModelParams, bits: int = DEFAULT_BITS) -> PrecisionReal:
    """n^-2 coefficient: pi gamma^2 / (6 (pi - 2 gamma) cos^2) - pi^2 / (48 cos^2)."""
    with mp.workprec(bits):
        g = p.gamma
        c2 = _cos_half(p) ** 2
        val = mp.pi * g**2 / (6 * (mp.pi - 2 * g) * c2) - mp.pi**2 / (48 * c2)
        return _pr(val, bits)


def free_energy_limits(p: ModelParams, bits: int = DEFAULT_BITS) -> tuple[PrecisionReal, PrecisionReal]:
    """(F, f): limits of F_N and of N^-2 ln Z_N."""
    with mp.workprec(bits):
        g, t = p.gamma, p.t
        cz = _cos_half(p)
        F = mp.log(mp.pi / (2 * g * cz))
        f = mp.log(mp.pi * (mp.cos(2 * t) - mp.cos(2 * g)) / (4 * g * cz))
        return _pr(F, bits), _pr(f, bits)


def kappa_rational(p: ModelParams) -> Fraction | None:
    """kappa as an exact rational when gamma/pi is rational, else None."""
    r = p.gamma_over_pi
    if r is None:
        return None
    return Fraction(1, 12) - 2 * r * r / (3 * (1 - 2 * r))


def kappa_exponent(p: ModelParams, bits: int = DEFAULT_BITS) -> PrecisionReal:
    """kappa = 1/12 - 2 gamma^2 / (3 pi (pi - 2 gamma)); independent of t."""
    with mp.workprec(bits):
        g = p.gamma
        return _pr(mp.mpf(1) / 12 - 2 * g**2 / (3 * mp.pi * (mp.pi - 2 * g)), bits)


@dataclass(frozen=True)
class AsymptoticConstants:
    params: ModelParams
    R: PrecisionReal
    omega: PrecisionReal
    modes: tuple  # (j, y_j, kappa_j, c_j)
    c: PrecisionReal
    F: PrecisionReal
    f: PrecisionReal
    kappa: PrecisionReal
    kappa_exact: Fraction | None = None


def asymptotic_constants(p: ModelParams, bits: int = DEFAULT_BITS) -> AsymptoticConstants:
    R, omega = bulk_constants(p, bits)
    modes = tuple(
        (m.j, _pr(m.y, bits), _pr(m.kappa, bits), oscillation_c_j(p, m.j, bits)) for m in mode_list(p, bits)
    )
    F, f = free_energy_limits(p, bits)
    return AsymptoticConstants(
        p, R, omega, modes, constant_c(p, bits), F, f, kappa_exponent(p, bits), kappa_rational(p)
    )


def _bracket(n: int, consts: AsymptoticConstants):
    n = mp.mpf(n)
    osc = mp.fsum(cj.value * n ** (-kj.value) for _, _, kj, cj in consts.modes)
    return consts.R.value + mp.cos(n * consts.omega.value) * osc + consts.c.value / n**2


def predicted_R_n(p: ModelParams, n: int, bits: int = DEFAULT_BITS, consts: AsymptoticConstants | None = None) -> PrecisionReal:
    """(n^2/gamma^2)[R + cos(n omega) sum_j c_j n^-kappa_j + c n^-2]."""
    if n < 1:
        raise ValueError("n must be >= 1")
    consts = consts or asymptotic_constants(p, bits)
    with mp.workprec(bits):
        return _pr(mp.mpf(n) ** 2 / p.gamma**2 * _bracket(n, consts), bits)


@dataclass(frozen=True)
class ResidualRow:
    n: int
    R_n: mp.mpf
    predicted: mp.mpf
    scaled: mp.mpf  # n^2 |gamma^2 R_n / n^2 - bracket(n)|


@dataclass
class ResidualScan:
    params: ModelParams
    rows: list = field(default_factory=list)
    certificate: float | None = None

    def window_max(self, lo: int, hi: int):
        vals = [r.scaled for r in self.rows if lo <= r.n <= hi]
        if not vals:
            raise ValueError(f"no rows in [{lo}, {hi}]")
        return max(vals)

    @property
    def bounded(self) -> bool:
        """Later half of the scan never exceeds the earlier half."""
        ns = [r.n for r in self.rows]
        mid = ns[len(ns) // 2]
        return self.window_max(mid, ns[-1]) <= self.window_max(ns[0], mid)


def residual_scan(
    p: ModelParams,
    n_range: Iterable[int],
    bits: int | None = None,
    table: RecurrenceTable | None = None,
) -> ResidualScan:
    """Scaled residuals of the numerical R_n against the asymptotic bracket."""
    ns = sorted(set(int(n) for n in n_range))
    if not ns or ns[0] < 1:
        raise ValueError("n_range must be non-empty and positive")
    if table is None or table.n_max < ns[-1]:
        table = recurrence_table(p, ns[-1], bits)
    work = table.bits
    consts = asymptotic_constants(p, DEFAULT_BITS)
    scan = ResidualScan(p, certificate=table.certificate)
    with mp.workprec(work):
        g2 = p.gamma**2
        for n in ns:
            br = _bracket(n, consts)
            Rn = table.R[n]
            pred = n * n * br / g2
            scan.rows.append(ResidualRow(n, Rn, pred, abs(g2 * Rn - n * n * br)))
    return scan


def fit_kappa(points: Sequence, f_known) -> tuple[float, float]:
    """Least-squares (slope, intercept) of ln Z_N - N^2 f against ln N.

    The N^2 f subtraction runs in mpmath so large ln Z_N keep their digits.
    """
    pts = sorted((int(N), v) for N, v in points)
    if len(pts) < 5:
        raise DegenerateFit(f"need at least 5 points, got {len(pts)}")
    if len({N for N, _ in pts}) < 2:
        raise DegenerateFit("all N are equal")
    with mp.workprec(192):
        fk = mp.mpf(f_known)
        x = np.array([math.log(N) for N, _ in pts])
        y = np.array([float(mp.mpf(v) - N * N * fk) for N, v in pts])
    slope, intercept = np.polyfit(x, y, 1)
    return float(slope), float(intercept)


def special_point_log_Z(point: str, N_list: Iterable[int], bits: int = 192) -> tuple[list, mp.mpf]:
    """([(N, ln Z_N)], f) at the ASM or 3-ASM point, from the exact product formulas."""
    from .asm_exact import log_asm3_counts, log_asm_counts

    Ns = sorted(set(int(n) for n in N_list))
    with mp.workprec(bits):
        if point == "asm":
            logs = log_asm_counts(Ns, bits)
            base = mp.log(mp.sqrt(3) / 2)
            pts = [(N, N * N * base + logs[N]) for N in Ns]
            f = mp.log(mp.mpf(9) / 8)
        elif point == "asm3":
            logs = log_asm3_counts(Ns, bits)
            pts = [(N, N * mp.log(3) / 2 - N * N * mp.log(2) + logs[N]) for N in Ns]
            f = mp.log(mp.mpf(3) / 4)
        else:
            raise ValueError(f"unknown special point {point!r}")
    return pts, f
