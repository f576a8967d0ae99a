"""The acceptance suite: eleven criteria, each a function returning a :class:`CriterionResult`.

A criterion passes when all of its non-informational sub-checks pass.
Informational sub-checks carry extra diagnostics (for instance the endpoint
shifts against the re-derived formula) and never affect the verdict.

mpmath keeps its precision in a process-global context, so parallel runs
use processes, not threads.
"""
from __future__ import annotations

import math
import random
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable

import mpmath as mp

from . import asm_exact, asymptotics, enumerator, equilibrium, hankel
from .params import ModelParams, make_params, weights_of

__all__ = [
    "SubCheck",
    "CriterionResult",
    "CRITERIA",
    "run_criterion",
    "run_all",
    "format_result",
]


@dataclass(frozen=True)
class SubCheck:
    name: str
    passed: bool
    value: float | str
    tol: float | str | None = None
    informational: bool = False

    def line(self) -> str:
        tag = "info" if self.informational else ("ok" if self.passed else "FAIL")
        v = f"{self.value:.3e}" if isinstance(self.value, float) else str(self.value)
        t = "" if self.tol is None else (f" (tol {self.tol:g})" if isinstance(self.tol, float) else f" (tol {self.tol})")
        return f"    [{tag}] {self.name}: {v}{t}"


@dataclass
class CriterionResult:
    number: int
    name: str
    subchecks: list = field(default_factory=list)
    seconds: float = 0.0
    error: str | None = None

    @property
    def passed(self) -> bool:
        return self.error is None and all(s.passed for s in self.subchecks if not s.informational)

    @property
    def detail(self) -> str:
        if self.error is not None:
            return self.error
        failed = [s.name for s in self.subchecks if not s.passed and not s.informational]
        return "failed: " + ", ".join(failed) if failed else "all sub-checks pass"

    def add(self, name, value, tol, informational=False, ok=None) -> None:
        """Record ``value < tol`` (or ``ok`` when given)."""
        v = float(value) if not isinstance(value, str) else value
        passed = bool(ok) if ok is not None else v < tol
        self.subchecks.append(SubCheck(name, passed, v, tol, informational))


def _rel(x, y) -> mp.mpf:
    return abs(x - y) / abs(y)


def _exp10(digits: float) -> float:
    return 10.0 ** (-digits)


# ---------------------------------------------------------------------------
# 1. Hankel determinant against brute-force enumeration

C1_POINTS = (("pi/3", "0"), ("pi/6", "0"), ("pi/4", "0.2"), ("1.0", "0.3"), ("1.3", "-0.5"))


def criterion_1(bits: int = 512, n_max: int = 6, tol: float = 1e-25) -> CriterionResult:
    res = CriterionResult(1, "Hankel Z_N equals enumerated Z_N")
    for g, t in C1_POINTS:
        p = make_params(g, t)
        w = weights_of(p, bits)
        worst = mp.mpf(0)
        with mp.workprec(bits):
            for N in range(1, n_max + 1):
                zh = hankel.partition_Z(p, N, bits).value
                ze = enumerator.evaluate_Z(N, w.a, w.b, w.c, bits).value
                worst = max(worst, abs(zh / ze - 1))
        res.add(f"gamma={g}, t={t}, N<={n_max}", worst, tol)
    return res


# ---------------------------------------------------------------------------
# 2. free-fermion line

def criterion_2(bits: int = 512, tol: float = 1e-20) -> CriterionResult:
    res = CriterionResult(2, "free-fermion line gamma=pi/4")
    for t in ("0", "0.2", "-0.5"):
        p = make_params("pi/4", t)
        with mp.workprec(bits):
            worst = max(abs(hankel.partition_Z(p, N, bits).value - 1) for N in range(1, 21))
        res.add(f"|Z_N - 1|, t={t}, N<=20", worst, tol)
        table = hankel.recurrence_table(p, 30, bits)
        with mp.workprec(table.bits):
            c2 = mp.cos(2 * p.t) ** 2
            worst = max(_rel(table.R[n], 4 * n * n / c2) for n in range(1, 31))
        res.add(f"R_n = 4n^2/cos^2 2t, t={t}, n<=30", worst, tol)
    return res


# ---------------------------------------------------------------------------
# 3 and 4. the ASM and 3-ASM points

def _special_Z_check(res: CriterionResult, p: ModelParams, point: str, n_max: int, digits: int) -> None:
    worst_margin = -math.inf
    for N in range(1, n_max + 1):
        cert = hankel.certified_partition_Z(p, N, target_digits=digits)
        with mp.workprec(cert.bits):
            err = float(_rel(cert.value.value, asm_exact.special_Z(N, point, cert.bits).value))
        # the certificate promises cert.digits digits; allow one digit of slack
        worst_margin = max(worst_margin, err / _exp10(cert.digits - 1))
    res.add(f"Z_N vs product formula, N<={n_max}, error/certificate", worst_margin, 1.0)


def criterion_3(tol: float = 1e-20, digits: int = 30) -> CriterionResult:
    res = CriterionResult(3, "ASM point gamma=pi/3")
    p = make_params("pi/3", "0")
    table = hankel.recurrence_table(p, 50)
    with mp.workprec(table.bits):
        worst = max(
            _rel(table.R[n], mp.mpf(n * n * (9 * n * n - 1)) / (4 * n * n - 1)) for n in range(1, 51)
        )
    res.add("R_n = n^2(9n^2-1)/(4n^2-1), n<=50", worst, tol)
    _special_Z_check(res, p, "asm", 12, digits)
    return res


def _r_asm3(n: int) -> int:
    m, odd = divmod(n, 2)
    return 4 * (3 * m + 1) * (3 * m + 2) if odd else 36 * m * m


def criterion_4(tol: float = 1e-20, digits: int = 30) -> CriterionResult:
    res = CriterionResult(4, "3-ASM point gamma=pi/6")
    p = make_params("pi/6", "0")
    table = hankel.recurrence_table(p, 50)
    with mp.workprec(table.bits):
        worst = max(_rel(table.R[n], mp.mpf(_r_asm3(n))) for n in range(1, 51))
    res.add("R_2m = 36m^2, R_2m+1 = 4(3m+1)(3m+2), n<=50", worst, tol)
    _special_Z_check(res, p, "asm3", 12, digits)
    return res


# ---------------------------------------------------------------------------
# 5. the n^-2 constant and the first oscillation amplitude

def criterion_5(tol_c: float = 1e-12, tol_c1: float = 1e-8) -> CriterionResult:
    res = CriterionResult(5, "constants c and c_1")
    bits = asymptotics.DEFAULT_BITS
    with mp.workprec(bits):
        pi2 = mp.pi**2
        cases = [
            (make_params("pi/3", "0"), 5 * pi2 / 144, "c(pi/3, 0) = 5 pi^2/144"),
            (make_params("pi/6", "0"), -pi2 / 72, "c(pi/6, 0) = -pi^2/72"),
        ]
        cases += [
            (ModelParams.from_zeta("pi/4", z), mp.mpf(0), f"c(pi/4, zeta={z}) = 0")
            for z in ("0", "0.3", "-0.7")
        ]
        for p, want, name in cases:
            res.add(name, abs(asymptotics.constant_c(p, bits).value - want), tol_c)
        c1 = asymptotics.oscillation_c_j(make_params("pi/6", "0"), 1, bits).value
        res.add("c_1(pi/6, 0) = pi^2/72", abs(c1 - pi2 / 72), tol_c1)
    return res


# ---------------------------------------------------------------------------
# 6. the power-law exponent kappa

C6_SEED = 20240611


def criterion_6(tol_id: float = 1e-12, tol_fit: float = 1e-3, seed: int = C6_SEED) -> CriterionResult:
    res = CriterionResult(6, "exponent kappa")
    for g, want in (("pi/4", Fraction(0)), ("pi/3", Fraction(-5, 36)), ("pi/6", Fraction(1, 18))):
        got = asymptotics.kappa_rational(make_params(g, "0"))
        res.add(f"kappa({g}) = {want} exactly", str(got), None, ok=(got == want))
    rng = random.Random(seed)
    worst = mp.mpf(0)
    for _ in range(20):
        g = rng.uniform(0.05, math.pi / 2 - 0.05)
        z = rng.uniform(-0.9, 0.9)
        p = ModelParams.from_zeta(repr(g), repr(z))
        R, _ = asymptotics.bulk_constants(p)
        with mp.workprec(asymptotics.DEFAULT_BITS):
            k = asymptotics.kappa_exponent(p).value
            worst = max(worst, abs(k + asymptotics.constant_c(p).value / R.value))
    res.add("kappa = -c/R at 20 random (gamma, zeta)", worst, tol_id)
    Ns = range(200, 2001, 100)
    for point, want in (("asm", -5 / 36), ("asm3", 1 / 18)):
        pts, f = asymptotics.special_point_log_Z(point, Ns)
        slope, _ = asymptotics.fit_kappa(pts, f)
        res.add(f"fit_kappa at {point} point, N in [200, 2000]", abs(slope - want), tol_fit)
    return res


# ---------------------------------------------------------------------------
# 7. Toda equation

def criterion_7(bits: int = 1024, tol: float = 1e-25, tol_F2: float = 1e-15) -> CriterionResult:
    res = CriterionResult(7, "Toda equation at gamma=1.0, t=0.3")
    p = make_params("1.0", "0.3")
    checks = [hankel.toda_check(p, N, bits) for N in range(1, 16)]
    res.add("Toda residual, N<=15", max(c.residual for c in checks), tol)
    res.add("F_N'' vs R_N/N^2, N<=10", max(c.F2_mismatch for c in checks[:10]), tol_F2)
    return res


# ---------------------------------------------------------------------------
# 8. generic-point asymptotics

def criterion_8() -> CriterionResult:
    res = CriterionResult(8, "R_n asymptotics at gamma=0.45, zeta=0.2")
    p = ModelParams.from_zeta("0.45", "0.2")
    scan = asymptotics.residual_scan(p, range(20, 101))
    early = float(scan.window_max(20, 60))
    late = float(scan.window_max(60, 100))
    res.add("max scaled residual over n in [20, 60]", early, None, informational=True, ok=True)
    res.add("max over [60, 100] / max over [20, 60]", late / early, 1.0)
    return res


# ---------------------------------------------------------------------------
# 9. equilibrium measure

C9_POINTS = (("1.0", "0.3"), ("0.45", "0.2"), ("pi/4", "-0.5"))


def criterion_9(tol: float = 1e-10, tol_res: float = 1e-8) -> CriterionResult:
    res = CriterionResult(9, "equilibrium measure")
    for g, z in C9_POINTS:
        p = ModelParams.from_zeta(g, z)
        eq = equilibrium.endpoints(p)
        zf = p.floats()[2]
        tag = f"gamma={g}, zeta={z}"
        left, right = equilibrium.total_mass(p, eq)
        res.add(f"total mass, {tag}", abs(left + right - 1), tol)
        res.add(f"mass of [0, beta] = (1+zeta)/2, {tag}", abs(right - (1 + zf) / 2), tol)
        grid = [x for x in (eq.alpha + (eq.beta - eq.alpha) * (k + 0.5) / 100 for k in range(100)) if x != 0]
        res.add(f"equilibrium residual, 100 points, {tag}", equilibrium.equilibrium_residual(grid, p, eq), tol_res)
        zs = (2 + 1j, -3 + 0.5j, eq.beta + 2, -4 - 2j, 0.3 + 0.1j)
        worst = max(abs(equilibrium.g_prime_numeric(w, p, eq) - equilibrium.resolvent(w, p, eq)) for w in zs)
        res.add(f"g' = omega, {tag}", worst, tol)
        closed = equilibrium.h_endpoint_values(p, eq)
        num = equilibrium.h_endpoint_numeric(p, eq)
        res.add(f"h, h' at alpha and beta, {tag}", max(abs(closed[k] - num[k]) for k in closed), tol)
    return res


# ---------------------------------------------------------------------------
# 10. finite-N corrections

def criterion_10(N_end: int = 1000, tol_end: float = 0.02, tol_k: float = 1e-8, ratio: float = 1.5) -> CriterionResult:
    res = CriterionResult(10, "finite-N corrections")
    p = ModelParams.from_zeta("1.0", "0.3")
    eq = equilibrium.endpoints(p)
    oracle = equilibrium.endpoints_oracle(p, N_end).scaled_shifts(eq)
    target = equilibrium.corrected_endpoints(p, N_end).scaled_shifts(eq)
    derived = equilibrium.corrected_endpoints_derived(p, N_end).scaled_shifts(eq)
    for i, name in enumerate(("alpha", "beta")):
        res.add(f"N^2 shift of {name}: oracle {oracle[i]:.5f} vs target {target[i]:.5f}",
                abs(oracle[i] / target[i] - 1), tol_end)
    res.add("oracle vs re-derived shifts (relative)",
            max(abs(o / d - 1) for o, d in zip(oracle, derived)), tol_end, informational=True)
    res.add("int_0^inf k = 0", abs(equilibrium.k_integral(p)), tol_k)
    quad, closed = equilibrium.k_moment_C(p)
    res.add("C by quadrature vs closed form", abs(quad - closed), tol_k)
    sups = [equilibrium.prop52_scaled_sup(p, N) for N in (50, 100, 200)]
    res.add("N^2 sup|eps_N| at N=50,100,200", ", ".join(f"{s:.6f}" for s in sups), None,
            informational=True, ok=True)
    res.add("largest ratio of successive N^2 sup|eps_N|", max(b / a for a, b in zip(sups, sups[1:])), ratio)
    return res


# ---------------------------------------------------------------------------
# 11. exact ASM counts and their asymptotics

def criterion_11(tol_c2: float = 0.01, tol_parity: float = 0.02, tol_const: float = 1e-6) -> CriterionResult:
    res = CriterionResult(11, "ASM counts and asymptotics")
    bad = [N for N in range(1, 8) if asm_exact.asm_count(N) != enumerator.x_enumeration(N, 1)]
    res.add("A(N) equals enumeration, N<=7", str(bad or "none differ"), None, ok=not bad)
    bad3 = [N for N in range(1, 8) if asm_exact.asm3_count(N) != enumerator.x_enumeration(N, 3)]
    res.add("A(N;3) equals enumeration, N<=7", str(bad3 or "none differ"), None, ok=not bad3)
    rep = asm_exact.asm_asymptotic_check()
    a = float(asm_exact.A_COEFF)
    res.add(f"N^-2 coefficient of A(N): {float(rep.asm.c2):.7f} vs {a:.7f}", abs(float(rep.asm.c2) / a - 1), tol_c2)
    for fit, target, derived, name in (
        (rep.asm3_even, asm_exact.A3_EVEN_COEFF, asm_exact.A3_EVEN_COEFF_DERIVED, "even"),
        (rep.asm3_odd, asm_exact.A3_ODD_COEFF, asm_exact.A3_ODD_COEFF_DERIVED, "odd"),
    ):
        c2 = float(fit.c2)
        res.add(f"m^-2 coefficient of A(N;3), {name} N: {c2:.7f} vs {float(target):.7f}",
                abs(c2 / float(target) - 1), tol_parity)
        res.add(f"same against Stirling value {derived}", abs(c2 / float(derived) - 1), tol_parity,
                informational=True)
    res.add("A(N) constant ln C", abs(rep.asm.L - rep.lnC), tol_const)
    res.add("A(N;3) constant, even N", abs(rep.asm3_even.L - rep.lnC3), tol_const)
    res.add("A(N;3) constant, odd N", abs(rep.asm3_odd.L - rep.lnC3), tol_const)
    return res


# ---------------------------------------------------------------------------
# driver

CRITERIA: dict[int, Callable[[], CriterionResult]] = {
    1: criterion_1,
    2: criterion_2,
    3: criterion_3,
    4: criterion_4,
    5: criterion_5,
    6: criterion_6,
    7: criterion_7,
    8: criterion_8,
    9: criterion_9,
    10: criterion_10,
    11: criterion_11,
}


def run_criterion(number: int) -> CriterionResult:
    """Run one criterion, turning an exception into a failed result."""
    fn = CRITERIA[number]
    t0 = time.perf_counter()
    try:
        res = fn()
    except Exception as exc:  # a crash is a failed criterion, not a crashed suite
        res = CriterionResult(number, fn.__name__, error=f"{type(exc).__name__}: {exc}")
    res.seconds = time.perf_counter() - t0
    return res


def run_all(numbers: Iterable[int] | None = None, workers: int = 1) -> list[CriterionResult]:
    """Results in criterion order, whatever ``workers`` is."""
    nums = sorted(set(numbers)) if numbers is not None else sorted(CRITERIA)
    unknown = [n for n in nums if n not in CRITERIA]
    if unknown:
        raise ValueError(f"unknown criteria {unknown}")
    if workers <= 1:
        return [run_criterion(n) for n in nums]
    with ProcessPoolExecutor(max_workers=workers) as ex:
        return list(ex.map(run_criterion, nums))


def format_result(r: CriterionResult, verbose: bool = True, timing: bool = True) -> str:
    head = f"criterion {r.number:2d} {'PASS' if r.passed else 'FAIL'}  {r.name}"
    if timing:
        head += f"  ({r.seconds:.1f} s)"
    if not r.passed:
        head += f"  -- {r.detail}"
    if not verbose:
        return head
    return "\n".join([head] + [s.line() for s in r.subchecks])
