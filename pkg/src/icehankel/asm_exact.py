"""Exact ASM counts at the ice and 3-enumeration points and their large-N asymptotics."""
from __future__ import annotations

import math
import threading
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import mpmath as mp

from .errors import NonConvergence
from .precision import PrecisionReal

__all__ = [
    "asm_count",
    "asm3_count",
    "special_Z",
    "superfactorial",
    "superfactorial_expansion_check",
    "SuperfactorialCheck",
    "zeta_prime_minus1",
    "gamma0_constant",
    "gamma0_limit",
    "gamma0_partial",
    "a12_constant_estimate",
    "log_asm_counts",
    "log_asm3_counts",
    "AsymptoticFit",
    "ASMAsymptoticReport",
    "richardson_fit",
    "asm_asymptotic_check",
    "A_COEFF",
    "A3_EVEN_COEFF",
    "A3_ODD_COEFF",
    "A3_EVEN_COEFF_DERIVED",
    "A3_ODD_COEFF_DERIVED",
]

A_COEFF = Fraction(-115, 15552)
A3_EVEN_COEFF = Fraction(77, 7776)
A3_ODD_COEFF = Fraction(131, 7776)
# from Stirling's series for the m!/(3m)! and Gamma(m + 2/3) factors; the
# reference pair above sits 1/81 above these
A3_EVEN_COEFF_DERIVED = Fraction(-19, 7776)
A3_ODD_COEFF_DERIVED = Fraction(35, 7776)

_lock = threading.Lock()
_asm_cache: list[int] = [1]  # _asm_cache[N] = A(N); A(0) = 1


def asm_count(N: int) -> int:
    """A(N) = prod_{n<N} (3n+1)! n! / ((2n)! (2n+1)!), exactly."""
    if N < 1:
        raise ValueError("N must be >= 1")
    with _lock:
        while len(_asm_cache) <= N:
            n = len(_asm_cache) - 1
            ratio = Fraction(
                math.factorial(3 * n + 1) * math.factorial(n),
                math.factorial(2 * n) * math.factorial(2 * n + 1),
            )
            nxt = _asm_cache[-1] * ratio
            if nxt.denominator != 1:
                raise ArithmeticError(f"A({n + 1}) came out non-integral")
            _asm_cache.append(nxt.numerator)
        return _asm_cache[N]


def asm3_count(N: int) -> int:
    """A(N; 3) from the odd closed form and the odd-to-even step; A(1;3) = 1, A(2;3) = 2."""
    if N < 1:
        raise ValueError("N must be >= 1")
    m, odd = divmod(N - 1, 2)
    # A(2m+1; 3) = 3^{m(m+1)} prod_{k=1}^m [(3k-1)!/(m+k)!]^2
    val = Fraction(3 ** (m * (m + 1)))
    for k in range(1, m + 1):
        val *= Fraction(math.factorial(3 * k - 1), math.factorial(m + k)) ** 2
    if odd:
        # A(2m+2; 3) = 3^m (3m+2)! m! / ((2m+1)!)^2 A(2m+1; 3)
        val *= Fraction(
            3**m * math.factorial(3 * m + 2) * math.factorial(m),
            math.factorial(2 * m + 1) ** 2,
        )
    if val.denominator != 1:
        raise ArithmeticError(f"A({N};3) came out non-integral")
    return val.numerator


def special_Z(N: int, point: str, bits: int = 256) -> PrecisionReal:
    """Z_N at ``asm`` (gamma=pi/3), ``asm3`` (gamma=pi/6) or ``free_fermion`` (gamma=pi/4), t=0."""
    with mp.workprec(bits):
        if point == "asm":
            val = (mp.sqrt(3) / 2) ** (N * N) * asm_count(N)
        elif point == "asm3":
            val = mp.sqrt(3) ** N / mp.mpf(2) ** (N * N) * asm3_count(N)
        elif point == "free_fermion":
            val = mp.mpf(1)
        else:
            raise ValueError(f"unknown special point {point!r}")
        return PrecisionReal(+val, bits)


def superfactorial(N: int) -> int:
    """a(N) = prod_{n=1}^{N-1} n!"""
    if N < 1:
        raise ValueError("N must be >= 1")
    out, f = 1, 1
    for n in range(1, N):
        f *= n
        out *= f
    return out


# ---------------------------------------------------------------------------
# constants

def _cvz_alternating(terms, n: int):
    """Cohen-Villegas-Zagier acceleration of sum_k (-1)^k a_k for several sequences at once."""
    d = (3 + mp.sqrt(8)) ** n
    d = (d + 1 / d) / 2
    b = mp.mpf(-1)
    c = -d
    sums = [mp.mpf(0) for _ in terms]
    for k in range(n):
        c = b - c
        for i, a in enumerate(terms):
            sums[i] += c * a(k)
        b = (k + n) * (k - n) * b / ((k + mp.mpf(1) / 2) * (k + 1))
    return [s / d for s in sums]


def zeta_prime_minus1(bits: int = 256) -> mp.mpf:
    """zeta'(-1) from the alternating eta series at s = 2.

    ``eta(2)`` and ``eta'(2)`` are summed with CVZ acceleration, turned into
    ``zeta'(2)``, and mapped to s = -1 by the functional equation
    ``zeta'(-1) = (1 - gamma_E - ln 2 pi)/12 + zeta'(2)/(2 pi^2)``.
    """
    with mp.workprec(bits + 32):
        n = int(bits / 2.5) + 10
        eta2, deta2 = _cvz_alternating(
            [
                lambda k: 1 / mp.mpf(k + 1) ** 2,
                lambda k: -mp.log(k + 1) / mp.mpf(k + 1) ** 2,
            ],
            n,
        )
        # zeta = eta / (1 - 2^{1-s}); at s = 2 the factor is 1/2
        dzeta2 = 2 * deta2 - 2 * mp.log(2) * eta2
        val = (1 - mp.euler - mp.log(2 * mp.pi)) / 12 + dzeta2 / (2 * mp.pi**2)
    with mp.workprec(bits):
        return +val


def gamma0_limit(bits: int = 256) -> mp.mpf:
    """lim_N [-sum_{n<=N} n ln(1 - 1/(9n^2)) - ln(N)/9], summed in closed form.

    ``-n ln(1 - 1/(9 n^2)) = sum_k 1/(k 9^k n^{2k-1})``; the k = 1 part against
    ``ln N / 9`` gives Euler's constant over 9, the rest are zeta values.
    """
    with mp.workprec(bits + 16):
        tail = mp.nsum(lambda k: mp.zeta(2 * k - 1) / (k * mp.mpf(9) ** k), [2, mp.inf])
        val = mp.euler / 9 + tail
    with mp.workprec(bits):
        return +val


def gamma0_constant(bits: int = 256) -> mp.mpf:
    """Constant term of sum_{n<=N} (N-n) ln(1 - 1/(9n^2)) - N ln(3 sqrt3/(2 pi)) - ln(N)/9.

    Equals :func:`gamma0_limit` plus 1/9: the factor N multiplying the
    tail sum_{n>N} ln(1 - 1/(9 n^2)) ~ -1/(9N) leaves a finite 1/9.
    """
    with mp.workprec(bits + 8):
        val = gamma0_limit(bits + 8) + mp.mpf(1) / 9
    with mp.workprec(bits):
        return +val


def gamma0_partial(M: int, accelerate: bool = True, bits: int = 128) -> mp.mpf:
    """Partial version of :func:`gamma0_limit` truncated at M, optionally tail-corrected.

    The correction adds the Euler-Maclaurin tails of 1/(9n) and 1/(162 n^3):
    ``-1/(18M) + 1/(108M^2) + 1/(324M^2) - 1/(324M^3)``, leaving O(M^-4).
    """
    if M < 1:
        raise ValueError("M must be >= 1")
    with mp.workprec(bits):
        s = mp.fsum(-n * mp.log1p(-1 / (9 * mp.mpf(n) ** 2)) for n in range(1, M + 1))
        val = s - mp.log(M) / 9
        if accelerate:
            M = mp.mpf(M)
            val += -1 / (18 * M) + 1 / (108 * M**2) + 1 / (324 * M**2) - 1 / (324 * M**3)
        return val


def a12_constant_estimate(N: int, bits: int = 128) -> mp.mpf:
    """sum_{n<=N} (N-n) ln(1 - 1/(9n^2)) - N ln(3 sqrt3/(2pi)) - ln(N)/9 - 2/(243 N^2)."""
    with mp.workprec(bits):
        s = mp.fsum((N - n) * mp.log1p(-1 / (9 * mp.mpf(n) ** 2)) for n in range(1, N + 1))
        return s - N * mp.log(3 * mp.sqrt(3) / (2 * mp.pi)) - mp.log(N) / 9 - mp.mpf(2) / (243 * N * N)


@dataclass(frozen=True)
class SuperfactorialCheck:
    N: int
    residual: mp.mpf
    zeta_prime: mp.mpf
    scaled: mp.mpf  # 240 N^2 (residual - zeta'(-1)), tends to -1


def superfactorial_expansion_check(N: int, bits: int = 256) -> SuperfactorialCheck:
    """ln a(N) minus N^2 ln(N)/2 - 3N^2/4 + N ln(2pi)/2 - ln(N)/12."""
    if N < 2:
        raise ValueError("N must be >= 2")
    with mp.workprec(bits):
        lna = mp.fsum(mp.loggamma(n + 1) for n in range(1, N))
        N_ = mp.mpf(N)
        res = lna - (N_**2 * mp.log(N_) / 2 - 3 * N_**2 / 4 + N_ * mp.log(2 * mp.pi) / 2 - mp.log(N_) / 12)
        zp = zeta_prime_minus1(bits)
        return SuperfactorialCheck(N, res, zp, 240 * N_**2 * (res - zp))


# ---------------------------------------------------------------------------
# logarithms of the counts for large N

def _log_factorials(M: int) -> list:
    lf = [mp.mpf(0)]
    for m in range(1, M + 1):
        lf.append(lf[-1] + mp.log(m))
    return lf


def log_asm_counts(N_list: Iterable[int], bits: int = 192) -> dict:
    """{N: ln A(N)} from cumulative log-factorials, in one pass over n."""
    Ns = sorted(set(int(n) for n in N_list))
    if not Ns or Ns[0] < 1:
        raise ValueError("N values must be >= 1")
    out = {}
    with mp.workprec(bits + 2 * max(Ns).bit_length() + 16):
        lf = _log_factorials(3 * Ns[-1] + 2)
        acc = mp.mpf(0)
        want = iter(Ns)
        target = next(want)
        for n in range(Ns[-1]):
            acc += lf[3 * n + 1] + lf[n] - lf[2 * n] - lf[2 * n + 1]
            if n + 1 == target:
                out[target] = acc
                target = next(want, None)
    with mp.workprec(bits):
        return {k: +v for k, v in out.items()}


def log_asm3_counts(N_list: Iterable[int], bits: int = 192) -> dict:
    """{N: ln A(N; 3)} through the closed product forms for both parities."""
    Ns = sorted(set(int(n) for n in N_list))
    if not Ns or Ns[0] < 1:
        raise ValueError("N values must be >= 1")
    out = {}
    with mp.workprec(bits + 2 * max(Ns).bit_length() + 16):
        M = Ns[-1]
        lf = _log_factorials(3 * M + 3)
        ln3 = mp.log(3)
        # S[j] = sum_{i<j} ln i!  and  T[m] = sum_{k<m} ln (3k+2)!
        S = [mp.mpf(0)]
        for j in range(2 * M + 2):
            S.append(S[-1] + lf[j])
        T = [mp.mpf(0)]
        for k in range(M // 2 + 1):
            T.append(T[-1] + lf[3 * k + 2])
        for N in Ns:
            m = N // 2
            if N % 2 == 0:
                # sum_{k<m} ln (m+k)! = S[2m] - S[m]
                out[N] = m * m * ln3 + lf[m] - lf[3 * m] + 2 * (T[m] - (S[2 * m] - S[m]))
            else:
                out[N] = (m * m + m) * ln3 + 2 * (T[m] - (S[2 * m + 1] - S[m + 1]))
    with mp.workprec(bits):
        return {k: +v for k, v in out.items()}


# ---------------------------------------------------------------------------
# Richardson fits

@dataclass(frozen=True)
class AsymptoticFit:
    """Three-point fit r(x) = L + c2/x^2 + c3/x^3 at the largest three abscissae."""

    xs: tuple
    L: mp.mpf
    c2: mp.mpf
    c3: mp.mpf


def richardson_fit(xs: Sequence, rs: Sequence) -> AsymptoticFit:
    if len(xs) < 3:
        raise ValueError("need three points")
    xs, rs = list(xs)[-3:], list(rs)[-3:]
    A = mp.matrix([[1, mp.mpf(1) / x**2, mp.mpf(1) / x**3] for x in xs])
    sol = mp.lu_solve(A, mp.matrix(rs))
    return AsymptoticFit(tuple(xs), sol[0], sol[1], sol[2])


@dataclass(frozen=True)
class ASMAsymptoticReport:
    """Large-N fits of ln A(N) and ln A(N; 3) against the closed-form leading terms.

    ``ratio_drift`` is ``r(2N)/r(N) - 1`` at the largest N, with r the
    normalized count A(N) (4/(3 sqrt3))^{N^2} N^{5/36}.
    """

    asm: AsymptoticFit
    asm3_even: AsymptoticFit
    asm3_odd: AsymptoticFit
    lnC: mp.mpf
    lnC3: mp.mpf
    ratio_drift: mp.mpf


def asm_normalized_log(N_list: Sequence[int], bits: int = 192) -> dict:
    """{N: ln A(N) - N^2 ln(3 sqrt3/4) + (5/36) ln N}."""
    logs = log_asm_counts(N_list, bits)
    with mp.workprec(bits):
        base = mp.log(3 * mp.sqrt(3) / 4)
        return {N: v - N * N * base + mp.mpf(5) / 36 * mp.log(N) for N, v in logs.items()}


def asm3_normalized_log(N_list: Sequence[int], bits: int = 192) -> dict:
    """{N: ln A(N;3) - N^2 ln(3/2) + (N/2) ln 3 - (1/18) ln N}."""
    logs = log_asm3_counts(N_list, bits)
    with mp.workprec(bits):
        l32, l3 = mp.log(mp.mpf(3) / 2), mp.log(3)
        return {N: v - N * N * l32 + N * l3 / 2 - mp.log(N) / 18 for N, v in logs.items()}


def asm_asymptotic_check(N_list: Sequence[int] = (200, 400, 800), bits: int = 192) -> ASMAsymptoticReport:
    """Fit the N^-2 corrections of A(N) and A(N; 3) (even and odd N, in powers of m).

    For A(N;3) the abscissae are m = N // 2 for N in ``N_list``.
    """
    Ns = sorted(int(n) for n in N_list)
    if len(Ns) < 3:
        raise ValueError("need at least three N values")
    ms = [N // 2 for N in Ns]
    r = asm_normalized_log(Ns + [2 * Ns[-1]], bits)
    r3 = asm3_normalized_log([2 * m for m in ms] + [2 * m + 1 for m in ms], bits)
    with mp.workprec(bits):
        fit_a = richardson_fit(Ns, [r[N] for N in Ns])
        fit_even = richardson_fit(ms, [r3[2 * m] for m in ms])
        fit_odd = richardson_fit(ms, [r3[2 * m + 1] for m in ms])
        zp = zeta_prime_minus1(bits)
        g0 = gamma0_constant(bits)
        lnC = mp.log(2) / 12 + 3 * zp + g0
        lnC3 = (
            mp.mpf(10) / 9 * mp.log(2)
            + mp.log(mp.pi)
            - 2 * mp.log(mp.gamma(mp.mpf(2) / 3))
            - mp.log(3) / 2
            + 6 * zp
            + 2 * g0
        )
        drift = mp.expm1(r[2 * Ns[-1]] - r[Ns[-1]])
    return ASMAsymptoticReport(fit_a, fit_even, fit_odd, lnC, lnC3, drift)
