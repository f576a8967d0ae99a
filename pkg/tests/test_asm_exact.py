from fractions import Fraction

import mpmath as mp

from icehankel import asm_exact as ae
from icehankel.enumerator import x_enumeration
from icehankel.hankel import partition_Z
from icehankel.params import make_params


def test_counts():
    assert [ae.asm_count(N) for N in range(1, 8)] == [1, 2, 7, 42, 429, 7436, 218348]
    assert ae.asm_count(500) > 0  # integrality is asserted inside
    assert [ae.asm3_count(N) for N in range(1, 5)] == [1, 2, 9, 90]
    assert all(ae.asm3_count(N) == x_enumeration(N, 3) for N in range(1, 8))
    assert all(ae.asm_count(N) == x_enumeration(N, 1) for N in range(1, 8))


def test_special_Z():
    with mp.workprec(512):
        for N in (1, 4, 9):
            assert abs(ae.special_Z(N, "asm", 512).value / partition_Z(make_params("pi/3", "0"), N, 512).value - 1) < 1e-60
            assert abs(ae.special_Z(N, "asm3", 512).value / partition_Z(make_params("pi/6", "0"), N, 512).value - 1) < 1e-60
        assert ae.special_Z(7, "free_fermion").value == 1


def test_superfactorial():
    assert [ae.superfactorial(N) for N in range(1, 6)] == [1, 1, 2, 12, 288]
    chk = ae.superfactorial_expansion_check(200)
    assert abs(float(chk.scaled) + 1) < 0.01


def test_zeta_prime():
    with mp.workprec(160):
        assert abs(ae.zeta_prime_minus1(160) - mp.zeta(-1, derivative=1)) < mp.mpf(10) ** -40


def test_gamma0():
    a = ae.gamma0_partial(2000)
    b = ae.gamma0_partial(4000)
    assert abs(a - b) < 1e-10
    with mp.workprec(128):
        assert abs(b - ae.gamma0_limit(128)) < 1e-10
        # the raw partial sums converge like 1/M
        e1 = abs(ae.gamma0_partial(100, accelerate=False) - ae.gamma0_limit(128))
        e2 = abs(ae.gamma0_partial(200, accelerate=False) - ae.gamma0_limit(128))
        assert 1.6 < e1 / e2 < 2.4


def test_asymptotic_report():
    rep = ae.asm_asymptotic_check()
    a = float(ae.A_COEFF)
    assert abs(float(rep.asm.c2) / a - 1) < 0.01
    assert abs(float(rep.asm.L - rep.lnC)) < 1e-6
    assert abs(float(rep.asm3_even.L - rep.lnC3)) < 1e-6
    assert abs(float(rep.asm3_odd.L - rep.lnC3)) < 1e-6
    assert abs(float(rep.ratio_drift)) < 1e-4
    # the parity coefficients agree with the Stirling-series values
    assert abs(float(rep.asm3_even.c2) / float(ae.A3_EVEN_COEFF_DERIVED) - 1) < 0.001
    assert abs(float(rep.asm3_odd.c2) / float(ae.A3_ODD_COEFF_DERIVED) - 1) < 0.001
    # and the two reference values sit exactly 1/81 above them
    assert ae.A3_EVEN_COEFF - ae.A3_EVEN_COEFF_DERIVED == Fraction(1, 81)
    assert ae.A3_ODD_COEFF - ae.A3_ODD_COEFF_DERIVED == Fraction(1, 81)


def test_gamma0_is_the_expansion_constant():
    # sum_{n<=N} (N-n) ln(1 - 1/(9n^2)) = N ln(3 sqrt3/(2 pi)) + ln(N)/9 + gamma0 + O(N^-2)
    N = 4000
    with mp.workprec(128):
        s = mp.fsum((N - n) * mp.log1p(-mp.mpf(1) / (9 * n * n)) for n in range(1, N + 1))
        rest = s - N * mp.log(3 * mp.sqrt(3) / (2 * mp.pi)) - mp.log(N) / 9
        assert abs(rest - ae.gamma0_constant(128)) < 1e-6
        assert abs(ae.gamma0_constant(128) - ae.gamma0_limit(128) - mp.mpf(1) / 9) < 1e-30
