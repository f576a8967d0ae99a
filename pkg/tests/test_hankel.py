import mpmath as mp
import pytest

from icehankel import hankel
from icehankel.asm_exact import special_Z
from icehankel.errors import PrecisionError
from icehankel.params import m_weight, make_params, phi_value

P = make_params("1.0", "0.3")


def test_phi_jet_matches_finite_difference():
    p = make_params("pi/3", "0.2")
    with mp.workprec(256):
        jet = hankel.phi_jet(p, 4)
        assert jet.coeffs[0] == phi_value(p)
        h = mp.mpf(10) ** -25
        g = p.gamma
        phi = lambda t: mp.sin(2 * g) / (mp.sin(g + t) * mp.sin(g - t))
        fd = (phi(p.t + h) - phi(p.t - h)) / (2 * h)
        assert abs(jet.derivative(1) - fd) < mp.mpf(10) ** -20


def test_phi_jet_even_at_t0():
    jet = hankel.phi_jet(make_params("1.0", "0"), 7, bits=128)
    assert all(c == 0 for c in jet.coeffs[1::2])


def test_moments_against_quadrature():
    p = make_params("pi/4", "0")
    mt = hankel.moment_table(p, 2, 128)
    with mp.workprec(128):
        assert mt.moments[0] == phi_value(p)
        assert mt.moments[1] == 0
    with mp.workprec(128):
        mu2 = 2 * mp.quad(lambda x: x * x * m_weight(x, p), [0, 5, 20, mp.inf])
        assert abs(mt.moments[2] / mu2 - 1) < 1e-15


def test_small_taus():
    p = P
    with mp.workprec(256):
        jet = hankel.phi_jet(p, 2)
        phi, d1, d2 = jet.derivative(0), jet.derivative(1), jet.derivative(2)
        assert abs(hankel.hankel_tau(p, 1, 256).value - phi) < mp.mpf(10) ** -70
        assert abs(hankel.hankel_tau(p, 2, 256).value - (phi * d2 - d1 * d1)) < mp.mpf(10) ** -65
        assert hankel.hankel_tau(p, 0, 256).value == 1


def test_tau_is_product_of_h():
    table = hankel.recurrence_table(P, 12, 256)
    with mp.workprec(table.bits):
        for N in range(1, 11):
            tau = hankel.hankel_tau(P, N, table.bits).value
            assert abs(table.tau(N) / tau - 1) < mp.mpf(10) ** -100


def test_recurrence_basics():
    table = hankel.recurrence_table(make_params("1.0", "0"), 20)
    assert all(q == 0 for q in table.Q)
    assert table.R[0] == 0
    assert table.certificate > 30
    asm = hankel.recurrence_table(make_params("pi/3", "0"), 3)
    with mp.workprec(asm.bits):
        assert abs(asm.R[1] - mp.mpf(8) / 3) < mp.mpf(10) ** -60
    with pytest.raises(ValueError):
        hankel.recurrence_table(P, 0)


def test_partition_function_values():
    with mp.workprec(256):
        for g, t in (("pi/3", "0"), ("1.0", "0.3"), ("0.4", "-0.1")):
            p = make_params(g, t)
            assert abs(hankel.partition_Z(p, 1, 256).value - mp.sin(2 * p.gamma)) < mp.mpf(10) ** -70
        p = make_params("pi/4", "0.2")
        assert all(abs(hankel.partition_Z(p, N, 256).value - 1) < 1e-40 for N in range(1, 12))
        assert abs(hankel.log_Z_over_N2(p, 8, 256).value) < 1e-40


def test_certified_Z_matches_asm_formula():
    p = make_params("pi/3", "0")
    for N in (3, 8, 12):
        cert = hankel.certified_partition_Z(p, N, target_digits=30)
        with mp.workprec(cert.bits):
            ref = special_Z(N, "asm", cert.bits).value
            assert abs(cert.value.value / ref - 1) < mp.mpf(10) ** -29


def test_free_energy_trend_to_limits():
    # slowly convergent; just check the drift direction toward ln(9/8) and ln(3/4)
    for g, f in (("pi/3", mp.log(mp.mpf(9) / 8)), ("pi/6", mp.log(mp.mpf(3) / 4))):
        p = make_params(g, "0")
        errs = [abs(hankel.log_Z_over_N2(p, N, 512).value - f) for N in (10, 20, 40)]
        assert errs[0] > errs[1] > errs[2]


def test_toda():
    assert hankel.toda_check(P, 1, 256).residual < mp.mpf(10) ** -70
    for N in (3, 10):
        chk = hankel.toda_check(P, N, 1024)
        assert chk.residual < 1e-25
        assert chk.F2_mismatch < 1e-20
    assert float(hankel.toda_residual(P, 4, 512)) < 1e-25


def test_rescaling_identities():
    chk = hankel.rescaling_check(P, 7, 10, 512)
    for err in (chk.h_error, chk.R_error, chk.Q_error, chk.tau_error):
        assert err < mp.mpf(10) ** -100


def test_work_bound():
    with pytest.raises(PrecisionError):
        hankel.phi_jet(P, 10**6)
