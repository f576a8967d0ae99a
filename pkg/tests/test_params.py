import math
import random
from fractions import Fraction

import mpmath as mp
import pytest

from icehankel.errors import PhaseError
from icehankel.params import (
    Angle,
    ModelParams,
    f_kernel,
    m_weight,
    make_params,
    phi_value,
    potential_N,
    potential_N_prime,
    weights_of,
)


def test_angle_parsing_is_exact():
    assert Angle.parse("pi/3").pi_multiple == Fraction(1, 3)
    assert Angle.parse("-2*pi/7").pi_multiple == Fraction(-2, 7)
    assert Angle.parse(0.45).value == Fraction(45, 100)
    assert Angle.parse("0.2").value == Fraction(1, 5)
    with pytest.raises(ValueError):
        Angle.parse("pie")
    with pytest.raises(PhaseError):
        Angle.parse(float("nan"))


def test_zeta_exact_and_from_zeta():
    p = make_params("pi/3", "0")
    assert p.zeta_exact == 0 and p.t_is_zero
    q = ModelParams.from_zeta("pi/6", "0.5")
    assert q.t_angle.pi_multiple == Fraction(1, 12)
    assert q.zeta_exact == Fraction(1, 2)
    assert ModelParams.from_zeta("1.0", "0.3").zeta_exact == Fraction(3, 10)


def test_phase_window():
    make_params("pi/4", "0.1")
    with pytest.raises(PhaseError):
        make_params("pi/4", "pi/3")
    with pytest.raises(PhaseError):
        make_params("2.0", "0")
    with pytest.raises(PhaseError):
        make_params("0.5", "-0.5")


def test_weights_at_special_points():
    with mp.workprec(200):
        w = weights_of(make_params("pi/3", "0"))
        s = mp.sqrt(3) / 2
        assert abs(w.a - s) < mp.mpf(10) ** -55 and abs(w.b - s) < mp.mpf(10) ** -55
        assert abs(w.c - s) < mp.mpf(10) ** -55
        w = weights_of(make_params("pi/6", "0"))
        assert abs(w.a - 0.5) < 1e-55 and abs(w.delta + 0.5) < 1e-55
    rng = random.Random(1)
    for _ in range(10):
        t = rng.uniform(-0.7, 0.7)
        assert abs(weights_of(make_params("pi/4", repr(t)), 128).delta) < 1e-35


def test_phi_values():
    with mp.workprec(128):
        assert abs(phi_value(make_params("pi/3", "0")) - 2 * mp.sqrt(3) / 3) < 1e-35
        assert abs(phi_value(make_params("pi/4", "0")) - 2) < 1e-35
        assert phi_value(make_params("1.0", "0.3")) == phi_value(make_params("1.0", "-0.3"))


def test_m_weight():
    p = make_params("1.0", "0")
    with mp.workprec(128):
        assert abs(m_weight(0, p) - (mp.pi - 2) / mp.pi) < 1e-35
        assert abs(m_weight(1e-30, p) - m_weight(0, p)) < 1e-25
        for lam in (0.1, 1.0, 7.5, 300.0):
            v = m_weight(lam, p)
            assert v == m_weight(-lam, p)
            assert 0 < v < 1


def test_f_kernel():
    p = make_params("1.0", "0")
    with mp.workprec(128):
        assert abs(f_kernel(mp.mpf("1e-30"), p) + 1) < 1e-25
        assert abs(f_kernel(mp.mpf("-1e-30"), p) - 1) < 1e-25
        assert f_kernel(0.7, p) == -f_kernel(-0.7, p)
        q = make_params("pi/4", "0")
        for mu in (0.05, 0.5, 3.0):
            assert abs(f_kernel(mu, q) - (mp.tanh(mu) - 1)) < 1e-35


def test_potential():
    p = ModelParams.from_zeta("1.0", "0.3")
    with mp.workprec(128):
        g = p.gamma
        val = mp.exp(50 * potential_N(0, 50, p))
        assert abs(val - mp.pi / (mp.pi - 2 * g)) < 1e-30
        for mu in (-1.3, 0.4, 2.0):
            assert abs(potential_N(mu, 400, p) - (-p.zeta * mu + abs(mu))) < 0.01
        grid = [mp.mpf(x) / 10 for x in range(-30, 31) if x]
        vals = [potential_N_prime(x, 20, p) for x in grid]
        assert all(b > a for a, b in zip(vals, vals[1:]))
