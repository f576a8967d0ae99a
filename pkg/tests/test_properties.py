"""Property-based checks over random parameters."""
import math

import mpmath as mp
from hypothesis import given, settings
from hypothesis import strategies as st

from icehankel import equilibrium as eqm
from icehankel import hankel
from icehankel.asymptotics import bulk_constants, constant_c, kappa_exponent
from icehankel.enumerator import evaluate_Z
from icehankel.params import ModelParams, f_kernel, make_params, weights_of

gammas = st.floats(0.1, 1.45)
zetas = st.floats(-0.9, 0.9)


def params(g, z):
    return ModelParams.from_zeta(repr(g), repr(z))


@settings(max_examples=25, deadline=None)
@given(gammas, zetas)
def test_Z_matches_enumeration(g, z):
    p = params(g, z)
    w = weights_of(p, 256)
    with mp.workprec(256):
        for N in (3, 4):
            ze = evaluate_Z(N, w.a, w.b, w.c, 256).value
            assert abs(hankel.partition_Z(p, N, 256).value / ze - 1) < mp.mpf(10) ** -50


@settings(max_examples=25, deadline=None)
@given(gammas, zetas)
def test_pivots_positive_and_t_symmetric(g, z):
    p, q = params(g, z), params(g, -z)
    a = hankel.recurrence_table(p, 8, 128)
    b = hankel.recurrence_table(q, 8, 128)
    with mp.workprec(256):
        assert all(h > 0 for h in a.h)
        # t -> -t reflects the weight, so R_n is unchanged and Q_n flips sign
        assert all(abs(x - y) < mp.mpf(10) ** -40 * abs(x) for x, y in zip(a.R[1:], b.R[1:]))
        assert all(abs(x + y) < mp.mpf(10) ** -40 * (1 + abs(x)) for x, y in zip(a.Q, b.Q))


@settings(max_examples=30, deadline=None)
@given(gammas, zetas)
def test_kappa_identity(g, z):
    p = params(g, z)
    with mp.workprec(128):
        R = bulk_constants(p)[0].value
        assert abs(kappa_exponent(p).value + constant_c(p).value / R) < mp.mpf(10) ** -30


@settings(max_examples=30, deadline=None)
@given(gammas, st.floats(0.01, 20.0))
def test_f_kernel_odd_and_decaying(g, mu):
    p = make_params(repr(g), "0")
    with mp.workprec(96):
        v = f_kernel(mu, p)
        assert v == -f_kernel(-mu, p)
        q = mp.pi / (2 * p.gamma)
        r = q - 1
        # each term of f is 2s/(e^{2s mu} - 1); both decay at least like e^{-2 r mu}
        bound = 2 * (q + r) * mp.exp(-2 * r * mu) / -mp.expm1(-2 * r * mu)
        assert abs(v) <= bound


@settings(max_examples=20, deadline=None)
@given(st.floats(0.2, 1.4), zetas)
def test_equilibrium_mass_and_endpoints(g, z):
    p = params(g, z)
    e = eqm.endpoints(p)
    assert abs(-e.alpha * e.beta - math.pi**2) < 1e-9
    assert abs(eqm.partial_integral(0.0, p) - (1 + p.floats()[2]) / 2) < 1e-12
    left, right = eqm.total_mass(p)
    assert abs(left + right - 1) < 1e-10
