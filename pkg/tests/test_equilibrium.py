import cmath
import math
import random

import numpy as np
import pytest

from icehankel import equilibrium as eqm
from icehankel.errors import BranchError
from icehankel.params import ModelParams

P = ModelParams.from_zeta("1.0", "0.3")
P0 = ModelParams.from_zeta("1.0", "0")


def test_endpoints():
    e = eqm.endpoints(P0)
    assert abs(e.alpha + math.pi) < 1e-14 and abs(e.beta - math.pi) < 1e-14
    assert abs(e.l - (2 * math.log(2 * math.pi) - 2 - 4 * math.log(2))) < 1e-14
    rng = random.Random(3)
    for _ in range(10):
        e = eqm.endpoints(ModelParams.from_zeta("1.0", repr(rng.uniform(-0.95, 0.95))))
        assert abs(-e.alpha * e.beta - math.pi**2) < 1e-12


def test_resolvent():
    e = eqm.endpoints(P)
    z = P.floats()[2]
    # endpoint values as limits from outside the support
    assert abs(eqm.resolvent(e.beta + 1e-13, P) - (1 - z) / 2) < 1e-5
    assert abs(eqm.resolvent(e.alpha - 1e-13, P) + (1 + z) / 2) < 1e-5
    for ray in (1, 1j, -1 + 1j, -1j):
        w = 1e7 * ray
        assert abs(w * eqm.resolvent(w, P) - 1) < 1e-6
    w = 0.7 + 1.3j
    assert abs(eqm.resolvent(w.conjugate(), P) - eqm.resolvent(w, P).conjugate()) < 1e-14
    with pytest.raises(BranchError):
        eqm.resolvent(0.5, P)
    # jump across the support reproduces the density
    for x in (-1.0, 0.4, 3.0):
        jump = -(eqm.resolvent(complex(x, 1e-10), P) - eqm.resolvent(complex(x, -1e-10), P)) / (2j * math.pi)
        assert abs(jump - eqm.density(x, P)) < 1e-8


def test_density():
    e = eqm.endpoints(P)
    assert eqm.density(e.alpha, P) == 0 and eqm.density(e.beta, P) == 0
    left, right = eqm.total_mass(P)
    assert abs(left + right - 1) < 1e-10
    assert abs(right - 0.65) < 1e-10
    assert abs(eqm.partial_integral(e.alpha, P) - 1) < 1e-12
    assert abs(eqm.partial_integral(e.beta, P)) < 1e-12
    assert abs(eqm.partial_integral(0.0, P) - 0.65) < 1e-12
    # rho ~ -(1/pi^2) ln|mu| at the origin; the ratio approaches 1 like 1/ln|mu|
    ratios = [eqm.density(mu, P) / (-math.log(mu) / math.pi**2) for mu in (1e-4, 1e-16, 1e-100)]
    assert abs(ratios[2] - 1) < abs(ratios[1] - 1) < abs(ratios[0] - 1)
    assert abs(ratios[2] - 1) < 0.02


def test_g_function():
    e = eqm.endpoints(P)
    z = P.floats()[2]
    for w in (1e6, 1e6j, -1e6 + 1j):
        assert abs(eqm.g_function(w, P) - cmath.log(w)) < 1e-5
    for w in (2 + 1j, -3 + 0.5j, e.beta + 2.0):
        assert abs(eqm.g_prime_numeric(w, P) - eqm.resolvent(w, P)) < 1e-10
        h = 1e-5
        fd = (eqm.g_function(w + h, P) - eqm.g_function(w - h, P)) / (2 * h)
        assert abs(fd - eqm.resolvent(w, P)) < 1e-9
    gb = eqm.g_function(e.beta + 1e-12, P).real
    assert abs(2 * gb - (1 - z) * e.beta - e.l) < 1e-5
    with pytest.raises(BranchError):
        eqm.g_function(-1.0, P)


def test_equilibrium_relations():
    for p in (P, P0):
        e = eqm.endpoints(p)
        grid = [x for x in np.linspace(e.alpha, e.beta, 102)[1:-1] if abs(x) > 1e-12]
        assert eqm.equilibrium_residual(grid, p) < 1e-8
        fine = [x for x in np.linspace(e.alpha, e.beta, 302)[1:-1] if abs(x) > 1e-12]
        assert eqm.equilibrium_residual(fine, p) < 1e-8
        assert max(eqm.variational_inequality([e.alpha - 1, e.alpha - 0.1, e.beta + 0.1, e.beta + 3], p)) < 0
        mu = e.beta / 2
        assert abs(2 * eqm.log_potential(mu, p) - eqm.potential_V(mu, p) - e.l) < 1e-10


def test_h_function():
    e = eqm.endpoints(P)
    hv = eqm.h_endpoint_values(P)
    assert abs(hv["h_beta"] - 4 / (e.beta * (e.beta - e.alpha))) < 1e-15
    num = eqm.h_endpoint_numeric(P)
    assert max(abs(num[k] - hv[k]) for k in hv) < 1e-10
    d = 1e-5
    fd = (eqm.h_function(e.beta - d, P).real - eqm.h_function(e.beta - 2 * d, P).real) / d
    assert abs(fd - hv["dh_beta"]) < 1e-4
    for x in np.linspace(e.alpha, e.beta, 40)[1:-1]:
        if abs(x) < 1e-9:
            continue
        rho = eqm.h_function(x, P).real * math.sqrt((x - e.alpha) * (e.beta - x)) / (2 * math.pi)
        assert abs(rho - eqm.density(x, P)) < 1e-10
    with pytest.raises(BranchError):
        eqm.h_function(1j, P)


def test_k_kernel():
    assert abs(eqm.k_kernel(0.8, P) - eqm.k_kernel(-0.8, P)) < 1e-14
    assert abs(eqm.k_integral(P)) < 1e-8
    quad, closed = eqm.k_moment_C(ModelParams.from_zeta("pi/4", "0"))
    assert abs(quad + math.pi**2 / 12) < 1e-10 and abs(closed + math.pi**2 / 12) < 1e-14


def test_endpoint_system_derivatives():
    e = eqm.endpoints(P)
    J = eqm.endpoint_jacobian(e.alpha, e.beta, P)
    s = math.sin(math.pi * P.floats()[2] / 2)
    assert abs(J[0, 0] - (1 + s) / (2 * math.pi**2)) < 1e-14
    assert abs(J[0, 1] - (1 - s) / (2 * math.pi**2)) < 1e-14
    h = 1e-6
    for i in range(2):
        for j in range(2):
            da = (h if j == 0 else 0.0, h if j == 1 else 0.0)
            up = eqm.endpoint_system(e.alpha + da[0], e.beta + da[1], P)[i]
            dn = eqm.endpoint_system(e.alpha - da[0], e.beta - da[1], P)[i]
            assert abs((up - dn) / (2 * h) - J[i, j]) < 1e-8
    F, G = eqm.endpoint_system(e.alpha, e.beta, P)
    assert abs(F) < 1e-14 and abs(G - 1) < 1e-14


def test_endpoints_oracle():
    e0 = eqm.endpoints(P0)
    ends = eqm.endpoints_oracle(P0, 400)
    sa, sb = ends.scaled_shifts(e0)
    # zeta = 0: symmetric shifts, and both shift formulas apply
    assert abs(sa + sb) < 1e-6
    pa, pb = eqm.corrected_endpoints(P0, 400).scaled_shifts(e0)
    assert abs(sb / pb - 1) < 0.01
    e = eqm.endpoints(P)
    da, db = eqm.corrected_endpoints_derived(P, 1000).scaled_shifts(e)
    oa, ob = eqm.endpoints_oracle(P, 1000).scaled_shifts(e)
    assert abs(oa / da - 1) < 1e-4 and abs(ob / db - 1) < 1e-4
    with pytest.raises(ValueError):
        eqm.endpoints_oracle(P, 5)


def test_density_correction():
    N = 100
    sups = [eqm.prop52_scaled_sup(P, n) for n in (50, 100)]
    assert sups[1] / sups[0] < 1.5
    # f odd and r_N symmetric at zeta = 0 make the correction even in mu, like k
    for mu in (0.01, 0.5, 2.0):
        d = eqm.density_correction(mu, N, P0) - eqm.density_correction(-mu, N, P0)
        assert abs(d) < 1e-12
    # O(N^-2) near the right endpoint
    b = eqm.endpoints(P).beta
    ends = eqm.corrected_endpoints(P, N)
    assert abs(eqm.density_correction(b - 0.3, N, P, ends)) * N * N < 1.0


def test_m_transform():
    for w in (0.5 + 0.5j, 2 - 1j):
        m = eqm.m_transform(w, P)
        assert abs(eqm.m_transform(-w, P) + m) < 1e-12
        assert abs(eqm.m_transform(w.conjugate(), P) - m.conjugate()) < 1e-12
    C, _ = eqm.k_moment_C(P)
    y = 60.0
    assert abs((1j * y) ** 2 * eqm.m_transform(1j * y, P) - (-math.pi * 1j * C)) < 1e-2
    vals = [eqm.m_transform(1j * y, P) - 2j * math.pi * cmath.log(1j * y) for y in (1e-2, 1e-4, 1e-6)]
    assert max(abs(v) for v in vals) < 20
    with pytest.raises(BranchError):
        eqm.m_transform(1.0, P)


@pytest.mark.slow
def test_m_transform_against_definition():
    w = 1.0 + 0.7j
    assert abs(eqm.m_transform(w, P) - eqm.m_transform_direct(w, P)) < 1e-8
