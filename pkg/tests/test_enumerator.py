import io
import random

import mpmath as mp
import pytest

from icehankel import enumerator as en
from icehankel.errors import CapExceeded, InvalidASM
from icehankel.hankel import partition_Z
from icehankel.params import make_params, weights_of

FIG5 = ((0, 1, 0, 0), (0, 0, 1, 0), (1, -1, 0, 1), (0, 1, 0, 0))


def test_counts():
    assert list(en.enumerate_asm(1)) == [((1,),)]
    assert [sum(1 for _ in en.enumerate_asm(N)) for N in range(1, 7)] == [1, 2, 7, 42, 429, 7436]
    assert all(en.is_asm(m) for m in en.enumerate_asm(4))


def test_cap():
    with pytest.raises(CapExceeded):
        en.weight_polynomial(9)
    assert en.weight_polynomial(3, cap=3).total == 7


def test_vertex_counts():
    v = en.asm_vertex_counts(((1,),))
    assert (v.n1, v.n2, v.n_a, v.n_b) == (0, 1, 0, 0)
    v = en.asm_vertex_counts(FIG5)
    assert v.n1 == 1 and v.n2 == 5 and v.n_a + v.n_b == 10
    for m in en.enumerate_asm(5):
        v = en.asm_vertex_counts(m)
        assert v.n2 - v.n1 == 5 and v.total == 25


def test_invalid_asm():
    assert not en.is_asm(((1, 1), (0, 0)))
    with pytest.raises(InvalidASM):
        en.asm_vertex_counts(((0, 1), (1, 1)))


def test_weight_polynomial():
    assert dict(en.weight_polynomial(1).terms) == {(0, 0, 1): 1}
    assert en.weight_polynomial(4).total == 42
    with mp.workprec(128):
        a, b, c = mp.mpf("0.3"), mp.mpf("0.7"), mp.mpf("1.1")
        z2 = en.evaluate_Z(2, a, b, c, 128).value
        assert abs(z2 - c * c * (a * a + b * b)) < 1e-35


def test_workers_do_not_change_result():
    assert en.weight_polynomial(6, workers=3).terms == en.weight_polynomial(6).terms


def test_homogeneity_and_symmetry():
    with mp.workprec(128):
        a, b, c, s = mp.mpf("0.3"), mp.mpf("0.7"), mp.mpf("1.1"), mp.mpf("1.7")
        z = en.evaluate_Z(4, a, b, c, 128).value
        assert abs(en.evaluate_Z(4, s * a, s * b, s * c, 128).value - s**16 * z) < 1e-30
        assert abs(en.evaluate_Z(4, b, a, c, 128).value - z) < 1e-30


def test_matches_hankel_at_random_points():
    rng = random.Random(7)
    for _ in range(5):
        g = rng.uniform(0.2, 1.4)
        t = rng.uniform(-0.9, 0.9) * g
        p = make_params(repr(g), repr(t))
        w = weights_of(p, 512)
        with mp.workprec(512):
            for N in (2, 5):
                ze = en.evaluate_Z(N, w.a, w.b, w.c, 512).value
                assert abs(partition_Z(p, N, 512).value / ze - 1) < 1e-25


def test_x_enumeration():
    assert en.x_enumeration(3, 3) == 9
    assert [en.x_enumeration(N, 1) for N in range(1, 7)] == [1, 2, 7, 42, 429, 7436]
    assert [en.x_enumeration(N, 2) for N in range(1, 7)] == [2 ** (N * (N - 1) // 2) for N in range(1, 7)]


def test_csv_round_trip():
    poly = en.weight_polynomial(5)
    buf = io.StringIO()
    en.write_weight_polynomial_csv(poly, buf)
    buf.seek(0)
    assert en.read_weight_polynomial_csv(buf, 5).terms == poly.terms
