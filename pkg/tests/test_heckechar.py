import math
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from congr.exact import kronecker, primes_upto
from congr.heckechar import (
    CLASS_NUMBER_ONE, HeckeCharSpec, ImagQuadField, QuadInt, Unsupported, UnitObstruction,
    UnsupportedField, cm_form, ideals_of_norm, shift_identity_points, unit_group_order_mod,
)

K = ImagQuadField(-3)
PRINTED_G = {1: 1, 3: -27, 4: 64, 7: -286, 9: 729, 12: -1728, 13: 506, 16: 4096, 19: -10582}


def test_field_data():
    assert K.unit_order == 6 and K.D == 3
    assert ImagQuadField(-4).unit_order == 4
    assert ImagQuadField(-7).unit_order == 2
    with pytest.raises(UnsupportedField):
        ImagQuadField(-20)
    with pytest.raises(UnsupportedField):
        ImagQuadField(-5)


def test_ideals_of_norm_examples():
    (a,) = ideals_of_norm(K, 3)
    assert a.norm() == 3 and a.x == 0
    sevens = ideals_of_norm(K, 7)
    assert len(sevens) == 2
    units = [u for u in (QuadInt(x, y, -3) for x in range(-2, 3) for y in range(-2, 3))
             if (u.x + 3 * u.y) % 2 == 0 and u.norm() == 1]
    for target in (QuadInt(5, 1, -3), QuadInt(5, -1, -3)):
        assert sum(any(target * u == a for u in units) for a in sevens) == 1
    assert ideals_of_norm(K, 2) == []


@given(st.integers(1, 3000), st.sampled_from(CLASS_NUMBER_ONE))
def test_ideal_count_is_divisor_sum(j, d):
    field = ImagQuadField(d)
    expected = sum(kronecker(d, e) for e in range(1, j + 1) if j % e == 0)
    assert len(ideals_of_norm(field, j)) == expected


def test_cm_form_printed_coefficients():
    g = cm_form(HeckeCharSpec(K, 6), 19)
    assert g.weight == 7 and g.level == 3
    for n in range(1, 20):
        assert g[n] == PRINTED_G.get(n, 0)


def test_a13_by_newton_recursion():
    # power sums of the roots of x^2 - 7x + 13
    p = [2, 7]
    for _ in range(5):
        p.append(7 * p[-1] - 13 * p[-2])
    assert cm_form(HeckeCharSpec(K, 6), 13)[13] == p[6] == 506


def test_cm_vanishing_and_ramanujan(g):
    for p in primes_upto(g.truncation):
        kind = K.splitting(p)
        if kind == "inert":
            assert g[p] == 0
        elif kind == "split":
            assert abs(g[p]) <= 2 * p**3


@pytest.mark.parametrize("d,t", [(-4, 4), (-4, 8), (-7, 2), (-7, 6), (-8, 4), (-11, 2)])
def test_other_fields_give_eigenforms(d, t):
    field = ImagQuadField(d)
    f = cm_form(HeckeCharSpec(field, t), 300)
    assert f.weight == t + 1 and f.level == -d and f[1] == 1
    for p in primes_upto(300):
        if field.splitting(p) == "inert":
            assert f[p] == 0
    for m in range(2, 17):
        for n in range(2, 300 // m + 1):
            if math.gcd(m, n) == 1:
                assert f[m * n] == f[m] * f[n]


def test_unit_obstruction():
    with pytest.raises(UnitObstruction):
        HeckeCharSpec(K, 4)
    with pytest.raises(Unsupported):
        HeckeCharSpec(K, 6, conductor=3)


def test_cm_form_needs_negative_u():
    with pytest.raises(ValueError):
        cm_form(HeckeCharSpec(K, -6), 10)


def test_shift_identity():
    assert shift_identity_points(-6, [8, 7, 6, 5, 4]) == [11, 10, 9, 8, 7]
    assert shift_identity_points(0, [Fraction(1, 2), 3]) == [Fraction(1, 2), 3]
    assert shift_identity_points(-2, [5]) == [6]


def test_unit_group_orders():
    assert unit_group_order_mod(K, 3) == 6
    assert unit_group_order_mod(K, 2) == 3
    assert unit_group_order_mod(K, 7) == 36
    assert unit_group_order_mod(K, 9) == 54


def test_unit_group_order_by_enumeration():
    for N in (2, 3, 4, 5, 6, 7, 9):
        # O_K = Z[w], w^2 + w + 1 = 0; a + b w is a unit mod N iff its norm is
        count = sum(1 for a in range(N) for b in range(N) if math.gcd(a * a - a * b + b * b, N) == 1)
        assert unit_group_order_mod(K, N) == count


def test_quadint_arithmetic():
    a = QuadInt(5, 1, -3)
    assert a.norm() == 7
    assert (a * a.conj()).x == 14 and (a * a.conj()).y == 0
