import cmath

import pytest

from pluscon.cyclotomic import (
    Character,
    CyclotomicInteger,
    characters,
    cyclotomic_determinant,
    cyclotomic_polynomial,
)
from pluscon.errors import InvalidInput
from pluscon.groups import alternating_group, cyclic_group, direct_product, symmetric_group
from pluscon.grouprings import parse_element


def test_cyclotomic_polynomials():
    assert cyclotomic_polynomial(1) == (-1, 1)
    assert cyclotomic_polynomial(2) == (1, 1)
    assert cyclotomic_polynomial(4) == (1, 0, 1)
    assert cyclotomic_polynomial(5) == (1, 1, 1, 1, 1)
    assert cyclotomic_polynomial(6) == (1, -1, 1)
    assert cyclotomic_polynomial(12) == (1, 0, -1, 0, 1)


def test_root_of_unity_relations():
    # 1 + z + z^2 + z^3 + z^4 = 0 in Z[zeta_5]
    s = CyclotomicInteger(5, [1, 1, 1, 1, 1])
    assert s.is_zero()
    assert s == CyclotomicInteger.zero(5)
    z = CyclotomicInteger.root_of_unity(5)
    assert (z * z.conjugate()) == 1
    assert not (z - 1).is_zero()
    prod = CyclotomicInteger.one(5)
    for _ in range(5):
        prod = prod * z
    assert prod == 1


def test_arithmetic_and_complex_value():
    z = CyclotomicInteger.root_of_unity(12)
    w = z * z - z + 3
    val = w.complex_value()
    zc = cmath.exp(2j * cmath.pi / 12)
    assert abs(val - (zc * zc - zc + 3)) < 1e-12
    assert (w - w).is_zero()
    assert (2 * z) == z + z
    with pytest.raises(InvalidInput):
        z + CyclotomicInteger.root_of_unity(5)


def test_golden_ratio_magnitudes():
    # chi(t) = zeta_5 applied to t + t^4 - 1 has magnitude (3 - sqrt 5)/2;
    # the character sending t to zeta_5^2 gives (3 + sqrt 5)/2.
    u = parse_element("t + t^4 - 1", cyclic_group(5))
    chars = characters(cyclic_group(5))
    vals = [c.evaluate_ring_element(u) for c in chars]
    assert vals[0] == 1  # trivial character = augmentation
    mags = sorted(abs(v.complex_value()) for v in vals[1:])
    golden_small = (3 - 5 ** 0.5) / 2
    golden_big = (3 + 5 ** 0.5) / 2
    assert abs(mags[0] - golden_small) < 1e-12
    assert abs(mags[1] - golden_small) < 1e-12
    assert abs(mags[2] - golden_big) < 1e-12
    assert abs(mags[3] - golden_big) < 1e-12
    # |chi(u)|^2 is exactly (7 - 3 sqrt 5)/2 for chi(t) = zeta_5, never 1.
    for v in vals[1:]:
        assert not (v.abs_squared() - 1).is_zero()


def test_characters_enumeration():
    cs = characters(cyclic_group(5))
    assert len(cs) == 5
    assert cs[0].is_trivial()
    assert not cs[1].is_trivial()
    # conjugation permutes the character list
    tables = {c.exponents for c in cs}
    for c in cs:
        assert c.conjugate().exponents in tables
    assert cs[1].conjugate().exponents == cs[4].exponents


def test_characters_factor_through_abelianization():
    assert len(characters(symmetric_group(3))) == 2
    assert len(characters(alternating_group(5))) == 1
    v4 = direct_product(cyclic_group(2), cyclic_group(2))
    cs = characters(v4)
    assert len(cs) == 4
    assert all(c.modulus == 2 for c in cs)


def test_character_multiplicativity():
    r = direct_product(cyclic_group(2), cyclic_group(4))
    for c in characters(r):
        for x in range(r.order):
            for y in range(r.order):
                assert (c(r.mul(x, y)) - c(x) * c(y)).is_zero()


def test_cyclotomic_determinant():
    z = CyclotomicInteger.root_of_unity(5)
    one = CyclotomicInteger.one(5)
    a = [[z, one], [CyclotomicInteger.zero(5), z.conjugate()]]
    assert cyclotomic_determinant(a, 5) == 1
    b = [[z, z], [z, z]]
    assert cyclotomic_determinant(b, 5).is_zero()
