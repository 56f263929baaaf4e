import numpy as np
import pytest

from pluscon.errors import InvalidInput, MixedGroups, ParseError, RankMismatch
from pluscon.groups import cyclic_group, symmetric_group
from pluscon.grouprings import (
    GroupRingElement,
    GroupRingMatrix,
    coefficients_to_vector,
    format_element,
    from_regular_representation,
    hstack,
    invert_matrix,
    is_invertible,
    parse_element,
    regular_representation,
    ring_determinant,
    row_action_matrix,
    vector_to_coefficients,
    vstack,
)
from pluscon.rings import RingSpec
from pluscon.snf import as_object_matrix, generic_determinant, determinant, mat_mul

Z5 = cyclic_group(5)
Z3 = cyclic_group(3)
S3 = symmetric_group(3)


def elt(text, group=Z5):
    return parse_element(text, group)


# ------------------------------------------------------------------ rings

def test_ring_spec_parse():
    assert RingSpec.parse("Z").kind == "Z"
    assert RingSpec.parse("Z/8") == RingSpec.mod(8)
    assert RingSpec.parse("Z[1/6]").inverted == (2, 3)
    assert RingSpec.parse("Z[1/2,1/3]") == RingSpec.parse("Z[1/6]")
    assert RingSpec.parse(" Z/5 ").label() == "Z/5"
    for bad in ["Z/1", "Q", "Z[1/0]", "Z[2]"]:
        with pytest.raises(InvalidInput):
            RingSpec.parse(bad)


def test_ring_spec_factors():
    zmod4 = RingSpec.mod(4)
    assert zmod4.tensor_factor(6) == 2
    assert zmod4.tensor_factor(0) == 4
    assert zmod4.tor_factor(6) == 2
    assert zmod4.tor_factor(0) == 1
    half = RingSpec.parse("Z[1/2]")
    assert half.tensor_factor(12) == 3
    assert half.tensor_factor(8) == 1
    assert half.tensor_factor(0) == 0
    assert half.is_s_number(8) and not half.is_s_number(6)
    assert RingSpec.integers().tensor_factor(12) == 12
    assert RingSpec.integers().tor_factor(5) == 1
    assert RingSpec.mod(6).is_s_number(5) and not RingSpec.mod(6).is_s_number(2)


# --------------------------------------------------------------- elements

def test_unit_identity_in_z5_ring():
    u = elt("t + t^4 - 1")
    v = elt("t^2 + t^3 - 1")
    assert u * v == GroupRingElement.one(Z5)
    assert u.augmentation() == 1
    assert u.involution() == elt("t^4 + t - 1")


def test_element_arithmetic():
    a = elt("2*t - 1")
    b = elt("t^2 + 3")
    assert a + b == elt("t^2 + 2*t + 2")
    assert a - a == GroupRingElement.zero(Z5)
    assert -a == elt("1 - 2*t")
    assert 2 * a == elt("4*t - 2")
    assert a * 0 == 0 and bool(a)
    assert (a * b).augmentation() == a.augmentation() * b.augmentation()


def test_mixed_groups_rejected():
    with pytest.raises(MixedGroups):
        elt("t", Z5) + elt("t", Z3)


def test_parse_format_roundtrip_cyclic():
    for text in ["3*t^2 - t + 1", "t", "-t^3", "0", "7", "t^-1"]:
        a = parse_element(text, Z5)
        assert parse_element(format_element(a), Z5) == a
    assert format_element(elt("3*t^2 - t + 1")) == "1 - t + 3*t^2"
    assert format_element(GroupRingElement.zero(Z5)) == "0"
    assert parse_element("t^-1", Z5) == parse_element("t^4", Z5)


def test_parse_format_indexed_form():
    a = parse_element("2*[g3] - [g0]", S3)
    assert a.coeffs == {3: 2, 0: -1}
    assert parse_element(format_element(a), S3) == a
    with pytest.raises(ParseError):
        parse_element("t + 1", S3)  # S3 is not cyclic
    with pytest.raises(ParseError):
        parse_element("[g9]", S3)
    with pytest.raises(ParseError):
        parse_element("t @ 1", Z5)


# ---------------------------------------------------------------- matrices

def mat(group, rows):
    return GroupRingMatrix(group, [[parse_element(x, group) if isinstance(x, str) else x
                                    for x in row] for row in rows])


def test_matrix_product_and_blocks():
    a = mat(Z5, [["t", "1"], ["0", "t^2"]])
    b = mat(Z5, [["1", "t"], ["t", "0"]])
    p = a @ b
    assert p[0, 0] == elt("2*t")
    assert p[0, 1] == elt("t^2")
    assert p[1, 0] == elt("t^3")
    d = a.block_diag(b)
    assert d.shape == (4, 4) and d[2, 3] == elt("t")
    assert hstack(a, b).shape == (2, 4)
    assert vstack(a, b).shape == (4, 2)
    with pytest.raises(RankMismatch):
        a @ mat(Z5, [["1"]])


def test_regular_representation_of_generator_is_permutation():
    r = regular_representation(mat(Z3, [["t"]]))
    assert r.tolist() == [[0, 0, 1], [1, 0, 0], [0, 1, 0]]


def test_regular_representation_is_multiplicative():
    rng = np.random.default_rng(7)
    for _ in range(5):
        def rand_mat():
            rows = []
            for i in range(2):
                row = []
                for j in range(2):
                    coeffs = {int(g): int(c) for g, c in
                              zip(rng.integers(0, 6, size=2), rng.integers(-2, 3, size=2))}
                    row.append(GroupRingElement(S3, coeffs))
                rows.append(row)
            return GroupRingMatrix(S3, rows)
        a, b = rand_mat(), rand_mat()
        lhs = regular_representation(a @ b)
        rhs = mat_mul(regular_representation(a), regular_representation(b))
        assert (lhs == rhs).all()


def test_regular_representation_readback():
    a = mat(S3, [["2*[g3] - [g0]", "[g1]"], ["0", "[g5] + 1"]])
    back = from_regular_representation(S3, regular_representation(a), 2, 2)
    assert back == a


def test_row_action_matches_product():
    rng = np.random.default_rng(11)
    a = mat(Z5, [["t + 1", "t^3"], ["2", "t - t^2"]])
    m = row_action_matrix(a)
    for _ in range(4):
        x = [GroupRingElement(Z5, {int(g): int(c) for g, c in
                                   zip(rng.integers(0, 5, 2), rng.integers(-3, 4, 2))})
             for _ in range(2)]
        direct = [sum((x[i] * a[i, k] for i in range(2)), GroupRingElement.zero(Z5))
                  for k in range(2)]
        coeffs = vector_to_coefficients(x)
        pushed = mat_mul(coeffs.reshape(1, -1), m)[0]
        assert list(vector_to_coefficients(direct)) == list(pushed)
        assert coefficients_to_vector(Z5, pushed) == direct


def test_invert_matrix_unit():
    u = mat(Z5, [["t + t^4 - 1"]])
    inv = invert_matrix(u)
    assert inv is not None
    assert inv[0, 0] == elt("t^2 + t^3 - 1")
    assert invert_matrix(mat(Z5, [["t - 1"]])) is None  # augmentation 0
    tri = mat(Z5, [["1", "t"], ["0", "1"]])
    inv2 = invert_matrix(tri)
    assert inv2 == mat(Z5, [["1", "-t"], ["0", "1"]])
    assert is_invertible(GroupRingMatrix.identity(S3, 3))


def test_conjugate_transpose():
    a = mat(Z5, [["t", "1 + t^2"], ["0", "3*t^4"]])
    b = mat(Z5, [["t^2", "0"], ["1", "t"]])
    assert a.conjugate_transpose().conjugate_transpose() == a
    lhs = (a @ b).conjugate_transpose()
    rhs = b.conjugate_transpose() @ a.conjugate_transpose()
    assert lhs == rhs
    assert a.conjugate_transpose()[1, 0] == elt("1 + t^3")


def test_augmentation_matrix():
    a = mat(Z5, [["t + 1", "t^3 - t"], ["2", "0"]])
    aug = a.augmentation()
    assert aug.tolist() == [[2, 0], [2, 0]]


def test_ring_determinant():
    a = mat(Z5, [["t", "1"], ["0", "t"]])
    assert ring_determinant(a) == elt("t^2")
    b = mat(Z5, [["t", "1"], ["1", "t^4"]])
    assert ring_determinant(b) == GroupRingElement.zero(Z5)
    with pytest.raises(InvalidInput):
        ring_determinant(GroupRingMatrix.identity(S3, 2))


def test_generic_determinant_matches_bareiss():
    rng = np.random.default_rng(23)
    for n in (1, 2, 3, 4):
        for _ in range(5):
            m = rng.integers(-5, 6, size=(n, n)).tolist()
            assert generic_determinant(m, 0, 1) == determinant(as_object_matrix(m))
