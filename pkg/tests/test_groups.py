import numpy as np
import pytest

from pluscon import catalog
from pluscon.config import Budgets
from pluscon.errors import InvalidInput, NotNormal, OrderTooLarge, ParseError
from pluscon.groups import (
    FiniteGroupRealization,
    FinitePresentation,
    GroupHom,
    RealizationHom,
    Subgroup,
    abelian_basis,
    abelian_coordinates,
    abelian_invariants,
    abelianization,
    abelianized_realization,
    alternating_group,
    commutator_subgroup_with,
    conjugacy_classes,
    cyclic_generator,
    cyclic_group,
    derived_subgroup,
    dihedral_group,
    direct_product,
    enumerate_perfect_normal_subgroups,
    find_generators,
    from_permutations,
    generated_subgroup,
    hom_from_generator_images,
    is_cyclic,
    is_perfect,
    is_relatively_perfect,
    normal_closure,
    quaternion_group,
    quotient_realization,
    symmetric_group,
    trivial_group,
    validate_realization,
    weight_le_one,
    whole_group,
)
from pluscon.words import format_word, free_reduce, parse_word, word_inverse


# ----------------------------------------------------------------- words

def test_parse_word_powers_and_parens():
    w = parse_word("(a b)^2", ["a", "b"])
    assert w == ((0, 1), (1, 1), (0, 1), (1, 1))
    assert parse_word("x^-3", ["x"]) == ((0, -1),) * 3
    assert parse_word("a b^0 a", ["a", "b"]) == ((0, 1), (0, 1))


def test_parse_word_errors():
    with pytest.raises(ParseError):
        parse_word("a c", ["a", "b"])
    with pytest.raises(ParseError):
        parse_word("(a b", ["a", "b"])
    with pytest.raises(ParseError):
        parse_word("a $ b", ["a", "b"])
    with pytest.raises(ParseError):
        parse_word("^2", ["a"])


def test_format_word_roundtrip():
    for text in ["a b a^-1 b^-1", "x^3", "a^-2 b a^2", ""]:
        w = parse_word(text, ["a", "b", "x"])
        assert parse_word(format_word(w, ["a", "b", "x"]), ["a", "b", "x"]) == w


def test_free_reduce_and_inverse():
    w = parse_word("a b b^-1 a^-1 x", ["a", "b", "x"])
    assert free_reduce(w) == ((2, 1),)
    assert free_reduce(w + word_inverse(w)) == ()


# ---------------------------------------------------------- realizations

def test_cyclic_group_basics():
    r = cyclic_group(6)
    assert r.order == 6
    assert validate_realization(r)
    assert r.is_abelian()
    assert r.element_order(1) == 6
    assert r.element_order(2) == 3
    assert r.inv(1) == 5
    assert is_cyclic(r) and cyclic_generator(r) == 1
    assert r.exponent() == 6


def test_identity_must_be_index_zero():
    with pytest.raises(InvalidInput):
        FiniteGroupRealization([[1, 0], [0, 1]])


def test_nonassociative_loop_rejected():
    # A Latin square with identity and two-sided inverses that is not a
    # group: (1*1)*2 = 2 but 1*(1*2) = 4.
    loop = [
        [0, 1, 2, 3, 4],
        [1, 0, 3, 4, 2],
        [2, 4, 0, 1, 3],
        [3, 2, 4, 0, 1],
        [4, 3, 1, 2, 0],
    ]
    r = FiniteGroupRealization(loop)
    assert not validate_realization(r)


def test_validate_order_bound():
    r = cyclic_group(12)
    with pytest.raises(OrderTooLarge):
        validate_realization(r, Budgets(validate_order_bound=10))


def test_symmetric_and_alternating_orders():
    assert symmetric_group(3).order == 6
    assert symmetric_group(4).order == 24
    assert alternating_group(4).order == 12
    a5 = alternating_group(5)
    assert a5.order == 60
    assert validate_realization(a5)
    assert not a5.is_abelian()
    assert len(conjugacy_classes(a5)) == 5


def test_dihedral_and_quaternion():
    d4 = dihedral_group(4)
    assert d4.order == 8 and validate_realization(d4)
    q8 = quaternion_group()
    assert q8.order == 8 and validate_realization(q8)
    assert sorted(q8.element_order(x) for x in range(8)) == [1, 2, 4, 4, 4, 4, 4, 4]
    # Q8 has a unique element of order 2, the dihedral group has five.
    assert sum(1 for x in range(8) if d4.element_order(x) == 2) == 5


def test_direct_product_indexing():
    r = direct_product(cyclic_group(2), cyclic_group(3))
    assert r.order == 6
    assert validate_realization(r)
    # (1,0) has index 3, (0,1) has index 1; the product (1,1) is index 4.
    assert r.mul(3, 1) == 4
    assert is_cyclic(r)


def test_from_permutations_records_generators():
    r = from_permutations([[1, 0, 2], [0, 2, 1]])
    assert r.order == 6
    assert r.generators and all(0 <= g < 6 for g in r.generators)
    assert r.permutations[0] == (0, 1, 2)


def test_find_generators():
    assert find_generators(cyclic_group(8)) == [1]
    gens = find_generators(direct_product(cyclic_group(2), cyclic_group(2)))
    assert len(generated_subgroup(
        direct_product(cyclic_group(2), cyclic_group(2)), gens).members) == 4


# --------------------------------------------------------- presentations

def test_abelianization_examples():
    assert abelianization(catalog.cyclic_presentation(5)) == [5]
    assert abelianization(catalog.free_abelian_rank2_presentation()) == [0, 0]
    assert abelianization(catalog.a5_presentation()) == []
    assert abelianization(catalog.trefoil_presentation()) == [0]
    assert abelianization(catalog.klein_four_presentation()) == [2, 2]


def test_presentation_validation():
    with pytest.raises(InvalidInput):
        FinitePresentation(("x", "x"), ())
    with pytest.raises(InvalidInput):
        FinitePresentation(("x",), (((1, 1),),))


def test_group_hom_checks_relators():
    pres, real, hom = catalog.realize_cyclic(4)
    assert hom.evaluate(parse_word("t^2", ["t"])) == 2
    assert hom.is_surjective()
    with pytest.raises(InvalidInput):
        GroupHom(catalog.cyclic_presentation(3), cyclic_group(4), (1,))


def test_a5_triangle_presentation_images():
    pres, real, hom = catalog.realize_a5()
    a, b = hom.images
    assert real.element_order(a) == 2
    assert real.element_order(b) == 3
    assert real.element_order(real.mul(a, b)) == 5
    assert hom.is_surjective()


def test_realization_hom_multiplicativity():
    s3 = symmetric_group(3)
    z2 = cyclic_group(2)
    sign = [0 if s3.element_order(x) in (1, 3) else 1 for x in range(6)]
    h = RealizationHom(s3, z2, sign)
    assert h.is_surjective()
    bogus = [0, 1, 0, 0, 0, 0]
    with pytest.raises(InvalidInput):
        RealizationHom(s3, z2, bogus)


def test_hom_from_generator_images():
    s3 = symmetric_group(3)
    z2 = cyclic_group(2)
    transposition = next(x for x in range(6) if s3.element_order(x) == 2)
    threecycle = next(x for x in range(6) if s3.element_order(x) == 3)
    h = hom_from_generator_images(s3, z2, [transposition, threecycle], [1, 0])
    assert h(transposition) == 1 and h(threecycle) == 0
    with pytest.raises(InvalidInput):
        hom_from_generator_images(s3, z2, [threecycle], [0])  # not generating


# ------------------------------------------------------------- subgroups

def test_subgroup_validation():
    z4 = cyclic_group(4)
    assert Subgroup(z4, (0, 2)).order == 2
    with pytest.raises(InvalidInput):
        Subgroup(z4, (0, 1))  # not closed


def test_commutator_of_s3_with_a3():
    s3 = symmetric_group(3)
    threecycle = next(x for x in range(6) if s3.element_order(x) == 3)
    a3 = normal_closure(s3, [threecycle])
    assert a3.order == 3
    assert set(commutator_subgroup_with(s3, whole_group(s3), a3).members) == set(a3.members)
    assert is_relatively_perfect(s3, a3)
    assert derived_subgroup(s3).order == 3


def test_relatively_perfect_requires_normal():
    s3 = symmetric_group(3)
    transposition = next(x for x in range(6) if s3.element_order(x) == 2)
    flip = generated_subgroup(s3, [transposition])
    assert not flip.is_normal()
    with pytest.raises(NotNormal):
        is_relatively_perfect(s3, flip)


def test_perfection():
    assert is_perfect(alternating_group(5))
    assert not is_perfect(symmetric_group(3))
    assert not is_perfect(cyclic_group(5))
    z6 = cyclic_group(6)
    assert is_relatively_perfect(z6, Subgroup(z6, (0,)))
    assert not is_relatively_perfect(z6, whole_group(z6))


def test_weight_le_one():
    ok, w = weight_le_one(cyclic_group(6))
    assert ok and w == 1
    ok, w = weight_le_one(direct_product(cyclic_group(2), cyclic_group(2)))
    assert not ok and w is None
    ok, _ = weight_le_one(symmetric_group(3))
    assert ok
    ok, _ = weight_le_one(alternating_group(5))
    assert ok


def test_quotient_realization():
    s3 = symmetric_group(3)
    a3 = derived_subgroup(s3)
    q, proj = quotient_realization(s3, a3)
    assert q.order == 2
    assert proj[0] == 0
    transposition = next(x for x in range(6) if s3.element_order(x) == 2)
    assert proj[transposition] == 1
    with pytest.raises(NotNormal):
        transp = next(x for x in range(6) if s3.element_order(x) == 2)
        quotient_realization(s3, generated_subgroup(s3, [transp]))


def test_enumerate_perfect_normal_subgroups():
    assert [s.order for s in enumerate_perfect_normal_subgroups(cyclic_group(5))] == [1]
    assert [s.order for s in enumerate_perfect_normal_subgroups(symmetric_group(3))] == [1]
    a5 = alternating_group(5)
    assert [s.order for s in enumerate_perfect_normal_subgroups(a5)] == [1, 60]
    with pytest.raises(OrderTooLarge):
        enumerate_perfect_normal_subgroups(a5, Budgets(enumeration_order_bound=30))


# ------------------------------------------------------ abelian structure

def test_abelian_invariants():
    assert abelian_invariants(trivial_group()) == []
    assert abelian_invariants(cyclic_group(12)) == [12]
    assert abelian_invariants(direct_product(cyclic_group(2), cyclic_group(2))) == [2, 2]
    assert abelian_invariants(direct_product(cyclic_group(2), cyclic_group(3))) == [6]
    assert abelian_invariants(direct_product(cyclic_group(4), cyclic_group(6))) == [2, 12]


def test_abelian_basis_and_coordinates():
    r = direct_product(cyclic_group(4), cyclic_group(6))
    basis = abelian_basis(r)
    prod = 1
    for _, o in basis:
        prod *= o
    assert prod == r.order
    coords = abelian_coordinates(r, basis)
    assert len(coords) == r.order
    # Reconstruct each element from its coordinates.
    for x, cs in coords.items():
        acc = 0
        for (g, d), e in zip(basis, cs):
            for _ in range(e):
                acc = r.mul(acc, g)
        assert acc == x


def test_abelianized_realization():
    q, proj = abelianized_realization(symmetric_group(3))
    assert q.order == 2
    q5, _ = abelianized_realization(alternating_group(5))
    assert q5.order == 1


def test_catalog_product_hom():
    pres, real, hom = catalog.realize_z5_x_a5()
    assert real.order == 300
    assert hom.is_surjective()
