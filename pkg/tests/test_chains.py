import numpy as np
import pytest

from pluscon.chains import (
    BasedChainComplex,
    ChainMap,
    DegreeHomology,
    IntegerComplex,
    induced_map,
    integer_complex_over,
    is_acyclic,
    homology,
    les_consistency,
    mapping_cone,
    subgroups_equal,
)
from pluscon.errors import InvalidBoundary, InvalidInput, RankMismatch
from pluscon.groups import cyclic_group, trivial_group
from pluscon.grouprings import GroupRingMatrix, parse_element
from pluscon.rings import RingSpec


def zmod_complex(n):
    """The standard free resolution-given 2-complex for <t | t^n> over Z[Z/n].

    One 0-cell, one 1-cell with d(e1) = t - 1, one 2-cell with
    d(e2) = 1 + t + ... + t^(n-1).
    """
    g = cyclic_group(n)
    norm = " + ".join("1" if k == 0 else f"t^{k}" for k in range(n))
    b1 = GroupRingMatrix(g, [[parse_element("t - 1", g)]])
    b2 = GroupRingMatrix(g, [[parse_element(norm, g)]])
    return BasedChainComplex(g, {0: 1, 1: 1, 2: 1}, {1: b1, 2: b2})


def circle_complex():
    """A circle: Z coefficients, one 0-cell, one 1-cell, zero boundary."""
    return integer_complex_over({0: 1, 1: 1}, {1: [[0]]})


def torus_like_integer_complex():
    # Chain complex of the torus: ranks 1, 2, 1; all boundaries zero.
    return IntegerComplex({0: 1, 1: 2, 2: 1}, {})


def projective_plane_integer_complex():
    # RP^2: d(e2) = 2 * e1, d(e1) = 0.
    return IntegerComplex({0: 1, 1: 1, 2: 1},
                          {2: np.array([[2]], dtype=object)})


# ----------------------------------------------------------- construction

def test_validate_catches_bad_boundary():
    g = cyclic_group(2)
    b1 = GroupRingMatrix(g, [[parse_element("t - 1", g)]])
    b2 = GroupRingMatrix(g, [[parse_element("t", g)]])  # (t)(t-1) != 0
    cx = BasedChainComplex(g, {0: 1, 1: 1, 2: 1}, {1: b1, 2: b2})
    with pytest.raises(InvalidBoundary):
        cx.validate()
    zmod_complex(4).validate()


def test_shape_mismatch_rejected():
    g = cyclic_group(2)
    with pytest.raises(RankMismatch):
        BasedChainComplex(g, {0: 1, 1: 2},
                          {1: GroupRingMatrix.identity(g, 1)})


def test_serialization_roundtrip():
    cx = zmod_complex(5)
    data = cx.to_dict()
    back = BasedChainComplex.from_dict(data)
    back.validate()
    assert back.ranks == cx.ranks
    assert back.boundary(2) == cx.boundary(2)


# ------------------------------------------------------------- homology

def test_circle_homology():
    rep = homology(circle_complex())
    assert rep.factors[0] == [0]
    assert rep.factors[1] == [0]


def test_torus_and_projective_plane():
    rep = homology(torus_like_integer_complex())
    assert rep.factors == {0: [0], 1: [0, 0], 2: [0]}
    rp2 = homology(projective_plane_integer_complex())
    assert rp2.factors == {0: [0], 1: [2]}
    assert rp2.group_text(1) == "Z/2"
    assert rp2.is_zero(2)
    # with Z/2 coefficients both degrees 1 and 2 light up
    mod2 = homology(projective_plane_integer_complex(), RingSpec.mod(2))
    assert mod2.factors == {0: [2], 1: [2], 2: [2]}
    # inverting 2 kills the torsion entirely
    loc = homology(projective_plane_integer_complex(), RingSpec.parse("Z[1/2]"))
    assert loc.factors == {0: [0]}


def test_lens_space_style_homology():
    # The augmented complex of the Z/n model: S^1 attached a disc by t^n.
    for n in (2, 3, 5, 8):
        rep = homology(zmod_complex(n), mode="augmented")
        assert rep.factors.get(0) == [0]
        assert rep.factors.get(1) == [n]
        assert rep.is_zero(2)


def test_covering_complex_of_zmod_model():
    # The universal cover of the Z/n model is simply connected with
    # H_2 = Z^(n-1): the n = 2 case is the sphere over the projective plane.
    rep = homology(zmod_complex(5), mode="covering")
    assert rep.factors.get(0) == [0]
    assert rep.is_zero(1)
    assert rep.factors.get(2) == [0, 0, 0, 0]
    rep2 = homology(zmod_complex(2), mode="covering")
    assert rep2.factors.get(2) == [0]
    assert not is_acyclic(zmod_complex(5))


def test_mod_p_dimensions_of_zmod_model():
    # UCT: for the Z/n model with p | n every degree 0, 1, 2 has dim 1.
    rep = homology(zmod_complex(6), RingSpec.mod(2))
    assert [len(rep.factors.get(q, [])) for q in (0, 1, 2)] == [1, 1, 1]
    rep3 = homology(zmod_complex(6), RingSpec.mod(3))
    assert [len(rep3.factors.get(q, [])) for q in (0, 1, 2)] == [1, 1, 1]
    rep5 = homology(zmod_complex(6), RingSpec.mod(5))
    assert [len(rep5.factors.get(q, [])) for q in (0, 1, 2)] == [1, 0, 0]


# ------------------------------------------------- class-level machinery

def test_degree_homology_coordinates():
    icx = projective_plane_integer_complex()
    h1 = icx.homology_at(1)
    assert h1.invariant_factors() == [2]
    assert h1.orders == [2]
    gen = h1.generator_cycle(0)
    assert h1.class_of(gen) == [1]
    assert h1.class_of(2 * gen) == [0]
    assert h1.is_zero_class(2 * gen)
    doubled = [2 * int(x) for x in gen]
    assert h1.class_of(doubled) == [0]


def test_class_of_rejects_non_cycles():
    icx = IntegerComplex({0: 1, 1: 1}, {1: np.array([[3]], dtype=object)})
    h1 = icx.homology_at(1)
    with pytest.raises(InvalidInput):
        h1.class_of([1])  # d(e1) = 3 e0, so e1 is not a cycle
    assert h1.invariant_factors() == []


def test_induced_map_epi_iso():
    # times-3 on the circle: iso on H_0, multiplication by 3 on H_1 = Z.
    c = circle_complex()
    ci = c.augmented_complex()
    h1 = ci.homology_at(1)
    three = induced_map(h1, h1, np.array([[3]], dtype=object))
    assert not three.is_epi()
    one = induced_map(h1, h1, np.array([[1]], dtype=object))
    assert one.is_iso()
    # Z -> Z/2 reduction is epi but not iso.
    rp2 = projective_plane_integer_complex().homology_at(1)
    red = induced_map(h1, rp2, np.array([[1]], dtype=object))
    assert red.is_epi() and not red.is_iso()
    ker = red.kernel_generators()
    assert subgroups_equal(ker, [[2]], h1.orders)


def test_mapping_cone_of_identity_is_acyclic():
    cx = zmod_complex(3)
    cone = mapping_cone(ChainMap.identity(cx))
    cone.validate()
    assert is_acyclic(cone)
    rep = homology(cone, mode="augmented")
    assert rep.factors == {}


def test_mapping_cone_of_degree_two_map():
    # S^1 --2--> S^1 has cone with H_1 = Z/2 (homotopy RP^2).
    c = circle_complex()
    two = ChainMap(c, c, {0: GroupRingMatrix.identity(c.group, 1),
                          1: GroupRingMatrix(c.group, [[2]])})
    cone = mapping_cone(two)
    rep = homology(cone, mode="augmented")
    assert rep.factors.get(1) == [2]
    assert rep.is_zero(2)


def test_les_consistency_for_cones():
    c = circle_complex()
    two = ChainMap(c, c, {0: GroupRingMatrix.identity(c.group, 1),
                          1: GroupRingMatrix(c.group, [[2]])})
    assert les_consistency(two, mode="augmented")
    cx = zmod_complex(4)
    assert les_consistency(ChainMap.identity(cx), mode="augmented")
    assert les_consistency(ChainMap.identity(cx), mode="covering")


def test_chain_map_must_commute():
    cx = zmod_complex(2)
    g = cx.group
    with pytest.raises(InvalidBoundary):
        ChainMap(cx, cx, {0: GroupRingMatrix.identity(g, 1),
                          1: GroupRingMatrix(g, [[2]]),
                          2: GroupRingMatrix.identity(g, 1)})


def test_direct_sum_and_shift():
    a = zmod_complex(2)
    b = zmod_complex(2)
    s = a.direct_sum(b)
    s.validate()
    assert s.rank(1) == 2
    rep = homology(s, mode="augmented")
    assert rep.factors.get(1) == [2, 2]
    sh = a.shift(3)
    assert sh.rank(3) == 1 and sh.rank(0) == 0
    rep_sh = homology(sh, mode="augmented")
    assert rep_sh.factors.get(3) == [0]
    assert rep_sh.factors.get(4) == [2]
