import importlib.util
import pathlib

import numpy as np
import pytest

from pluscon.catalog import (
    realize_klein_four,
    sl2_5_group,
    trefoil_presentation,
)
from pluscon.config import DEFAULT
from pluscon.errors import BudgetExceeded, InvalidInput
from pluscon.groups import (
    FinitePresentation,
    GroupHom,
    RealizationHom,
    alternating_group,
    cyclic_group,
    dihedral_group,
    direct_product,
    hom_from_generator_images,
    quaternion_group,
    symmetric_group,
)
from pluscon.grouphomology import (
    BarComplexSlice,
    _bar2_chain_map,
    h2_group,
    h2_induced_map,
    homology_sphere_criterion,
    knot_group_criterion,
    moore_criterion,
    presentation_h2_map,
)
from pluscon.rings import RingSpec


def _load_oracle():
    path = pathlib.Path(__file__).parent / "oracles" / "bar_oracle.py"
    spec = importlib.util.spec_from_file_location("bar_oracle", path)
    mod = importlib.util.module_from_spec(spec)
    spec.loader.exec_module(mod)
    return mod


def v4():
    return direct_product(cyclic_group(2), cyclic_group(2))


# ----------------------------------------------------------- bar slice

def test_bar_slice_ranks_and_boundaries():
    s = BarComplexSlice(cyclic_group(5))
    assert [s.rank(d) for d in range(4)] == [1, 4, 16, 64]
    assert s.boundary(1).shape == (4, 1)
    assert s.boundary(2).shape == (16, 4)
    assert s.boundary(3).shape == (64, 16)
    s.validate()


def test_bar_slice_d2_row():
    # d[t|t] over Z/3: [t] - [t^2] + [t]
    s = BarComplexSlice(cyclic_group(3))
    row = s.boundary(2).toarray()[s.pair_index(1, 1)]
    assert list(row) == [2, -1]


def test_bar_slice_normalization_drops_identity_tuples():
    # over Z/2, d[t|t] = [t] - [t^2 = e] + [t] and the middle term vanishes
    s = BarComplexSlice(cyclic_group(2))
    assert list(s.boundary(2).toarray()[0]) == [2]
    assert s.boundary(3).toarray()[0, 0] == 0


def test_bar_slice_validates_on_nonabelian_groups():
    BarComplexSlice(symmetric_group(3)).validate()
    BarComplexSlice(quaternion_group()).validate()


def test_bar_slice_budget_gate():
    with pytest.raises(BudgetExceeded):
        BarComplexSlice(sl2_5_group())  # 119^3 cells > 10^6


def test_pair_index_rejects_identity():
    s = BarComplexSlice(cyclic_group(3))
    with pytest.raises(InvalidInput):
        s.pair_index(0, 1)


# ----------------------------------------------------------- h2, Smith route

def test_cyclic_groups_have_trivial_multiplier():
    for n in range(2, 9):
        rep = h2_group(cyclic_group(n))
        assert rep.factors.get(1) == [n]
        assert rep.is_zero(2)
        assert not rep.partial


def test_trivial_group():
    rep = h2_group(cyclic_group(1))
    assert rep.factors == {}


def test_klein_four_multiplier():
    rep = h2_group(v4())
    assert rep.factors == {1: [2, 2], 2: [2]}


def test_order_eight_and_nine_multipliers():
    # elementary 3-group, mixed 2-group, dihedral, quaternion: the classics
    assert h2_group(direct_product(cyclic_group(3), cyclic_group(3))).factors \
        == {1: [3, 3], 2: [3]}
    assert h2_group(direct_product(cyclic_group(4), cyclic_group(2))).factors \
        == {1: [2, 4], 2: [2]}
    assert h2_group(dihedral_group(4)).factors == {1: [2, 2], 2: [2]}
    assert h2_group(quaternion_group()).factors == {1: [2, 2]}
    assert h2_group(symmetric_group(3)).factors == {1: [2]}


def test_alternating_four_multiplier():
    rep = h2_group(alternating_group(4))
    assert rep.factors == {1: [3], 2: [2]}


def test_oracle_agreement():
    # the independent unnormalized-bar oracle, run live on the same tables
    oracle = _load_oracle()
    groups = [cyclic_group(n) for n in range(2, 7)] + [v4()]
    for g in groups:
        betti1, tor1 = oracle.h1_of_table([list(r) for r in g.table])
        betti2, tor2 = oracle.h2_of_table([list(r) for r in g.table])
        rep = h2_group(g)
        assert rep.betti(1) == betti1 and rep.torsion(1) == tor1
        assert rep.betti(2) == betti2 and rep.torsion(2) == tor2


# ----------------------------------------------------------- cocycle route

def test_modular_route_agrees_with_smith():
    groups = [cyclic_group(n) for n in (2, 3, 4, 5, 6, 8)] + [
        v4(),
        direct_product(cyclic_group(4), cyclic_group(2)),
        direct_product(cyclic_group(3), cyclic_group(3)),
        dihedral_group(4),
        quaternion_group(),
        symmetric_group(3),
        alternating_group(4),
    ]
    for g in groups:
        smith = h2_group(g, method="smith")
        modular = h2_group(g, method="modular")
        assert modular.factors == smith.factors, f"order {g.order}"
        assert not modular.partial


def test_modular_route_on_a5():
    rep = h2_group(alternating_group(5))
    assert rep.detail["method"] == "modular"
    assert rep.factors == {2: [2]}
    assert not rep.partial
    info = rep.detail["primes"][2]
    assert info["t"] == 1 and info["s2"] == 1


def test_sl2_5_is_superperfect():
    import dataclasses
    big = dataclasses.replace(DEFAULT, bar_sparse_budget=2_000_000)
    rep = h2_group(sl2_5_group(), budgets=big)
    assert rep.factors == {}
    assert not rep.partial


def test_modular_partial_honesty():
    # H2(Z/4 x Z/4) is Z/4 (checked once through the Smith route, ~25s);
    # with 2^4 | |G| the mod-4 probe sees one factor of exponent >= 2 but
    # cannot pin it, so the report must say so instead of guessing.
    rep = h2_group(direct_product(cyclic_group(4), cyclic_group(4)),
                   method="modular")
    assert rep.partial
    assert rep.factors == {1: [4, 4], 2: [2]}
    info = rep.detail["primes"][2]
    assert info["t"] == 1 and info["s2"] == 2 and not info["resolved"]


def test_modular_exponent_probe_resolves_at_squarefree_cube():
    # |D4| = 8 = 2^3, but H2 = Z/2 keeps s2 = t, which is already exact
    rep = h2_group(dihedral_group(4), method="modular")
    assert rep.factors[2] == [2]
    assert not rep.partial


# ----------------------------------------------------------- rings

def test_h2_over_prime_fields():
    two, three = RingSpec.mod(2), RingSpec.mod(3)
    assert h2_group(v4(), two).factors == {1: [2, 2], 2: [2, 2, 2]}
    assert h2_group(v4(), three).factors == {}
    # Tor(H1, Z/2) shows up for Z/4 even though H2 vanishes integrally
    assert h2_group(cyclic_group(4), two).factors == {1: [2], 2: [2]}


def test_h2_over_localizations():
    away2 = RingSpec.localized_away_from((2,))
    assert h2_group(v4(), away2).factors == {}
    rep = h2_group(direct_product(cyclic_group(3), cyclic_group(3)), away2)
    assert rep.factors == {1: [3, 3], 2: [3]}


def test_modular_route_exact_over_prime_field():
    # mod-p answers need only the p-rank, so even unresolved exponents
    # cannot leak: Z/4 x Z/4 over Z/2 is exact and unflagged
    rep = h2_group(direct_product(cyclic_group(4), cyclic_group(4)),
                   RingSpec.mod(2), method="modular")
    assert not rep.partial
    assert rep.factors == {1: [2, 2], 2: [2, 2, 2]}


# ----------------------------------------------------------- induced maps

def test_identity_induces_identity():
    g = v4()
    rep = h2_induced_map(RealizationHom(g, g, range(4)))
    assert rep.epi and rep.iso
    assert rep.source_factors == [2]


def test_projection_to_factor_is_epi_not_iso():
    rep = h2_induced_map(RealizationHom(v4(), cyclic_group(2), [0, 1, 0, 1]))
    assert rep.epi and not rep.iso
    assert rep.source_factors == [2] and rep.target_factors == []


def test_inclusion_of_factor_is_not_epi():
    rep = h2_induced_map(RealizationHom(cyclic_group(2), v4(), [0, 1]))
    assert not rep.epi and not rep.iso


def test_reduction_map_is_iso_on_h2():
    # Z/4 x Z/2 ->> Z/2 x Z/2 carries its Z/2 multiplier isomorphically
    g8 = direct_product(cyclic_group(4), cyclic_group(2))
    mapping = [(a % 2) * 2 + b for a in range(4) for b in range(2)]
    rep = h2_induced_map(RealizationHom(g8, v4(), mapping))
    assert rep.epi and rep.iso
    assert rep.matrix is not None


def test_chain_level_functoriality():
    # the bar-2 block of a composite is the product of the blocks
    g8 = direct_product(cyclic_group(4), cyclic_group(2))
    f = RealizationHom(g8, v4(), [(a % 2) * 2 + b for a in range(4)
                                  for b in range(2)])
    g = RealizationHom(v4(), cyclic_group(2), [0, 1, 0, 1])
    comp = RealizationHom(g8, cyclic_group(2),
                          [g.mapping[x] for x in f.mapping])
    lhs = _bar2_chain_map(f) @ _bar2_chain_map(g)
    assert np.array_equal(lhs, _bar2_chain_map(comp))


def test_induced_map_tensored_verdicts():
    proj = RealizationHom(v4(), cyclic_group(2), [0, 1, 0, 1])
    over3 = h2_induced_map(proj, RingSpec.mod(3))
    assert over3.epi and over3.iso  # everything dies mod 3
    over2 = h2_induced_map(proj, RingSpec.mod(2))
    assert over2.epi and not over2.iso
    assert over2.source_factors == [2] and over2.target_factors == []


def test_pairing_route_inclusion_into_a5():
    # V4 sits inside A5 with odd index, so the transfer makes the induced
    # map on the 2-torsion of H2 onto; equal orders then force an iso.
    a5 = alternating_group(5)
    x = a5.permutations.index((1, 0, 3, 2, 4))
    y = a5.permutations.index((2, 3, 0, 1, 4))
    incl = hom_from_generator_images(v4(), a5, [2, 1], [x, y])
    rep = h2_induced_map(incl)
    assert rep.detail["route"] == "cocycle-pairing"
    assert rep.epi and rep.iso
    assert rep.source_factors == [2] and rep.target_factors == [2]


def test_pairing_route_small_image_is_not_epi():
    a5 = alternating_group(5)
    x = a5.permutations.index((1, 0, 3, 2, 4))
    rep = h2_induced_map(hom_from_generator_images(
        cyclic_group(2), a5, [1], [x]))
    assert not rep.epi and rep.iso is False


def test_identity_shortcut_on_large_group():
    a5 = alternating_group(5)
    rep = h2_induced_map(RealizationHom(a5, a5, range(60)))
    assert rep.detail["route"] == "identity"
    assert rep.epi and rep.iso


def test_induced_map_budget_gates():
    a5 = alternating_group(5)
    x = a5.permutations.index((1, 0, 3, 2, 4))
    incl = hom_from_generator_images(cyclic_group(2), a5, [1], [x])
    with pytest.raises(BudgetExceeded):
        h2_induced_map(incl, RingSpec.mod(2))  # tensored needs Smith route
    with pytest.raises(BudgetExceeded):
        h2_induced_map(incl, budgets=__import__("dataclasses").replace(
            DEFAULT, bar_sparse_budget=100))


# ----------------------------------------------------------- Hopf comparison

def test_presentation_map_hits_all_of_h2():
    pres, real, hom = realize_klein_four()
    im = presentation_h2_map(pres, hom)
    assert im.is_epi()


def test_presentation_map_on_trivial_multiplier():
    pres = trefoil_presentation()
    s3 = symmetric_group(3)
    hom = GroupHom(pres, s3, (s3.permutations.index((1, 0, 2)),
                              s3.permutations.index((0, 2, 1))))
    assert presentation_h2_map(pres, hom).is_epi()


# ----------------------------------------------------------- criteria

def test_moore_criterion():
    for n in range(2, 9):
        assert moore_criterion(cyclic_group(n))
    assert not moore_criterion(v4())
    assert not moore_criterion(alternating_group(4))


def test_homology_sphere_criterion():
    import dataclasses
    assert not homology_sphere_criterion(cyclic_group(5))   # H1 != 0
    assert not homology_sphere_criterion(alternating_group(5))  # H2 = Z/2
    big = dataclasses.replace(DEFAULT, bar_sparse_budget=2_000_000)
    assert homology_sphere_criterion(sl2_5_group(), budgets=big)
    assert homology_sphere_criterion(cyclic_group(1))


def trefoil_with_probe():
    pres = trefoil_presentation()
    s3 = symmetric_group(3)
    probe = GroupHom(pres, s3, (s3.permutations.index((1, 0, 2)),
                                s3.permutations.index((0, 2, 1))))
    return pres, probe


def test_knot_criterion_accepts_trefoil():
    pres, probe = trefoil_with_probe()
    v = knot_group_criterion(pres, weight_witness="x", quotient_probes=[probe])
    assert v.status == "pass_with_certificate"
    assert v.h1 == [0]
    assert v.certificate["witness"] == "x"


def test_knot_criterion_without_witness_is_necessary_only():
    pres, probe = trefoil_with_probe()
    v = knot_group_criterion(pres, quotient_probes=[probe])
    assert v.status == "pass_necessary"


def test_knot_criterion_refutes_free_group_of_rank_two():
    v = knot_group_criterion(FinitePresentation.parse(["x", "y"], []))
    assert v.refuted
    assert v.h1 == [0, 0]


def test_knot_criterion_accepts_unknot_presentation():
    v = knot_group_criterion(FinitePresentation.parse(["x"], []),
                             weight_witness="x")
    assert v.status == "pass_with_certificate"


def test_knot_criterion_refutes_bad_witness():
    # a commutator has trivial image in H1, so its normal closure in S3
    # is the alternating part, never the whole quotient
    pres, probe = trefoil_with_probe()
    v = knot_group_criterion(pres, weight_witness="x y x^-1 y^-1",
                             quotient_probes=[probe])
    assert v.refuted
    assert v.certificate["closure_order"] == 3


def test_knot_criterion_sees_h2_through_a_quotient():
    # V4 semidirect Z, the integer twisting by an order-3 symmetry: H1 = Z
    # but H2 = Z/2, and the quotient onto A4 = V4 x| Z/3 exposes it.
    pres = FinitePresentation.parse(
        ["a", "b", "t"],
        ["a^2", "b^2", "a b a^-1 b^-1",
         "t a t^-1 b^-1", "t b t^-1 b^-1 a^-1"])
    a4 = alternating_group(4)
    beta = GroupHom(pres, a4, (a4.permutations.index((1, 0, 3, 2)),
                               a4.permutations.index((3, 2, 1, 0)),
                               a4.permutations.index((1, 2, 0, 3))))
    v = knot_group_criterion(pres, quotient_probes=[beta])
    assert v.refuted
    assert v.certificate["classes"]
    for entry in v.certificate["classes"]:
        assert any(order == 2 and value % 2 == 1
                   for _, value, order in entry["components"])


def test_knot_criterion_rejects_foreign_probe():
    pres, _ = trefoil_with_probe()
    other = FinitePresentation.parse(["x"], [])
    s3 = symmetric_group(3)
    probe = GroupHom(other, s3, (s3.permutations.index((1, 0, 2)),))
    with pytest.raises(InvalidInput):
        knot_group_criterion(pres, quotient_probes=[probe])


# ----------------------------------------------------------- budget gates

def test_h2_budget_gates():
    a5 = alternating_group(5)
    with pytest.raises(BudgetExceeded):
        h2_group(a5, method="smith")
    with pytest.raises(BudgetExceeded):
        h2_group(sl2_5_group())
    with pytest.raises(InvalidInput):
        h2_group(a5, method="adelic")


def test_presentation_map_respects_smith_budget():
    from pluscon.catalog import realize_a5
    pres, _, hom = realize_a5()
    with pytest.raises(BudgetExceeded):
        presentation_h2_map(pres, hom)
