"""A small catalog of named presentations and matching realizations.

These are the recurring actors in the test-suite and demos: cyclic groups,
the (2,3,5) triangle presentation of A5, the trefoil knot group, and a few
direct products.  Where a finite realization exists, `realize_*` returns it
together with a validated hom from the presentation, so downstream code
never has to re-derive generator images.
"""

from __future__ import annotations

from .groups import (
    FiniteGroupRealization,
    FinitePresentation,
    GroupHom,
    alternating_group,
    cyclic_group,
    direct_product,
    from_permutations,
)


def cyclic_presentation(n: int, symbol: str = "t") -> FinitePresentation:
    return FinitePresentation.parse([symbol], [f"{symbol}^{n}"])


def free_abelian_rank2_presentation() -> FinitePresentation:
    return FinitePresentation.parse(["x", "y"], ["x y x^-1 y^-1"])


def a5_presentation() -> FinitePresentation:
    """The (2,3,5) triangle presentation: <a, b | a^2, b^3, (a b)^5>."""
    return FinitePresentation.parse(["a", "b"], ["a^2", "b^3", "(a b)^5"])


def trefoil_presentation() -> FinitePresentation:
    """Knot-group presentation <x, y | x y x y^-1 x^-1 y^-1>."""
    return FinitePresentation.parse(["x", "y"], ["x y x y^-1 x^-1 y^-1"])


def klein_four_presentation() -> FinitePresentation:
    return FinitePresentation.parse(
        ["x", "y"], ["x^2", "y^2", "x y x^-1 y^-1"])


def abelian_presentation(factors) -> FinitePresentation:
    """<x1.. | xi^di, all commutators>; factor 0 means a free Z summand."""
    gens = [f"x{i}" for i in range(len(factors))]
    rels = [f"x{i}^{d}" for i, d in enumerate(factors) if d]
    for i in range(len(factors)):
        for j in range(i + 1, len(factors)):
            rels.append(f"x{i} x{j} x{i}^-1 x{j}^-1")
    return FinitePresentation.parse(gens, rels)


def realize_cyclic(n: int, symbol: str = "t"):
    """(presentation, realization, hom) for Z/n with the generator at 1."""
    pres = cyclic_presentation(n, symbol)
    real = cyclic_group(n)
    return pres, real, GroupHom(pres, real, (1 % n,))


def realize_a5():
    """(presentation, realization, hom) for the triangle presentation.

    a goes to (0 1)(2 3) and b to (0 2 4); their product is a 5-cycle, and
    the two of them generate all of A5.
    """
    pres = a5_presentation()
    real = alternating_group(5)
    a = real.permutations.index((1, 0, 3, 2, 4))
    b = real.permutations.index((2, 1, 4, 3, 0))
    return pres, real, GroupHom(pres, real, (a, b))


def sl2_5_group() -> FiniteGroupRealization:
    """SL(2, 5) of order 120, acting on the 24 nonzero vectors of F_5^2.

    The action is faithful (only the identity fixes every nonzero vector),
    so the permutation closure of the two standard generators
    [[1,1],[0,1]] and [[0,-1],[1,0]] is the whole matrix group.
    """
    points = [(a, b) for a in range(5) for b in range(5) if (a, b) != (0, 0)]
    index = {v: i for i, v in enumerate(points)}

    def act(m):
        return tuple(index[((m[0][0] * a + m[0][1] * b) % 5,
                            (m[1][0] * a + m[1][1] * b) % 5)]
                     for a, b in points)

    return from_permutations(
        [act([[1, 1], [0, 1]]), act([[0, -1], [1, 0]])], name="SL(2,5)")


def realize_klein_four():
    pres = klein_four_presentation()
    real = direct_product(cyclic_group(2), cyclic_group(2))
    return pres, real, GroupHom(pres, real, (2, 1))


def realize_z5_x_a5():
    """(presentation, realization, hom) for Z/5 x A5."""
    _, a5, hom5 = realize_a5()
    real = direct_product(cyclic_group(5), a5)
    pres = FinitePresentation.parse(
        ["t", "a", "b"],
        ["t^5", "a^2", "b^3", "(a b)^5",
         "t a t^-1 a^-1", "t b t^-1 b^-1"])
    # (c, g) in the product is indexed c*|A5| + g.
    t = 1 * a5.order + 0
    a = hom5.images[0]
    b = hom5.images[1]
    return pres, real, GroupHom(pres, real, (t, a, b))
