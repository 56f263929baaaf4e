"""Smith normal form: hand-worked cases, transform witnesses, determinism."""

import random

import numpy as np
import pytest

from pluscon.config import Budgets
from pluscon.errors import BudgetExceeded, RankMismatch
from pluscon.snf import (
    as_object_matrix,
    determinant,
    identity_object,
    invert_unimodular,
    is_zero_matrix,
    mat_mul,
    smith_normal_form,
    zeros_object,
)


def check_witnesses(a, sf):
    a = as_object_matrix(a)
    assert np.array_equal(mat_mul(mat_mul(sf.U, a), sf.V), sf.diagonal_matrix())
    assert np.array_equal(mat_mul(sf.U, sf.Uinv), identity_object(a.shape[0]))
    assert np.array_equal(mat_mul(sf.V, sf.Vinv), identity_object(a.shape[1]))
    d = [x for x in sf.d if x != 0]
    for i in range(len(d) - 1):
        assert d[i + 1] % d[i] == 0


def test_diag_2_3_gives_1_6():
    # Worked by hand: [[2,0],[0,3]] ~ diag(1, 6).
    sf = smith_normal_form([[2, 0], [0, 3]])
    assert sf.d == [1, 6]
    check_witnesses([[2, 0], [0, 3]], sf)


def test_presentation_relation_matrix_is_trivial_quotient():
    # Rows are relator exponent vectors of <a,b | a^2, b^3, (ab)^5>; the
    # cokernel is trivial, so every invariant factor is 1.
    m = [[2, 0], [0, 3], [5, 5]]
    sf = smith_normal_form(m)
    assert sf.d == [1, 1]
    assert sf.invariant_factors() == []
    check_witnesses(m, sf)


def test_single_relator():
    sf = smith_normal_form([[5]])
    assert sf.d == [5]


def test_zero_and_empty_matrices():
    sf = smith_normal_form(zeros_object(2, 3))
    assert sf.d == [0, 0]
    assert sf.kernel_basis().shape == (3, 3)
    for shape in [(0, 4), (4, 0), (0, 0)]:
        sf = smith_normal_form(zeros_object(*shape))
        assert sf.d == []
        assert sf.rank == 0


def test_kernel_of_trefoil_exponent_matrix():
    # One relator with exponent vector (1, -1): kernel is the diagonal.
    sf = smith_normal_form([[1, -1]])
    k = sf.kernel_basis()
    assert k.shape == (2, 1)
    assert abs(k[0, 0]) == 1 and k[0, 0] == k[1, 0]


def test_solve_and_unsolvable():
    a = [[2, 0], [0, 3]]
    sf = smith_normal_form(a)
    x = sf.solve(np.array([4, 9], dtype=object))
    assert list(x) == [2, 3]
    assert sf.solve(np.array([1, 0], dtype=object)) is None


def test_cokernel_class():
    sf = smith_normal_form([[2, 0], [0, 1]])
    # Z^2 / <(2,0),(0,1)> = Z/2; the class of (1,0) is the generator.
    cls = sf.cokernel_class(np.array([1, 0], dtype=object))
    assert cls == [(1, 2)]
    assert sf.cokernel_class(np.array([2, 0], dtype=object)) == [(0, 2)]


def test_determinant_bareiss():
    assert determinant([[1, 2], [3, 4]]) == -2
    assert determinant([[2, 0, 1], [1, 1, 0], [0, 3, 1]]) == 5
    assert determinant(identity_object(4)) == 1
    assert determinant(zeros_object(3, 3)) == 0
    with pytest.raises(RankMismatch):
        determinant([[1, 2, 3]])


def test_invert_unimodular():
    u = [[1, 2], [0, 1]]
    inv = invert_unimodular(u)
    assert np.array_equal(mat_mul(as_object_matrix(u), inv), identity_object(2))


def test_budget_guard_fires():
    tiny = Budgets(int_bit_bound=8)
    huge = [[1 << 40, 1], [1, 1]]
    with pytest.raises(BudgetExceeded):
        determinant(huge, tiny)


def test_randomized_witness_roundtrip():
    rng = random.Random(7)
    for _ in range(40):
        r = rng.randrange(1, 6)
        c = rng.randrange(1, 6)
        m = [[rng.randrange(-9, 10) for _ in range(c)] for _ in range(r)]
        sf = smith_normal_form(m)
        check_witnesses(m, sf)
        # Kernel columns really are in the kernel and are saturated.
        k = sf.kernel_basis()
        if k.shape[1]:
            assert is_zero_matrix(mat_mul(as_object_matrix(m), k))
            assert all(x == 1 for x in smith_normal_form(k).d)


def test_determinism_bit_for_bit():
    rng = random.Random(11)
    m = [[rng.randrange(-50, 50) for _ in range(7)] for _ in range(5)]
    a = smith_normal_form(m)
    b = smith_normal_form(m)
    assert a.d == b.d
    assert np.array_equal(a.U, b.U) and np.array_equal(a.V, b.V)


def test_solve_many_consistency():
    rng = random.Random(3)
    for _ in range(20):
        a = as_object_matrix([[rng.randrange(-5, 6) for _ in range(4)] for _ in range(3)])
        x = as_object_matrix([[rng.randrange(-5, 6) for _ in range(2)] for _ in range(4)])
        b = mat_mul(a, x)
        got = smith_normal_form(a).solve_many(b)
        assert got is not None
        assert np.array_equal(mat_mul(a, got), b)
