"""Brute-force group homology oracle, independent of the library under test.

Computes H_1 and H_2 of a finite group straight from the *unnormalized* bar
complex: C_d is free on all d-tuples of group elements (identity entries
included), with the inhomogeneous boundary

    d[g_1|...|g_d] = [g_2|...|g_d]
                     + sum_i (-1)^i [g_1|...|g_i g_{i+1}|...|g_d]
                     + (-1)^d [g_1|...|g_{d-1}].

Everything here is deliberately naive and self-contained: its own boundary
assembly, its own Smith reduction (diagonal only, no transform tracking),
and the classical rank bookkeeping

    H_d  =  Z^(dim ker d_d - rank d_{d+1})  (+)  torsion(SNF of d_{d+1})

so the only thing it shares with the package being checked is numpy.

Run as a script to print a small table of reference values:

    python3 bar_oracle.py
"""

import itertools

import numpy as np


def bar_boundary(table, d):
    """The boundary matrix C_d -> C_{d-1} with columns indexed by d-tuples."""
    n = len(table)
    lower = list(itertools.product(range(n), repeat=d - 1))
    index = {t: i for i, t in enumerate(lower)}
    mat = np.zeros((len(lower), n ** d), dtype=object)
    for col, t in enumerate(itertools.product(range(n), repeat=d)):
        mat[index[t[1:]], col] += 1
        for i in range(d - 1):
            merged = t[:i] + (table[t[i]][t[i + 1]],) + t[i + 2:]
            mat[index[merged], col] += (-1) ** (i + 1)
        mat[index[t[:-1]], col] += (-1) ** d
    return mat


def smith_diagonal(mat):
    """Diagonal of the Smith normal form, by plain pivot-and-clear."""
    a = mat.copy()
    rows, cols = a.shape
    diag = []
    t = 0
    while t < min(rows, cols):
        sub = a[t:, t:]
        nz = np.nonzero(sub)
        if len(nz[0]) == 0:
            break
        # smallest nonzero magnitude keeps the integers tame
        mags = np.array([abs(sub[i, j]) for i, j in zip(*nz)])
        k = int(np.argmin(mags))
        pi, pj = int(nz[0][k]) + t, int(nz[1][k]) + t
        a[[t, pi], :] = a[[pi, t], :]
        a[:, [t, pj]] = a[:, [pj, t]]
        while True:
            done = True
            for i in range(t + 1, rows):
                if a[i, t]:
                    q = a[i, t] // a[t, t]
                    a[i, :] -= q * a[t, :]
                    if a[i, t]:
                        a[[t, i], :] = a[[i, t], :]
                        done = False
            for j in range(t + 1, cols):
                if a[t, j]:
                    q = a[t, j] // a[t, t]
                    a[:, j] -= q * a[:, t]
                    if a[t, j]:
                        a[:, [t, j]] = a[:, [j, t]]
                        done = False
            if done:
                break
        diag.append(abs(int(a[t, t])))
        t += 1
    # enforce the divisibility chain by gcd/lcm folding
    for i in range(len(diag)):
        for j in range(i + 1, len(diag)):
            x, y = diag[i], diag[j]
            g = _gcd(x, y)
            diag[i], diag[j] = g, x * y // g if g else 0
    return diag


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return a


def homology_from_boundaries(rank_d, d_low, d_high):
    """(betti, torsion list) for ker(d_low)/im(d_high) inside rank_d chains."""
    diag_low = smith_diagonal(d_low) if d_low.size else []
    diag_high = smith_diagonal(d_high) if d_high.size else []
    rank_low = sum(1 for x in diag_low if x)
    rank_high = sum(1 for x in diag_high if x)
    betti = rank_d - rank_low - rank_high
    torsion = sorted(x for x in diag_high if x > 1)
    return betti, torsion


def h1_of_table(table):
    n = len(table)
    d1 = np.zeros((1, n), dtype=object)  # every 1-tuple bounds to zero
    d2 = bar_boundary(table, 2)
    return homology_from_boundaries(n, d1, d2)


def h2_of_table(table):
    n = len(table)
    d2 = bar_boundary(table, 2)
    d3 = bar_boundary(table, 3)
    return homology_from_boundaries(n * n, d2, d3)


# -- tiny table builders (local on purpose: the oracle imports nothing) ------


def cyclic_table(n):
    return [[(i + j) % n for j in range(n)] for i in range(n)]


def product_table(t1, t2):
    n1, n2 = len(t1), len(t2)
    out = [[0] * (n1 * n2) for _ in range(n1 * n2)]
    for a, b in itertools.product(range(n1), range(n2)):
        for c, d in itertools.product(range(n1), range(n2)):
            out[a * n2 + b][c * n2 + d] = t1[a][c] * n2 + t2[b][d]
    return out


if __name__ == "__main__":
    for n in range(2, 9):
        print(f"Z/{n}:      H1 = {h1_of_table(cyclic_table(n))}   "
              f"H2 = {h2_of_table(cyclic_table(n))}")
    klein = product_table(cyclic_table(2), cyclic_table(2))
    print(f"Z/2 x Z/2: H1 = {h1_of_table(klein)}   H2 = {h2_of_table(klein)}")
    z3z3 = product_table(cyclic_table(3), cyclic_table(3))
    print(f"Z/3 x Z/3: H1 = {h1_of_table(z3z3)}   H2 = {h2_of_table(z3z3)}")
