from itertools import product
import random

import pytest
from hypothesis import given, settings, strategies as st

from parahecke.errors import DomainError
from parahecke.linalg import (Submodule, eventual_kernel, howell_form, inverse_mod, kernel_mod,
                              matmul, matpow, matvec, smith_normal_form, solve_mod)

moduli = st.sampled_from([2, 3, 4, 6, 8, 9])


def matrices(rows, cols, lo=-6, hi=6):
    return st.lists(st.lists(st.integers(lo, hi), min_size=cols, max_size=cols),
                    min_size=rows, max_size=rows)


def span(vectors, m, dim):
    # brute-force Z/m-span of small vector sets
    out = {tuple([0] * dim)}
    for v in vectors:
        new = set(out)
        for w in out:
            for c in range(m):
                new.add(tuple((x + c * y) % m for x, y in zip(w, v)))
        out = new
    return out


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 4).flatmap(lambda r: st.integers(1, 4).flatmap(lambda c: matrices(r, c))))
def test_smith_normal_form(A):
    diag, U, V = smith_normal_form(A)
    UAV = matmul(matmul(U, A), V)
    rows, cols = len(A), len(A[0])
    for i in range(rows):
        for j in range(cols):
            assert UAV[i][j] == (diag[i] if i == j else 0)
    nz = [d for d in diag if d]
    assert all(d > 0 for d in nz)
    assert all(b % a == 0 for a, b in zip(nz, nz[1:]))
    assert nz == diag[:len(nz)]


@settings(max_examples=60, deadline=None)
@given(moduli, matrices(2, 3, 0, 8), st.lists(st.integers(0, 8), min_size=2, max_size=2))
def test_solve_mod_matches_brute_force(m, A, b):
    sols = [x for x in product(range(m), repeat=3)
            if all(v % m == bi % m for v, bi in zip(matvec(A, list(x)), b))]
    x = solve_mod(A, b, m)
    if sols:
        assert x is not None and tuple(v % m for v in matvec(A, x, m)) == tuple(bi % m for bi in b)
    else:
        assert x is None


@settings(max_examples=60, deadline=None)
@given(moduli, matrices(2, 3, 0, 8))
def test_kernel_mod_matches_brute_force(m, A):
    ker = {x for x in product(range(m), repeat=3) if not any(v % m for v in matvec(A, list(x)))}
    assert span(kernel_mod(A, m), m, 3) == ker


@settings(max_examples=60, deadline=None)
@given(moduli, st.lists(st.lists(st.integers(0, 8), min_size=3, max_size=3), max_size=3))
def test_howell_form_is_canonical(m, vecs):
    S = Submodule(vecs, m, 3)
    full = span(vecs, m, 3)
    assert span([list(r) for r in S.rows], m, 3) == full
    assert S.size() == len(full)
    for v in product(range(m), repeat=3):
        assert S.contains(v) == (v in full)
    # a different generating set of the same module gives the same rows
    rnd = random.Random(len(vecs) * m)
    other = [list(w) for w in rnd.sample(sorted(full), min(4, len(full)))] + vecs
    assert howell_form(other, m, 3) == S.rows


def test_submodule_examples():
    assert Submodule([[0, 1]], 2, 2) == Submodule([[0, 1], [0, 0]], 2, 2)
    assert Submodule.zero(4, 2).is_zero()
    assert Submodule([[2, 0]], 4, 2) <= Submodule([[1, 0]], 4, 2)
    assert not Submodule([[1, 0]], 4, 2) <= Submodule([[2, 0]], 4, 2)
    assert Submodule.full(6, 2).size() == 36
    assert Submodule([[1, 1]], 2, 2).image([[1, 0], [0, 0]]) == Submodule([[1, 0]], 2, 2)


def test_eventual_kernel_examples():
    n, K = eventual_kernel([[1, 0], [0, 1]], 2)
    assert K.is_zero()
    n, K = eventual_kernel([[0, 1], [0, 0]], 2)
    assert n == 2 and K == Submodule.full(2, 2)
    n, K = eventual_kernel([[1, 0], [0, 0]], 2)
    assert n == 1 and K == Submodule([[0, 1]], 2, 2)
    # over Z/4, multiplication by 2 is nilpotent
    n, K = eventual_kernel([[2]], 4)
    assert n == 2 and K == Submodule.full(4, 1)


@settings(max_examples=40, deadline=None)
@given(moduli, matrices(3, 3, 0, 8))
def test_eventual_kernel_is_stable(m, A):
    n, K = eventual_kernel(A, m)
    P = matpow(A, n, m)
    ker = {x for x in product(range(m), repeat=3) if not any(matvec(P, list(x), m))}
    assert span([list(r) for r in K.rows], m, 3) == ker
    P2 = matmul(P, A, m)
    assert all(not any(matvec(P2, list(r), m)) for r in K.rows)


def test_inverse_mod():
    A = [[1, 2], [3, 5]]
    assert matmul(A, inverse_mod(A, 4), 4) == [[1, 0], [0, 1]]
    with pytest.raises(DomainError):
        inverse_mod([[2, 0], [0, 1]], 4)
