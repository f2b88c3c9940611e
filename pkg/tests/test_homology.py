import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from koszulkt.cartan import CapExceededError
from koszulkt.homology import (
    ComplexError,
    FgAbGroup,
    IntMatrix,
    check_cells,
    hermite_normal_form,
    homology_at,
    kernel_basis,
    kernel_rank,
    rank,
    smith_normal_form,
    solve_integer,
)


def det(rows):
    a = [[Fraction(x) for x in r] for r in rows]
    n = len(a)
    out = Fraction(1)
    for c in range(n):
        p = next((r for r in range(c, n) if a[r][c]), None)
        if p is None:
            return 0
        if p != c:
            a[c], a[p] = a[p], a[c]
            out = -out
        out *= a[c][c]
        for r in range(c + 1, n):
            f = a[r][c] / a[c][c]
            a[r] = [x - f * y for x, y in zip(a[r], a[c])]
    return out


def rational_rank(rows):
    a = [[Fraction(x) for x in r] for r in rows]
    r = 0
    cols = len(a[0]) if a else 0
    for c in range(cols):
        p = next((i for i in range(r, len(a)) if a[i][c]), None)
        if p is None:
            continue
        a[r], a[p] = a[p], a[r]
        for i in range(len(a)):
            if i != r and a[i][c]:
                f = a[i][c] / a[r][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        r += 1
    return r


def assert_smith(a, snf):
    U, S, V = snf
    assert (U @ a) @ V == S
    assert abs(det(U.entries)) == 1 and abs(det(V.entries)) == 1
    m, n = S.shape
    for i in range(m):
        for j in range(n):
            if i != j:
                assert S[i, j] == 0
    diag = snf.diagonal
    nz = [d for d in diag if d]
    assert diag[: len(nz)] == nz, "non-zero invariant factors come first"
    assert all(d > 0 for d in nz)
    assert all(b % a == 0 for a, b in zip(nz, nz[1:]))


def test_fixed_case():
    a = IntMatrix.from_rows([[2, 4], [6, 8]])
    snf = smith_normal_form(a)
    assert_smith(a, snf)
    # d1 = gcd of entries, d1 * d2 = |det|
    assert snf.diagonal == [2, 4]
    assert 2 * 4 == abs(det([[2, 4], [6, 8]]))


def test_zero_and_identity():
    z = IntMatrix.zeros(2, 3)
    U, S, V = smith_normal_form(z)
    assert S == z and U == IntMatrix.identity(2) and V == IntMatrix.identity(3)
    i4 = IntMatrix.identity(4)
    assert smith_normal_form(i4).S == i4


def test_empty_shapes():
    for m, n in [(0, 3), (3, 0), (0, 0)]:
        a = IntMatrix.zeros(m, n)
        assert_smith(a, smith_normal_form(a))
        assert kernel_rank(a) == n


def test_random_property_suite():
    rng = random.Random(20240611)
    for _ in range(200):
        m, n = rng.randint(1, 8), rng.randint(1, 8)
        a = IntMatrix.from_rows([[rng.randint(-20, 20) for _ in range(n)] for _ in range(m)])
        snf = smith_normal_form(a)
        assert_smith(a, snf)
        assert snf.rank == rational_rank(a.entries)


matrices = st.integers(1, 6).flatmap(
    lambda m: st.integers(1, 6).flatmap(
        lambda n: st.lists(st.lists(st.integers(-20, 20), min_size=n, max_size=n), min_size=m, max_size=m)
    )
)


@settings(max_examples=100, deadline=None)
@given(matrices)
def test_smith_hypothesis(rows):
    a = IntMatrix.from_rows(rows)
    snf = smith_normal_form(a)
    assert_smith(a, snf)
    assert smith_normal_form(a) == snf, "deterministic"
    assert kernel_rank(a) + rank(a) == a.cols


@settings(max_examples=60, deadline=None)
@given(matrices)
def test_kernel_basis_is_kernel(rows):
    a = IntMatrix.from_rows(rows)
    basis = kernel_basis(a)
    assert len(basis) == kernel_rank(a)
    for v in basis:
        assert all(sum(x * y for x, y in zip(r, v)) == 0 for r in rows)


def test_invariant_factor_products():
    # product of invariant factors equals |det| for non-singular square input
    rng = random.Random(7)
    for _ in range(50):
        n = rng.randint(1, 5)
        rows = [[rng.randint(-9, 9) for _ in range(n)] for _ in range(n)]
        d = det(rows)
        prod = 1
        for x in smith_normal_form(rows).diagonal:
            prod *= x
        assert prod == abs(d)


def test_kernel_rank_examples():
    assert kernel_rank(IntMatrix.identity(3)) == 0
    assert kernel_rank(IntMatrix.zeros(2, 3)) == 3
    assert kernel_rank([[1, 2], [2, 4]]) == 1


def test_homology_examples():
    for n in (2, 3, 12):
        assert homology_at([[n]], IntMatrix.zeros(0, 1)) == FgAbGroup(0, (n,))
    for k in (1, 3):
        assert homology_at(IntMatrix.zeros(k, 0), IntMatrix.zeros(0, k)) == FgAbGroup(k)
        assert homology_at(IntMatrix.zeros(k, k), IntMatrix.zeros(k, k)) == FgAbGroup(k)


def test_homology_of_exact_fixture():
    # 0 -> Z -(1,1)-> Z^2 -(1,-1)-> Z -> 0 is exact
    d2 = [[1], [1]]
    d1 = [[1, -1]]
    assert homology_at(d2, d1).is_trivial
    assert homology_at(d1, IntMatrix.zeros(0, 1)).is_trivial
    assert homology_at(IntMatrix.zeros(1, 0), d2).is_trivial


def test_homology_with_torsion_and_free():
    # C2 = Z --(2,0)--> C1 = Z^2 --0--> 0: H = Z/2 + Z
    assert homology_at([[2], [0]], IntMatrix.zeros(0, 2)) == FgAbGroup(1, (2,))


def test_homology_rejects_non_complex():
    with pytest.raises(ComplexError):
        homology_at([[1]], [[1]])
    with pytest.raises(ComplexError):
        homology_at([[1, 2]], [[1], [2]])


def test_fg_ab_group_validation():
    with pytest.raises(ValueError):
        FgAbGroup(0, (1,))
    with pytest.raises(ValueError):
        FgAbGroup(0, (2, 3))
    assert str(FgAbGroup(2, (2, 4))) == "Z/2 + Z/4 + Z^2"
    assert str(FgAbGroup()) == "0"


def test_solve_integer():
    assert solve_integer([[2, 0], [0, 3]], [4, 9]) == [2, 3]
    assert solve_integer([[2]], [3]) is None
    assert solve_integer([[1, 1], [1, 1]], [1, 2]) is None
    x = solve_integer([[3, 5]], [1])
    assert 3 * x[0] + 5 * x[1] == 1


def test_hermite_normal_form():
    assert hermite_normal_form([[2, 4], [6, 8], [0, 0]]) == [[2, 0], [0, 4]]
    assert hermite_normal_form([[0, 0]]) == []
    a = hermite_normal_form([[1, 1, 0], [0, 1, 1]])
    b = hermite_normal_form([[1, 2, 1], [1, 1, 0]])
    assert a == b


def test_cap(monkeypatch):
    monkeypatch.setenv("KOSZULKT_CAP_CELLS", "10")
    check_cells(2, 5)
    with pytest.raises(CapExceededError):
        check_cells(3, 4)
