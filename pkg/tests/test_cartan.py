from fractions import Fraction
from math import comb, factorial

import pytest

from koszulkt.cartan import (
    CapExceededError,
    CartanError,
    build_cartan,
    exponents,
    fundamental_dimensions,
    longest_element,
    parse_type,
    weyl_action,
    weyl_dimension,
    weyl_group,
    weyl_order,
)

SMALL_TYPES = ["A1", "A2", "A3", "A4", "B2", "B3", "B4", "C3", "C4", "D4", "G2", "F4", "A1xA1", "A1xG2"]


def weyl_order_table(letter, n):
    return {
        "A": factorial(n + 1),
        "B": 2**n * factorial(n),
        "C": 2**n * factorial(n),
        "D": 2 ** (n - 1) * factorial(n),
        "G": 12,
        "F": 1152,
        "E": {6: 51840, 7: 2903040, 8: 696729600}.get(n),
    }[letter]


def positive_root_count(letter, n):
    return {
        "A": n * (n + 1) // 2,
        "B": n * n,
        "C": n * n,
        "D": n * (n - 1),
        "G": 6,
        "F": 24,
        "E": {6: 36, 7: 63, 8: 120}.get(n),
    }[letter]


def leading_minors(m):
    n = len(m)
    out = []
    for k in range(1, n + 1):
        a = [[Fraction(x) for x in row[:k]] for row in m[:k]]
        det = Fraction(1)
        for c in range(k):
            p = next((r for r in range(c, k) if a[r][c]), None)
            if p is None:
                det = Fraction(0)
                break
            if p != c:
                a[c], a[p] = a[p], a[c]
                det = -det
            det *= a[c][c]
            for r in range(c + 1, k):
                f = a[r][c] / a[c][c]
                a[r] = [x - f * y for x, y in zip(a[r], a[c])]
        out.append(det)
    return out


def test_build_examples():
    a1 = build_cartan([("A", 1)])
    assert a1.N == 1 and a1.cartan_matrix == ((2,),) and len(a1.positive_roots) == 1
    a2 = build_cartan([("A", 2)])
    assert a2.cartan_matrix == ((2, -1), (-1, 2)) and len(a2.positive_roots) == 3
    g2 = build_cartan([("G", 2)])
    assert g2.cartan_matrix == ((2, -1), (-3, 2)) and len(g2.positive_roots) == 6


@pytest.mark.parametrize("text", SMALL_TYPES + ["E6", "E7", "E8", "D5", "B2xA3"])
def test_cartan_invariants(text):
    d = build_cartan(text)
    a = d.cartan_matrix
    n = d.N
    for i in range(n):
        assert a[i][i] == 2
        for j in range(n):
            if i != j:
                assert a[i][j] <= 0
                assert (a[i][j] == 0) == (a[j][i] == 0)
    da = [[d.symmetrizers[i] * a[i][j] for j in range(n)] for i in range(n)]
    assert all(da[i][j] == da[j][i] for i in range(n) for j in range(n))
    assert all(m > 0 for m in leading_minors(da))
    expected = sum(positive_root_count(l, r) for l, r in d.series)
    assert len(d.positive_roots) == expected


@pytest.mark.parametrize("text", SMALL_TYPES)
def test_weyl_group_order_and_root_permutation(text):
    d = build_cartan(text)
    group = weyl_group(d)
    expected = 1
    for l, r in d.series:
        expected *= weyl_order_table(l, r)
    assert len(group) == expected
    assert group[0].word_length == 0 and all(x == int(i == j) for i, row in enumerate(group[0].matrix) for j, x in enumerate(row))
    assert len({w.matrix for w in group}) == len(group)
    roots = d.roots
    for w in group:
        assert abs(leading_minors(w.matrix)[-1]) == 1
        assert {weyl_action(w, r) for r in roots} == roots


def test_root_closure_against_weyl_orbits():
    # independent route: images of simple roots under every Weyl element
    for text in ["A2", "B2", "G2", "B3", "C3", "D4"]:
        d = build_cartan(text)
        orbit_roots = {weyl_action(w, a) for w in weyl_group(d) for a in d.simple_roots}
        assert orbit_roots == set(d.roots)


def test_small_weyl_groups():
    assert len(weyl_group(build_cartan("A1"))) == 2
    assert len(weyl_group(build_cartan("A2"))) == 6
    assert len(weyl_group(build_cartan("B2"))) == 8
    assert len(weyl_group(build_cartan("G2"))) == 12


def test_word_lengths_match_inversions():
    # length = number of positive roots sent to negative roots
    d = build_cartan("B3")
    pos = set(d.positive_roots)
    for w in weyl_group(d):
        inversions = sum(1 for r in pos if weyl_action(w, r) not in pos)
        assert inversions == w.word_length


def test_weyl_action_examples(A1, A2):
    ident = A1.identity()
    assert weyl_action(ident, (5,)) == (5,)
    s1 = weyl_group(A1)[1]
    assert weyl_action(s1, (1,)) == (-1,)
    w0 = longest_element(A2)
    assert w0.word_length == 3
    assert weyl_action(w0, (1, 0)) == (0, -1)
    with pytest.raises(CartanError):
        weyl_action(ident, (1, 2))


def test_weyl_cap():
    with pytest.raises(CapExceededError, match="cap of 5"):
        weyl_group(build_cartan("A2"), cap=5)
    with pytest.raises(CapExceededError):
        weyl_group(build_cartan("E6"), cap=1000)


def classical_fundamental_dims(letter, n):
    if letter == "A":
        return [comb(n + 1, j) for j in range(1, n + 1)]
    if letter == "B":
        return [comb(2 * n + 1, j) for j in range(1, n)] + [2**n]
    if letter == "C":
        return [comb(2 * n, j) - (comb(2 * n, j - 2) if j >= 2 else 0) for j in range(1, n + 1)]
    if letter == "D":
        return [comb(2 * n, j) for j in range(1, n - 1)] + [2 ** (n - 1)] * 2


@pytest.mark.parametrize("letter,n", [("A", k) for k in range(1, 8)] + [("B", k) for k in range(2, 7)] + [("C", k) for k in range(3, 7)] + [("D", k) for k in range(4, 8)])
def test_fundamental_dimensions_classical(letter, n):
    assert list(fundamental_dimensions(build_cartan([(letter, n)]))) == classical_fundamental_dims(letter, n)


def test_exceptional_dimensions():
    assert fundamental_dimensions(build_cartan("G2")) == (7, 14)
    assert fundamental_dimensions(build_cartan("F4")) == (52, 1274, 273, 26)
    assert fundamental_dimensions(build_cartan("E6")) == (27, 78, 351, 2925, 351, 27)
    assert fundamental_dimensions(build_cartan("E8"))[-1] == 248


def test_weyl_dimension_examples(A1, G2):
    assert weyl_dimension(A1, (1,)) == 2
    assert weyl_dimension(G2, (0, 0)) == 1
    assert weyl_dimension(G2, (1, 0)) == 7 and weyl_dimension(G2, (0, 1)) == 14
    # adjoint of A2 via the highest root
    assert weyl_dimension(build_cartan("A2"), (1, 1)) == 8
    with pytest.raises(CartanError, match="not dominant"):
        weyl_dimension(A1, (-1,))


def test_fundamental_dims_nontrivial():
    for text in SMALL_TYPES:
        assert all(d > 1 for d in fundamental_dimensions(build_cartan(text)))


def test_parse_type():
    assert parse_type("A1xA1") == [("A", 1), ("A", 1)]
    assert parse_type("g2") == [("G", 2)]
    assert parse_type("b3XA2") == [("B", 3), ("A", 2)]
    for bad in ["Z9", "B1", "C2", "D3", "E5", "F3", "G3", "A0", "", "A1x"]:
        with pytest.raises(CartanError):
            parse_type(bad)


def test_invalid_pair_is_named():
    with pytest.raises(CartanError, match="D3"):
        build_cartan([("D", 3)])


def test_products_are_block_diagonal():
    d = build_cartan("A1xG2")
    assert d.cartan_matrix == ((2, 0, 0), (0, 2, -1), (0, -3, 2))
    assert fundamental_dimensions(d) == (2, 7, 14)


@pytest.mark.parametrize("text", SMALL_TYPES)
def test_weyl_order_formula_matches_enumeration(text):
    d = build_cartan(text)
    assert weyl_order(d) == len(weyl_group(d))


def test_exponents_and_large_orders():
    assert exponents(build_cartan("E8")) == (1, 7, 11, 13, 17, 19, 23, 29)
    assert exponents(build_cartan("D4")) == (1, 3, 3, 5)
    for text in ["E6", "E7", "E8"]:
        assert weyl_order(build_cartan(text)) == weyl_order_table("E", int(text[1]))
    # sum of exponents counts positive roots
    for text in SMALL_TYPES + ["E7"]:
        d = build_cartan(text)
        assert sum(exponents(d)) == len(d.positive_roots)
