import random
from fractions import Fraction
from itertools import combinations, product

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nonsos.exactq import (
    det,
    format_rat,
    inverse,
    matmul,
    matvec,
    nullspace,
    parse_rat,
    psd_rank,
    rank,
    rank_of_submatrices,
    identity,
)
from nonsos.forms import veronese


def test_nullspace_identity():
    assert nullspace(identity(3)) == (3, [])


def test_nullspace_proportional_rows():
    r, basis = nullspace([[1, 2], [2, 4]])
    assert r == 1
    assert basis == [[Fraction(-2), Fraction(1)]]


def test_nullspace_of_reznick_cubic_evaluations(reznick_points):
    m = [list(col) for col in zip(*(veronese(v, 3) for v in reznick_points))]
    assert len(m) == 10 and len(m[0]) == 9
    r, basis = nullspace(m)
    assert r == 8 and len(basis) == 1
    u = basis[0]
    expected = [84, -1260, -36, -90, 63, 35, -60, 3, 1]
    assert all(x * expected[-1] == y * u[-1] for x, y in zip(u, expected))


def test_nullspace_basis_is_echelon():
    m = [[1, 2, 0, 3], [0, 0, 1, 4]]
    r, basis = nullspace(m)
    assert r == 2
    # one vector per free column (1 and 3), unit entry there
    assert basis == [[-2, 1, 0, 0], [-3, 0, -4, 1]]


@pytest.mark.parametrize("seed", range(50))
def test_nullspace_vectors_are_annihilated(seed):
    rng = random.Random(seed)
    rows, cols = rng.randint(1, 6), rng.randint(1, 7)
    base = [[Fraction(rng.randint(-4, 4), rng.randint(1, 3)) for _ in range(cols)] for _ in range(max(1, rows - 2))]
    # add dependent rows so rank deficiency is common
    m = base + [[a + b for a, b in zip(base[0], base[-1])] for _ in range(rows - len(base))]
    r, basis = nullspace(m)
    assert r + len(basis) == cols
    assert r == rank(m)
    for v in basis:
        assert all(x == 0 for x in matvec(m, v))
    if basis:
        assert rank(basis) == len(basis)
    assert nullspace(m) == (r, basis)  # deterministic


def test_psd_examples():
    assert psd_rank([[0, 0], [0, 0]]) == (True, 0)
    assert psd_rank([[1, 2], [2, 4]]) == (True, 1)
    assert psd_rank([[1, 0], [0, -1]]) == (False, 2)


def test_psd_rejects_nonsymmetric():
    with pytest.raises(ValueError):
        psd_rank([[1, 2], [0, 1]])


def minors_oracle(g):
    """PSD iff every principal minor is nonnegative."""
    n = len(g)
    for k in range(1, n + 1):
        for idx in combinations(range(n), k):
            if det([[g[i][j] for j in idx] for i in idx]) < 0:
                return False
    return True


def symmetric_from(entries, n):
    g = [[0] * n for _ in range(n)]
    it = iter(entries)
    for i in range(n):
        for j in range(i, n):
            g[i][j] = g[j][i] = next(it)
    return g


def test_psd_agrees_with_minors_on_all_2x2_and_3x3():
    for n in (2, 3):
        count = n * (n + 1) // 2
        for entries in product(range(-2, 3), repeat=count):
            g = symmetric_from(entries, n)
            is_psd, r = psd_rank(g)
            assert is_psd == minors_oracle(g), g
            assert r == rank(g)


@settings(max_examples=300, deadline=None)
@given(st.lists(st.integers(-2, 2), min_size=10, max_size=10))
def test_psd_agrees_with_minors_on_4x4(entries):
    g = symmetric_from(entries, 4)
    is_psd, r = psd_rank(g)
    assert is_psd == minors_oracle(g)
    assert r == rank(g)


@pytest.mark.parametrize("seed", range(30))
def test_gram_matrices_are_psd(seed):
    rng = random.Random(seed)
    k, n = rng.randint(1, 5), rng.randint(1, 6)
    b = [[Fraction(rng.randint(-3, 3), rng.randint(1, 4)) for _ in range(n)] for _ in range(k)]
    g = matmul([list(c) for c in zip(*b)], b)
    assert psd_rank(g) == (True, rank(b))


def test_rank_of_submatrices():
    row = [1, 2, 3]
    assert rank_of_submatrices([row] * 4, 4) == (1, 1)
    assert rank_of_submatrices(identity(3), 3) == (3, 3)


def test_motzkin_points_no_four_collinear():
    from nonsos import fixtures

    pts = fixtures.MOTZKIN_ZEROS + fixtures.MOTZKIN_EXTRAS
    assert rank_of_submatrices(pts, 4)[1] == 3


def test_rank_of_submatrices_rejects_large_subset():
    with pytest.raises(ValueError):
        rank_of_submatrices([[1, 2]], 2)


def test_det_and_inverse():
    a = [[2, 1, 0], [1, 3, 1], [0, 1, 4]]
    assert det(a) == 18
    assert matmul(a, inverse(a)) == identity(3)
    assert det([[1, 2], [2, 4]]) == 0
    with pytest.raises(ZeroDivisionError):
        inverse([[1, 2], [2, 4]])
    assert det([[Fraction(1, 2), 0], [0, Fraction(2, 3)]]) == Fraction(1, 3)


@pytest.mark.parametrize("seed", range(30))
def test_det_matches_cofactor_expansion(seed):
    rng = random.Random(seed)
    n = rng.randint(1, 4)
    a = [[Fraction(rng.randint(-5, 5), rng.randint(1, 3)) for _ in range(n)] for _ in range(n)]

    def cofactor(m):
        if len(m) == 1:
            return m[0][0]
        return sum((-1) ** j * m[0][j] * cofactor([row[:j] + row[j + 1 :] for row in m[1:]]) for j in range(len(m)))

    assert det(a) == cofactor(a)


def test_rational_text_round_trip():
    for x in (Fraction(0), Fraction(-7, 2), Fraction(10**30 + 1, 3)):
        assert parse_rat(format_rat(x)) == x
    assert format_rat(Fraction(3)) == "3/1"
    with pytest.raises(ValueError):
        parse_rat("0.5")
