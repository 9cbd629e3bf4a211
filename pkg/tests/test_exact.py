import random
from fractions import Fraction
from itertools import combinations

import pytest
from hypothesis import given, strategies as st

from hyperlat import exact


def _determinantal_divisors(m):
    """gcd of all k x k minors, k = 1..n. Independent of the elimination code."""
    n = len(m)
    out = []
    for k in range(1, n + 1):
        g = 0
        for rows in combinations(range(n), k):
            for cols in combinations(range(n), k):
                g = exact.gcd(g, exact.det([[m[i][j] for j in cols] for i in rows]))
        out.append(abs(g))
    return out


def _check_snf(m):
    D, U, V = exact.smith_normal_form(m)
    assert exact.mat_mul(exact.mat_mul(U, m), V) == D
    assert abs(exact.det(U)) == 1 and abs(exact.det(V)) == 1
    n = len(m)
    diag = [D[i][i] for i in range(n)]
    assert all(D[i][j] == 0 for i in range(n) for j in range(n) if i != j)
    assert all(x >= 0 for x in diag)
    for a, b in zip(diag, diag[1:]):
        assert (b == 0) if a == 0 else b % a == 0
    # d_1 ... d_k = k-th determinantal divisor
    prod = 1
    for k, dk in enumerate(_determinantal_divisors(m)):
        prod *= diag[k]
        assert prod == dk
    return D


def test_snf_examples():
    assert _check_snf([[2, 0], [0, 3]]) == ((1, 0), (0, 6))
    D, U, V = exact.smith_normal_form(exact.identity(3))
    assert D == U == V == exact.identity(3)
    assert _check_snf([[0, 1], [1, 0]]) == ((1, 0), (0, 1))


def test_snf_round_trip_random():
    rng = random.Random(20240607)
    for _ in range(1000):
        _check_snf([[rng.randint(-20, 20) for _ in range(3)] for _ in range(3)])


def test_snf_singular_and_rectangular():
    D, U, V = exact.smith_normal_form([[2, 4, 6]])
    assert D == ((2, 0, 0),)
    assert exact.mat_mul(exact.mat_mul(U, [[2, 4, 6]]), V) == D
    _check_snf([[1, 2, 3], [2, 4, 6], [0, 0, 0]])


def test_legendre_examples():
    assert exact.legendre_symbol(2, 7) == 1
    assert exact.legendre_symbol(0, 5) == 0
    assert exact.legendre_symbol(3, 7) == -1
    with pytest.raises(ValueError):
        exact.legendre_symbol(1, 9)


@given(st.integers(-10**6, 10**6), st.sampled_from([3, 5, 7, 11, 13, 101, 997]))
def test_legendre_matches_squares(a, p):
    squares = {x * x % p for x in range(1, p)}
    expected = 0 if a % p == 0 else (1 if a % p in squares else -1)
    assert exact.legendre_symbol(a, p) == expected


def test_hilbert_examples():
    for p in (2, 3, 5, 7, 'infinity'):
        for b in (1, -1, 2, -3, Fraction(5, 7)):
            assert exact.hilbert_symbol(1, b, p) == 1
    assert exact.hilbert_symbol(-1, -1, 'infinity') == -1
    assert exact.hilbert_symbol(-1, -1, 2) == -1


def _places(a, b):
    ps = {2}
    for x in (Fraction(a), Fraction(b)):
        ps |= set(exact.prime_divisors(x.numerator)) | set(exact.prime_divisors(x.denominator))
    return sorted(ps) + ['infinity']


def test_hilbert_product_formula():
    rng = random.Random(7)
    for _ in range(200):
        a = Fraction(rng.choice([-1, 1]) * rng.randint(1, 500), rng.randint(1, 30))
        b = Fraction(rng.choice([-1, 1]) * rng.randint(1, 500), rng.randint(1, 30))
        prod = 1
        for p in _places(a, b):
            prod *= exact.hilbert_symbol(a, b, p)
        assert prod == 1, (a, b)


def test_hilbert_symmetric_and_bimultiplicative():
    rng = random.Random(11)
    for _ in range(200):
        a, b, c = (rng.choice([-1, 1]) * rng.randint(1, 60) for _ in range(3))
        for p in (2, 3, 5, 7, 'infinity'):
            h = exact.hilbert_symbol
            assert h(a, b, p) == h(b, a, p)
            assert h(a, b * c, p) == h(a, b, p) * h(a, c, p)
            assert h(a, -a, p) == 1
            assert h(a, b * 49 * 4, p) == h(a, b, p)


def test_number_theory_helpers():
    assert exact.factorize(360) == {2: 3, 3: 2, 5: 1}
    assert exact.divisors(30) == [1, 2, 3, 5, 6, 10, 15, 30]
    assert exact.is_squarefree(30) and not exact.is_squarefree(12)
    assert exact.xgcd(240, 46)[0] == 2
    g, x, y = exact.xgcd(-35, 15)
    assert g == 5 and -35 * x + 15 * y == g
    assert exact.vec_gcd([4, -6, 10]) == 2


def test_inverse_and_solve():
    m = [[2, 1, 0], [1, 3, 1], [0, 1, 4]]
    inv = exact.inverse(m)
    assert exact.mat_mul(m, inv) == exact.identity(3)
    x = exact.solve_left(m, (1, 2, 3))
    assert exact.vec_mat(x, m) == (1, 2, 3)
