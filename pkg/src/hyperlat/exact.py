"""Exact integer/rational linear algebra and number-theoretic symbols.

Matrices are plain tuples of row tuples holding ``int`` or ``Fraction``.
Everything here is exact; nothing returns floats.
"""
from __future__ import annotations

from fractions import Fraction
from math import gcd, isqrt
from typing import Iterable, Sequence

Matrix = tuple  # tuple[tuple[int | Fraction, ...], ...]


def as_matrix(rows: Iterable[Iterable]) -> Matrix:
    return tuple(tuple(r) for r in rows)


def identity(n: int) -> Matrix:
    return tuple(tuple(int(i == j) for j in range(n)) for i in range(n))


def transpose(a: Sequence[Sequence]) -> Matrix:
    return tuple(zip(*a)) if a else ()


def mat_mul(a: Sequence[Sequence], b: Sequence[Sequence]) -> Matrix:
    bt = transpose(b)
    return tuple(tuple(sum(x * y for x, y in zip(row, col)) for col in bt) for row in a)


def mat_vec(a: Sequence[Sequence], v: Sequence) -> tuple:
    return tuple(sum(x * y for x, y in zip(row, v)) for row in a)


def vec_mat(v: Sequence, a: Sequence[Sequence]) -> tuple:
    return tuple(sum(v[i] * a[i][j] for i in range(len(v))) for j in range(len(a[0])))


def bilinear(gram: Sequence[Sequence], x: Sequence, y: Sequence):
    """x^T G y."""
    return sum(x[i] * sum(g * yj for g, yj in zip(gram[i], y)) for i in range(len(x)) if x[i])


def normalize(x):
    """Return ``x`` as an int when it is an integral Fraction."""
    if isinstance(x, Fraction) and x.denominator == 1:
        return int(x.numerator)
    return x


def is_integral(m) -> bool:
    if isinstance(m, (int, Fraction)):
        return Fraction(m).denominator == 1
    return all(is_integral(x) for x in m)


def to_int_matrix(a: Sequence[Sequence]) -> Matrix:
    if not is_integral(a):
        raise ValueError('matrix has non-integral entries')
    return tuple(tuple(int(x) for x in row) for row in a)


def is_symmetric(a: Sequence[Sequence]) -> bool:
    n = len(a)
    return all(len(a[i]) == n for i in range(n)) and all(
        a[i][j] == a[j][i] for i in range(n) for j in range(i))


def _gauss(a: Sequence[Sequence], b: Sequence[Sequence] | None = None):
    """Gauss-Jordan over Q. Returns (rank, det sign*value, reduced a, reduced b)."""
    n = len(a)
    m = [[Fraction(x) for x in row] for row in a]
    rhs = [[Fraction(x) for x in row] for row in b] if b is not None else None
    det = Fraction(1)
    r = 0
    cols = len(m[0]) if m else 0
    for c in range(cols):
        piv = next((i for i in range(r, n) if m[i][c] != 0), None)
        if piv is None:
            det = Fraction(0)
            continue
        if piv != r:
            m[r], m[piv] = m[piv], m[r]
            if rhs is not None:
                rhs[r], rhs[piv] = rhs[piv], rhs[r]
            det = -det
        p = m[r][c]
        det *= p
        inv = 1 / p
        m[r] = [x * inv for x in m[r]]
        if rhs is not None:
            rhs[r] = [x * inv for x in rhs[r]]
        for i in range(n):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
                if rhs is not None:
                    rhs[i] = [x - f * y for x, y in zip(rhs[i], rhs[r])]
        r += 1
    return r, det, m, rhs


def det(a: Sequence[Sequence]):
    """Exact determinant (int for integer input)."""
    n = len(a)
    if n == 0:
        return 1
    if n == 1:
        return a[0][0]
    if n == 2:
        return a[0][0] * a[1][1] - a[0][1] * a[1][0]
    if n == 3:
        return (a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1])
                - a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0])
                + a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0]))
    r, d, _, _ = _gauss(a)
    return normalize(d if r == n else Fraction(0))


def rank(a: Sequence[Sequence]) -> int:
    if not a:
        return 0
    return _gauss(a)[0]


def inverse(a: Sequence[Sequence]) -> Matrix:
    n = len(a)
    r, _, _, inv = _gauss(a, identity(n))
    if r != n:
        raise ZeroDivisionError('singular matrix')
    return tuple(tuple(normalize(x) for x in row) for row in inv)


def solve_left(a: Sequence[Sequence], b: Sequence) -> tuple:
    """Return x with x·A = b for square invertible A."""
    inv = inverse(a)
    return tuple(normalize(x) for x in vec_mat(b, inv))


def common_denominator(m) -> int:
    if isinstance(m, (int, Fraction)):
        return Fraction(m).denominator
    den = 1
    for x in m:
        d = common_denominator(x)
        den = den * d // gcd(den, d)
    return den


def vec_gcd(v: Iterable[int]) -> int:
    g = 0
    for x in v:
        g = gcd(g, int(x))
    return g


def xgcd(a: int, b: int) -> tuple[int, int, int]:
    """Return (g, x, y) with a*x + b*y = g = gcd(a, b) >= 0."""
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        a, x0, y0 = -a, -x0, -y0
    return a, x0, y0


# ---------------------------------------------------------------------------
# Normal forms
# ---------------------------------------------------------------------------

def smith_normal_form(m: Sequence[Sequence[int]]) -> tuple[Matrix, Matrix, Matrix]:
    """Smith normal form with transforms.

    Returns ``(D, U, V)`` with ``U @ M @ V == D``, ``D`` diagonal with
    non-negative entries ``d1 | d2 | ...`` and ``U``, ``V`` unimodular.
    """
    a = [list(map(int, row)) for row in m]
    nr = len(a)
    nc = len(a[0]) if nr else 0
    u = [list(r) for r in identity(nr)]
    v = [list(r) for r in identity(nc)]

    def row_comb(i, j, p, q, r, s):
        # rows (i, j) <- (p*ri + q*rj, r*ri + s*rj), for a and u
        for mat in (a, u):
            ri, rj = mat[i], mat[j]
            mat[i] = [p * x + q * y for x, y in zip(ri, rj)]
            mat[j] = [r * x + s * y for x, y in zip(ri, rj)]

    def col_comb(i, j, p, q, r, s):
        for mat in (a, v):
            for row in mat:
                x, y = row[i], row[j]
                row[i] = p * x + q * y
                row[j] = r * x + s * y

    t = 0
    while t < min(nr, nc):
        # pivot: smallest nonzero |entry| in the remaining block
        best = None
        for i in range(t, nr):
            for j in range(t, nc):
                if a[i][j] and (best is None or abs(a[i][j]) < abs(a[best[0]][best[1]])):
                    best = (i, j)
        if best is None:
            break
        i, j = best
        if i != t:
            a[t], a[i] = a[i], a[t]
            u[t], u[i] = u[i], u[t]
        if j != t:
            col_comb(t, j, 0, 1, 1, 0)
        done = False
        while not done:
            done = True
            # plain subtraction when the pivot divides, so row and column
            # steps cannot keep trading the same entry back and forth
            for i in range(t + 1, nr):
                if not a[i][t]:
                    continue
                if a[i][t] % a[t][t] == 0:
                    row_comb(t, i, 1, 0, -(a[i][t] // a[t][t]), 1)
                else:
                    g, x, y = xgcd(a[t][t], a[i][t])
                    p, q = a[t][t] // g, a[i][t] // g
                    row_comb(t, i, x, y, -q, p)
            for j in range(t + 1, nc):
                if not a[t][j]:
                    continue
                if a[t][j] % a[t][t] == 0:
                    col_comb(t, j, 1, 0, -(a[t][j] // a[t][t]), 1)
                else:
                    g, x, y = xgcd(a[t][t], a[t][j])
                    p, q = a[t][t] // g, a[t][j] // g
                    col_comb(t, j, x, y, -q, p)
                    done = False
            if any(a[i][t] for i in range(t + 1, nr)):
                done = False
            if done:
                # divisibility: pivot must divide every remaining entry
                piv = a[t][t]
                bad = next(((i, j) for i in range(t + 1, nr) for j in range(t + 1, nc)
                            if a[i][j] % piv), None)
                if bad is not None:
                    row_comb(t, bad[0], 1, 1, 0, 1)
                    done = False
        if a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            u[t] = [-x for x in u[t]]
        t += 1
    return as_matrix(a), as_matrix(u), as_matrix(v)


def invariant_factors(m: Sequence[Sequence[int]]) -> list[int]:
    d, _, _ = smith_normal_form(m)
    return [d[i][i] for i in range(min(len(d), len(d[0]) if d else 0))]


def hermite_rows(rows: Sequence[Sequence[int]]) -> Matrix:
    """Row-style Hermite normal form of the Z-module spanned by ``rows``.

    Returns a basis (nonzero rows only), upper triangular with positive
    pivots and reduced entries above each pivot.
    """
    a = [list(map(int, r)) for r in rows if any(r)]
    if not a:
        return ()
    nc = len(a[0])
    out = []
    col = 0
    while a and col < nc:
        nz = [r for r in a if r[col]]
        zero = [r for r in a if not r[col]]
        if not nz:
            col += 1
            continue
        while len(nz) > 1:
            nz.sort(key=lambda r: abs(r[col]))
            p = nz[0]
            rest = []
            for r in nz[1:]:
                q = r[col] // p[col]
                r = [x - q * y for x, y in zip(r, p)]
                if r[col]:
                    rest.append(r)
                elif any(r):
                    zero.append(r)
            nz = [p] + rest
        p = nz[0]
        if p[col] < 0:
            p = [-x for x in p]
        out.append(p)
        a = zero
        col += 1
    # reduce above pivots
    for i in range(len(out)):
        pc = next(c for c in range(nc) if out[i][c])
        for k in range(i):
            q = out[k][pc] // out[i][pc]
            if q:
                out[k] = [x - q * y for x, y in zip(out[k], out[i])]
    return as_matrix(out)


def module_basis(rows: Sequence[Sequence]) -> Matrix:
    """HNF basis of the Z-module generated by rational row vectors."""
    den = common_denominator(rows)
    ints = [[int(x * den) for x in r] for r in rows]
    h = hermite_rows(ints)
    return tuple(tuple(normalize(Fraction(x, den)) for x in r) for r in h)


# ---------------------------------------------------------------------------
# Number theory
# ---------------------------------------------------------------------------

def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def factorize(n: int) -> dict[int, int]:
    """Prime factorisation of |n| (trial division)."""
    n = abs(int(n))
    out: dict[int, int] = {}
    p = 2
    while p * p <= n:
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
        p += 1 if p == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def prime_divisors(n: int) -> list[int]:
    return sorted(factorize(n))


def is_squarefree(n: int) -> bool:
    return n != 0 and all(e == 1 for e in factorize(n).values())


def divisors(n: int) -> list[int]:
    divs = [1]
    for p, e in factorize(n).items():
        divs = [d * p ** k for d in divs for k in range(e + 1)]
    return sorted(divs)


def is_square(n: int) -> bool:
    return n >= 0 and isqrt(n) ** 2 == n


def legendre_symbol(a: int, p: int) -> int:
    """Legendre symbol (a/p) for an odd prime p."""
    if p <= 2 or not is_prime(p):
        raise ValueError(f'{p} is not an odd prime')
    a %= p
    if a == 0:
        return 0
    return 1 if pow(a, (p - 1) // 2, p) == 1 else -1


def _valuation(n: int, p: int) -> tuple[int, int]:
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v, n


def _squarefree_int(x: Fraction) -> int:
    """An integer in the same square class as the nonzero rational x."""
    x = Fraction(x)
    return x.numerator * x.denominator


def hilbert_symbol(a, b, p) -> int:
    """Local Hilbert symbol (a, b)_p for nonzero rationals; p prime or 'infinity'."""
    a, b = Fraction(a), Fraction(b)
    if a == 0 or b == 0:
        raise ValueError('Hilbert symbol needs nonzero arguments')
    if p in ('infinity', 'oo', -1, float('inf')):
        return -1 if (a < 0 and b < 0) else 1
    p = int(p)
    if not is_prime(p):
        raise ValueError(f'{p} is not prime')
    a, b = _squarefree_int(a), _squarefree_int(b)
    va, ua = _valuation(a, p)
    vb, ub = _valuation(b, p)
    if p == 2:
        eps = lambda u: ((u - 1) // 2) % 2  # noqa: E731
        omega = lambda u: ((u * u - 1) // 8) % 2  # noqa: E731
        e = (eps(ua) * eps(ub) + va * omega(ub) + vb * omega(ua)) % 2
        return -1 if e else 1
    sign = -1 if (va * vb) % 2 and (p % 4 == 3) else 1
    sym = sign
    if vb % 2:
        sym *= legendre_symbol(ua, p)
    if va % 2:
        sym *= legendre_symbol(ub, p)
    return sym


def rational_sqrt(x: Fraction) -> Fraction | None:
    """Exact square root of a non-negative rational, or None."""
    x = Fraction(x)
    if x < 0:
        return None
    n, d = x.numerator, x.denominator
    rn, rd = isqrt(n), isqrt(d)
    if rn * rn == n and rd * rd == d:
        return Fraction(rn, rd)
    return None
