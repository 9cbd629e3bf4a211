"""Integral lattices on an explicit integral basis.

A :class:`Lattice` stores its Gram matrix and, when it was built from a
glue symbol, the basis it uses expressed in the coordinates of the
orthogonal "base" lattice the symbol describes. Root coordinates quoted
in base coordinates (half-integers allowed) convert through
:meth:`Lattice.from_ambient`.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from math import isqrt
from typing import Sequence

from . import exact
from .exact import Matrix


class LatticeError(ValueError):
    """Invalid lattice data or an operation outside its domain."""


class SymbolError(LatticeError):
    """Malformed lattice symbol text."""


@dataclass(frozen=True)
class GlueSpec:
    base: Matrix
    glue_vectors: tuple

    def __post_init__(self):
        for g in self.glue_vectors:
            pairings = exact.vec_mat(g, self.base)
            if not exact.is_integral(pairings):
                raise LatticeError(f'glue vector {g} is not in the dual of the base lattice')


@dataclass(frozen=True)
class Lattice:
    gram: Matrix
    basis: Matrix | None = None  # rows: basis vectors in ambient coordinates
    ambient_gram: Matrix | None = None
    glue: GlueSpec | None = field(default=None, compare=False)
    symbol: str | None = field(default=None, compare=False)

    def __post_init__(self):
        g = exact.as_matrix(self.gram)
        if not exact.is_symmetric(g):
            raise LatticeError('Gram matrix must be square and symmetric')
        if not exact.is_integral(g):
            raise LatticeError('Gram matrix is not integral')
        g = exact.to_int_matrix(g)
        object.__setattr__(self, 'gram', g)
        if exact.det(g) == 0:
            raise LatticeError('degenerate form (det = 0)')

    @property
    def rank(self) -> int:
        return len(self.gram)

    def __repr__(self) -> str:
        if self.symbol:
            return f'Lattice({self.symbol!r})'
        return f'Lattice(gram={self.gram})'

    def dot(self, x: Sequence, y: Sequence):
        return exact.bilinear(self.gram, x, y)

    def norm(self, x: Sequence):
        return exact.bilinear(self.gram, x, x)

    def from_ambient(self, x: Sequence) -> tuple:
        """Coordinates on this lattice's basis of a vector given in ambient
        (base-symbol) coordinates. Raises if the vector is not in the lattice."""
        if self.basis is None:
            c = tuple(exact.normalize(Fraction(v)) for v in x)
        else:
            c = exact.solve_left(self.basis, x)
        if not exact.is_integral(c):
            raise LatticeError(f'{tuple(x)} is not a lattice vector')
        return tuple(int(v) for v in c)

    def to_ambient(self, c: Sequence) -> tuple:
        if self.basis is None:
            return tuple(c)
        return tuple(exact.normalize(v) for v in exact.vec_mat(c, self.basis))

    def with_basis(self, basis: Sequence[Sequence], gram=None) -> 'Lattice':
        """New lattice whose basis rows are given in *this* lattice's coordinates."""
        basis = exact.as_matrix(basis)
        if gram is None:
            gram = exact.mat_mul(exact.mat_mul(basis, self.gram), exact.transpose(basis))
        amb = basis if self.basis is None else exact.mat_mul(basis, self.basis)
        amb = tuple(tuple(exact.normalize(x) for x in r) for r in amb)
        return Lattice(gram, amb, self.ambient_gram if self.ambient_gram is not None else self.gram)


def diagonal(*entries: int) -> Lattice:
    return Lattice(tuple(tuple(e if i == j else 0 for j in range(len(entries)))
                         for i, e in enumerate(entries)))


U = Lattice(((0, 1), (1, 0)), symbol='U')


def orthogonal_sum(*blocks: Sequence[Sequence[int]]) -> Matrix:
    n = sum(len(b) for b in blocks)
    out = [[0] * n for _ in range(n)]
    off = 0
    for b in blocks:
        for i, row in enumerate(b):
            for j, x in enumerate(row):
                out[off + i][off + j] = x
        off += len(b)
    return exact.as_matrix(out)


# ---------------------------------------------------------------------------
# symbol grammar
# ---------------------------------------------------------------------------

_TERM = re.compile(r'U|<\s*[+-]?\d+\s*>')
_RAT = re.compile(r'^[+-]?\d+(/\d+)?$')


def _parse_rat(tok: str) -> Fraction:
    tok = tok.strip()
    if not _RAT.match(tok):
        raise SymbolError(f'bad rational {tok!r}')
    q = Fraction(tok)
    if '/' in tok and int(tok.split('/')[1]) == 0:
        raise SymbolError('zero denominator')
    return q


def parse_lattice_symbol(text: str) -> Lattice:
    """Build a lattice from text such as ``"<1> + <-10> + <-2> (0,1/2,1/2)"``."""
    s = re.sub(r'\s+', '', text)
    if not s:
        raise SymbolError('empty symbol')
    glue_at = s.find('(')
    terms_txt, glue_txt = (s, '') if glue_at < 0 else (s[:glue_at], s[glue_at:])
    terms = terms_txt.split('+')
    blocks = []
    for t in terms:
        if not _TERM.fullmatch(t):
            raise SymbolError(f'bad term {t!r} in {text!r}')
        blocks.append(((0, 1), (1, 0)) if t == 'U' else ((int(t[1:-1]),),))
    base = orthogonal_sum(*blocks)
    gens = []
    if glue_txt:
        groups = re.findall(r'\(([^()]*)\)', glue_txt)
        if ''.join(f'({g})' for g in groups) != glue_txt:
            raise SymbolError(f'bad glue part {glue_txt!r}')
        for g in groups:
            vec = tuple(_parse_rat(x) for x in g.split(','))
            if len(vec) != len(base):
                raise SymbolError(f'glue vector {g!r} has wrong length')
            gens.append(vec)
    canonical = _format_symbol(blocks, gens)
    if exact.det(base) == 0:
        raise LatticeError('degenerate base form')
    spec = GlueSpec(base, tuple(gens))
    base_lat = Lattice(base, symbol=canonical)
    if not gens:
        return base_lat
    lat = overlattice(base_lat, gens)
    return Lattice(lat.gram, lat.basis, base, glue=spec, symbol=canonical)


def _format_symbol(blocks, gens) -> str:
    parts = ['U' if b == ((0, 1), (1, 0)) else f'<{b[0][0]}>' for b in blocks]
    s = ' + '.join(parts)
    for g in gens:
        s += ' (' + ','.join(str(x) for x in g) + ')'
    return s


# ---------------------------------------------------------------------------
# basic invariants and constructions
# ---------------------------------------------------------------------------

def determinant(lat: Lattice) -> int:
    return exact.det(lat.gram)


def parity(lat: Lattice) -> str:
    return 'even' if all(lat.gram[i][i] % 2 == 0 for i in range(lat.rank)) else 'odd'


def is_even(lat: Lattice) -> bool:
    return parity(lat) == 'even'


def signature(lat: Lattice) -> tuple[int, int]:
    """(positive, negative) inertia via exact LDL^T-style pivoting."""
    g = [[Fraction(x) for x in r] for r in lat.gram]
    n = len(g)
    pos = neg = 0
    # symmetric Gaussian elimination with 2x2 handling via basis change
    active = list(range(n))
    while active:
        i = next((k for k in active if g[k][k] != 0), None)
        if i is None:
            # all diagonal zero: find off-diagonal, replace e_a by e_a + e_b
            a, b = next((a, b) for a in active for b in active if a != b and g[a][b] != 0)
            for k in range(n):
                g[a][k] += g[b][k]
            for k in range(n):
                g[k][a] += g[k][b]
            continue
        p = g[i][i]
        if p > 0:
            pos += 1
        else:
            neg += 1
        active.remove(i)
        for a in active:
            f = g[a][i] / p
            if f:
                for k in range(n):
                    g[a][k] -= f * g[i][k]
                for k in range(n):
                    g[k][a] -= f * g[k][i]
    return pos, neg


def is_hyperbolic(lat: Lattice) -> bool:
    return signature(lat) == (1, lat.rank - 1)


def rescale(lat: Lattice, r) -> Lattice:
    """Lattice with the form multiplied by ``r`` (must stay integral)."""
    r = Fraction(r)
    if r <= 0:
        raise LatticeError('scale factor must be positive')
    g = tuple(tuple(x * r for x in row) for row in lat.gram)
    if not exact.is_integral(g):
        raise LatticeError(f'scaling by {r} gives a non-integral form')
    amb = None
    if lat.ambient_gram is not None:
        amb = tuple(tuple(exact.normalize(x * r) for x in row) for row in lat.ambient_gram)
    return Lattice(g, lat.basis, amb)


def dual_basis(lat: Lattice) -> Matrix:
    """Rows: a basis of L* in L-coordinates (= rows of G^{-1})."""
    return exact.inverse(lat.gram)


def in_dual(lat: Lattice, x: Sequence) -> bool:
    return exact.is_integral(exact.mat_vec(lat.gram, x))


def overlattice(lat: Lattice, gens: Sequence[Sequence]) -> Lattice:
    """Lattice generated by ``lat`` and rational vectors ``gens`` (L-coordinates)."""
    gens = [tuple(Fraction(x) for x in g) for g in gens]
    for g in gens:
        if len(g) != lat.rank:
            raise LatticeError('generator has wrong length')
        if not in_dual(lat, g):
            raise LatticeError(f'generator {g} is not in the dual lattice')
    if not gens:
        return lat
    rows = list(exact.identity(lat.rank)) + gens
    basis = exact.module_basis(rows)
    gram = exact.mat_mul(exact.mat_mul(basis, lat.gram), exact.transpose(basis))
    if not exact.is_integral(gram):
        raise LatticeError('glue subgroup is not isotropic: resulting form is not integral')
    return lat.with_basis(basis, exact.to_int_matrix(gram))


def even_sublattice(lat: Lattice) -> tuple[Lattice, Matrix]:
    """Index-2 sublattice {x : x^2 even} of an odd lattice, with its inclusion
    matrix (rows = new basis in old coordinates)."""
    if is_even(lat):
        raise LatticeError('lattice is already even')
    n = lat.rank
    par = [lat.gram[i][i] % 2 for i in range(n)]
    j = next(i for i in range(n) if par[i])
    rows = [tuple(2 if k == j else 0 for k in range(n))]
    for i in range(n):
        if i == j:
            continue
        e = [0] * n
        e[i] = 1
        if par[i]:
            e[j] = 1
        rows.append(tuple(e))
    basis = exact.hermite_rows(rows)
    return lat.with_basis(basis), basis


def sublattice(lat: Lattice, rows: Sequence[Sequence[int]]) -> Lattice:
    return lat.with_basis(exact.hermite_rows(rows))


# ---------------------------------------------------------------------------
# isotropy
# ---------------------------------------------------------------------------

def rational_diagonal(lat: Lattice) -> list[Fraction]:
    """Diagonal entries of a rational diagonalisation of the form."""
    g = [[Fraction(x) for x in r] for r in lat.gram]
    n = len(g)
    out = []
    for i in range(n):
        if g[i][i] == 0:
            j = next((j for j in range(i + 1, n) if g[j][j] != 0), None)
            if j is not None:
                g[i], g[j] = g[j], g[i]
                for r in g:
                    r[i], r[j] = r[j], r[i]
            else:
                j = next((j for j in range(i + 1, n) if g[i][j] != 0), None)
                if j is None:
                    raise LatticeError('degenerate form')
                for k in range(n):
                    g[i][k] += g[j][k]
                for k in range(n):
                    g[k][i] += g[k][j]
        p = g[i][i]
        out.append(p)
        for a in range(i + 1, n):
            f = g[a][i] / p
            if f:
                for k in range(n):
                    g[a][k] -= f * g[i][k]
                for k in range(n):
                    g[k][a] -= f * g[k][i]
    return out


def represents_zero(lat: Lattice) -> bool:
    """Hasse-Minkowski test for a nonzero isotropic vector (rank 3, indefinite)."""
    if lat.rank != 3:
        raise LatticeError('represents_zero is implemented for rank 3')
    pos, neg = signature(lat)
    if pos == 0 or neg == 0:
        raise LatticeError('form is definite')
    a, b, c = rational_diagonal(lat)
    # <a,b,c> isotropic  <=>  (-ac, -bc)_p = 1 for every p
    x, y = -a * c, -b * c
    primes = {2}
    for q in (x, y):
        primes |= set(exact.prime_divisors(q.numerator)) | set(exact.prime_divisors(q.denominator))
    return all(exact.hilbert_symbol(x, y, p) == 1 for p in primes)


def find_isotropic(lat: Lattice, bound: int) -> tuple | None:
    """Brute-force search for x != 0 with x^2 = 0 and |x_i| <= bound."""
    n = lat.rank
    g = lat.gram
    if n == 3:
        # solve for the last coordinate exactly
        for x0 in range(-bound, bound + 1):
            for x1 in range(-bound, bound + 1):
                a = g[2][2]
                b = 2 * (g[0][2] * x0 + g[1][2] * x1)
                c = g[0][0] * x0 * x0 + 2 * g[0][1] * x0 * x1 + g[1][1] * x1 * x1
                if a == 0:
                    if b == 0:
                        if c == 0 and (x0 or x1):
                            return (x0, x1, 0)
                        continue
                    if (-c) % b == 0 and abs(-c // b) <= bound and (x0 or x1 or c):
                        x2 = -c // b
                        if x0 or x1 or x2:
                            return (x0, x1, x2)
                    continue
                disc = b * b - 4 * a * c
                if disc < 0 or not exact.is_square(disc):
                    continue
                s = isqrt(disc)
                for num in (-b + s, -b - s):
                    if num % (2 * a) == 0:
                        x2 = num // (2 * a)
                        if abs(x2) <= bound and (x0 or x1 or x2):
                            return (x0, x1, x2)
        return None
    for x in product(range(-bound, bound + 1), repeat=n):
        if any(x) and lat.norm(x) == 0:
            return x
    return None
