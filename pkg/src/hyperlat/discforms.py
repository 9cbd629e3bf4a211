"""Discriminant groups and forms, elementary lattices, m-duality and the
(d, type, eta) invariants of rank-3 lattices with square-free determinant.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from math import gcd
from typing import Sequence

from . import exact
from .lattice import Lattice, LatticeError, determinant, overlattice, parity, rescale


@dataclass(frozen=True)
class DiscriminantData:
    invariant_factors: tuple[int, ...]
    generator_lifts: tuple[tuple[Fraction, ...], ...]
    order: int

    @property
    def exponent(self) -> int:
        return self.invariant_factors[-1] if self.invariant_factors else 1

    def is_trivial(self) -> bool:
        return not self.invariant_factors


@dataclass(frozen=True)
class InvariantTriple:
    d: int
    type: str
    eta_bits: tuple[int, ...]
    primes: tuple[int, ...]

    @property
    def eta(self) -> int:
        return sum(b << i for i, b in enumerate(self.eta_bits))

    def __str__(self) -> str:
        return f'd={self.d} {self.type} eta={self.eta}'


def discriminant_group(lat: Lattice) -> DiscriminantData:
    D, _, V = exact.smith_normal_form(lat.gram)
    n = lat.rank
    factors, lifts = [], []
    for i in range(n):
        di = abs(D[i][i])
        if di == 0:
            raise LatticeError('degenerate form')
        if di == 1:
            continue
        factors.append(di)
        lifts.append(tuple(exact.normalize(Fraction(V[k][i], di)) for k in range(n)))
    order = 1
    for f in factors:
        order *= f
    return DiscriminantData(tuple(factors), tuple(lifts), order)


def exponent(lat: Lattice) -> int:
    """a(S): the exponent of the discriminant group."""
    return discriminant_group(lat).exponent


def _require_dual(lat: Lattice, x: Sequence) -> tuple:
    x = tuple(Fraction(v) for v in x)
    if len(x) != lat.rank or not exact.is_integral(exact.mat_vec(lat.gram, x)):
        raise LatticeError(f'{x} is not in the dual lattice')
    return x


def disc_bilinear(lat: Lattice, x: Sequence, y: Sequence) -> Fraction:
    x, y = _require_dual(lat, x), _require_dual(lat, y)
    return Fraction(exact.bilinear(lat.gram, x, y)) % 1


def disc_quadratic(lat: Lattice, x: Sequence) -> Fraction:
    if parity(lat) != 'even':
        raise LatticeError('discriminant quadratic form needs an even lattice')
    x = _require_dual(lat, x)
    return Fraction(exact.bilinear(lat.gram, x, x)) % 2


def p_invariants(lat: Lattice) -> dict[int, int]:
    """r_p for each prime p dividing det: rank of the p-torsion of A_L."""
    out: dict[int, int] = {}
    for f in discriminant_group(lat).invariant_factors:
        for p in exact.prime_divisors(f):
            out[p] = out.get(p, 0) + 1
    return dict(sorted(out.items()))


def is_elementary(lat: Lattice) -> bool:
    return all(exact.is_squarefree(f) for f in discriminant_group(lat).invariant_factors)


def _p_part(disc: DiscriminantData, p: int) -> list[tuple[int, tuple]]:
    """(order, lift) of the p-primary parts of the SNF generators."""
    out = []
    for f, g in zip(disc.invariant_factors, disc.generator_lifts):
        e = 0
        while f % p ** (e + 1) == 0:
            e += 1
        if e:
            c = f // p ** e
            out.append((p ** e, tuple(c * x for x in g)))
    return out


def elementarize(lat: Lattice) -> tuple[Lattice, list[Lattice]]:
    """Glue H_p = p^(t_p - 1) A_p until the discriminant group is elementary.

    Coordinates of every lattice in the chain refer to the input lattice."""
    chain = [lat]
    cur = Lattice(lat.gram)
    basis = exact.identity(lat.rank)
    while True:
        disc = discriminant_group(cur)
        bad = [p for p in exact.prime_divisors(disc.order)
               if any(o % (p * p) == 0 for o, _ in _p_part(disc, p))]
        if not bad:
            break
        p = bad[0]
        parts = _p_part(disc, p)
        t = max(o for o, _ in parts)
        gens = [tuple(x * (t // p) for x in g) for o, g in parts if o == t]
        step = overlattice(cur, gens)
        basis = exact.mat_mul(step.basis, basis)
        cur = Lattice(step.gram)
        chain.append(lat.with_basis(basis, cur.gram))
    return chain[-1], chain


def m_dual(lat: Lattice, m: int) -> Lattice:
    """(L* ∩ L/m)(m). Basis rows are in the coordinates of ``lat``."""
    if m <= 0 or not exact.is_squarefree(m):
        raise LatticeError(f'm = {m} must be a positive square-free integer')
    if not is_elementary(lat):
        raise LatticeError('m-duality needs an elementary lattice')
    D, _, V = exact.smith_normal_form(lat.gram)
    n = lat.rank
    rows = []
    for i in range(n):
        g = gcd(abs(D[i][i]), m)
        rows.append(tuple(Fraction(V[k][i], g) for k in range(n)))
    basis = exact.module_basis(rows)
    gram = exact.mat_mul(exact.mat_mul(basis, lat.gram), exact.transpose(basis))
    gram = tuple(tuple(m * x for x in r) for r in gram)
    if not exact.is_integral(gram):
        raise LatticeError('m-dual form is not integral')
    return Lattice(exact.to_int_matrix(gram), tuple(tuple(exact.normalize(x) for x in r) for r in basis))


# ---------------------------------------------------------------------------
# invariants of square-free determinant lattices
# ---------------------------------------------------------------------------

def invariant_triple(lat: Lattice) -> InvariantTriple:
    det = determinant(lat)
    d = abs(det)
    if not exact.is_squarefree(d):
        raise LatticeError(f'determinant {det} is not square-free')
    disc = discriminant_group(lat)
    primes = tuple(p for p in exact.prime_divisors(d) if p != 2)
    bits = []
    for p in primes:
        (_, g), = _p_part(disc, p)
        b = Fraction(exact.bilinear(lat.gram, g, g)) % 1
        assert b.denominator == p
        bits.append(0 if exact.legendre_symbol(b.numerator, p) == 1 else 1)
    return InvariantTriple(d, parity(lat), tuple(bits), primes)


def odd_primes(d: int) -> tuple[int, ...]:
    return tuple(p for p in exact.prime_divisors(d) if p != 2)


def eta_bits(d: int, eta: int) -> tuple[int, ...]:
    ps = odd_primes(d)
    if eta < 0 or eta >= 1 << len(ps):
        raise ValueError(f'eta = {eta} is out of range for d = {d}')
    return tuple((eta >> i) & 1 for i in range(len(ps)))


def omega(d: int) -> tuple[int, ...]:
    if d <= 0 or d % 2 == 0 or not exact.is_squarefree(d):
        raise ValueError(f'omega needs an odd square-free d, got {d}')
    return tuple(((p * p - 1) // 8) % 2 for p in odd_primes(d))


def omega_code(d: int) -> int:
    return sum(b << i for i, b in enumerate(omega(d)))


def equivariance_sum(d: int, eta: int) -> int:
    bits, w = eta_bits(d, eta), omega(d)
    return sum(1 - p + 4 * e + 4 * o for p, e, o in zip(odd_primes(d), bits, w)) % 8


def equivariantly_equivalent(d: int, eta: int) -> bool:
    return equivariance_sum(d, eta) in (0, 6)


def is_main(lat: Lattice) -> bool:
    d = abs(determinant(lat))
    return exact.is_squarefree(d) and (parity(lat) == 'even') == (d % 2 == 0)


def odd_overlattices(S: Lattice) -> list[Lattice]:
    """Odd index-2 overlattices of S(2); bases are rows in S-coordinates."""
    d = abs(determinant(S))
    if S.rank != 3 or d % 2 == 0 or not exact.is_squarefree(d):
        raise LatticeError('odd_overlattices needs a main odd lattice of square-free odd det')
    S2 = rescale(Lattice(S.gram), 2)
    out = []
    for x in product((0, 1), repeat=S.rank):
        if any(x) and S.norm(x) % 4 == 2:
            w = tuple(Fraction(v, 2) for v in x)
            out.append(overlattice(S2, [w]))
    return out
