"""Roots, reflections, slice enumeration and the two root-set transforms.

Vectors are integer coordinate tuples on the lattice basis. Isometries act
on column vectors: x -> M x.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, isqrt
from typing import Sequence

import numpy as np

from . import exact
from .discforms import (discriminant_group, equivariantly_equivalent, invariant_triple,
                        m_dual, odd_overlattices)
from .lattice import Lattice, LatticeError, determinant


class RootError(LatticeError):
    pass


@dataclass(frozen=True)
class RootVector:
    coords: tuple[int, ...]
    norm: int
    pairing: int  # t with (alpha, L) = tZ
    content: int  # gcd of coordinates

    @property
    def primitive(self) -> bool:
        return self.content == 1

    def __neg__(self) -> 'RootVector':
        return RootVector(tuple(-x for x in self.coords), self.norm, self.pairing, self.content)


@dataclass(frozen=True)
class Isometry:
    matrix: tuple
    preserves_form: bool
    preserves_lattice: bool
    positive: bool

    def __call__(self, x: Sequence) -> tuple:
        return exact.mat_vec(self.matrix, x)


def pairing_ideal(lat: Lattice, x: Sequence[int]) -> int:
    return exact.vec_gcd(exact.mat_vec(lat.gram, x))


def root_vector(lat: Lattice, x: Sequence[int]) -> RootVector:
    x = tuple(int(v) for v in x)
    if not any(x):
        raise RootError('zero vector')
    return RootVector(x, lat.norm(x), pairing_ideal(lat, x), exact.vec_gcd(x))


def is_root(lat: Lattice, x: Sequence[int]) -> bool:
    r = root_vector(lat, x)
    return r.norm < 0 and (2 * r.pairing) % r.norm == 0


def is_primitive(lat: Lattice, x: Sequence[int]) -> bool:
    return root_vector(lat, x).content == 1


def reflection(lat: Lattice, alpha: Sequence[int]) -> Isometry:
    """s_alpha(x) = x - 2 (x, alpha) / alpha^2 * alpha."""
    if not is_root(lat, alpha):
        raise RootError(f'{tuple(alpha)} is not a root')
    n = lat.rank
    a2 = lat.norm(alpha)
    ga = exact.mat_vec(lat.gram, alpha)
    m = tuple(tuple((1 if i == j else 0) - 2 * ga[j] * alpha[i] // a2 for j in range(n))
              for i in range(n))
    return Isometry(m, True, True, True)


def is_isometry(lat: Lattice, m: Sequence[Sequence]) -> bool:
    return exact.mat_mul(exact.mat_mul(exact.transpose(m), lat.gram), m) == lat.gram


def twist_bound(lat: Lattice) -> int:
    return 2 * discriminant_group(lat).exponent


def admissible_norms(lat: Lattice) -> list[int]:
    """Norms a primitive root can have: alpha^2 | 2t and t | a(S)."""
    return [-k for k in exact.divisors(twist_bound(lat))]


# ---------------------------------------------------------------------------
# slice enumeration
# ---------------------------------------------------------------------------

def _reduce2(gram2, u, v):
    """Lagrange reduction of (u, v) for the definite form -gram2."""
    def q(x, y):
        return -exact.bilinear(gram2, x, y)
    while True:
        if q(u, u) > q(v, v):
            u, v = v, u
        nu = q(u, u)
        r = Fraction(q(u, v), nu)
        k = round(r)
        if k == 0:
            return u, v
        v = tuple(b - k * a for a, b in zip(u, v))
        if q(v, v) >= nu:
            return u, v


class Slicer:
    """Solutions of x^2 = k, c.x = n on a rank-3 lattice with gram ``gram``.

    ``c`` is the covector of the base point, x -> (x, p0); the kernel of c
    must be negative definite."""

    def __init__(self, gram, c):
        self.gram = gram
        D, U, V = exact.smith_normal_form([list(c)])
        self.g0 = D[0][0] * U[0][0]
        if self.g0 < 0:
            self.g0 = -self.g0
            x1 = tuple(-V[i][0] for i in range(3))
        else:
            x1 = tuple(V[i][0] for i in range(3))
        u = tuple(V[i][1] for i in range(3))
        v = tuple(V[i][2] for i in range(3))
        u, v = _reduce2(gram, u, v)
        self.x1, self.u, self.v = x1, u, v
        b = exact.bilinear
        self.A, self.B, self.C = b(gram, u, u), b(gram, u, v), b(gram, v, v)
        if not (self.A < 0 and self.A * self.C - self.B ** 2 > 0):
            raise LatticeError('orthogonal complement of the base point is not negative definite')
        self.xu, self.xv, self.xx = b(gram, x1, u), b(gram, x1, v), b(gram, x1, x1)
        # the slice ellipse is centred at t*(ca, cb) in (a, b) coordinates
        det2 = self.A * self.C - self.B ** 2
        self.ca = Fraction(-self.C * self.xu + self.B * self.xv, det2)
        self.cb = Fraction(self.B * self.xu - self.A * self.xv, det2)
        self.p0sq = Fraction(self.g0 * self.g0, self.xx + self.xu * self.ca + self.xv * self.cb)

    def cuts(self, covectors: Sequence[Sequence[int]]) -> '_Cuts':
        return _Cuts(self, covectors)

    def solve(self, k: int, n: int) -> list[tuple[int, int, int]]:
        """All solutions at height n, sorted."""
        if n % self.g0:
            return []
        t = n // self.g0
        A, B, C = self.A, self.B, self.C
        D, E, F = t * self.xu, t * self.xv, t * t * self.xx - k
        # scan over b (coefficient of the longer vector v): the quadratic in a
        # is A a^2 + 2 (B b + D) a + (C b^2 + 2 E b + F)
        P = B * B - A * C
        Q = B * D - A * E
        R = D * D - A * F
        disc = Q * Q - P * R
        if disc < 0:
            return []
        s = isqrt(disc) + 1
        lo = (Q - s) // (-P)
        hi = -((-(Q + s)) // (-P))
        return self._collect(t, _square_points(P, Q, R, lo, hi))

    def _collect(self, t, points):
        A, B = self.A, self.B
        D = t * self.xu
        x1, u, v = self.x1, self.u, self.v
        out = []
        for b, r in points:
            m = B * b + D
            for num in {-m + r, -m - r}:
                if num % A:
                    continue
                a = num // A
                out.append(tuple(t * x1[i] + a * u[i] + b * v[i] for i in range(3)))
        out.sort()
        return out

    def solve_block(self, k: int, t0: int, count: int, cuts: '_Cuts | None' = None) -> dict[int, list]:
        """Solutions on the slices t0 <= t < t0 + count (height t*g0), as {t: sorted list}.

        With ``cuts``, solutions where some cut is negative may be left out;
        every solution where all cuts are >= 0 is kept. Floats only narrow the
        scan windows (with padding); hits are confirmed in integers."""
        A, B, C = self.A, self.B, self.C
        P = B * B - A * C
        q1 = B * self.xu - A * self.xv
        r2 = self.xu * self.xu - A * self.xx
        tmax = t0 + count - 1
        ts = np.arange(t0, t0 + count, dtype=float)
        # delta(b) = P b^2 + 2 Q b + R with Q = q1 t, R = r2 t^2 + A k
        Qf, Rf = q1 * ts, r2 * ts * ts + A * k
        disc = Qf * Qf - P * Rf
        half = np.sqrt(np.maximum(disc, 0.0)) / -P
        mid = Qf / -P
        pad = 2 + 1e-9 * (np.abs(mid) + half)
        lo, hi = np.floor(mid - half - pad), np.ceil(mid + half + pad)
        live = disc >= -1e-9 * (Qf * Qf + np.abs(P * Rf)) - 1
        rows = np.arange(count)
        if cuts is not None:
            parts = [(np.maximum(lo, wlo), np.minimum(hi, whi))
                     for wlo, whi in cuts.b_windows(ts, k, t0, tmax)]
            if not parts:
                return {}
            lo = np.concatenate([x for x, _ in parts])
            hi = np.concatenate([y for _, y in parts])
            rows = np.tile(rows, len(parts))
            live = np.tile(live, len(parts))
        width = np.where(live, hi - lo + 1, 0).clip(min=0)
        if not width.any():
            return {}
        bmax = int(max(np.abs(lo[width > 0]).max(), np.abs(hi[width > 0]).max())) + 1
        bound = abs(P) * bmax * bmax + 2 * abs(q1) * tmax * bmax + abs(r2) * tmax * tmax + abs(A * k)
        hits: dict[int, dict] = {}
        if bound >= _I64 or width.sum() > 1 << 24:
            for j in np.nonzero(width)[0].tolist():
                t = t0 + int(rows[j])
                for b, r in _square_points(P, q1 * t, r2 * t * t + A * k, int(lo[j]), int(hi[j])):
                    hits.setdefault(t, {})[b] = r
        else:
            w = width.astype(np.int64)
            t = np.repeat(rows.astype(np.int64) + t0, w)
            start = np.repeat(np.cumsum(w) - w, w)
            b = np.repeat(lo.astype(np.int64), w) + (np.arange(int(w.sum()), dtype=np.int64) - start)
            delta = (P * b + 2 * q1 * t) * b + (r2 * t * t + A * k)
            keep = delta >= 0
            b, t, delta = b[keep], t[keep], delta[keep]
            r = np.rint(np.sqrt(delta.astype(np.float64))).astype(np.int64)
            hit = np.zeros(len(b), dtype=bool)
            for dr in (-1, 0, 1):
                rr = r + dr
                hit |= (rr >= 0) & (rr * rr == delta)
            for ti, bi, di in zip(t[hit].tolist(), b[hit].tolist(), delta[hit].tolist()):
                hits.setdefault(ti, {})[bi] = isqrt(di)
        out = {}
        for ti, pts in hits.items():
            sols = self._collect(ti, sorted(pts.items()))
            if sols:
                out[ti] = sols
        return out


class _Cuts:
    """Half-planes c.z >= 0 restricted to the slice ellipses of a Slicer.

    On the slice at t the ellipse is w^T(-M)w = rho^2 around its centre;
    with w_b = rho sin(th) sqrt(p/D) a cut is cos(th - psi) >= r(t), so it
    removes the open arc of half-width arccos(-r) around psi + pi. The
    remaining gaps give b-windows. Floats only shape the windows, which are
    padded and taken over a whole block of slices at once; every point is
    confirmed exactly afterwards by the caller."""

    SLACK = 1e-7

    def __init__(self, sl: Slicer, covectors):
        p, q = -sl.A, -sl.B
        D = p * -sl.C - q * q
        self.sb = (p / D) ** 0.5
        self.cb = float(sl.cb)
        self.rate = sl.g0 * sl.g0 / float(sl.p0sq)
        ca, cb = float(sl.ca), float(sl.cb)

        def along(w):
            return np.array([float(sum(ci * wi for ci, wi in zip(c, w))) for c in covectors])
        e0, e1, e2 = along(sl.x1), along(sl.u), along(sl.v)
        g1 = e1 / p ** 0.5
        g2 = (e2 - e1 * q / p) * self.sb
        norm = np.hypot(g1, g2)
        keep = norm > 0
        self.norm, self.psi = norm[keep], np.arctan2(g2, g1)[keep]
        self.f = (e0 + e1 * ca + e2 * cb)[keep]

    def _rho(self, t, k):
        return np.sqrt(t * t * self.rate - k)

    def gaps(self, k: int, t_lo: int, t_hi: int) -> list[tuple[float, float]]:
        """Angle intervals that contain every feasible point for all t_lo <= t <= t_hi."""
        if not len(self.f):
            return [(-np.pi, np.pi)]
        # r(t) is monotone in t, so the smallest removed arc sits at an end
        cs = []
        for t in (t_lo, t_hi):
            r = -t * self.f / (self._rho(t, k) * self.norm)
            cs.append(np.pi - np.arccos(np.clip(r, -1.0, 1.0)))
        c = np.minimum(*cs) - self.SLACK
        if np.any(c >= np.pi):
            return []
        arcs = sorted((float(m - w), float(m + w)) for m, w in
                      zip(np.mod(self.psi + np.pi, 2 * np.pi), c) if w > 0)
        if not arcs:
            return [(-np.pi, np.pi)]
        # union of removed arcs on the circle, unrolled from the first start
        base = arcs[0][0]
        merged = []
        for s, e in arcs:
            if merged and s <= merged[-1][1]:
                merged[-1][1] = max(merged[-1][1], e)
            else:
                merged.append([s, e])
        out = []
        for (s0, e0), (s1, _) in zip(merged, merged[1:] + [[base + 2 * np.pi, 0]]):
            if e0 < s1:
                out.append((e0, s1))
        return out

    def b_windows(self, ts, k, t_lo, t_hi):
        rho = self._rho(ts, k)
        c, s = ts * self.cb, rho * self.sb
        pad = 2 + 1e-9 * (np.abs(c) + s)
        out = []
        for lo, hi in self.gaps(k, t_lo, t_hi):
            smin, smax = _sin_range(lo, hi)
            out.append((np.floor(c + s * smin - pad), np.ceil(c + s * smax + pad)))
        return out


def _sin_range(lo: float, hi: float) -> tuple[float, float]:
    tau = 2 * np.pi
    smin, smax = sorted((np.sin(lo), np.sin(hi)))
    if np.floor((hi - np.pi / 2) / tau) >= np.ceil((lo - np.pi / 2) / tau):
        smax = 1.0
    if np.floor((hi + np.pi / 2) / tau) >= np.ceil((lo + np.pi / 2) / tau):
        smin = -1.0
    return smin, smax


_I64 = 1 << 62


def _square_points(P, Q, R, lo, hi):
    """Yield (b, r) with r = sqrt(P b^2 + 2 Q b + R) an integer, lo <= b <= hi."""
    if hi < lo:
        return
    big = max(abs(lo), abs(hi)) + 1
    if hi - lo > 64 and abs(P) * big * big + 2 * abs(Q) * big + abs(R) < _I64:
        b = np.arange(lo, hi + 1, dtype=np.int64)
        delta = (P * b + 2 * Q) * b + R
        ok = delta >= 0
        b, delta = b[ok], delta[ok]
        r = np.rint(np.sqrt(delta.astype(np.float64))).astype(np.int64)
        hit = np.zeros(len(b), dtype=bool)
        for dr in (-1, 0, 1):
            rr = r + dr
            hit |= (rr >= 0) & (rr * rr == delta)
        for bi, di in zip(b[hit].tolist(), delta[hit].tolist()):
            yield bi, isqrt(di)
        return
    for b in range(lo, hi + 1):
        delta = (P * b + 2 * Q) * b + R
        if delta < 0:
            continue
        r = isqrt(delta)
        if r * r == delta:
            yield b, r


def root_sublattice(lat: Lattice, k: int) -> tuple:
    """Basis (columns) of {x : 2Gx = 0 mod |k|}, which contains every root of norm k."""
    D, _, V = exact.smith_normal_form(lat.gram)
    n = lat.rank
    cols = []
    for i in range(n):
        s = abs(k) // gcd(abs(k), 2 * abs(D[i][i]))
        cols.append(tuple(V[r][i] * s for r in range(n)))
    return exact.transpose(cols)


def roots_with(lat: Lattice, k: int, p0: Sequence[int], n: int) -> list[RootVector]:
    if lat.norm(p0) <= 0:
        raise LatticeError('base point must have positive norm')
    if k >= 0:
        return []
    return RootSlices(lat, p0).roots(k, n)


class RootSlices:
    """Cached slice enumerators for one (lattice, base point)."""

    def __init__(self, lat: Lattice, p0: Sequence[int]):
        if lat.rank != 3:
            raise LatticeError('slice enumeration is implemented for rank 3')
        if lat.norm(p0) <= 0:
            raise LatticeError('base point must have positive norm')
        self.lat = lat
        self.p0 = tuple(p0)
        self.c = exact.mat_vec(lat.gram, p0)
        self._cache: dict[int, tuple] = {}
        self._cut_cache: dict[int, tuple] = {}

    def _slicer(self, k):
        if k not in self._cache:
            B = root_sublattice(self.lat, k)
            gk = exact.mat_mul(exact.mat_mul(exact.transpose(B), self.lat.gram), B)
            ck = exact.vec_mat(self.c, B)
            self._cache[k] = (B, Slicer(gk, ck))
        return self._cache[k]

    def step(self, k: int) -> int:
        """Every root of norm k has height divisible by this."""
        return self._slicer(k)[1].g0

    def _cuts(self, k, walls):
        key = tuple(w.coords for w in walls)
        hit = self._cut_cache.get(k)
        if hit is None or hit[0] != key:
            B, sl = self._slicer(k)
            GB = exact.mat_mul(self.lat.gram, B)
            cov = [exact.vec_mat(w.coords, GB) for w in walls]
            hit = self._cut_cache[k] = (key, sl.cuts(cov))
        return hit[1]

    def _accept(self, k, B, zs):
        out = []
        for z in zs:
            r = root_vector(self.lat, exact.mat_vec(B, z))
            if (2 * r.pairing) % k == 0:
                out.append(r)
        out.sort(key=lambda r: r.coords)
        return out

    def roots(self, k: int, n: int) -> list[RootVector]:
        B, sl = self._slicer(k)
        return self._accept(k, B, sl.solve(k, n))

    def roots_block(self, k: int, n0: int, count: int,
                    walls: Sequence[RootVector] = ()) -> list[tuple[int, list[RootVector]]]:
        """Roots of norm k at heights n0, n0 + s, ..., (count heights, s = step(k)),
        as (height, roots) pairs for the nonempty heights. With ``walls`` the
        result contains every root pairing nonnegatively with all of them and
        possibly some others."""
        B, sl = self._slicer(k)
        if n0 % sl.g0:
            raise ValueError('start height is not a multiple of the step')
        cuts = self._cuts(k, walls) if walls else None
        found = sl.solve_block(k, n0 // sl.g0, count, cuts)
        out = []
        for t in sorted(found):
            rs = self._accept(k, B, found[t])
            if rs:
                out.append((t * sl.g0, rs))
        return out


# ---------------------------------------------------------------------------
# transforms
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class TransformedRoots:
    lattice: Lattice
    roots: tuple[tuple[int, ...], ...]  # coordinates on lattice's basis
    gram: tuple
    formula_gram: tuple


def _coords_in(target: Lattice, x: Sequence) -> tuple[int, ...]:
    c = exact.solve_left(target.basis, x)
    if not exact.is_integral(c):
        raise RootError(f'{tuple(x)} is not in the target lattice')
    return tuple(int(v) for v in c)


def _check_roots(target: Lattice, roots, gram, formula):
    if gram != formula:
        raise RootError('transformed Gram differs from the closed formula')
    for r in roots:
        if not is_root(target, r) or not is_primitive(target, r):
            raise RootError(f'{r} is not a primitive root of the target lattice')


def transform_roots_odd_overlattice(S: Lattice, roots: Sequence[Sequence[int]]) -> TransformedRoots:
    """Roots of S (S-coordinates) -> roots of the unique odd overlattice of S(2)."""
    tri = invariant_triple(S)
    if tri.type != 'odd' or tri.d % 2 == 0:
        raise RootError('S must be main odd')
    if not equivariantly_equivalent(tri.d, tri.eta):
        raise RootError('the odd overlattice of S(2) is not unique for these invariants')
    (St,) = odd_overlattices(S)
    roots = [tuple(r) for r in roots]
    norms = [S.norm(r) for r in roots]
    new = []
    for r, a2 in zip(roots, norms):
        if not is_root(S, r) or not is_primitive(S, r):
            raise RootError(f'{r} is not a primitive root of S')
        if a2 % 2:
            new.append(_coords_in(St, r))
        elif a2 % 4 == 2:
            new.append(_coords_in(St, [Fraction(x, 2) for x in r]))
        else:
            raise RootError(f'root {r} has norm divisible by 4')
    formula = []
    for i, a in enumerate(roots):
        row = []
        for j, b in enumerate(roots):
            ab = S.dot(a, b)
            odd_a, odd_b = norms[i] % 2, norms[j] % 2
            if odd_a and odd_b:
                row.append(2 * ab)
            elif odd_a or odd_b:
                row.append(ab)
            else:
                row.append(exact.normalize(Fraction(ab, 2)))
        formula.append(tuple(row))
    gram = tuple(tuple(St.dot(a, b) for b in new) for a in new)
    _check_roots(St, new, gram, tuple(formula))
    return TransformedRoots(St, tuple(new), gram, tuple(formula))


def transform_roots_m_dual(S: Lattice, roots: Sequence[Sequence[int]], m: int) -> TransformedRoots:
    d = abs(determinant(S))
    if m <= 0 or d % m:
        raise RootError(f'm = {m} does not divide d = {d}')
    F = m_dual(S, m)
    roots = [tuple(r) for r in roots]
    ks = []
    new = []
    for r in roots:
        if not is_root(S, r) or not is_primitive(S, r):
            raise RootError(f'{r} is not a primitive root of S')
        k = gcd(pairing_ideal(S, r), m)
        ks.append(k)
        new.append(_coords_in(F, [Fraction(x, k) for x in r]))
    formula = tuple(tuple(exact.normalize(Fraction(S.dot(a, b) * m, ka * kb))
                          for b, kb in zip(roots, ks)) for a, ka in zip(roots, ks))
    gram = tuple(tuple(F.dot(a, b) for b in new) for a in new)
    _check_roots(F, new, gram, formula)
    return TransformedRoots(F, tuple(new), gram, formula)
