"""Vinberg's algorithm for rank-3 hyperbolic lattices.

Geometry happens in the hyperbolic plane of V+ (the half-cone containing
the base point p0). A root alpha bounds the half-plane {x : (x, alpha) >= 0};
walls are stored as inward normals. Every predicate below is a sign test on
exact pairings.
"""
from __future__ import annotations

import heapq
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, product
from math import gcd
from typing import Sequence

from . import exact
from .lattice import Lattice, LatticeError, signature
from .roots import Isometry, RootSlices, RootVector, admissible_norms, root_vector

ANGLE, IDEAL, DIVERGENT = 'angle', 'ideal', 'divergent'


@dataclass(frozen=True)
class Budget:
    max_height: int = 10 ** 6  # bound on (alpha, p0)
    max_walls: int = 64

    def __post_init__(self):
        if self.max_height <= 0 or self.max_walls <= 0:
            raise ValueError('budget entries must be positive')


@dataclass(frozen=True)
class Relation:
    kind: str
    cos2: Fraction | None = None  # only for angles

    def __str__(self):
        if self.kind == ANGLE:
            return f'angle cos^2={self.cos2}'
        return self.kind


@dataclass
class FundamentalPolygon:
    lattice: Lattice
    p0: tuple
    walls: list  # RootVector, cyclic order once finite
    relations: list = field(default_factory=list)
    status: str = 'budget_exhausted'
    height: int = 0  # largest height examined

    @property
    def finite(self) -> bool:
        return self.status == 'finite_area'

    def gram(self) -> tuple:
        w = [r.coords for r in self.walls]
        return tuple(tuple(self.lattice.dot(a, b) for b in w) for a in w)


# ---------------------------------------------------------------------------
# pair relations and vertices
# ---------------------------------------------------------------------------

def wall_pair_relation(lat: Lattice, d1: Sequence[int], d2: Sequence[int]) -> Relation:
    if exact.rank([list(d1), list(d2)]) < 2:
        raise LatticeError('proportional walls')
    c = lat.dot(d1, d2) ** 2
    n = lat.norm(d1) * lat.norm(d2)
    if c < n:
        return Relation(ANGLE, Fraction(c, n))
    if c == n:
        return Relation(IDEAL)
    return Relation(DIVERGENT)


def _cross(a, b):
    return (a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0])


def vertex(lat: Lattice, d1, d2, p0) -> tuple | None:
    """The point of V+ closure on both walls, as a primitive integer vector;
    None when the walls are divergent."""
    v = _cross(exact.mat_vec(lat.gram, d1), exact.mat_vec(lat.gram, d2))
    g = exact.vec_gcd(v)
    v = tuple(x // g for x in v)
    if lat.norm(v) < 0:
        return None
    if lat.dot(v, p0) < 0:
        v = tuple(-x for x in v)
    return v


def _plane_coords(lat: Lattice, p0):
    """Coordinates on a fixed basis of p0^perp for the projection of x."""
    c = exact.mat_vec(lat.gram, p0)
    D, U, V = exact.smith_normal_form([list(c)])
    u = tuple(V[i][1] for i in range(3))
    v = tuple(V[i][2] for i in range(3))
    m = exact.inverse([[lat.dot(u, u), lat.dot(u, v)], [lat.dot(u, v), lat.dot(v, v)]])

    def coords(x):
        return exact.mat_vec(m, (lat.dot(x, u), lat.dot(x, v)))
    return coords


def _angle_key(xy):
    x, y = xy
    half = 0 if (y > 0 or (y == 0 and x > 0)) else 1
    return half, x, y


def angular_order(lat: Lattice, walls: Sequence[RootVector], p0) -> list[RootVector]:
    """Sort walls by the angle of their normals projected to p0^perp."""
    coords = _plane_coords(lat, p0)
    pts = [(coords(w.coords), w) for w in walls]
    from functools import cmp_to_key

    def cmp(a, b):
        (xa, ya), (xb, yb) = a[0], b[0]
        ha = _angle_key((xa, ya))[0]
        hb = _angle_key((xb, yb))[0]
        if ha != hb:
            return ha - hb
        cr = xa * yb - ya * xb
        return -1 if cr > 0 else (1 if cr < 0 else 0)
    return [w for _, w in sorted(pts, key=cmp_to_key(cmp))]


def is_finite_area(lat: Lattice, walls: Sequence[RootVector], p0) -> tuple[bool, list, list]:
    """(finite?, walls in cyclic order, relations of consecutive pairs).

    Besides the pairwise tags, each consecutive vertex must satisfy every
    half-plane; this rules out wall sets whose normals leave an angular gap."""
    if len(walls) < 3:
        return False, list(walls), []
    order = angular_order(lat, walls, p0)
    rels = []
    ok = True
    for i, a in enumerate(order):
        b = order[(i + 1) % len(order)]
        rel = wall_pair_relation(lat, a.coords, b.coords)
        rels.append(rel)
        if rel.kind == DIVERGENT:
            ok = False
            continue
        v = vertex(lat, a.coords, b.coords, p0)
        if v is None or any(lat.dot(v, w.coords) < 0 for w in order):
            ok = False
    return ok, order, rels


def cyclic_order(lat: Lattice, walls: Sequence[Sequence[int]]) -> list[int] | None:
    """Cyclic order of a finite-area wall set without a base point: walls are
    adjacent when their common vertex lies in every half-plane."""
    n = len(walls)
    if n < 3:
        return None
    adj = {i: [] for i in range(n)}
    for i, j in combinations(range(n), 2):
        if wall_pair_relation(lat, walls[i], walls[j]).kind == DIVERGENT:
            continue
        g = lat.gram
        v = _cross(exact.mat_vec(g, walls[i]), exact.mat_vec(g, walls[j]))
        for s in (1, -1):
            w = tuple(s * x for x in v)
            if all(lat.dot(w, walls[k]) >= 0 for k in range(n)):
                adj[i].append(j)
                adj[j].append(i)
                break
    if any(len(a) != 2 for a in adj.values()):
        return None
    order = [0, adj[0][0]]
    while len(order) < n:
        a, b = adj[order[-1]]
        nxt = a if a != order[-2] else b
        if nxt in order:
            return None
        order.append(nxt)
    return order


# ---------------------------------------------------------------------------
# base point and initial chamber
# ---------------------------------------------------------------------------

def choose_base_point(lat: Lattice, extra: int = 1) -> tuple:
    """Smallest positive norm over the first box |x_i| <= R holding a
    positive vector (widened by ``extra``); ties broken by (max |x_i|, lex).
    Of x and -x the one with positive leading coordinate is taken."""
    if signature(lat) != (1, lat.rank - 1):
        raise LatticeError('lattice is not hyperbolic')
    r = 1
    while True:
        best = None
        for x in product(range(-r, r + 1), repeat=lat.rank):
            q = lat.norm(x)
            if q > 0 and exact.vec_gcd(x) == 1 and next(v for v in x if v) > 0:
                key = (q, max(abs(v) for v in x), x)
                if best is None or key < best:
                    best = key
        if best is not None:
            if extra == 0:
                return best[2]
            r += extra
            extra = 0
            continue
        r += 1


def _solve2(lat, a, b, g):
    m = [[lat.norm(a), lat.dot(a, b)], [lat.dot(a, b), lat.norm(b)]]
    return exact.mat_vec(exact.inverse(m), (lat.dot(g, a), lat.dot(g, b)))


def initial_chamber(lat: Lattice, p0, slices: RootSlices | None = None) -> list[RootVector]:
    if lat.norm(p0) <= 0:
        raise LatticeError('base point must have positive norm')
    slices = slices or RootSlices(lat, p0)
    rts = []
    for k in admissible_norms(lat):
        rts.extend(r for r in slices.roots(k, 0) if r.primitive)
    if not rts:
        return []
    if exact.rank([r.coords for r in rts]) == 1:
        return [min(rts, key=lambda r: r.coords)]
    best = None
    for a, b in combinations(rts, 2):
        if lat.dot(a.coords, b.coords) < 0 or exact.rank([a.coords, b.coords]) < 2:
            continue
        good = True
        for g in rts:
            x, y = _solve2(lat, a.coords, b.coords, g.coords)
            if x * y < 0:
                good = False
                break
        if good:
            pair = tuple(sorted((a, b), key=lambda r: r.coords))
            if best is None or [r.coords for r in pair] < [r.coords for r in best]:
                best = pair
    return list(best)


# ---------------------------------------------------------------------------
# the algorithm
# ---------------------------------------------------------------------------

def vinberg_run(lat: Lattice, p0=None, budget: Budget = Budget(),
                shuffle=None) -> FundamentalPolygon:
    """Run Vinberg's algorithm from p0.

    ``shuffle`` (a callable on lists) permutes candidates of equal priority;
    the result must not depend on it."""
    if lat.rank != 3:
        raise LatticeError('Vinberg runs are implemented for rank 3')
    if p0 is None:
        p0 = choose_base_point(lat)
    p0 = tuple(p0)
    if lat.norm(p0) <= 0:
        raise LatticeError('base point must have positive norm')
    if signature(lat) != (1, 2):
        raise LatticeError('lattice is not hyperbolic')
    slices = RootSlices(lat, p0)
    walls = initial_chamber(lat, p0, slices)
    poly = FundamentalPolygon(lat, p0, list(walls))
    norms = admissible_norms(lat)
    # priority n^2/(-k) scaled to an integer key
    scale = 1
    for k in norms:
        scale = scale * -k // gcd(scale, -k)
    streams = {k: _Stream(slices, k, budget.max_height) for k in norms}
    heap = []

    def push(k):
        head = streams[k].head(poly.walls)
        if head is not None:
            heapq.heappush(heap, (head * head * (scale // -k), head, k))

    for k in norms:
        push(k)
    while heap:
        key = heap[0][0]
        group = []
        while heap and heap[0][0] == key:
            _, n, k = heapq.heappop(heap)
            poly.height = max(poly.height, n)
            group.extend(r for r in streams[k].pop() if r.primitive)
            push(k)
        if shuffle is not None:
            shuffle(group)
        added = False
        for a in group:
            if all(lat.dot(a.coords, b.coords) >= 0 for b in poly.walls):
                poly.walls.append(a)
                added = True
        if added:
            if len(poly.walls) > budget.max_walls:
                return poly
            ok, order, rels = is_finite_area(lat, poly.walls, p0)
            if ok:
                poly.walls, poly.relations, poly.status = order, rels, 'finite_area'
                return poly
    poly.height = max([poly.height] + [st.last for st in streams.values()])
    return poly


class _Stream:
    """Nonempty root slices of one norm in increasing height, computed a
    block at a time and pruned by the walls known when the block is made."""

    BLOCK = 256

    def __init__(self, slices: RootSlices, k: int, max_height: int):
        self.slices, self.k = slices, k
        self.step = slices.step(k)
        self.next = self.step
        self.last = max_height - max_height % self.step
        self.buf: list = []

    def head(self, walls):
        """Height of the next slice to hand out; an empty block yields an empty
        slice at its top so the caller's priority order never runs ahead."""
        if not self.buf and self.next <= self.last:
            count = min(self.BLOCK, (self.last - self.next) // self.step + 1)
            self.buf = self.slices.roots_block(self.k, self.next, count, walls)[::-1]
            self.next += count * self.step
            if not self.buf:
                self.buf = [(self.next - self.step, [])]
        return self.buf[-1][0] if self.buf else None

    def pop(self):
        return self.buf.pop()[1]


# ---------------------------------------------------------------------------
# symmetries
# ---------------------------------------------------------------------------

@dataclass
class PolygonSymmetries:
    elements: list
    central: list
    central_classes: list
    weyl_vector: tuple | None

    @property
    def h(self) -> int:
        return len(self.central_classes)

    @property
    def order(self) -> int:
        return len(self.elements)


def dihedral_perms(n: int):
    for r in range(n):
        yield tuple((i + r) % n for i in range(n))
    for r in range(n):
        yield tuple((r - i) % n for i in range(n))


def polygon_symmetries(lat: Lattice, walls: Sequence[Sequence[int]], p0=None) -> PolygonSymmetries:
    """Isometries of the lattice permuting a cyclically ordered finite wall set."""
    walls = [tuple(w) for w in walls]
    n = len(walls)
    if n < 3:
        raise LatticeError('need a finite polygon')
    gram = [[lat.dot(a, b) for b in walls] for a in walls]
    idx = next(t for t in combinations(range(n), 3) if exact.rank([walls[i] for i in t]) == 3)
    A = exact.transpose([walls[i] for i in idx])
    Ainv = exact.inverse(A)
    if p0 is None:
        p0 = interior_point(lat, walls)
    elements = []
    for pi in dihedral_perms(n):
        if any(gram[pi[i]][pi[j]] != gram[i][j] for i in range(n) for j in range(n)):
            continue
        B = exact.transpose([walls[pi[i]] for i in idx])
        M = exact.mat_mul(B, Ainv)
        if not exact.is_integral(M):
            continue
        M = exact.to_int_matrix(M)
        if exact.mat_mul(exact.mat_mul(exact.transpose(M), lat.gram), M) != lat.gram:
            continue
        if any(exact.mat_vec(M, walls[i]) != walls[pi[i]] for i in range(n)):
            continue
        if lat.dot(exact.mat_vec(M, p0), p0) <= 0:
            continue
        if M not in [e.matrix for e in elements]:
            elements.append(Isometry(M, True, True, True))
    ident = exact.identity(3)
    central = []
    for e in elements:
        M = e.matrix
        if exact.mat_mul(M, M) != ident or sum(M[i][i] for i in range(3)) != -1:
            continue
        fixed = fixed_vector(M)
        if fixed is not None and lat.norm(fixed) > 0:
            central.append(e)
    classes = []
    seen = set()
    for c in central:
        if c.matrix in seen:
            continue
        orbit = set()
        for g in elements:
            ginv = exact.to_int_matrix(exact.inverse(g.matrix))
            orbit.add(exact.mat_mul(exact.mat_mul(g.matrix, c.matrix), ginv))
        seen |= orbit
        classes.append(c)
    rho = [0, 0, 0]
    for g in elements:
        for i, x in enumerate(exact.mat_vec(g.matrix, p0)):
            rho[i] += x
    return PolygonSymmetries(elements, central, classes, tuple(rho))


def fixed_vector(M) -> tuple | None:
    """A nonzero integer vector with M x = x (None if none)."""
    A = [[M[i][j] - (1 if i == j else 0) for j in range(3)] for i in range(3)]
    if exact.rank(A) != 2:
        return None
    r = [row for row in A if any(row)]
    for a, b in combinations(r, 2):
        v = _cross(a, b)
        if any(v):
            g = exact.vec_gcd(v)
            return tuple(x // g for x in v)
    return None


def interior_point(lat: Lattice, walls: Sequence[Sequence[int]]) -> tuple:
    """Sum of the primitive vertex vectors of a finite polygon: a positive
    vector inside it."""
    order = cyclic_order(lat, walls)
    if order is None:
        raise LatticeError('wall set does not bound a finite polygon')
    total = [0, 0, 0]
    n = len(order)
    for i in range(n):
        a, b = walls[order[i]], walls[order[(i + 1) % n]]
        g = lat.gram
        v = _cross(exact.mat_vec(g, a), exact.mat_vec(g, b))
        if any(lat.dot(v, w) < 0 for w in walls):
            v = tuple(-x for x in v)
        gg = exact.vec_gcd(v)
        for j in range(3):
            total[j] += v[j] // gg
    return tuple(total)


# ---------------------------------------------------------------------------
# classification
# ---------------------------------------------------------------------------

@dataclass
class Classification:
    status: str  # 'elliptic' | 'undetermined'
    polygon: FundamentalPolygon
    symmetries: PolygonSymmetries | None = None

    @property
    def elliptic(self) -> bool:
        return self.status == 'elliptic'


def classify_reflective(lat: Lattice, budget: Budget = Budget(), p0=None) -> Classification:
    poly = vinberg_run(lat, p0, budget)
    if not poly.finite:
        return Classification('undetermined', poly)
    sym = polygon_symmetries(lat, [w.coords for w in poly.walls], poly.p0)
    return Classification('elliptic', poly, sym)
