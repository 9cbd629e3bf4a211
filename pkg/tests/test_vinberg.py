import random
from fractions import Fraction
from itertools import product

import pytest

from hyperlat.lattice import LatticeError, parse_lattice_symbol
from hyperlat.roots import root_vector
from hyperlat.tables import canonical_cyclic_gram, find_case, load_fixtures, printed_roots
from hyperlat.vinberg import (ANGLE, DIVERGENT, IDEAL, Budget, classify_reflective,
                              cyclic_order, initial_chamber, is_finite_area, polygon_symmetries,
                              vertex, vinberg_run, wall_pair_relation)


def _case(n):
    c = find_case(1, n)
    lat = c.lattice()
    return c, lat, printed_roots(c, lat)


def test_wall_pair_relation_examples():
    _, L, (a1, a2, a3) = _case(1)
    r = wall_pair_relation(L, a1, a3)
    assert r.kind == ANGLE and r.cos2 == Fraction(1, 2)
    assert wall_pair_relation(L, a1, a2).kind == IDEAL
    assert wall_pair_relation(L, a2, a3) == wall_pair_relation(L, a3, a2)
    with pytest.raises(LatticeError):
        wall_pair_relation(L, a1, tuple(2 * x for x in a1))
    c, L, roots = _case(12)
    i, j = next((i, j) for i in range(8) for j in range(8) if c.gram[i][j] == 44)
    assert (c.gram[i][i], c.gram[j][j]) == (-11, -1)
    assert wall_pair_relation(L, roots[i], roots[j]).kind == DIVERGENT


def test_initial_chamber_examples():
    L = parse_lattice_symbol('U + <-1>')
    walls = initial_chamber(L, (1, 1, 0))
    # p0-perp holds +-(0,0,1) and +-(1,-1,0), which are orthogonal, so the
    # chamber of the finite group has two walls
    assert len(walls) == 2
    assert all(L.dot(w.coords, (1, 1, 0)) == 0 for w in walls)
    assert {w.coords for w in walls} <= {(0, 0, 1), (0, 0, -1), (1, -1, 0), (-1, 1, 0)}
    assert L.dot(walls[0].coords, walls[1].coords) == 0
    # p0 on no mirror: brute force over a box finds no root in p0-perp
    p0 = (2, 3, 1)
    assert not [x for x in product(range(-15, 16), repeat=3)
                if L.dot(x, p0) == 0 and L.norm(x) in (-1, -2)]
    assert initial_chamber(L, p0) == []
    with pytest.raises(LatticeError):
        initial_chamber(L, (1, 0, 0))


@pytest.mark.parametrize('n,walls', [(1, 3), (2, 3), (8, 4)])
def test_vinberg_run_small_cases(n, walls):
    c, L, _ = _case(n)
    p0 = (1, 1, 0) if c.symbol.startswith('U') else None
    poly = vinberg_run(L, p0)
    assert poly.finite and len(poly.walls) == walls
    assert canonical_cyclic_gram(poly.gram()) == canonical_cyclic_gram(c.gram)
    g = poly.gram()
    assert all(g[i][j] >= 0 for i in range(walls) for j in range(walls) if i != j)
    assert all(w.primitive and L.dot(w.coords, poly.p0) >= 0 for w in poly.walls)
    assert len(poly.relations) == walls
    assert all(r.kind != DIVERGENT for r in poly.relations)


def test_is_finite_area_examples():
    _, L, roots = _case(1)
    walls = [root_vector(L, r) for r in roots]
    ok, order, rels = is_finite_area(L, walls, (1, 1, 0))
    assert ok
    assert sorted(str(r) for r in rels) == ['angle cos^2=0', 'angle cos^2=1/2', 'ideal']
    # two ultraparallel walls of N=12 bound an infinite region
    c, M, rs = _case(12)
    i, j = next((i, j) for i in range(8) for j in range(8) if c.gram[i][j] == 44)
    ok, _, _ = is_finite_area(M, [root_vector(M, rs[i]), root_vector(M, rs[j])], (1, 1, 0))
    assert not ok
    # dropping a wall from a triangle leaves an open region
    assert not is_finite_area(L, walls[:2], (1, 1, 0))[0]


def test_printed_wall_sets_bound_finite_polygons():
    for c in load_fixtures(1):
        lat = c.lattice()
        walls = printed_roots(c, lat)
        assert cyclic_order(lat, walls) is not None, c.case_id


def test_symmetries_examples():
    _, L, roots = _case(1)
    sym = polygon_symmetries(L, roots, (1, 1, 0))
    assert sym.order == 1 and sym.h == 0
    assert sym.weyl_vector == (1, 1, 0)  # rho = p0 for the trivial group
    c, L, roots = _case(8)
    n = len(roots)
    shifted = [[c.gram[(i + 2) % n][(j + 2) % n] for j in range(n)] for i in range(n)]
    assert shifted == [list(r) for r in c.gram]
    res = classify_reflective(L)
    sym = res.symmetries
    assert sym.h == 1
    (z,) = sym.central_classes
    walls = [w.coords for w in res.polygon.walls]
    images = [walls.index(z(w)) for w in walls]
    assert all((images[i] - i) % n == 2 for i in range(n))
    rho = sym.weyl_vector
    assert L.norm(rho) > 0
    assert all(g(rho) == rho for g in sym.elements)


def test_order_independence_under_shuffle():
    for n in (12, 25, 60):
        _, L, _ = _case(n)
        base = vinberg_run(L)
        rng = random.Random(n)
        for _ in range(3):
            poly = vinberg_run(L, base.p0, shuffle=rng.shuffle)
            assert {w.coords for w in poly.walls} == {w.coords for w in base.walls}


def test_two_base_points_same_polygon():
    for n in (1, 4, 8, 12, 30):
        c, L, _ = _case(n)
        a = vinberg_run(L)
        # 2 p0 + v for a vertex v of the polygon is another point inside it
        w = a.walls
        v = vertex(L, w[0].coords, w[1].coords, a.p0)
        p1 = tuple(2 * x + y for x, y in zip(a.p0, v))
        b = vinberg_run(L, p1)
        assert b.p0 != a.p0 and b.finite
        assert canonical_cyclic_gram(a.gram()) == canonical_cyclic_gram(b.gram()) \
            == canonical_cyclic_gram(c.gram)


def test_h_at_most_one_table1_sample():
    for c in load_fixtures(1)[::7]:
        res = classify_reflective(c.lattice())
        assert res.elliptic and res.symmetries.h <= 1 and res.symmetries.h == c.h, c.case_id


def test_undetermined_at_small_budget():
    L = parse_lattice_symbol('U + <-29>')
    res = classify_reflective(L, Budget(max_height=200, max_walls=64))
    assert res.status == 'undetermined' and res.symmetries is None
    assert res.polygon.status == 'budget_exhausted'
    with pytest.raises(ValueError):
        Budget(0, 5)
