import random
from itertools import product

import pytest

from hyperlat import exact
from hyperlat.lattice import U, LatticeError, diagonal, parse_lattice_symbol
from hyperlat.roots import (RootError, RootSlices, admissible_norms, is_isometry, is_primitive,
                            is_root, reflection, root_vector, roots_with, twist_bound,
                            transform_roots_m_dual, transform_roots_odd_overlattice)
from hyperlat.tables import load_fixtures, printed_roots
from hyperlat.vinberg import choose_base_point, vinberg_run

FIXTURE_ROOTS = []
for _c in load_fixtures(1) + load_fixtures(2):
    if _c.roots is not None:
        _lat = _c.lattice()
        FIXTURE_ROOTS.append((_c, _lat, printed_roots(_c, _lat)))


def test_root_predicates_examples():
    L = parse_lattice_symbol('U + <-1>')
    assert is_root(L, (1, 0, -1)) and root_vector(L, (1, 0, -1)).norm == -1
    assert not is_root(L, (1, 0, 0))
    E = parse_lattice_symbol('U + <-2>')
    r = root_vector(E, (-1, 1, 0))
    assert is_root(E, r.coords) and (r.norm, r.pairing) == (-2, 1)
    assert is_primitive(E, (-1, 1, 0)) and not is_primitive(E, (-2, 2, 0))
    with pytest.raises(RootError):
        is_root(L, (0, 0, 0))


def test_reflection_examples():
    s = reflection(U, (1, -1))
    assert s((1, 0)) == (0, 1) and s((0, 1)) == (1, 0)
    with pytest.raises(RootError):
        reflection(U, (1, 0))


def test_twist_bound_examples():
    assert twist_bound(parse_lattice_symbol('U + <-1>')) == 2
    assert twist_bound(parse_lattice_symbol('U + <-13>')) == 26
    assert twist_bound(U) == 2
    assert admissible_norms(parse_lattice_symbol('U + <-3>')) == [-1, -2, -3, -6]


def test_roots_with_examples():
    L = parse_lattice_symbol('U + <-1>')
    got = {r.coords for r in roots_with(L, -1, (1, 1, 0), 0)}
    assert {(0, 0, 1), (0, 0, -1)} <= got
    E = parse_lattice_symbol('U + <-2>')
    got = {r.coords for r in roots_with(E, -2, (1, 1, 0), 0)}
    assert {(1, -1, 0), (-1, 1, 0)} <= got
    # on <7> + <-1> + <-1> with p0 = e1 every height is a multiple of 7
    assert roots_with(diagonal(7, -1, -1), -1, (1, 0, 0), 3) == []
    with pytest.raises(LatticeError):
        roots_with(L, -1, (1, -1, 0), 0)


def _brute(lat, k, p0, n, box):
    out = set()
    for x in product(range(-box, box + 1), repeat=3):
        if any(x) and lat.norm(x) == k and lat.dot(x, p0) == n and is_root(lat, x):
            out.add(x)
    return out


@pytest.mark.parametrize('symbol', ['U + <-1>', 'U + <-6>', '<7> + <-1> + <-1>',
                                    '<1> + <-1> + <-5>', '<3> + <-1> + <-1>'])
def test_roots_with_matches_brute_force(symbol):
    L = parse_lattice_symbol(symbol)
    p0 = choose_base_point(L)
    for k in admissible_norms(L):
        for n in range(-4, 5):
            got = {r.coords for r in roots_with(L, k, p0, n)}
            box = 12
            assert all(max(map(abs, x)) < box for x in got)
            assert got == _brute(L, k, p0, n, box), (k, n)
            # negation flips the height
            assert {tuple(-v for v in x) for x in got} == {r.coords for r in roots_with(L, k, p0, -n)}


def test_reflections_on_fixture_roots():
    assert FIXTURE_ROOTS
    for case, lat, roots in FIXTURE_ROOTS:
        for a in roots:
            s = reflection(lat, a)
            assert is_isometry(lat, s.matrix), case.case_id
            assert exact.mat_mul(s.matrix, s.matrix) == exact.identity(3)
            assert s(a) == tuple(-x for x in a)


def test_primitive_root_norm_bound():
    for case, lat, roots in FIXTURE_ROOTS:
        b = twist_bound(lat)
        for a in roots:
            assert is_root(lat, a) and is_primitive(lat, a), case.case_id
            assert -lat.norm(a) <= b and b % lat.norm(a) == 0


SLICE_CASES = [c for c in load_fixtures(1) if c.index in (4, 12, 25, 60, 100, 122)]


@pytest.mark.parametrize('case', SLICE_CASES, ids=lambda c: c.case_id)
def test_block_enumeration_matches_slices(case):
    lat = case.lattice()
    p0 = choose_base_point(lat)
    slices = RootSlices(lat, p0)
    for k in admissible_norms(lat):
        s = slices.step(k)
        block = dict(slices.roots_block(k, s, 40))
        for i in range(1, 41):
            one = slices.roots(k, i * s)
            assert block.get(i * s, []) == one, (k, i)
        if s > 1:
            with pytest.raises(ValueError):
                slices.roots_block(k, 1, 5)


@pytest.mark.parametrize('case', SLICE_CASES, ids=lambda c: c.case_id)
def test_pruned_blocks_keep_every_admissible_root(case):
    """Pruning by walls may only drop roots that pair negatively with a wall."""
    lat = case.lattice()
    poly = vinberg_run(lat)
    slices = RootSlices(lat, poly.p0)
    rng = random.Random(case.index)
    for k in admissible_norms(lat):
        s = slices.step(k)
        for _ in range(3):
            walls = rng.sample(poly.walls, rng.randint(1, len(poly.walls)))
            start = s * rng.randint(1, 200)
            pruned = dict(slices.roots_block(k, start, 64, walls))
            full = dict(slices.roots_block(k, start, 64))
            for n, rs in full.items():
                keep = [r for r in rs if all(lat.dot(r.coords, w.coords) >= 0 for w in walls)]
                assert set(keep) <= set(pruned.get(n, [])), (k, n)


def test_transform_odd_example():
    S = parse_lattice_symbol('U + <-3>')
    roots = [(3, 0, -1), (0, 0, 1), (-1, 1, 0), (1, 1, -1)]
    tr = transform_roots_odd_overlattice(S, roots)
    assert [tr.lattice.norm(r) for r in tr.roots] == [-6, -6, -1, -2]
    assert tr.gram == ((-6, 6, 3, 0), (6, -6, 0, 6), (3, 0, -1, 0), (0, 6, 0, -2))
    assert transform_roots_odd_overlattice(S, roots) == tr


def test_transform_odd_all_odd_norms_doubles():
    S = parse_lattice_symbol('<3> + <-1> + <-1>')
    with pytest.raises(RootError):
        # (3,-1) is not equivariantly equivalent: three odd overlattices
        transform_roots_odd_overlattice(S, [(0, 1, 0)])
    S = parse_lattice_symbol('U + <-3>')
    odd = [(3, 0, -1), (0, 0, 1)]
    tr = transform_roots_odd_overlattice(S, odd)
    assert tr.gram == tuple(tuple(2 * S.dot(a, b) for b in odd) for a in odd)


def test_transform_m_dual_examples():
    S = parse_lattice_symbol('<3> + <-1> + <-1>')
    case = next(c for c in load_fixtures(1) if c.index == 3)
    roots = printed_roots(case, S)
    tr1 = transform_roots_m_dual(S, roots, 1)
    assert tr1.gram == case.gram
    tr = transform_roots_m_dual(S, roots, 3)
    assert tr.lattice.gram == diagonal(1, -3, -3).gram
    assert [exact.gcd(r.pairing, 3) for r in map(lambda a: root_vector(S, a), roots)] == [1, 1, 3]
    assert tr.gram == ((-6, 3, 3), (3, -3, 0), (3, 0, -2))
    with pytest.raises(RootError):
        transform_roots_m_dual(S, roots, 2)
