"""Fixtures for Tables 1-3 and the harness that re-derives every printed claim.

Fixture files live in ``hyperlat/data`` in a small line-oriented format::

    [case]
    table = 1
    n = 4
    d = 3
    ...

Roots are written in the standard basis of the base lattice of the symbol
and may have half-integer coordinates for glued lattices.
"""
from __future__ import annotations

import re
import time
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from importlib import resources
from typing import Sequence

from . import exact
from .discforms import (equivariantly_equivalent, invariant_triple, is_main, omega_code)
from .lattice import Lattice, LatticeError, determinant, parity, parse_lattice_symbol, represents_zero
from .roots import is_primitive, is_root, transform_roots_odd_overlattice
from .vinberg import Budget, classify_reflective, cyclic_order

EXPECTED_COUNTS = {1: 122, 2: 38, 3: 206}
MARKERS = {'er', 'pr', 'hr', 'nr'}

# (table, index) -> {check: reason}; documented transcription errata only
ERRATA: dict[tuple[int, int], dict[str, str]] = {}


class FixtureError(ValueError):
    pass


@dataclass(frozen=True)
class TableCase:
    table: int
    index: int
    d: int
    type: str
    eta: int
    h: int | None
    symbol: str
    roots: tuple | None = None
    gram: tuple | None = None
    marker: str | None = None
    equiv_ref: tuple[int, int] | None = None
    line: int = 0

    @property
    def case_id(self) -> str:
        return f'{self.table}:{self.index}'

    def lattice(self) -> Lattice:
        return parse_lattice_symbol(self.symbol)


# ---------------------------------------------------------------------------
# loading
# ---------------------------------------------------------------------------

def _parse_vec(txt: str) -> tuple:
    return tuple(exact.normalize(Fraction(x.strip())) for x in txt.strip().strip('()').split(','))


def _parse_gram(txt: str) -> tuple:
    rows = re.findall(r'\[([^\[\]]*)\]', txt)
    return tuple(tuple(int(x) for x in r.split(',')) for r in rows)


def parse_fixture_text(text: str, source: str = '<fixture>') -> list[TableCase]:
    cases, cur, start = [], None, 0

    def flush():
        if cur is None:
            return
        try:
            cases.append(_make_case(cur, start))
        except (KeyError, ValueError) as e:
            raise FixtureError(f'{source}:{start}: {e}') from None

    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split('#', 1)[0].strip() if not raw.lstrip().startswith('#') else ''
        if not line:
            continue
        if line == '[case]':
            flush()
            cur, start = {}, lineno
            continue
        if cur is None or '=' not in line:
            raise FixtureError(f'{source}:{lineno}: unexpected line {raw!r}')
        key, val = (s.strip() for s in line.split('=', 1))
        if key in cur:
            raise FixtureError(f'{source}:{lineno}: duplicate key {key!r}')
        cur[key] = val
    flush()
    return cases


def _make_case(kv: dict, line: int) -> TableCase:
    table = int(kv['table'])
    d = int(kv['d'])
    roots = gram = None
    if 'roots' in kv:
        roots = tuple(_parse_vec(r) for r in kv['roots'].split(';'))
    if 'gram' in kv:
        gram = _parse_gram(kv['gram'])
    if (roots is None) != (gram is None):
        raise ValueError('roots and gram must be given together')
    if gram is not None and (len(gram) != len(roots) or any(len(r) != len(gram) for r in gram)):
        raise ValueError('gram size does not match the root list')
    marker = kv.get('marker')
    if marker is not None and marker not in MARKERS:
        raise ValueError(f'unknown marker {marker!r}')
    equiv = None
    if 'equiv' in kv:
        m = re.fullmatch(r'd=(\d+)\s+eta=(\d+)', kv['equiv'])
        if not m:
            raise ValueError(f'bad equiv field {kv["equiv"]!r}')
        equiv = (int(m[1]), int(m[2]))
    typ = kv.get('type') or ('odd' if table == 2 or d % 2 else 'even')
    h = int(kv['h']) if 'h' in kv else None
    return TableCase(table, int(kv['n']), d, typ, int(kv['eta']), h, kv['lattice'],
                     roots, gram, marker, equiv, line)


@lru_cache(maxsize=None)
def load_fixtures(table: int) -> tuple[TableCase, ...]:
    if table not in EXPECTED_COUNTS:
        raise FixtureError(f'no table {table}')
    name = f'table{table}.txt'
    text = resources.files('hyperlat.data').joinpath(name).read_text(encoding='utf-8')
    cases = parse_fixture_text(text, name)
    if len(cases) != EXPECTED_COUNTS[table]:
        raise FixtureError(f'{name}: {len(cases)} cases, expected {EXPECTED_COUNTS[table]}')
    if [c.index for c in cases] != list(range(1, len(cases) + 1)):
        raise FixtureError(f'{name}: case numbers are not 1..{len(cases)}')
    return tuple(cases)


def find_case(table: int, index: int) -> TableCase:
    for c in load_fixtures(table):
        if c.index == index:
            return c
    raise KeyError(f'no case {index} in table {table}')


def table1_by_invariants() -> dict[tuple[int, int], TableCase]:
    return {(c.d, c.eta): c for c in load_fixtures(1)}


def resolve_symbol(text: str) -> str:
    """``@table:index`` references resolve to the fixture's lattice symbol."""
    m = re.fullmatch(r'@(\d):(\d+)', text.strip())
    if not m:
        return text
    return find_case(int(m[1]), int(m[2])).symbol


# ---------------------------------------------------------------------------
# comparison helpers
# ---------------------------------------------------------------------------

def canonical_cyclic_gram(gram: Sequence[Sequence[int]]) -> tuple:
    """Least row-major entry sequence over the dihedral relabelings."""
    n = len(gram)
    best = None
    for start in range(n):
        for step in (1, -1):
            perm = [(start + step * i) % n for i in range(n)]
            seq = tuple(gram[perm[i]][perm[j]] for i in range(n) for j in range(n))
            if best is None or seq < best:
                best = seq
    return best


def printed_roots(case: TableCase, lat: Lattice) -> list[tuple[int, ...]]:
    return [lat.from_ambient(r) for r in case.roots]


def cyclic_gram(lat: Lattice, roots: Sequence[Sequence[int]]) -> tuple | None:
    order = cyclic_order(lat, roots)
    if order is None:
        return None
    return tuple(tuple(lat.dot(roots[i], roots[j]) for j in order) for i in order)


# ---------------------------------------------------------------------------
# verification
# ---------------------------------------------------------------------------

@dataclass
class Check:
    name: str
    passed: bool
    expected: object = None
    computed: object = None
    note: str = ''
    informational: bool = False


@dataclass
class VerificationReport:
    case_id: str
    checks: list = field(default_factory=list)
    elapsed: float = 0.0

    @property
    def passed(self) -> bool:
        return all(c.passed or c.informational for c in self.checks)

    def check(self, name: str) -> Check | None:
        return next((c for c in self.checks if c.name == name), None)

    def add(self, name, passed, expected=None, computed=None, note='', informational=False):
        self.checks.append(Check(name, bool(passed), expected, computed, note, informational))

    def to_json(self) -> dict:
        return {
            'case': self.case_id,
            'passed': self.passed,
            'checks': [{'name': c.name, 'passed': c.passed, 'expected': _jsonable(c.expected),
                        'computed': _jsonable(c.computed), 'note': c.note,
                        'informational': c.informational} for c in self.checks],
        }


def _jsonable(x):
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, (tuple, list)):
        return [_jsonable(v) for v in x]
    return x


def _u_form(symbol: str, d: int) -> bool:
    return re.sub(r'\s+', '', symbol) == f'U+<-{d}>'


def verify_case(case: TableCase, budget: Budget = Budget(), classify: bool = True) -> VerificationReport:
    rep = VerificationReport(case.case_id)
    t0 = time.perf_counter()
    try:
        _verify(case, rep, budget, classify)
    except (LatticeError, ArithmeticError, ValueError) as e:
        rep.add('exception', False, note=f'{type(e).__name__}: {e}')
    for c in rep.checks:
        reason = ERRATA.get((case.table, case.index), {}).get(c.name)
        if reason and not c.passed:
            c.informational, c.note = True, f'erratum: {reason}'
    rep.elapsed = time.perf_counter() - t0
    return rep


def _verify(case: TableCase, rep: VerificationReport, budget: Budget, classify: bool):
    lat = case.lattice()
    det = determinant(lat)
    typ = parity(lat)
    ok_a = det > 0 and abs(det) == case.d and typ == case.type
    if case.table in (1, 3):
        ok_a = ok_a and is_main(lat)
    else:
        ok_a = ok_a and not is_main(lat)
    rep.add('a', ok_a, (case.d, case.type), (det, typ), 'det, parity, main condition')
    tri = invariant_triple(lat)
    rep.add('b', (tri.d, tri.type, tri.eta) == (case.d, case.type, case.eta),
            (case.d, case.type, case.eta), (tri.d, tri.type, tri.eta))

    roots = None
    if case.roots is not None:
        roots = printed_roots(case, lat)
        bad = [r for r in roots if not (is_root(lat, r) and is_primitive(lat, r))]
        rep.add('c', not bad, [], bad, 'printed roots are primitive roots')
        gram = tuple(tuple(lat.dot(a, b) for b in roots) for a in roots)
        rep.add('d', gram == case.gram, case.gram, gram)
        off = all(case.gram[i][j] >= 0 for i in range(len(roots)) for j in range(len(roots)) if i != j)
        rep.add('e', off)

    if case.table == 2:
        dm, em = case.equiv_ref
        equiv = equivariantly_equivalent(dm, em)
        trip_ok = (tri.d, tri.type, tri.eta) == (2 * dm, 'odd', em ^ omega_code(dm))
        rep.add('h', equiv == (case.roots is None) and trip_ok,
                (2 * dm, 'odd', em ^ omega_code(dm), not equiv),
                (tri.d, tri.type, tri.eta, case.roots is not None))

    if case.table == 1:
        rz = represents_zero(lat)
        rep.add('i', rz == _u_form(case.symbol, case.d), _u_form(case.symbol, case.d), rz)

    if case.table == 3:
        t1 = table1_by_invariants()
        in1 = (case.d, case.eta) in t1
        ok = case.h is not None and case.h <= 1 and (case.marker == 'er') == in1
        if in1:
            ok = ok and t1[(case.d, case.eta)].h == case.h
        rep.add('j', ok, 'h<=1, er iff in Table 1', (case.h, case.marker, in1))
        if classify and case.marker in ('hr', 'nr'):
            res = classify_reflective(lat, budget)
            rep.add('classify', not res.elliptic, 'not elliptic', res.status,
                    f'{len(res.polygon.walls)} walls, height {res.polygon.height}', informational=True)
        return

    if not classify:
        return
    expected = _expected_cycle(case, lat, roots)
    res = classify_reflective(lat, budget)
    comp = None
    if res.elliptic:
        comp = canonical_cyclic_gram(res.polygon.gram())
    rep.add('f', res.elliptic and expected is not None and comp == expected,
            expected, comp, f'{res.status}, {len(res.polygon.walls)} walls')
    if res.elliptic:
        rep.add('g', res.symmetries.h == case.h, case.h, res.symmetries.h)
    else:
        rep.add('g', False, case.h, None, 'no polygon')


def _expected_cycle(case: TableCase, lat: Lattice, roots) -> tuple | None:
    if roots is not None:
        g = cyclic_gram(lat, roots)
        return None if g is None else canonical_cyclic_gram(g)
    # equivariantly equivalent Table 2 row: transform the Table 1 polygon
    main = table1_by_invariants()[case.equiv_ref]
    S = main.lattice()
    tr = transform_roots_odd_overlattice(S, printed_roots(main, S))
    g = cyclic_gram(tr.lattice, tr.roots)
    return None if g is None else canonical_cyclic_gram(g)


def verify_table(table: int, budget: Budget = Budget(), classify: bool = True) -> list[VerificationReport]:
    return [verify_case(c, budget, classify) for c in load_fixtures(table)]
