"""Command-line front end.

Exit codes: 0 success, 1 usage or parse error, 2 budget exhausted,
3 verification failures.
"""
from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ProcessPoolExecutor

from . import exact
from .discforms import discriminant_group, invariant_triple, is_elementary, m_dual, p_invariants
from .lattice import LatticeError, determinant, parity, parse_lattice_symbol, represents_zero
from .roots import RootError, transform_roots_m_dual
from .tables import (FixtureError, find_case, load_fixtures, printed_roots, resolve_symbol,
                     verify_case)
from .vinberg import Budget, classify_reflective

EXIT_OK, EXIT_USAGE, EXIT_BUDGET, EXIT_VERIFY = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f'{self.prog}: error: {message}', file=sys.stderr)
        sys.exit(EXIT_USAGE)


def _fmt(x):
    if isinstance(x, (list, tuple)):
        return '(' + ','.join(_fmt(v) for v in x) + ')'
    return str(x)


def _emit(args, payload: dict, lines: list[str]):
    if args.format == 'jsonl':
        print(json.dumps(payload, sort_keys=True, default=str))
    else:
        print('\n'.join(lines))


def _lattice(text: str):
    try:
        return parse_lattice_symbol(resolve_symbol(text))
    except KeyError as e:
        raise UsageError(str(e.args[0])) from None


def _ints(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(x) for x in text.strip('()').split(','))
    except ValueError:
        raise UsageError(f'bad vector {text!r}') from None


def cmd_invariants(args) -> int:
    lat = _lattice(args.symbol)
    disc = discriminant_group(lat)
    det = determinant(lat)
    payload = {'symbol': lat.symbol, 'gram': lat.gram, 'det': det, 'type': parity(lat),
               'discriminant_group': list(disc.invariant_factors), 'r_p': p_invariants(lat),
               'elementary': is_elementary(lat)}
    lines = [f'gram: {_fmt(lat.gram)}', f'det: {det}', f'type: {parity(lat)}',
             f'discriminant group: {" x ".join(f"Z/{f}" for f in disc.invariant_factors) or "trivial"}',
             f'r_p: {p_invariants(lat)}', f'elementary: {is_elementary(lat)}']
    if lat.rank == 3 and exact.is_squarefree(abs(det)):
        tri = invariant_triple(lat)
        payload.update(d=tri.d, eta=tri.eta, eta_bits=dict(zip(map(str, tri.primes), tri.eta_bits)))
        lines.append(f'd={tri.d} {tri.type} eta={tri.eta} bits={dict(zip(tri.primes, tri.eta_bits))}')
    if lat.rank == 3:
        rz = represents_zero(lat)
        payload['represents_zero'] = rz
        lines.append(f'represents_zero: {rz}')
    _emit(args, payload, lines)
    return EXIT_OK


def _budget(args) -> Budget:
    try:
        return Budget(args.max_height, args.max_walls)
    except ValueError as e:
        raise UsageError(str(e)) from None


def cmd_vinberg(args) -> int:
    lat = _lattice(args.symbol)
    p0 = _ints(args.basepoint) if args.basepoint else None
    res = classify_reflective(lat, _budget(args), p0)
    poly = res.polygon
    walls = [w.coords for w in poly.walls]
    payload = {'symbol': lat.symbol, 'p0': poly.p0, 'status': poly.status, 'walls': walls,
               'gram': poly.gram(), 'relations': [str(r) for r in poly.relations],
               'height': poly.height}
    lines = [f'base point: {_fmt(poly.p0)}', f'status: {poly.status}', f'walls ({len(walls)}):']
    lines += [f'  {_fmt(w)}  norm {r.norm}' for w, r in zip(walls, poly.walls)]
    lines.append(f'gram: {_fmt(poly.gram())}')
    if poly.relations:
        lines.append('relations: ' + '; '.join(str(r) for r in poly.relations))
    if res.symmetries is not None:
        sym = res.symmetries
        payload.update(h=sym.h, symmetry_order=sym.order, weyl_vector=sym.weyl_vector)
        lines += [f'symmetry group order: {sym.order}', f'h: {sym.h}',
                  f'weyl vector: {_fmt(sym.weyl_vector)}']
    _emit(args, payload, lines)
    return EXIT_OK if poly.finite else EXIT_BUDGET


def cmd_dual(args) -> int:
    lat = _lattice(args.symbol)
    d = abs(determinant(lat))
    if args.m <= 0 or d % args.m:
        raise UsageError(f'm = {args.m} does not divide d = {d}')
    F = m_dual(lat, args.m)
    payload = {'symbol': lat.symbol, 'm': args.m, 'gram': F.gram, 'det': determinant(F),
               'basis': [[str(x) for x in r] for r in F.basis]}
    lines = [f'm-dual gram: {_fmt(F.gram)}', f'det: {determinant(F)}',
             'basis: ' + '; '.join(_fmt(r) for r in F.basis)]
    roots = None
    if args.roots:
        roots = [lat.from_ambient(_ints(r)) for r in args.roots.split(';')]
    elif args.symbol.startswith('@'):
        case = find_case(*map(int, args.symbol[1:].split(':')))
        if case.roots is not None:
            roots = printed_roots(case, lat)
    elif args.vinberg:
        res = classify_reflective(lat, _budget(args))
        if res.elliptic:
            roots = [w.coords for w in res.polygon.walls]
    if roots is not None:
        tr = transform_roots_m_dual(lat, roots, args.m)
        payload.update(roots=tr.roots, root_gram=tr.gram)
        lines += ['roots: ' + '; '.join(_fmt(r) for r in tr.roots), f'root gram: {_fmt(tr.gram)}']
    _emit(args, payload, lines)
    return EXIT_OK


def _verify_one(job):
    table, index, budget, classify = job
    return verify_case(find_case(table, index), budget, classify).to_json()


def cmd_verify(args) -> int:
    tables = [args.table] if args.table else [1, 2, 3]
    jobs = []
    for t in tables:
        cases = load_fixtures(t)
        if args.case is not None:
            cases = [c for c in cases if c.index == args.case]
            if not cases:
                raise UsageError(f'no case {args.case} in table {t}')
        jobs += [(c.table, c.index, _budget(args), not args.no_classify) for c in cases]
    if args.jobs > 1:
        with ProcessPoolExecutor(args.jobs) as ex:
            reports = list(ex.map(_verify_one, jobs))
    else:
        reports = [_verify_one(j) for j in jobs]
    failed = [r for r in reports if not r['passed']]
    for r in reports:
        if args.format == 'jsonl':
            print(json.dumps(r, sort_keys=True))
        else:
            marks = ' '.join(f'{c["name"]}:{"ok" if c["passed"] else ("info" if c["informational"] else "FAIL")}'
                             for c in r['checks'])
            print(f'{r["case"]:>6}  {"pass" if r["passed"] else "FAIL"}  {marks}')
    if args.format != 'jsonl':
        print(f'{len(reports) - len(failed)}/{len(reports)} pass')
    return EXIT_OK if not failed else EXIT_VERIFY


def cmd_render(args) -> int:
    from .render import write_svg
    lat = _lattice(args.symbol)
    p0 = _ints(args.basepoint) if args.basepoint else None
    res = classify_reflective(lat, _budget(args), p0)
    try:
        write_svg(res.polygon, args.output, lat.symbol or '')
    except OSError as e:
        raise UsageError(f'cannot write {args.output}: {e.strerror}') from None
    print(f'wrote {args.output} ({len(res.polygon.walls)} walls, {res.polygon.status})')
    return EXIT_OK if res.polygon.finite else EXIT_BUDGET


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog='hyperlat', description='Rank-3 hyperbolic lattices: invariants, '
                'Vinberg polygons, m-duals and table verification.')
    sub = p.add_subparsers(dest='command', required=True, parser_class=_Parser)

    def budget_opts(sp):
        sp.add_argument('--max-height', type=int, default=Budget.max_height)
        sp.add_argument('--max-walls', type=int, default=Budget.max_walls)

    def fmt_opt(sp):
        sp.add_argument('--format', choices=['text', 'jsonl'], default='text')

    sp = sub.add_parser('invariants', help='discriminant data and (d, type, eta)')
    sp.add_argument('symbol')
    fmt_opt(sp)
    sp.set_defaults(func=cmd_invariants)

    sp = sub.add_parser('vinberg', help="run Vinberg's algorithm")
    sp.add_argument('symbol')
    sp.add_argument('--basepoint')
    budget_opts(sp)
    fmt_opt(sp)
    sp.set_defaults(func=cmd_vinberg)

    sp = sub.add_parser('dual', help='m-dual lattice and transformed roots')
    sp.add_argument('symbol')
    sp.add_argument('--m', type=int, required=True)
    sp.add_argument('--roots', help='roots in symbol coordinates, "(a,b,c);(..)"')
    sp.add_argument('--vinberg', action='store_true', help='compute the polygon first')
    budget_opts(sp)
    fmt_opt(sp)
    sp.set_defaults(func=cmd_dual)

    sp = sub.add_parser('verify', help='verify table fixtures')
    sp.add_argument('--table', type=int, choices=[1, 2, 3])
    sp.add_argument('--case', type=int)
    sp.add_argument('--jobs', type=int, default=1)
    sp.add_argument('--no-classify', action='store_true', help='skip Vinberg runs')
    budget_opts(sp)
    fmt_opt(sp)
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser('render', help='draw the polygon in the Klein disk')
    sp.add_argument('symbol')
    sp.add_argument('-o', '--output', required=True)
    sp.add_argument('--basepoint')
    budget_opts(sp)
    sp.set_defaults(func=cmd_render)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, LatticeError, RootError, FixtureError, KeyError, ValueError) as e:
        msg = e.args[0] if isinstance(e, KeyError) and e.args else e
        print(f'hyperlat: error: {msg}', file=sys.stderr)
        return EXIT_USAGE


if __name__ == '__main__':
    sys.exit(main())
