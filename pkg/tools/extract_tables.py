"""Dev helper: transcribe the three classification tables from the LaTeX
source into the line-oriented fixture format shipped with the package.

Run once; the output files are committed. Not part of the package.

    python tools/extract_tables.py SOURCE.md
"""
import re
import sys
from fractions import Fraction
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent))
from scan_tables import MAT_RE, entries, parse_matrix, region  # noqa: E402

OUT = Path(__file__).resolve().parents[1] / 'src' / 'hyperlat' / 'data'


def fmt_q(x):
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f'{x.numerator}/{x.denominator}'


def latex_symbol(tex):
    s = tex.replace('\n', ' ')
    s = re.sub(r'\\left|\\right', '', s)
    s = s.replace('$', ' ')
    s = re.sub(r'\\langle\s*', '<', s)
    s = re.sub(r'\s*\\rangle', '>', s)
    s = s.replace('\\oplus', '+')
    s = re.sub(r'\s+', ' ', s).strip()
    s = re.sub(r'<\s*(-?)\s*(\d+)\s*>', r'<\1\2>', s)
    s = re.sub(r'\)\s*\.?$', ')', s)
    s = s.rstrip('.').strip()
    s = re.sub(r'\s*\(\s*', ' (', s)
    s = re.sub(r'\s*,\s*', ',', s)
    s = re.sub(r'\s*\+\s*', ' + ', s)
    return s


def header_fields(text):
    d = int(re.search(r'd\s*=\s*(\d+)', text).group(1))
    eta = int(re.search(r'\\eta\s*=\s*(\d+)', text).group(1))
    h = int(re.search(r'h\s*=\s*(\d+)', text).group(1))
    return d, eta, h


def roots_and_gram(e):
    mats = [parse_matrix(m.group(1) or m.group(2), m.group(2) is not None)
            for m in MAT_RE.finditer(e)]
    if not mats:
        return None, None
    kind, rows = mats[0]
    if len(rows[0]) == 3:
        roots = [tuple(r) for r in rows]
        i = 1
    elif len(rows) == 3:
        roots = []
        i = 0
        while i < len(mats) and len(mats[i][1]) == 3 and not any(
                isinstance(x, str) for row in mats[i][1] for x in row):
            rows = mats[i][1]
            roots.extend(tuple(rows[r][c] for r in range(3)) for c in range(len(rows[0])))
            i += 1
    else:
        raise ValueError('unrecognised root block')
    rest = mats[i:]
    n = len(roots)
    if len(rest) == 1:
        gram = rest[0][1]
    elif len(rest) == 3 and rest[0][1] == [['A', 'B'], ['B', 'A']]:
        stacked = rest[2][1]
        k = len(stacked[0])
        A, B = stacked[:k], stacked[k:]
        gram = [A[r] + B[r] for r in range(k)] + [B[r] + A[r] for r in range(k)]
    else:
        raise ValueError(f'unrecognised gram layout {[(k, len(r)) for k, r in rest]}')
    if len(gram) != n or any(len(r) != n for r in gram):
        raise ValueError(f'gram size {len(gram)} vs {n} roots')
    return roots, gram


def fmt_roots(roots):
    return ';'.join('(' + ','.join(fmt_q(x) for x in r) + ')' for r in roots)


def fmt_gram(gram):
    return '[' + ','.join('[' + ','.join(fmt_q(x) for x in r) + ']' for r in gram) + ']'


def table1():
    t1 = region(r'\centerline{\bf Table 1.}', r'\centerline{\bf Table 2.}')
    out = []
    for e in entries(t1, r'\$N=\d+'):
        n = int(re.match(r'\$N=(\d+)', e).group(1))
        head_end = e.find('\\nobreak')
        head = e[:head_end]
        m = re.match(r'\$N=\d+\\ \$\s*\$(.*?)\$:?', head, re.S)
        d, eta, h = header_fields(m.group(1))
        symbol = latex_symbol(head[m.end():])
        roots, gram = roots_and_gram(e[head_end:])
        out.append(dict(table=1, n=n, d=d, eta=eta, h=h, marker='er', lattice=symbol,
                        roots=fmt_roots(roots), gram=fmt_gram(gram)))
    return out


def table2():
    t2 = region(r'\centerline{\bf Table 2.}', r'\centerline{\bf Table 3}')
    out = []
    for e in entries(t2, r'\$N\^\\prime\s*=\s*\d+'):
        n = int(re.match(r'\$N\^\\prime\s*=\s*(\d+)', e).group(1))
        comment = None
        if 'equivariantly equivalent' in e:
            head, tail = re.split(r'It\s+is\s+equivariantly\s+equivalent\s+to', e)
            colon = head.find(':')
            d, eta, h = header_fields(head[:colon])
            symbol = latex_symbol(head[colon + 1:])
            c2 = tail.find(':')
            d0, eta0, _ = header_fields(tail[:c2])
            rec = dict(table=2, n=n, d=d, eta=eta, h=h, lattice=symbol,
                       equiv=f'd={d0} eta={eta0}')
        else:
            head_end = e.find('\\nobreak')
            head = e[:head_end]
            colon = head.find(':')
            d, eta, h = header_fields(head[:colon])
            rest = head[colon + 1:]
            m = re.search(r'\\widetilde\{\((\d+),(\d+),h=(\d+)\)\}', rest)
            d0, eta0 = int(m.group(1)), int(m.group(2))
            symtex = rest[:rest.find('(=') if '(=' in rest else rest.find('($=')]
            if '$ r' in symtex or symtex.rstrip().endswith('r'):
                comment = 'stray token "r" after the glue group in the source; ignored'
                symtex = re.sub(r'\$\s*r\s*$', '$', symtex.rstrip())
            symbol = latex_symbol(symtex)
            roots, gram = roots_and_gram(e[head_end:])
            rec = dict(table=2, n=n, d=d, eta=eta, h=h, lattice=symbol,
                       roots=fmt_roots(roots), gram=fmt_gram(gram), equiv=f'd={d0} eta={eta0}')
        rec['marker'] = 'er'
        if comment:
            rec['#'] = comment
        out.append(rec)
    return out


def table3():
    t3 = region(r'\centerline{\bf Table 3}', r'\enddocument')
    t3 = t3[:t3.find('\\Refs')] if '\\Refs' in t3 else t3
    out = []
    for e in entries(t3, r'\\\+\$n='):
        e = e[:e.find('\\cr') + 3] if '\\cr' in e else e
        m = re.match(r'\\\+\$n=(\d+),(.*?)\$', e, re.S)
        n = int(m.group(1))
        hdr = m.group(2)
        d = int(re.search(r'd=(\d+)', hdr).group(1))
        eta = int(re.search(r'\\eta\s*=\s*(\d+)', hdr).group(1))
        h = int(re.search(r'h\s*=\s*(\d+)', hdr).group(1))
        body = e[m.end():]
        parts = [p for p in re.split(r'&+', body) if p.strip()]
        symtex = parts[0]
        marker = re.search(r'\$(er|pr|hr|nr)\$', parts[-1]).group(1)
        out.append(dict(table=3, n=n, d=d, eta=eta, h=h, marker=marker,
                        lattice=latex_symbol(symtex)))
    return out


KEYS = ['table', 'n', 'd', 'eta', 'h', 'marker', 'lattice', 'roots', 'gram', 'equiv']


def write(name, recs, title):
    lines = [f'# {title}', f'# {len(recs)} cases', '']
    for r in recs:
        lines.append('[case]')
        if '#' in r:
            lines.append(f"# {r['#']}")
        for k in KEYS:
            if k in r:
                lines.append(f'{k} = {r[k]}')
        lines.append('')
    (OUT / name).write_text('\n'.join(lines))


if __name__ == '__main__':
    OUT.mkdir(parents=True, exist_ok=True)
    t1, t2, t3 = table1(), table2(), table3()
    print(len(t1), len(t2), len(t3))
    write('table1.txt', t1, 'Main hyperbolic rank-3 lattices with square-free determinant, elliptically reflective')
    write('table2.txt', t2, 'Non-main (odd, even determinant) rank-3 lattices, elliptically reflective')
    write('table3.txt', t3, 'Main rank-3 lattices with square-free d <= 100000 and h <= 1')
