"""Dev helper: structural scan of the table source (not shipped)."""
import os, re, sys
from fractions import Fraction

# table source: a markdown/LaTeX dump given as TABLE_SOURCE or the first argument
SRC = open(os.environ.get('TABLE_SOURCE') or sys.argv[1]).read().split('\n')

def region(start_pat, end_pat):
    s = next(i for i, l in enumerate(SRC) if start_pat in l)
    e = next(i for i, l in enumerate(SRC) if i > s and end_pat in l) if end_pat else len(SRC)
    return '\n'.join(SRC[s:e])

MAT_RE = re.compile(r'\\pmatrix(.*?)\\endpmatrix|\\smallmatrix(.*?)\\endsmallmatrix', re.S)

def parse_entry(tok):
    tok = re.sub(r'\s+', '', tok)
    m = re.fullmatch(r'\{\{(-?\d+)\}\\over\{(\d+)\}\}', tok)
    if m:
        return Fraction(int(m.group(1)), int(m.group(2)))
    m = re.fullmatch(r'\{(-?\d+)\}', tok)
    if m:
        return Fraction(int(m.group(1)))
    m = re.fullmatch(r'-?\d+', tok)
    if m:
        return Fraction(int(tok))
    return tok  # symbolic block name

def parse_matrix(body, small):
    body = body.replace('\n', ' ')
    rows = re.split(r'\\cr|\\\\', body)
    out = []
    for r in rows:
        if not r.strip():
            continue
        out.append([parse_entry(t) for t in r.split('&')])
    return ('s' if small else 'p', out)

def entries(text, pat):
    idx = [m.start() for m in re.finditer(pat, text)]
    idx.append(len(text))
    return [text[idx[i]:idx[i + 1]] for i in range(len(idx) - 1)]

if __name__ == '__main__':
    t1 = region(r'\centerline{\bf Table 1.}', r'\centerline{\bf Table 2.}')
    for e in entries(t1, r'\$N=\d+'):
        n = re.match(r'\$N=(\d+)', e).group(1)
        mats = [parse_matrix(m.group(1) or m.group(2), m.group(2) is not None) for m in MAT_RE.finditer(e)]
        desc = [f"{k}{len(rows)}x{'/'.join(sorted({str(len(r)) for r in rows}))}" for k, rows in mats]
        print(n, desc)

def scan2():
    t2 = region(r'\centerline{\bf Table 2.}', r'\centerline{\bf Table 3}')
    for e in entries(t2, r'\$N\^\\prime\s*=\s*\d+'):
        n = re.match(r'\$N\^\\prime\s*=\s*(\d+)', e).group(1)
        mats = [parse_matrix(m.group(1) or m.group(2), m.group(2) is not None) for m in MAT_RE.finditer(e)]
        desc = [f"{k}{len(rows)}x{'/'.join(sorted({str(len(r)) for r in rows}))}" for k, rows in mats]
        head = e[:e.find('\\newline') if '\\newline' in e else 400].replace('\n', ' ')
        print(n, desc, head[:300])
