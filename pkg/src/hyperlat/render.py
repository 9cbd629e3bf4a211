"""Klein-disk SVG pictures of fundamental polygons.

This is the only floating-point code in the package. The combinatorics
(walls, order, vertices) arrive exact; floats only place them on the page.
"""
from __future__ import annotations

import math
from typing import Sequence

from .lattice import Lattice
from .vinberg import FundamentalPolygon, vertex

SIZE = 480
R = 220


def _frame(lat: Lattice, p0):
    """Float orthonormal frame (e0, e1, e2) with e0 along p0, e1, e2 spanning p0^perp."""
    g = [[float(x) for x in row] for row in lat.gram]

    def dot(x, y):
        return sum(x[i] * g[i][j] * y[j] for i in range(3) for j in range(3))

    e0 = [float(x) for x in p0]
    s = math.sqrt(dot(e0, e0))
    e0 = [x / s for x in e0]
    frame = [e0]
    for cand in ([1.0, 0, 0], [0, 1.0, 0], [0, 0, 1.0]):
        v = list(cand)
        for f in frame:
            c = dot(v, f) / dot(f, f)
            v = [a - c * b for a, b in zip(v, f)]
        n = -dot(v, v)
        if n > 1e-9:
            frame.append([x / math.sqrt(n) for x in v])
        if len(frame) == 3:
            break
    return frame, dot


def _klein(x, frame, dot):
    e0, e1, e2 = frame
    t = dot(x, e0)
    return -dot(x, e1) / t, -dot(x, e2) / t


def _page(pt):
    return SIZE / 2 + R * pt[0], SIZE / 2 - R * pt[1]


def _chord(alpha, frame, dot):
    """End points on the unit circle of the wall line, or None if it misses."""
    e0, e1, e2 = frame
    a0 = dot(alpha, e0)
    a1, a2 = dot(alpha, e1), dot(alpha, e2)
    # a0 + X a1 + Y a2 = 0 in Klein coordinates
    nn = a1 * a1 + a2 * a2
    if nn == 0:
        return None
    c = -a0 / nn
    mx, my = c * a1, c * a2
    h2 = 1 - (mx * mx + my * my)
    if h2 < 0:
        return None
    h = math.sqrt(h2 / nn)
    return (mx + h * a2, my - h * a1), (mx - h * a2, my + h * a1)


def render_svg(poly: FundamentalPolygon, title: str = '') -> str:
    lat, walls = poly.lattice, [w.coords for w in poly.walls]
    frame, dot = _frame(lat, poly.p0)
    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" '
           f'viewBox="0 0 {SIZE} {SIZE}">']
    if title:
        out.append(f'<title>{_esc(title)}</title>')
    c = SIZE / 2
    out.append(f'<circle cx="{c:.3f}" cy="{c:.3f}" r="{R}" fill="none" stroke="black" stroke-width="1.5"/>')
    n = len(walls)
    verts = []
    if poly.finite:
        for i in range(n):
            v = vertex(lat, walls[i], walls[(i + 1) % n], poly.p0)
            verts.append((v, lat.norm(v) == 0))
        pts = ' '.join('{:.3f},{:.3f}'.format(*_page(_klein(v, frame, dot))) for v, _ in verts)
        out.append(f'<polygon points="{pts}" fill="#cfe3f7" stroke="none"/>')
    for i, a in enumerate(walls):
        ch = _chord([float(x) for x in a], frame, dot)
        if ch is None:
            continue
        (x1, y1), (x2, y2) = _page(ch[0]), _page(ch[1])
        out.append(f'<line class="wall" x1="{x1:.3f}" y1="{y1:.3f}" x2="{x2:.3f}" y2="{y2:.3f}" '
                   f'stroke="#1f4e79" stroke-width="1"><title>{_esc(str(tuple(a)))}</title></line>')
    for v, ideal in verts:
        x, y = _page(_klein(v, frame, dot))
        cls = 'ideal' if ideal else 'vertex'
        fill = 'white' if ideal else '#1f4e79'
        out.append(f'<circle class="{cls}" cx="{x:.3f}" cy="{y:.3f}" r="3" fill="{fill}" stroke="#1f4e79"/>')
    x, y = _page((0.0, 0.0))
    out.append(f'<circle class="basepoint" cx="{x:.3f}" cy="{y:.3f}" r="2" fill="red"/>')
    out.append('</svg>')
    return '\n'.join(out) + '\n'


def _esc(s: str) -> str:
    return s.replace('&', '&amp;').replace('<', '&lt;').replace('>', '&gt;')


def write_svg(poly: FundamentalPolygon, path: str, title: str = '') -> None:
    with open(path, 'w', encoding='utf-8') as fh:
        fh.write(render_svg(poly, title))


__all__: Sequence[str] = ['render_svg', 'write_svg']
