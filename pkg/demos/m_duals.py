"""The 2^t m-duals of a Table 1 lattice and where its walls go.

    python demos/m_duals.py 12

Argument: the index N in Table 1.
"""
import sys

from hyperlat import exact
from hyperlat.discforms import invariant_triple, m_dual
from hyperlat.lattice import determinant
from hyperlat.roots import transform_roots_m_dual
from hyperlat.tables import find_case, printed_roots

case = find_case(1, int(sys.argv[1]) if len(sys.argv) > 1 else 12)
S = case.lattice()
roots = printed_roots(case, S)
print(f'N={case.index}: {case.symbol}, d={case.d}, {len(roots)} walls')
for m in exact.divisors(case.d):
    F = m_dual(S, m)
    tr = transform_roots_m_dual(S, roots, m)
    tri = invariant_triple(F) if exact.is_squarefree(abs(determinant(F))) else None
    print(f'm={m:<4} det {determinant(F):<6} gram {F.gram}')
    print(f'       walls {tr.roots}')
    print(f'       norms {[row[i] for i, row in enumerate(tr.gram)]}'
          + (f', triple ({tri.d}, {tri.type}, {tri.eta})' if tri else ''))
