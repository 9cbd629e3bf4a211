"""Walk through one Vinberg run end to end.

    python demos/polygon_walkthrough.py "<7> + <-1> + <-1>"

Prints the invariants, the base point, each wall as it is found, the
polygon's angles and its symmetry data.
"""
import sys

from hyperlat.discforms import discriminant_group, invariant_triple
from hyperlat.lattice import determinant, parse_lattice_symbol, represents_zero
from hyperlat.vinberg import classify_reflective, initial_chamber

symbol = sys.argv[1] if len(sys.argv) > 1 else '<7> + <-1> + <-1>'
L = parse_lattice_symbol(symbol)
tri = invariant_triple(L)
print(f'{symbol}: det {determinant(L)}, A = {discriminant_group(L).invariant_factors}')
print(f'(d, type, eta) = ({tri.d}, {tri.type}, {tri.eta}); represents zero: {represents_zero(L)}')

res = classify_reflective(L)
poly = res.polygon
print(f'base point {poly.p0} of norm {L.norm(poly.p0)}')
print('walls through the base point:', [w.coords for w in initial_chamber(L, poly.p0)])
for w, rel in zip(poly.walls, poly.relations):
    print(f'  {str(w.coords):>16}  norm {w.norm:>3}  height {L.dot(w.coords, poly.p0):>3}  then {rel}')
print('status:', poly.status)
if res.symmetries:
    sym = res.symmetries
    print(f'symmetry group of order {sym.order}, h = {sym.h}, Weyl vector {sym.weyl_vector}')
