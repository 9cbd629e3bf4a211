"""From a main odd lattice S to the odd overlattice of S(2).

    python demos/odd_overlattice.py

For every Table 2 row whose mod-8 sum is 0 or 6 the polygon of the new
lattice comes straight from the Table 1 polygon; the others print their own
roots in Table 2. This lists both kinds.
"""
from hyperlat.discforms import equivariance_sum, equivariantly_equivalent
from hyperlat.roots import transform_roots_odd_overlattice
from hyperlat.tables import load_fixtures, printed_roots, table1_by_invariants

t1 = table1_by_invariants()
for c in load_fixtures(2):
    d, eta = c.equiv_ref
    s = equivariance_sum(d, eta)
    if not equivariantly_equivalent(d, eta):
        print(f"N'={c.index:<3} d={d:<4} eta={eta}  sum={s}  three overlattices, roots printed")
        continue
    main = t1[(d, eta)]
    S = main.lattice()
    tr = transform_roots_odd_overlattice(S, printed_roots(main, S))
    norms = [tr.gram[i][i] for i in range(len(tr.roots))]
    print(f"N'={c.index:<3} d={d:<4} eta={eta}  sum={s}  from N={main.index}: norms {norms}")
