"""Enumerate candidate topologies on a torus and place portals on their skeleta.

Run with:  python3 demos/skeleta_and_portals.py
"""
from collections import Counter
from fractions import Fraction

from surfcut import oracle
from surfcut.homotopy import greedy_system_of_arcs
from surfcut.skeleton import build_all_skeleta, max_gap, place_portals, portal_bound
from surfcut.surface import carve_terminals

eps = Fraction(1, 2)
inst = oracle.torus_grid_instance()
a = greedy_system_of_arcs(carve_terminals(inst.surface, inst.terminals))
skeleta, raw = build_all_skeleta(a, eps, 1)
print(f"g={a.g} t={a.t}: {raw} (topology, range) choices give {len(skeleta)} distinct skeleta")

roles = Counter(e.role for sk in skeleta for e in sk.edges)
print("edge roles:", dict(roles))

worst = 0
for sk in skeleta:
    ps = place_portals(sk, eps, a.g, a.t)
    assert max_gap(sk, ps) <= ps.spacing
    worst = max(worst, len(ps.portals))
print(f"most portals on one skeleton: {worst} (bound {portal_bound(eps, a.g, a.t)})")
