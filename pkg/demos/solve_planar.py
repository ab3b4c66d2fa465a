"""Solve a random planar instance and compare against the exact optimum.

Run with:  python3 demos/solve_planar.py [seed]
"""
import sys
from fractions import Fraction

from surfcut import oracle
from surfcut.solver import solve

seed = int(sys.argv[1]) if len(sys.argv) > 1 else 7
inst = oracle.random_planar_instance(seed, 10, 3, max_edges=20)
print(f"instance: {len(inst.surface.vertex_ids)} vertices, {len(inst.edge_ids)} edges, pairs {inst.pairs}")

sol = solve(inst, Fraction(1, 2))
opt, best = oracle.exact_multicut(inst)
print(f"solver cut   {sol.cut_edges}  weight {sol.weight}  (kappa {sol.kappa})")
print(f"exact cut    {best}  weight {opt}")
print("valid:", oracle.validate_multicut(inst, sol.cut_edges))

# the certificate lists the crossing word of every drawn curve of the dual;
# arc crossings look like k0+ / k1-, anything else is a crossed edge id
for i, tree in enumerate(sol.certificate["trees"]):
    for word in tree:
        print(f"tree {i} edge:", " ".join(word))
for word in sol.certificate["cycles"]:
    print("cycle:", " ".join(word))
