"""Shortest curves on a projective wheel: homotopic paths and one-sided cycles.

Run with:  python3 demos/curves_on_projective_plane.py
"""
import random

from surfcut import oracle
from surfcut.homotopy import (
    annular_region,
    greedy_system_of_arcs,
    homotopic_path,
    moebius_cycle,
    one_sided,
)
from surfcut.surface import DrawnCurve, carve_terminals

inst = oracle.projective_wheel_instance(4, 1)
a = greedy_system_of_arcs(carve_terminals(inst.surface, inst.terminals))
print(f"Euler genus {a.g}, terminals {a.t}, arcs {len(a.arcs)}")

# a random walk through faces, then the shortest path homotopic to it
rng = random.Random(3)
faces, crossings = oracle.random_dual_walk(a, rng, 10)
walk = DrawnCurve(faces, crossings)
found = homotopic_path(a, walk)
print("walk word     ", a.word_of(walk), "length", a.length_of(walk))
print("shortest word ", a.word_of(found.curve), "length", a.length_of(found.curve))

# every one-letter word crossing the cross-cap gives a Moebius cover
for k in range(len(a.pieces)):
    w = ((k, 1),)
    if one_sided(a, w):
        r = annular_region(a, w)
        f = moebius_cycle(r)
        print(f"one-sided cycle along arc {k}: length {a.length_of(f.curve)}, "
              f"{len(r.copies)} disk copies in its region")
