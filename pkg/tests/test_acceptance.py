"""End-to-end acceptance checks, one test per criterion.

Each test prints a single PASS/FAIL line straight to the terminal.
"""
import io
import random
from contextlib import redirect_stdout
from fractions import Fraction
from itertools import combinations

import pytest

from cases import annular_cases, arcs_of, fixture_set
from surfcut import oracle
from surfcut.cli import main
from surfcut.exhaustive import cycles_cross, cycles_of, exhaustive_family
from surfcut.homotopy import (
    homotopic_path,
    moebius_cycle,
    shortest_homotopic_path,
    shortest_noncontractible_annulus,
    shortest_noncontractible_moebius,
)
from surfcut.skeleton import build_all_skeleta, place_portals, portal_bound
from surfcut.solver import solve
from surfcut.steiner import SteinerInstance, dreyfus_wagner
from surfcut.surface import DrawnCurve
from surfcut.topologies import enumerate_candidate_topologies

HALF = Fraction(1, 2)


@pytest.fixture
def report(capsys):
    def emit(name, ok, detail=""):
        with capsys.disabled():
            print(f"\n[{'PASS' if ok else 'FAIL'}] {name}: {detail}")
        assert ok, detail
    return emit


def test_planar_ratio(report):
    hits, worst, bad = 0, Fraction(0), []
    for seed in range(100):
        inst = oracle.random_planar_instance(seed, 10, 3, max_edges=20, weight_range=(1, 16))
        sol = solve(inst, HALF)
        opt, _ = oracle.exact_multicut(inst)
        valid = oracle.validate_multicut(inst, sol.cut_edges) and inst.weight_of(sol.cut_edges) == sol.weight
        if not valid or sol.weight > (1 + HALF) * opt:
            bad.append(seed)
        hits += sol.weight == opt
        if opt:
            worst = max(worst, sol.weight / opt)
    report("planar ratio", not bad and hits >= 60,
           f"100 instances, {hits} optimal, worst ratio {worst}, violations {bad}")


def test_fixture_validity(report):
    bad = []
    for name, inst in fixture_set():
        sol = solve(inst, HALF)
        if not oracle.validate_multicut(inst, sol.cut_edges):
            bad.append(name)
    report("fixture validity", not bad, f"{len(fixture_set())} fixtures, invalid {bad}")


def test_homotopic_paths(report):
    bad = []
    for seed in range(50):
        rng = random.Random(seed)
        inst = [oracle.random_planar_instance(seed, 7, 3, max_edges=11),
                oracle.torus_grid_instance(3, 3, seed),
                oracle.projective_wheel_instance(3 + seed % 2, seed)][seed % 3]
        a = arcs_of(inst)
        faces, crossings = oracle.random_dual_walk(a, rng, rng.randint(2, 12))
        p = DrawnCurve(faces, crossings)
        want = oracle.unrolled_path_oracle(a, a.word_of(p), faces[0], faces[-1])
        found = homotopic_path(a, p)
        curve = shortest_homotopic_path(a, p)
        got = (a.weight(found.length), found.crossings)
        drawn = (a.length_of(curve), len(a.word_of(curve)))
        if (found.length, found.crossings) != want or drawn != got:
            bad.append(seed)
    report("homotopic paths", not bad, f"50 cases, mismatches {bad}")


def test_annulus_and_moebius_cycles(report):
    ann = annular_cases("annulus", 20)
    moe = annular_cases("moebius", 20)
    bad = []
    for a, r in ann:
        got = shortest_noncontractible_annulus(r)
        if a.length_of(got) != a.weight(oracle.brute_noncontractible(a, r)):
            bad.append(("annulus", r.n_nodes))
    for a, r in moe:
        got = shortest_noncontractible_moebius(r)
        f = moebius_cycle(r)
        p = f.cutting_path
        once = oracle.min_crossings(a, f.nodes[:-1], list(f.curve.crossings), p.nodes, p.steps, p.start, p.end)
        if a.length_of(got) != a.weight(oracle.brute_noncontractible(a, r, odd=True)) or once != 1:
            bad.append(("moebius", r.n_nodes))
    ok = not bad and len(ann) == 20 and len(moe) == 20
    report("annulus/moebius cycles", ok, f"{len(ann)} annulus + {len(moe)} moebius, mismatches {bad}")


def test_dreyfus_wagner(report):
    bad = []
    for seed in range(30):
        rng = random.Random(seed)
        n = rng.randint(5, 15)
        edges = oracle.random_graph(rng, n, rng.randint(0, 12))
        terms = rng.sample(range(n), rng.randint(2, min(7, n)))
        tr = dreyfus_wagner(SteinerInstance.from_edges([(u, v, w, i) for i, (u, v, w) in enumerate(edges)], terms))
        used = sum(edges[lab][2] for _, _, lab in set(tr.edges))
        if not tr.cost == used == oracle.brute_steiner(n, edges, terms):
            bad.append(seed)
    report("dreyfus-wagner", not bad, f"30 instances, mismatches {bad}")


def test_exhaustive_families(report):
    bound = 2 * 3
    n, bad = 0, []
    for tp in enumerate_candidate_topologies(0, 3, 2):
        fam = exhaustive_family(tp)
        cycles = cycles_of(tp)
        ok = all(not cycles_cross(tp, x, y) for x, y in combinations(fam, 2))
        ok = ok and all(any(cycles_cross(tp, c, f) for f in fam) for c in cycles if c not in fam)
        if not ok or len(fam) > bound:
            bad.append(tp.canonical)
        n += 1
    report("exhaustive families", not bad and n > 0, f"{n} topologies at g=0 t=3 kappa=2, failures {len(bad)}")


def test_system_of_arcs(report):
    bad = []
    for name, inst in fixture_set():
        a = arcs_of(inst)
        if not (len(a.arcs) == a.g + a.t - 1 and a.disk.euler_characteristic == 1 and a.disk.genus == 0):
            bad.append(name)
    report("system of arcs", not bad, f"{len(fixture_set())} fixtures, failures {bad}")


def _covered(sk, ps):
    """Every half-integer position of every edge lies within the spacing of a portal."""
    for ei, edge in enumerate(sk.edges):
        pos = [p.position for p in ps.portals if p.edge == ei]
        if not pos:
            return False
        total = edge.length
        for k in range(2 * total + 1):
            x = Fraction(k, 2)
            if edge.curve.closed and total:
                d = min(min(abs(x - q), total - abs(x - q)) for q in pos)
            else:
                d = min(abs(x - q) for q in pos)
            if d > ps.spacing:
                return False
    return True


def test_portal_covering(report):
    n, bad = 0, []
    for name, inst in fixture_set():
        a = arcs_of(inst)
        kappas = (1, 2) if a.g == 0 else (1,)
        for kappa in kappas:
            sks, _ = build_all_skeleta(a, HALF, kappa)
            for sk in sks:
                ps = place_portals(sk, HALF, a.g, a.t)
                n += 1
                if not _covered(sk, ps) or len(ps.portals) > portal_bound(HALF, a.g, a.t):
                    bad.append((name, kappa))
    report("portal covering", not bad and n > 0, f"{n} skeleta, failures {bad}")


def _cli(*argv):
    buf = io.StringIO()
    with redirect_stdout(buf):
        code = main([str(x) for x in argv])
    return code, buf.getvalue()


def test_determinism_and_scaling(report, tmp_path):
    problems = []
    for seed in range(5):
        code, text = _cli("gen", "--seed", seed, "--vertices", 9, "--max-edges", 16)
        again = _cli("gen", "--seed", seed, "--vertices", 9, "--max-edges", 16)[1]
        f = tmp_path / f"i{seed}.json"
        f.write_text(text)
        one, two = _cli("solve", f, "--certificate"), _cli("solve", f, "--certificate")
        if code or text != again or one != two or one[0]:
            problems.append(("determinism", seed))
    insts = [x for _, x in fixture_set()] + [oracle.random_planar_instance(s, 9, 3, max_edges=16) for s in range(5)]
    for inst in insts:
        a, b = solve(inst, HALF), solve(inst.scaled(7), HALF)
        da, db = a.to_dict(), b.to_dict()
        if b.weight != 7 * a.weight or set(b.cut_edges) != set(a.cut_edges):
            problems.append(("scaling", da["weight"], db["weight"]))
        da.pop("weight"), db.pop("weight")
        if da != db:
            problems.append(("scaling report", da["cut_edges"]))
    report("determinism and scaling", not problems, f"5 seeds twice, {len(insts)} instances x7, problems {problems}")
