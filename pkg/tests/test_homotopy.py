import random

import pytest
from hypothesis import given, strategies as st

from cases import annular_cases, arcs_of, fixture_set
from surfcut import oracle
from surfcut.homotopy import (
    ContractibleError,
    annular_region,
    annulus_cycle,
    canonical_cyclic,
    cycle_through,
    cyclic_reduce,
    homotopic_cycle,
    homotopic_path,
    inverse,
    moebius_cycle,
    reduce_word,
    relevant_region_universal,
    shortest_homotopic_path,
    shortest_noncontractible_annulus,
    shortest_noncontractible_moebius,
)
from surfcut.surface import DrawnCurve, check_curve

letters = st.tuples(st.integers(0, 2), st.sampled_from([1, -1]))
words = st.lists(letters, max_size=10).map(tuple)


# words


def test_reduce_cancels_adjacent_inverses():
    assert reduce_word(((0, 1), (1, 1), (1, -1), (0, -1), (2, 1))) == ((2, 1),)


def test_cyclic_reduce_strips_conjugation():
    assert cyclic_reduce(((1, 1), (0, 1), (1, -1))) == ((0, 1),)


@given(words)
def test_reduction_is_idempotent(w):
    r = reduce_word(w)
    assert reduce_word(r) == r
    assert reduce_word(w + inverse(w)) == ()


@given(words, st.integers(0, 9))
def test_canonical_form_ignores_rotation_and_direction(w, k):
    w = cyclic_reduce(w)
    if not w:
        return
    k %= len(w)
    c = canonical_cyclic(w)
    assert canonical_cyclic(w[k:] + w[:k]) == c
    assert canonical_cyclic(inverse(w)) == c


# systems of arcs


@pytest.mark.parametrize("inst,expected", [
    (oracle.path_instance(), 1),
    (oracle.cylinder_instance([[1, 1, 1], [1, 1, 1]]), 1),
    (oracle.star_instance(), 2),
    (oracle.torus_grid_instance(3, 3, 0, ["v0_0"], []), 2),
])
def test_arc_counts(inst, expected):
    assert len(arcs_of(inst).arcs) == expected


@pytest.mark.parametrize("name,inst", fixture_set())
def test_cutting_along_arcs_gives_a_disk(name, inst):
    a = arcs_of(inst)
    assert len(a.arcs) == a.g + a.t - 1
    assert a.disk.euler_characteristic == 1 and a.disk.genus == 0


# regions in the universal cover


def test_empty_word_region_is_one_copy():
    a = arcs_of(oracle.star_instance())
    assert len(relevant_region_universal(a, ()).copies) == 1


@given(st.lists(st.tuples(st.integers(0, 1), st.sampled_from([1, -1])), max_size=8))
def test_universal_region_is_a_tree_of_copies(w):
    a = arcs_of(oracle.star_instance())
    r = relevant_region_universal(a, tuple(w))
    glued = r.gluings
    n = len(r.copies)
    assert len(glued) == n - 1
    for skip in range(len(glued)):
        adj = {i: set() for i in range(n)}
        for j, (x, y, _) in enumerate(glued):
            if j != skip:
                adj[x].add(y)
                adj[y].add(x)
        seen, todo = {0}, [0]
        while todo:
            for y in adj[todo.pop()] - seen:
                seen.add(y)
                todo.append(y)
        assert len(seen) < n


def test_region_rejects_unknown_arc():
    a = arcs_of(oracle.star_instance())
    with pytest.raises(ValueError):
        relevant_region_universal(a, ((5, 1),))


# homotopic paths


def test_single_cheapest_crossing_is_kept():
    a = arcs_of(oracle.cylinder_instance([[1, 2, 2], [2, 2, 3]]))
    cell, (nb, w, e, sd) = min(
        ((c, x) for c in range(a.n_cells) for x in a.gnbrs[c]), key=lambda p: (p[1][1], p[0]))
    p = DrawnCurve((a.cells[cell], a.cells[nb]), ((e, sd),))
    f = homotopic_path(a, p)
    assert f.length == w and f.crossings == 0
    assert a.length_of(shortest_homotopic_path(a, p)) == a.length_of(p)


def test_back_and_forth_detour_is_dropped():
    a = arcs_of(oracle.cylinder_instance([[1, 2, 2], [2, 2, 3]], ring_weight=10))
    cell, (nb, w, e, sd) = next(
        (c, x) for c in range(a.n_cells) for x in a.gnbrs[c] if x[1] == 10)
    p = DrawnCurve((a.cells[cell], a.cells[nb], a.cells[cell]), ((e, sd), (e, -sd)))
    assert a.length_of(p) == 20
    f = homotopic_path(a, p)
    assert f.length == 0 and f.curve.crossings == ()


@pytest.mark.parametrize("seed", range(12))
def test_homotopic_path_matches_unrolled_search(seed):
    rng = random.Random(seed)
    inst = [oracle.random_planar_instance(seed, 7, 3, max_edges=11),
            oracle.torus_grid_instance(3, 3, seed),
            oracle.projective_wheel_instance(3 + seed % 2, seed)][seed % 3]
    a = arcs_of(inst)
    faces, crossings = oracle.random_dual_walk(a, rng, rng.randint(2, 12))
    p = DrawnCurve(faces, crossings)
    f = homotopic_path(a, p)
    assert (f.length, f.crossings) == oracle.unrolled_path_oracle(a, a.word_of(p), faces[0], faces[-1])
    assert a.word_of(f.curve) == reduce_word(a.word_of(p))
    assert f.length <= sum(a.base.iweights[g] for g in a.graph_edges_of(p))
    assert homotopic_path(a, f.curve).cost == f.cost


# annular regions


def test_annulus_core_region_is_one_self_glued_copy():
    a = arcs_of(oracle.cylinder_instance([[1, 2, 2], [2, 2, 3]]))
    r = annular_region(a, ((0, 1),))
    assert r.kind == "annulus" and len(r.copies) == 1
    assert r.glue[(0, 0, 1)] == 0


def test_two_sided_word_uses_at_most_its_length_in_copies():
    a = arcs_of(oracle.torus_grid_instance(3, 3, 0, ["v0_0"], []))
    for w in (((0, 1),), ((0, 1), (1, 1)), ((0, 1), (0, 1), (1, -1))):
        r = annular_region(a, w)
        assert len(r.copies) <= len(w)


def test_one_sided_loop_is_moebius():
    a = arcs_of(oracle.projective_wheel_instance())
    assert annular_region(a, ((0, 1),)).kind == "moebius"


def test_contractible_word_has_no_annulus():
    a = arcs_of(oracle.star_instance())
    with pytest.raises(ContractibleError):
        annular_region(a, ((0, 1), (0, -1)))


def test_cylinder_rings():
    # rings of total weight 5, 7 and 9
    inst = oracle.cylinder_instance([[1, 2, 2], [2, 2, 3], [3, 3, 3]])
    a = arcs_of(inst)
    r = annular_region(a, ((0, 1),))
    assert annulus_cycle(r).length == 5
    assert a.length_of(shortest_noncontractible_annulus(r)) == 5


def test_mandatory_edge_bounds_the_annulus():
    a = arcs_of(oracle.path_instance("10", "10"))
    assert annulus_cycle(annular_region(a, ((0, 1),))).length >= 10


def unit_wheel(scale=1):
    d = oracle.projective_wheel_instance(3, 0, terminals=["h"], pairs=[]).to_dict()
    for e in d["edges"]:
        e["w"] = str(scale)
    return oracle.instance_from_dict(d)


def test_moebius_unit_wheel():
    a = arcs_of(unit_wheel())
    r = annular_region(a, ((0, 1),))
    assert r.kind == "moebius"
    assert moebius_cycle(r).length == 4


def test_moebius_scaling_keeps_the_word():
    a1, a2 = arcs_of(unit_wheel(1)), arcs_of(unit_wheel(2))
    c1 = moebius_cycle(annular_region(a1, ((0, 1),)))
    c2 = moebius_cycle(annular_region(a2, ((0, 1),)))
    assert a2.length_of(c2.curve) == 2 * a1.length_of(c1.curve)
    assert a1.word_of(c1.curve) == a2.word_of(c2.curve)
    assert shortest_noncontractible_moebius(annular_region(a1, ((0, 1),))) == c1.curve


@pytest.mark.parametrize("case", range(8))
def test_annulus_against_cycle_enumeration(case):
    a, r = annular_cases("annulus", 8)[case]
    assert annulus_cycle(r).length == oracle.brute_noncontractible(a, r)


@pytest.mark.parametrize("case", range(6))
def test_moebius_against_cycle_enumeration(case):
    a, r = annular_cases("moebius", 6)[case]
    assert moebius_cycle(r).length == oracle.brute_noncontractible(a, r, odd=True)


@pytest.mark.parametrize("case", range(4))
def test_cycle_through_each_node(case):
    a, r = annular_cases("annulus", 4)[case]
    best = annulus_cycle(r)
    for n in range(r.n_nodes):
        f = cycle_through(r, n)
        assert f.length >= best.length
        assert f.length == oracle.brute_noncontractible(a, r, through=n)
    # a node on the optimal ring gives the optimum back
    assert cycle_through(r, best.nodes[0]).length == best.length


# homotopic cycles


@pytest.mark.parametrize("name,inst", fixture_set()[2:])
def test_homotopic_cycle_of_a_shortest_cycle(name, inst):
    a = arcs_of(inst)
    w = ((0, 1),)
    core = homotopic_cycle(a, w)
    again = homotopic_cycle(a, a.word_of(core.curve))
    assert again.length == core.length
    assert canonical_cyclic(a.word_of(core.curve)) == canonical_cyclic(w)


@pytest.mark.parametrize("seed", range(20))
def test_homotopic_cycle_beats_detoured_walks(seed):
    rng = random.Random(seed)
    inst = [oracle.torus_grid_instance(3, 3, seed), oracle.projective_wheel_instance(4, seed),
            oracle.cylinder_instance([[1, 2, 2], [2, 2, 3]])][seed % 3]
    a = arcs_of(inst)
    core = homotopic_cycle(a, ((0, 1),)).curve
    faces, crossings = list(core.faces), list(core.crossings)
    # splice random out-and-back excursions into the core
    for _ in range(rng.randint(1, 3)):
        i = rng.randrange(len(faces) - 1) if len(faces) > 1 else 0
        cell = a.face_cell(faces[i])
        out_f, out_c = [], []
        for _ in range(rng.randint(1, 3)):
            opts = a.gnbrs[cell] + [(nb, 0, e, sd) for _, _, nb, e, sd in a.doors[cell]]
            nb, _, e, sd = opts[rng.randrange(len(opts))]
            out_c.append((e, sd))
            out_f.append(a.cells[nb])
            cell = nb
        back_c = [(e, -sd) for e, sd in reversed(out_c)]
        back_f = list(reversed([faces[i]] + out_f[:-1]))
        faces[i + 1:i + 1] = out_f + back_f
        crossings[i:i] = out_c + back_c
    walk = DrawnCurve(tuple(faces), tuple(crossings), True)
    check_curve(a.arrangement, walk)
    assert canonical_cyclic(a.word_of(walk)) == canonical_cyclic(a.word_of(core))
    best = homotopic_cycle(a, a.word_of(walk))
    assert best.length <= sum(a.base.iweights[g] for g in a.graph_edges_of(walk))
    assert best.length == homotopic_cycle(a, a.word_of(core)).length
