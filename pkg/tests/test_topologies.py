from itertools import combinations, product

import pytest
from hypothesis import given, strategies as st

from cases import arcs_of
from surfcut import oracle
from surfcut.homotopy import canonical_cyclic, cyclic_reduce
from surfcut.topologies import (
    _count_vectors,
    boundary_points,
    enumerate_candidate_topologies,
    enumerate_cycle_layouts,
    enumerate_good_layouts,
    good_layout_count,
    model_arc_system,
)


# an independent generator: set partitions of the boundary points, filtered directly


def _interleave(a, b):
    """Do two blocks of boundary points cross as chords of a circle?"""
    lo, hi = min(a), max(a)
    inside = [lo < x < hi for x in b]
    if all(inside) or not any(inside):
        # b may still separate a's leaves
        for x, y in zip(a, a[1:]):
            between = [x < z < y for z in b]
            if any(between) and not all(between):
                return True
        return False
    return True


def _partitions(n, labels):
    def rec(rest, blocks):
        if not rest:
            yield blocks
            return
        first, others = rest[0], rest[1:]
        for size in (1, 2, 3):
            for comp in combinations(others, size):
                blk = (first,) + comp
                if len({labels[i] for i in blk}) == 1:
                    continue
                if any(_interleave(blk, b) or _interleave(b, blk) for b in blocks):
                    continue
                yield from rec([x for x in others if x not in comp], blocks + [blk])
    yield from rec(list(range(n)), [])


def _gap(block, s):
    for i in range(len(block) - 1):
        if block[i] <= s < block[i + 1]:
            return i
    return len(block) - 1


def brute_count(frame, n_arcs, bound):
    total = 0
    seen = set()
    for counts in product(range(bound + 1), repeat=n_arcs):
        if not 0 < sum(counts) <= bound:
            continue
        points, segments = boundary_points(frame, counts)
        n = len(points)
        labels = [(k, side) for k, side, _ in points]
        index = {p: i for i, p in enumerate(points)}
        for blocks in _partitions(n, labels):
            # regions: segments lying in the same gap of every block
            reg = [tuple(_gap(b, s) for b in blocks) for s in range(n)]
            parent = {r: r for r in reg}

            def find(x):
                while parent[x] != x:
                    x = parent[x]
                return x

            pieces = {}
            holes = set()
            for s, items in enumerate(segments):
                for it in items:
                    if it[0] == "B":
                        holes.add(reg[s])
                    else:
                        key = (it[1], 1 - it[2], it[3])
                        if key in pieces:
                            parent[find(reg[s])] = find(pieces[key])
                        pieces[(it[1], it[2], it[3])] = reg[s]
            if {find(r) for r in reg} != {find(h) for h in holes}:
                continue
            # sizes: chords chain through arc partners into paths or loops
            link = {}
            for i, (k, side, j) in enumerate(points):
                link.setdefault(i, []).append(index[(k, 1 - side, j)])
            for b in blocks:
                if len(b) == 2:
                    link[b[0]].append(b[1])
                    link[b[1]].append(b[0])
            leaf = {p for b in blocks if len(b) > 2 for p in b}
            done, loops = set(), 0
            for p in range(n):
                if p in done:
                    continue
                comp, todo = {p}, [p]
                while todo:
                    for q in link[todo.pop()]:
                        if q not in comp:
                            comp.add(q)
                            todo.append(q)
                done |= comp
                if not comp & leaf:
                    loops += 1
            for kinds in product(*[("star", "h01", "h12") if len(b) == 4 else ("x",) for b in blocks]):
                nv = loops + sum(1 if len(b) == 3 or kd == "star" else 2 for b, kd in zip(blocks, kinds) if len(b) > 2)
                deg = 2 * loops + sum(len(b) if len(b) == 3 or kd == "star" else 6
                                      for b, kd in zip(blocks, kinds) if len(b) > 2)
                if nv > bound or deg // 2 > bound:
                    continue
                key = (counts, tuple(sorted(zip(blocks, kinds))))
                assert key not in seen
                seen.add(key)
                total += 1
    return total


@pytest.mark.parametrize("g,t,kappa", [(0, 3, 1), (0, 3, 2), (0, 4, 1), (1, 2, 1), (1, 2, 2), (2, 1, 2), (2, 2, 1)])
def test_topology_count_matches_second_generator(g, t, kappa):
    a = model_arc_system(g, t)
    ours = list(enumerate_candidate_topologies(g, t, kappa))
    assert len({x.canonical for x in ours}) == len(ours)
    assert len(ours) == brute_count(a.frame, len(a.pieces), kappa * (g + t))


def test_annulus_has_the_separating_loop():
    tops = list(enumerate_candidate_topologies(0, 2, 1))
    loops = [x for x in tops if x.n_vertices == 1 and len(x.edges) == 1]
    assert loops
    assert any(cyclic_reduce(x.edges[0][2]) == ((0, 1),) or cyclic_reduce(x.edges[0][2]) == ((0, -1),)
               for x in loops)


@pytest.mark.parametrize("g,t,kappa", [(0, 2, 2), (0, 3, 2), (1, 2, 1), (2, 1, 1)])
def test_topologies_respect_their_bounds(g, t, kappa):
    bound = kappa * (g + t)
    for x in enumerate_candidate_topologies(g, t, kappa):
        assert x.n_vertices <= bound and len(x.edges) <= bound
        assert all(c <= bound for c in x.counts) and sum(x.counts) <= bound
        assert all(len(r) >= 2 for r in x.rotation)


def test_count_vectors_are_ordered_by_total():
    vecs = list(_count_vectors(2, 3, 4))
    assert [sum(v) for v in vecs] == sorted(sum(v) for v in vecs)
    assert len(vecs) == len(set(vecs)) == sum(1 for v in product(range(4), repeat=2) if 0 < sum(v) <= 4)


def test_kappa_must_be_positive():
    with pytest.raises(ValueError):
        list(enumerate_candidate_topologies(0, 2, 0))


# closed words


def test_annulus_cycle_words():
    a = arcs_of(oracle.path_instance())
    assert list(enumerate_cycle_layouts(a, 1, max_length=1)) == [((0, -1),)]


def brute_words(n_arcs, bound, max_length):
    letters = [(k, s) for k in range(n_arcs) for s in (1, -1)]
    out = set()
    for n in range(1, max_length + 1):
        for w in product(letters, repeat=n):
            if any(sum(1 for k, _ in w if k == j) > bound for j in range(n_arcs)):
                continue
            if cyclic_reduce(w) == w:
                out.add(canonical_cyclic(w))
    return out


@pytest.mark.parametrize("kappa,max_length", [(1, 3), (1, 4), (2, 4)])
def test_cycle_words_match_brute_force(kappa, max_length):
    a = arcs_of(oracle.star_instance())
    ours = list(enumerate_cycle_layouts(a, kappa, max_length))
    assert len(ours) == len(set(ours))
    assert set(ours) == brute_words(len(a.pieces), kappa * (a.g + a.t), max_length)
    assert all(cyclic_reduce(w) for w in ours)


# layouts


def test_pure_cycle_layout():
    lays = list(enumerate_good_layouts([], [((0, 1),)], 0, 0, 1))
    assert len(lays) == 1
    assert lays[0].tree_groups == () and lays[0].cycle_words == (((0, 1),),)


@given(st.integers(0, 6), st.integers(0, 3), st.integers(2, 4), st.integers(0, 2))
def test_layout_count_closed_form(n_lifts, n_words, max_group, max_cycles):
    lays = list(enumerate_good_layouts(range(n_lifts), [((i, 1),) for i in range(n_words)],
                                       n_lifts, 1, max_cycles, max_group))
    assert len(lays) == good_layout_count(n_lifts, n_words, max_group, max_cycles)
    assert all(len(grp) >= 2 for x in lays for grp in x.tree_groups)


def test_layout_groups_are_disjoint():
    for x in enumerate_good_layouts(range(6), [], 6, 3, 0, 3):
        ids = [i for grp in x.tree_groups for i in grp]
        assert len(ids) == len(set(ids))
