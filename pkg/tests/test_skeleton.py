from fractions import Fraction
from functools import lru_cache

import pytest
from hypothesis import given, strategies as st

from cases import arcs_of
from surfcut import oracle
from surfcut.homotopy import canonical_cyclic
from surfcut.skeleton import (
    Skeleton,
    SkeletonBuilder,
    SkeletonEdge,
    build_all_skeleta,
    build_one_skeleton,
    family_of,
    family_signature,
    max_gap,
    place_portals,
    portal_bound,
    portal_spacing,
    range_count,
)
from surfcut.surface import DrawnCurve
from surfcut.topologies import enumerate_candidate_topologies

HALF = Fraction(1, 2)

INSTANCES = {
    "star": oracle.star_instance(),
    "cylinder": oracle.cylinder_instance([[1, 2, 2], [2, 2, 3], [3, 3, 3]]),
    "torus": oracle.torus_grid_instance(),
    "projective": oracle.projective_wheel_instance(),
}


@lru_cache(maxsize=None)
def built(name, eps=HALF, kappa=1):
    a = arcs_of(INSTANCES[name])
    return a, build_all_skeleta(a, eps, kappa)


def test_range_count_examples():
    assert range_count(1, 2, 2) == 2
    assert range_count(Fraction(1, 2), 0, 2) == 4
    assert range_count(1, 0, 1) == 1


@given(st.fractions(Fraction(1, 8), 2), st.integers(0, 2), st.integers(1, 4))
def test_range_count_is_smallest(eps, g, t):
    n = range_count(eps, g, t)
    target = Fraction(g + t) / eps
    assert (1 + eps) ** n >= target
    assert n == 1 or (1 + eps) ** (n - 1) < target


def synthetic(lengths, closed=False):
    edges = []
    for total in lengths:
        if total == 0:
            curve = DrawnCurve((0, 1), ((0, 1),), closed=False)
            edges.append(SkeletonEdge(curve, 0, (), "core", (0, 0)))
            continue
        curve = DrawnCurve((0, 1, 0), ((0, 1), (0, -1)), closed=closed)
        edges.append(SkeletonEdge(curve, total, (), "core", (0, total // 2, total)))
    return Skeleton(edges, "synthetic", (), ())


def test_portals_on_an_edge_of_length_ten():
    sk = synthetic([10])
    eps = Fraction(3, 10)  # with g + t = 1 the spacing is 3
    assert portal_spacing(sk, eps, 0, 1) == 3
    ps = place_portals(sk, eps, 0, 1)
    assert [p.position for p in ps.portals] == [Fraction(5, 2), Fraction(15, 2)]
    assert max_gap(sk, ps) == Fraction(5, 2)


def test_zero_length_edge_gets_its_endpoints():
    sk = synthetic([0, 6])
    ps = place_portals(sk, HALF, 0, 2)
    ends = [p for p in ps.portals if p.edge == 0]
    assert [p.step for p in ends] == [0, 1]
    assert all(p.position == 0 for p in ends)


@given(st.lists(st.integers(0, 60), min_size=1, max_size=5), st.fractions(Fraction(1, 4), 1),
       st.integers(0, 2), st.integers(1, 3), st.booleans())
def test_portal_gap_and_count(lengths, eps, g, t, closed):
    sk = synthetic(lengths, closed)
    ps = place_portals(sk, eps, g, t)
    if sk.length:
        assert max_gap(sk, ps) <= ps.spacing
        assert len(ps.portals) <= portal_bound(eps, g, t) + 2 * len(lengths)


def test_bucket_count_is_a_product():
    a = arcs_of(INSTANCES["cylinder"])
    builder = SkeletonBuilder(a, HALF)
    tops = list(enumerate_candidate_topologies(a.g, a.t, 2, arcs=a))
    expected = sum(builder.n_ranges ** builder.two_sided_count(family_signature(x, family_of(x)))
                   for x in tops)
    sks, raw = build_all_skeleta(a, HALF, 2, builder=builder)
    assert raw == expected
    assert len({sk.key() for sk in sks}) == len(sks) <= raw


def test_eps_one_gives_two_buckets_per_cycle():
    a = arcs_of(oracle.torus_grid_instance(3, 3, 0, ["v0_0", "v1_1"]))
    assert a.g + a.t == 4
    assert SkeletonBuilder(a, 1).n_ranges == 2


@pytest.mark.parametrize("name", list(INSTANCES))
def test_skeleton_edges_follow_their_words(name):
    a, (sks, _) = built(name)
    assert sks
    for sk in sks:
        words = {canonical_cyclic(w) for w in sk.words}
        for e in sk.edges:
            if e.role in ("core", "left", "right"):
                assert e.curve.closed
                assert canonical_cyclic(a.word_of(e.curve)) in words
            assert e.length == sum(a.base.iweights[g] for g in e.graph_edges)


@pytest.mark.parametrize("name", list(INSTANCES))
def test_chosen_cycles_fall_in_their_range(name):
    a, (sks, _) = built(name)
    eps = HALF
    builder = SkeletonBuilder(a, eps)
    for sk in sks:
        two_sided = [w for w in sk.words if builder.word_data(w).region is not None]
        for w, r in zip(two_sided, sk.ranges):
            core = builder.word_data(w).core.length
            limit = (1 + eps) ** (r + 1) * core
            for e in sk.edges:
                if e.role in ("left", "right") and canonical_cyclic(a.word_of(e.curve)) == w:
                    assert core <= e.length < limit or core == 0


def test_construction_depends_only_on_topology_and_ranges():
    a = arcs_of(INSTANCES["projective"])
    tops = list(enumerate_candidate_topologies(a.g, a.t, 1, arcs=a))
    for x in tops[:20]:
        n = SkeletonBuilder(a, HALF).two_sided_count(family_signature(x, family_of(x)))
        rc = (0,) * n
        k1 = build_one_skeleton(x, rc, a, HALF).key()
        k2 = build_one_skeleton(x, rc, a, HALF, builder=SkeletonBuilder(a, HALF)).key()
        assert k1 == k2


@pytest.mark.parametrize("layers,ring", [([[1, 2, 2], [2, 2, 3], [3, 3, 3]], 50),
                                         ([[4, 4, 4, 4], [1, 9, 1, 9], [5, 5, 5, 5]], 3)])
def test_skeleton_is_short_compared_to_a_planted_dual(layers, ring):
    inst = oracle.cylinder_instance(layers, ring)
    a = arcs_of(inst)
    opt, _ = oracle.exact_multicut(inst)
    sks, _ = build_all_skeleta(a, HALF, 2)
    for sk in sks:
        assert a.weight(sk.length) <= 2 * (a.g + a.t) * opt


@pytest.mark.parametrize("name", list(INSTANCES))
def test_portals_cover_every_skeleton(name):
    a, (sks, _) = built(name)
    for sk in sks:
        ps = place_portals(sk, HALF, a.g, a.t)
        assert max_gap(sk, ps) <= ps.spacing
        assert len(ps.portals) <= portal_bound(HALF, a.g, a.t)


def test_kappa_must_be_positive():
    a = arcs_of(INSTANCES["star"])
    with pytest.raises(ValueError):
        build_all_skeleta(a, HALF, 0)
