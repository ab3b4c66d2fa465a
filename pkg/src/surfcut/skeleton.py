"""Skeleta built from exhaustive families, and portals placed along them."""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product

from .exhaustive import exhaustive_family
from .homotopy import (
    ArcSystem,
    annular_region,
    canonical_cyclic,
    cycle_through,
    cyclic_reduce,
    homotopic_cycle,
    one_sided,
    path_between,
)
from .surface import GRAPH, DrawnCurve

log = logging.getLogger(__name__)


def range_count(eps, g: int, t: int, c_range=1) -> int:
    """Number of length ranges l+1: the smallest with (1+eps)^(l+1) >= c_range*(g+t)/eps."""
    eps = Fraction(eps)
    target = Fraction(c_range) * (g + t) / eps
    n = 1
    while (1 + eps) ** n < target:
        n += 1
    return n


@dataclass(frozen=True)
class SkeletonEdge:
    curve: DrawnCurve
    length: int  # integer weight units
    graph_edges: tuple  # G-edge numbers crossed, in order
    role: str  # "core", "left", "right" or "link"
    positions: tuple = ()  # weighted distance from the start, per curve face


def skeleton_edge(a: ArcSystem, curve: DrawnCurve, role: str) -> SkeletonEdge:
    m = a.arrangement.map
    iw = a.base.iweights
    pos = [0]
    ge = []
    for e, _ in curve.crossings:
        w = 0
        if m.kind[e] == GRAPH:
            ge.append(m.label[e])
            w = iw[m.label[e]]
        pos.append(pos[-1] + w)
    return SkeletonEdge(curve, pos[-1], tuple(ge), role, tuple(pos))


@dataclass
class Skeleton:
    edges: list
    topology: str
    ranges: tuple
    words: tuple

    @property
    def length(self) -> int:
        return sum(e.length for e in self.edges)

    def key(self) -> tuple:
        return tuple(sorted((e.curve.faces, e.curve.crossings, e.curve.closed) for e in self.edges))


@dataclass
class _WordData:
    """Everything about one closed word that does not depend on the range choice."""

    core: object
    region: object = None  # annular region, two-sided words only
    lift_nodes: list = field(default_factory=list)
    through: list = field(default_factory=list)  # Found per node along the lifted arc


class SkeletonBuilder:
    """Builds skeleta for one system of arcs, caching per-word searches."""

    def __init__(self, a: ArcSystem, eps, c_range=1):
        self.a = a
        self.eps = Fraction(eps)
        self.c_range = c_range
        self.n_ranges = range_count(self.eps, a.g, a.t, c_range)
        self._words: dict = {}
        self._links: dict = {}
        self._edges: dict = {}
        self._picks: dict = {}

    def _edge(self, key, curve: DrawnCurve, role: str) -> SkeletonEdge:
        if key not in self._edges:
            self._edges[key] = skeleton_edge(self.a, curve, role)
        return self._edges[key]

    def word_data(self, word) -> _WordData:
        hit = self._words.get(word)
        if hit is not None:
            return hit
        w = canonical_cyclic(word)
        if w in self._words:
            return self._words[w]
        a = self.a
        data = _WordData(homotopic_cycle(a, w))
        if not one_sided(a, w):
            r = annular_region(a, w)
            data.region = r
            data.lift_nodes = self._arc_lift(r)
            data.through = [cycle_through(r, n) for n in data.lift_nodes]
        self._words[w] = data
        return data

    def _arc_lift(self, r) -> list:
        """Region nodes along one lift of an arc crossing the core once.

        The arc is the smallest one in the word, lifted on the copy that
        first crosses it.
        """
        i = min(range(len(r.word)), key=lambda j: (r.word[j][0], j))
        k, sg = r.word[i]
        nodes = []
        for c0, c1, _ in self.a.arc_cells[k]:
            n = r.node(i, c0 if sg == 1 else c1)
            if not nodes or nodes[-1] != n:
                nodes.append(n)
        return nodes

    def build(self, topo, family, rc: tuple, sig: tuple | None = None) -> Skeleton:
        sig = family_signature(topo, family) if sig is None else sig
        edges = []
        words = []
        ri = 0
        for entry in sig:
            if entry is None:
                log.debug("skipping contractible family cycle in %s", topo.canonical)
                continue
            w, sides = entry
            words.append(w)
            data = self.word_data(w)
            if data.region is None:
                edges.append(self._edge((w, "core"), data.core.curve, "core"))
                continue
            r = rc[ri]
            ri += 1
            picked = self._pick(w, data, r)
            if picked is None:
                # only possible when the core has length zero
                edges.append(self._edge((w, "core"), data.core.curve, "core"))
                continue
            j1, j2 = picked
            edges.append(self._edge((w, "left", j1), data.through[j1].curve, "left"))
            if j2 != j1:
                edges.append(self._edge((w, "right", j2), data.through[j2].curve, "right"))
                if sides:
                    link = self._link(w, data, j1, j2)
                    if link is not None:
                        edges.append(self._edge((w, "link", j1, j2), link, "link"))
        return Skeleton(edges, topo.canonical, tuple(rc), tuple(words))

    def _pick(self, w, data, r):
        """Leftmost and rightmost positions along the lifted arc whose cycle is in range r."""
        key = (w, r)
        if key not in self._picks:
            limit = (1 + self.eps) ** (r + 1) * data.core.length
            ok = [j for j, f in enumerate(data.through) if f.length < limit]
            self._picks[key] = (ok[0], ok[-1]) if ok else None
        return self._picks[key]

    def _link(self, w, data, j1, j2):
        key = (w, j1, j2)
        if key not in self._links:
            g1, g2 = data.through[j1], data.through[j2]
            found = None
            if not set(g1.nodes) & set(g2.nodes):
                found = path_between(data.region, g1.nodes, g2.nodes)
            self._links[key] = None if found is None else found.curve
        return self._links[key]

    def two_sided_count(self, sig) -> int:
        return sum(1 for entry in sig if entry is not None and not one_sided(self.a, entry[0]))


def both_sides(topo, cyc) -> bool:
    """Does the topology have edges leaving the cycle on both of its sides?"""
    sides = set()
    orient = 1
    for i in range(len(cyc.steps)):
        e_in, d_in = cyc.steps[i - 1]
        e_out, d_out = cyc.steps[i]
        din = (e_in, 1 if d_in == 1 else 0)
        dout = (e_out, 0 if d_out == 1 else 1)
        rot = topo.rotation[cyc.vertices[i]]
        m = len(rot)
        j = (rot.index(dout) + orient) % m
        side = 0
        while rot[j] != dout:
            if rot[j] == din:
                side = 1
            else:
                sides.add(side)
            j = (j + orient) % m
        orient *= topo.edges[e_out][3]
    return sides == {0, 1}


def build_one_skeleton(topo, rc: tuple, a: ArcSystem, eps, builder: SkeletonBuilder | None = None) -> Skeleton:
    builder = builder or SkeletonBuilder(a, eps)
    return builder.build(topo, exhaustive_family(topo), tuple(rc))


def build_all_skeleta(a: ArcSystem, eps, kappa: int, topologies=None, c_range=1, builder=None):
    """One skeleton per (topology, range choice), identical skeleta merged.

    Returns (skeleta, number built before merging).
    """
    from .topologies import enumerate_candidate_topologies

    if kappa < 1:
        raise ValueError("kappa must be at least 1")
    builder = builder or SkeletonBuilder(a, eps, c_range)
    if topologies is None:
        topologies = enumerate_candidate_topologies(a.g, a.t, kappa, arcs=a)
    seen = {}
    built = {}
    raw = 0
    for topo in topologies:
        family = family_of(topo)
        # the skeleton only depends on the family's words and sides
        sig = family_signature(topo, family)
        m = builder.two_sided_count(sig)
        for rc in product(range(builder.n_ranges), repeat=m):
            raw += 1
            if (sig, rc) in built:
                continue
            sk = builder.build(topo, family, rc, sig)
            built[(sig, rc)] = sk
            seen.setdefault(sk.key(), sk)
    return list(seen.values()), raw


_FAMILIES: dict = {}


def family_of(topo) -> list:
    """Exhaustive family of a topology, shared between instances."""
    key = (topo.edges, topo.rotation)
    if key not in _FAMILIES:
        _FAMILIES[key] = exhaustive_family(topo)
    return _FAMILIES[key]


_SIGNATURES: dict = {}


def family_signature(topo, family) -> tuple:
    """(canonical word, leaves on both sides) per family cycle; None if contractible."""
    key = (topo.edges, topo.rotation)
    if key not in _SIGNATURES:
        out = []
        for cyc in family:
            w = cyclic_reduce(cyc.word)
            out.append((canonical_cyclic(w), both_sides(topo, cyc)) if w else None)
        _SIGNATURES[key] = tuple(out)
    return _SIGNATURES[key]


# ---------------------------------------------------------------------------
# portals


@dataclass(frozen=True)
class Portal:
    edge: int  # skeleton edge index
    position: Fraction  # weighted distance from the start of the edge
    face: int  # arrangement face holding the portal
    step: int  # index into the edge's face sequence


@dataclass
class PortalSet:
    portals: list
    spacing: Fraction

    def faces(self) -> list:
        return sorted({p.face for p in self.portals})


def portal_spacing(sk: Skeleton, eps, g: int, t: int, c_p=1) -> Fraction:
    return Fraction(c_p) * Fraction(eps) * sk.length / ((g + t) ** 2)


def place_portals(sk: Skeleton, eps, g: int, t: int, c_p=1) -> PortalSet:
    """Evenly spaced portals: ceil(|e| / 2s) per skeleton edge, endpoints for zero-length edges."""
    s = portal_spacing(sk, eps, g, t, c_p)
    out = []
    for ei, edge in enumerate(sk.edges):
        faces = edge.curve.faces
        if edge.length == 0 or s == 0:
            out.append(Portal(ei, Fraction(0), faces[0], 0))
            if not edge.curve.closed and len(faces) > 1:
                out.append(Portal(ei, Fraction(0), faces[-1], len(faces) - 1))
            continue
        n = math.ceil(Fraction(edge.length) / (2 * s))
        for i in range(n):
            pos = Fraction(2 * i + 1, 2 * n) * edge.length
            step = _face_at(edge.positions, pos)
            out.append(Portal(ei, pos, faces[step], step))
    return PortalSet(out, s)


def _face_at(positions, pos) -> int:
    """Index of the curve face nearest to a weighted position (earlier on ties)."""
    return min(range(len(positions)), key=lambda i: (abs(positions[i] - pos), i))


def max_gap(sk: Skeleton, ps: PortalSet) -> Fraction:
    """Largest distance along an edge from any of its points to the nearest portal."""
    worst = Fraction(0)
    for ei, edge in enumerate(sk.edges):
        total = edge.length
        pos = sorted(p.position for p in ps.portals if p.edge == ei)
        if not pos:
            return Fraction(-1)
        inner = [(b - a) / 2 for a, b in zip(pos, pos[1:])]
        if edge.curve.closed:
            ends = [(pos[0] + total - pos[-1]) / 2]
        else:
            ends = [pos[0], total - pos[-1]]
        worst = max([worst] + inner + ends)
    return worst


def portal_bound(eps, g: int, t: int, c_pp=4) -> Fraction:
    return Fraction(c_pp) * (g + t) ** 2 / Fraction(eps)
