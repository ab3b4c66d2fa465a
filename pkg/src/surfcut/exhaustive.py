"""Cycles of a candidate topology and greedy families of pairwise non-crossing cycles."""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

from .homotopy import inverse


@dataclass(frozen=True)
class CycleInTopology:
    steps: tuple  # (edge, +1 from end 0 to end 1 | -1)
    vertices: tuple  # vertex at the start of each step
    word: tuple  # closed arc word read along the steps

    @property
    def edge_ids(self) -> tuple:
        return tuple(sorted(e for e, _ in self.steps))

    def darts_at(self, v: int) -> list:
        """(edge, end) pairs of the cycle at vertex v."""
        out = []
        n = len(self.steps)
        for i, (e, d) in enumerate(self.steps):
            if self.vertices[i] == v:
                out.append((e, 0 if d == 1 else 1))
            if self.vertices[(i + 1) % n] == v:
                out.append((e, 1 if d == 1 else 0))
        return out


def _walk(topo, subset) -> CycleInTopology | None:
    """The cycle formed by an edge subset, or None if it is not one cycle."""
    inc: dict[int, list] = {}
    for e in subset:
        u, v, _, _ = topo.edges[e]
        inc.setdefault(u, []).append((e, 0))
        inc.setdefault(v, []).append((e, 1))
    if any(len(x) != 2 for x in inc.values()):
        return None
    e0 = min(subset)
    u0 = topo.edges[e0][0]
    steps, verts, word = [], [], []
    e, d, v = e0, 1, u0
    while True:
        a, b, w, _ = topo.edges[e]
        steps.append((e, d))
        verts.append(v)
        word.extend(w if d == 1 else inverse(w))
        v = b if d == 1 else a
        arrive = (e, 1 if d == 1 else 0)
        nxt = [x for x in inc[v] if x != arrive]
        if not nxt:  # a loop: both ends at one vertex
            break
        e, end = nxt[0]
        d = 1 if end == 0 else -1
        if e == e0:
            break
    if len(steps) != len(subset):
        return None
    return CycleInTopology(tuple(steps), tuple(verts), tuple(word))


def cycles_of(topo) -> list[CycleInTopology]:
    """Every cycle of the topology once, ordered by (edge count, sorted edge ids)."""
    n = len(topo.edges)
    out = []
    for size in range(1, n + 1):
        for subset in combinations(range(n), size):
            c = _walk(topo, subset)
            if c is not None:
                out.append(c)
    return out


def _path_order(topo, comp_vertices, shared_edges):
    """Vertices and edges of a shared component, in path order."""
    adj = {v: [] for v in comp_vertices}
    for e in shared_edges:
        u, v, _, _ = topo.edges[e]
        if u in adj and v in adj:
            adj[u].append((e, v))
            adj[v].append((e, u))
    ends = [v for v in comp_vertices if len(adj[v]) <= 1]
    if not ends:
        return None  # the two cycles share a closed loop of edges
    start = min(ends)
    verts, edges = [start], []
    prev_e = None
    v = start
    while True:
        nxt = [(e, w) for e, w in adj[v] if e != prev_e]
        if not nxt:
            break
        e, w = nxt[0]
        edges.append(e)
        verts.append(w)
        prev_e, v = e, w
    return verts, edges


def _end_at(topo, e, v, other):
    """The end of edge e lying at v (other is the neighbour along e)."""
    u, w, _, _ = topo.edges[e]
    return (e, 0) if u == v and w == other else (e, 1)


def _around(rot, start, stop, o):
    """Darts met going from just after ``start`` to just before ``stop`` in direction o."""
    n = len(rot)
    i = (rot.index(start) + o) % n
    out = []
    while rot[i] != stop:
        out.append(rot[i])
        i = (i + o) % n
    return out


def _contracted_order(topo, verts, edges):
    """Cyclic order of the darts leaving a path once it is shrunk to a point."""
    rot = topo.rotation
    if not edges:
        return list(rot[verts[0]])
    m = len(edges)
    orient = [1]
    for e in edges:
        orient.append(orient[-1] * topo.edges[e][3])
    dart_out = [_end_at(topo, edges[i], verts[i], verts[i + 1]) for i in range(m)]
    dart_in = [_end_at(topo, edges[i], verts[i + 1], verts[i]) for i in range(m)]
    seq = _around(rot[verts[0]], dart_out[0], dart_out[0], orient[0])
    for i in range(1, m):
        seq += _around(rot[verts[i]], dart_in[i - 1], dart_out[i], orient[i])
    seq += _around(rot[verts[m]], dart_in[m - 1], dart_in[m - 1], orient[m])
    for i in range(m - 1, 0, -1):
        seq += _around(rot[verts[i]], dart_out[i], dart_in[i - 1], orient[i])
    return seq


def cycles_cross(topo, c1: CycleInTopology, c2: CycleInTopology) -> bool:
    """Do the cycles cross at some component of their intersection?"""
    v1, v2 = set(c1.vertices), set(c2.vertices)
    shared_v = v1 & v2
    if not shared_v:
        return False
    e1 = {e for e, _ in c1.steps}
    e2 = {e for e, _ in c2.steps}
    shared_e = e1 & e2
    parent = {v: v for v in shared_v}

    def find(x):
        while parent[x] != x:
            x = parent[x]
        return x

    for e in shared_e:
        u, v, _, _ = topo.edges[e]
        parent[find(u)] = find(v)
    comps: dict = {}
    for v in shared_v:
        comps.setdefault(find(v), []).append(v)
    for comp in comps.values():
        po = _path_order(topo, comp, shared_e)
        if po is None:
            continue
        verts, edges = po
        inner = set(edges)
        seq = _contracted_order(topo, verts, edges)
        pos = {d: i for i, d in enumerate(seq)}
        a = [pos[d] for v in (verts[0], verts[-1]) for d in c1.darts_at(v) if d[0] not in inner and d in pos]
        b = [pos[d] for v in (verts[0], verts[-1]) for d in c2.darts_at(v) if d[0] not in inner and d in pos]
        a, b = sorted(set(a)), sorted(set(b))
        if len(a) != 2 or len(b) != 2:
            continue
        lo, hi = a
        inside = [lo < x < hi for x in b]
        if inside[0] != inside[1]:
            return True
    return False


def exhaustive_family(topo) -> list[CycleInTopology]:
    """Greedy maximal family of pairwise non-crossing cycles, in the fixed cycle order."""
    family = []
    for c in cycles_of(topo):
        if all(not cycles_cross(topo, c, f) for f in family):
            family.append(c)
    return family
