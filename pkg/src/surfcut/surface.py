"""Signed rotation systems, terminal carving, curves and their overlays.

A map stores each edge ``e`` as two darts: ``2*e`` sits at the tail vertex and
``2*e + 1`` at the head.  Every vertex carries the cyclic order of its darts
and every edge a sign; a sign of -1 flips the local orientation when walking
across the edge.  Faces are traced with an orientation state, so the same code
handles orientable and non-orientable surfaces.

Edges have a *kind*: ``G`` (graph edge, weighted), ``B`` (boundary edge of a
carved terminal, never crossed), ``K`` (piece of an arc of a system of arcs)
and ``C`` (piece of an overlaid curve).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from decimal import Decimal, InvalidOperation
from fractions import Fraction
from math import lcm
from typing import Iterable, Sequence

GRAPH, BOUNDARY, ARC, CURVE = "G", "B", "K", "C"


class SurfaceError(ValueError):
    """Malformed rotation system or inconsistent curve."""


def parse_weight(value) -> Fraction:
    """Exact weight from a decimal string, int or Fraction."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int) and not isinstance(value, bool):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(Decimal(value.strip()))
        except (InvalidOperation, ValueError) as exc:
            raise SurfaceError(f"bad weight {value!r}") from exc
    raise SurfaceError(f"weight must be a decimal string, got {value!r}")


def format_weight(w: Fraction) -> str:
    if w.denominator == 1:
        return str(w.numerator)
    d = Decimal(w.numerator) / Decimal(w.denominator)
    if Fraction(d) == w:
        return format(d.normalize(), "f")
    return f"{w.numerator}/{w.denominator}"


class Map:
    """Mutable signed rotation system.  Vertices are 0..nv-1."""

    def __init__(self):
        self.dart_vertex: list[int] = []
        self.rot: list[list[int]] = []
        self.sign: list[int] = []
        self.kind: list[str] = []
        self.label: list = []
        self._faces = None

    @property
    def nv(self) -> int:
        return len(self.rot)

    @property
    def ne(self) -> int:
        return len(self.sign)

    def copy(self) -> "Map":
        m = Map()
        m.dart_vertex = list(self.dart_vertex)
        m.rot = [list(r) for r in self.rot]
        m.sign = list(self.sign)
        m.kind = list(self.kind)
        m.label = list(self.label)
        return m

    def add_vertex(self) -> int:
        self.rot.append([])
        self._faces = None
        return len(self.rot) - 1

    def add_edge(self, u: int, v: int, sign: int = 1, kind: str = GRAPH, label=None) -> int:
        """New edge whose darts are *not* yet placed in any rotation."""
        e = len(self.sign)
        self.dart_vertex += [u, v]
        self.sign.append(sign)
        self.kind.append(kind)
        self.label.append(label)
        self._faces = None
        return e

    def ends(self, e: int) -> tuple[int, int]:
        return self.dart_vertex[2 * e], self.dart_vertex[2 * e + 1]

    # -- faces -----------------------------------------------------------
    def faces(self) -> "FaceData":
        if self._faces is None:
            self._faces = FaceData.trace(self)
        return self._faces

    def invalidate(self):
        self._faces = None

    # -- local surgery ---------------------------------------------------
    def subdivide(self, e: int) -> int:
        """Split ``e`` with a new vertex x; return x.

        ``e`` becomes tail->x with sign +1 and a new edge x->head keeps the old
        sign, so x shares the tail's frame and edge sides keep their labels.
        """
        x = self.add_vertex()
        head_dart = 2 * e + 1
        v = self.dart_vertex[head_dart]
        e2 = self.add_edge(x, v, self.sign[e], self.kind[e], self.label[e])
        self.sign[e] = 1
        rv = self.rot[v]
        rv[rv.index(head_dart)] = 2 * e2 + 1
        self.dart_vertex[head_dart] = x
        self.rot[x] = [head_dart, 2 * e2]
        self._faces = None
        return x

    def other_name(self, corner: tuple[int, int]) -> tuple[int, int]:
        """The same corner named from the dart on its other side, seen in the opposite direction."""
        d, s = corner
        r = self.rot[self.dart_vertex[d]]
        return r[(r.index(d) - s) % len(r)], -s

    def insert_edge(self, ca: tuple[int, int], cb: tuple[int, int], kind: str, label=None) -> int:
        """Join two corners of one face by a new edge.

        A corner is a face-tracing state ``(d, s)``: the gap just before dart
        ``d`` in rotation direction ``s``.
        """
        fd = self.faces()
        if (ca in fd.direct) != (cb in fd.direct):
            cb = self.other_name(cb)
        (da, sa), (db, sb) = ca, cb
        va, vb = self.dart_vertex[da], self.dart_vertex[db]
        e = self.add_edge(va, vb, sa * sb, kind, label)
        for dart, d, s, v in ((2 * e, da, sa, va), (2 * e + 1, db, sb, vb)):
            r = self.rot[v]
            i = r.index(d)
            r.insert(i if s == 1 else i + 1, dart)
        self._faces = None
        return e


def edge_side(m: Map, d: int, s: int) -> int:
    """Side (+1/-1, relative to the tail frame) of the edge of dart d seen by state (d, s)."""
    return s if d % 2 == 0 else -s * m.sign[d >> 1]


@dataclass
class FaceData:
    orbits: list[list[tuple[int, int]]]
    state_face: dict
    side_face: dict  # (edge, side) -> face
    direct: set = field(default_factory=set)  # states as traced, not mirrored

    @classmethod
    def trace(cls, m: Map) -> "FaceData":
        pos = {}
        for r in m.rot:
            for i, d in enumerate(r):
                pos[d] = i
        nd = len(m.dart_vertex)
        for d in range(nd):
            if d not in pos:
                raise SurfaceError(f"dart {d} of edge {d >> 1} is missing from the rotations")
        state_face = {}
        side_face = {}
        direct = set()
        orbits = []
        for d0 in range(nd):
            for s0 in (1, -1):
                if (d0, s0) in state_face:
                    continue
                f = len(orbits)
                orbit = []
                d, s = d0, s0
                while True:
                    orbit.append((d, s))
                    o = d ^ 1
                    s = s * m.sign[d >> 1]
                    r = m.rot[m.dart_vertex[o]]
                    d = r[(pos[o] + s) % len(r)]
                    if (d, s) == (d0, s0):
                        break
                    if len(orbit) > 2 * nd:
                        raise SurfaceError("face tracing did not close up")
                for d, s in orbit:
                    e = d >> 1
                    direct.add((d, s))
                    state_face[(d, s)] = f
                    state_face[(d ^ 1, -s * m.sign[e])] = f
                    side_face[(e, edge_side(m, d, s))] = f
                orbits.append(orbit)
        return cls(orbits, state_face, side_face, direct)

    @property
    def count(self) -> int:
        return len(self.orbits)


def orientation_frames(m: Map, edges: Iterable[int] | None = None) -> dict[int, int] | None:
    """Vertex frames making every listed edge sign +1, or None if impossible."""
    edges = range(m.ne) if edges is None else edges
    adj: dict[int, list[tuple[int, int]]] = {}
    for e in edges:
        u, v = m.ends(e)
        adj.setdefault(u, []).append((v, m.sign[e]))
        adj.setdefault(v, []).append((u, m.sign[e]))
    frame: dict[int, int] = {}
    for root in range(m.nv):
        if root in frame:
            continue
        frame[root] = 1
        stack = [root]
        while stack:
            u = stack.pop()
            for v, sg in adj.get(u, ()):
                want = frame[u] * sg
                if v not in frame:
                    frame[v] = want
                    stack.append(v)
                elif frame[v] != want:
                    return None
    return frame


def map_components(m: Map) -> int:
    parent = list(range(m.nv))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for e in range(m.ne):
        u, v = m.ends(e)
        parent[find(u)] = find(v)
    return len({find(v) for v in range(m.nv)})


# ---------------------------------------------------------------------------
# Surfaces


@dataclass
class CombinatorialSurface:
    """A weighted graph cellularly embedded on a surface, possibly with boundaries.

    ``map`` may contain edges of every kind; ``weights`` is indexed by G-edge
    number (the ``label`` of GRAPH edges) and ``edge_ids``/``vertex_ids`` keep
    the user-facing identifiers.
    """

    map: Map
    vertex_ids: list
    edge_ids: list
    weights: list[Fraction]
    boundary_terminals: dict = field(default_factory=dict)  # face -> terminal id
    terminal_vertices: dict = field(default_factory=dict)  # terminal id -> carved vertices

    def __post_init__(self):
        self._validate()
        fd = self.map.faces()
        self.face_count = fd.count
        self.euler_char_closed = self.map.nv - self.map.ne + fd.count
        self.t = len(self.boundary_terminals)
        self.genus = 2 - self.euler_char_closed
        self.orientable = orientation_frames(self.map) is not None
        self.scale = lcm(*(w.denominator for w in self.weights)) if self.weights else 1
        self.iweights = [int(w * self.scale) for w in self.weights]
        self.edge_index = {eid: i for i, eid in enumerate(self.edge_ids)}

    def _validate(self):
        m = self.map
        for w in self.weights:
            if w <= 0:
                raise SurfaceError("edge weights must be positive")
        if self.map.nv and map_components(m) != 1:
            raise SurfaceError("surface graph is disconnected")

    @property
    def faces(self) -> FaceData:
        return self.map.faces()

    @property
    def euler_characteristic(self) -> int:
        return self.euler_char_closed - self.t

    @property
    def boundary_faces(self) -> set[int]:
        return set(self.boundary_terminals)

    def edge_weight(self, e: int) -> Fraction:
        """Weight of map edge e (0 unless it is a G piece)."""
        if self.map.kind[e] == GRAPH:
            return self.weights[self.map.label[e]]
        return Fraction(0)

    def with_map(self, m: Map, boundary_terminals: dict | None = None) -> "CombinatorialSurface":
        return CombinatorialSurface(
            m,
            self.vertex_ids,
            self.edge_ids,
            self.weights,
            dict(self.boundary_terminals if boundary_terminals is None else boundary_terminals),
            self.terminal_vertices,
        )

    def scaled(self, factor) -> "CombinatorialSurface":
        factor = Fraction(factor)
        s = CombinatorialSurface(
            self.map.copy(), self.vertex_ids, self.edge_ids,
            [w * factor for w in self.weights], dict(self.boundary_terminals),
            self.terminal_vertices,
        )
        return s


def build_surface(spec: dict) -> CombinatorialSurface:
    """Build a closed surface from the JSON instance description.

    ``rotations`` maps each vertex to its incident edge ids in cyclic order; a
    loop lists its id twice, the first occurrence being the ``u`` end.
    """
    try:
        vertex_ids = list(spec["vertices"])
        edges = list(spec["edges"])
        rotations = spec["rotations"]
    except (KeyError, TypeError) as exc:
        raise SurfaceError(f"missing field: {exc}") from exc
    if len(set(map(str, vertex_ids))) != len(vertex_ids):
        raise SurfaceError("duplicate vertex id")
    vindex = {str(v): i for i, v in enumerate(vertex_ids)}
    m = Map()
    for _ in vertex_ids:
        m.add_vertex()
    eindex = {}
    edge_ids, weights = [], []
    for k, ed in enumerate(edges):
        eid = ed["id"]
        if str(eid) in eindex:
            raise SurfaceError(f"duplicate edge id {eid!r}")
        u, v = str(ed["u"]), str(ed["v"])
        if u not in vindex or v not in vindex:
            raise SurfaceError(f"edge {eid!r} has an unknown endpoint")
        sign = int(ed.get("sign", 1))
        if sign not in (1, -1):
            raise SurfaceError(f"edge {eid!r} sign must be +1 or -1")
        w = parse_weight(ed["w"])
        if w <= 0:
            raise SurfaceError(f"edge {eid!r} has nonpositive weight")
        m.add_edge(vindex[u], vindex[v], sign, GRAPH, k)
        eindex[str(eid)] = k
        edge_ids.append(eid)
        weights.append(w)
    placed = set()
    for vkey, ends in rotations.items():
        vkey = str(vkey)
        if vkey not in vindex:
            raise SurfaceError(f"rotation for unknown vertex {vkey!r}")
        x = vindex[vkey]
        darts = []
        seen_here = {}
        for end in ends:
            if str(end) not in eindex:
                raise SurfaceError(f"rotation of {vkey!r} mentions unknown edge {end!r}")
            e = eindex[str(end)]
            u, v = m.ends(e)
            n = seen_here.get(e, 0)
            seen_here[e] = n + 1
            if u == v == x:
                if n > 1:
                    raise SurfaceError(f"loop {end!r} listed more than twice")
                d = 2 * e + n
            elif u == x and n == 0:
                d = 2 * e
            elif v == x and n == 0:
                d = 2 * e + 1
            else:
                raise SurfaceError(f"edge {end!r} is not incident to {vkey!r} as listed")
            darts.append(d)
        m.rot[x] = darts
        placed.update(darts)
    for d in range(2 * m.ne):
        if d not in placed:
            raise SurfaceError(f"dangling edge-end of edge {edge_ids[d >> 1]!r}")
    return CombinatorialSurface(m, vertex_ids, edge_ids, weights)


def surface_to_spec(s: CombinatorialSurface) -> dict:
    """Inverse of build_surface for closed (uncarved) surfaces."""
    m = s.map
    edges = []
    for e in range(m.ne):
        u, v = m.ends(e)
        k = m.label[e]
        edges.append({
            "id": s.edge_ids[k], "u": s.vertex_ids[u], "v": s.vertex_ids[v],
            "w": format_weight(s.weights[k]), "sign": m.sign[e],
        })
    rotations = {str(s.vertex_ids[x]): [s.edge_ids[m.label[d >> 1]] for d in m.rot[x]] for x in range(m.nv)}
    return {"vertices": list(s.vertex_ids), "edges": edges, "rotations": rotations}


def carve_terminals(s: CombinatorialSurface, terminals: Sequence) -> CombinatorialSurface:
    """Replace each terminal vertex by a boundary face with one vertex per edge-end."""
    m = s.map.copy()
    vindex = {str(v): i for i, v in enumerate(s.vertex_ids)}
    boundary_of = {}
    terminal_vertices = {}
    for tid in terminals:
        if str(tid) not in vindex:
            raise SurfaceError(f"terminal {tid!r} is not a vertex")
        x = vindex[str(tid)]
        darts = list(m.rot[x])
        if not darts:
            raise SurfaceError(f"terminal {tid!r} has degree 0")
        k = len(darts)
        new = [x] + [m.add_vertex() for _ in range(k - 1)]
        for d, y in zip(darts, new):
            m.dart_vertex[d] = y
        b = [m.add_edge(new[i], new[(i + 1) % k], 1, BOUNDARY, tid) for i in range(k)]
        for i, y in enumerate(new):
            m.rot[y] = [darts[i], 2 * b[i], 2 * b[i - 1] + 1]
        boundary_of[tid] = b[0]
        terminal_vertices[tid] = tuple(new)
    fd = m.faces()
    boundary_terminals = {}
    for tid, e in boundary_of.items():
        boundary_terminals[fd.state_face[(2 * e + 1, 1)]] = tid
    return CombinatorialSurface(m, s.vertex_ids, s.edge_ids, s.weights, boundary_terminals, terminal_vertices)


# ---------------------------------------------------------------------------
# Curves


@dataclass(frozen=True)
class DrawnCurve:
    """A walk through faces of a map, crossing one edge per step.

    ``faces`` has one more entry than ``crossings``; ``crossings[i]`` is
    ``(edge, side)`` where ``side`` is the edge side left behind (relative to
    the tail frame).  A closed curve ends in its first face.
    """

    faces: tuple
    crossings: tuple
    closed: bool = False

    def __post_init__(self):
        if len(self.faces) != len(self.crossings) + 1:
            raise SurfaceError("a curve needs exactly one more face than crossings")
        if self.closed and self.faces[0] != self.faces[-1]:
            raise SurfaceError("closed curve must end where it starts")

    @property
    def steps(self):
        return [(self.faces[i], e, sd) for i, (e, sd) in enumerate(self.crossings)]

    def reversed(self) -> "DrawnCurve":
        return DrawnCurve(
            tuple(reversed(self.faces)),
            tuple((e, -sd) for e, sd in reversed(self.crossings)),
            self.closed,
        )

    def concat(self, other: "DrawnCurve") -> "DrawnCurve":
        if self.faces[-1] != other.faces[0]:
            raise SurfaceError("curves do not meet")
        return DrawnCurve(self.faces + other.faces[1:], self.crossings + other.crossings, False)


def check_curve(s: CombinatorialSurface, c: DrawnCurve):
    m = s.map
    fd = m.faces()
    last = len(c.crossings) - 1
    for i, (e, sd) in enumerate(c.crossings):
        if not (0 <= e < m.ne) or sd not in (1, -1):
            raise SurfaceError(f"step {i} references unknown edge {e}")
        if m.kind[e] == BOUNDARY and (c.closed or i not in (0, last)):
            raise SurfaceError(f"step {i} crosses a boundary edge")
        if fd.side_face[(e, sd)] != c.faces[i] or fd.side_face[(e, -sd)] != c.faces[i + 1]:
            raise SurfaceError(f"step {i} is inconsistent with face adjacency")


def curve_length(s: CombinatorialSurface, c: DrawnCurve) -> Fraction:
    total = Fraction(0)
    m = s.map
    for e, _ in c.crossings:
        if not (0 <= e < m.ne):
            raise SurfaceError(f"curve crosses unknown edge {e}")
        total += s.edge_weight(e)
    return total


def crossed_graph_edges(s: CombinatorialSurface, c: DrawnCurve) -> list[int]:
    """G-edge numbers crossed by c, in order, with multiplicity."""
    m = s.map
    return [m.label[e] for e, _ in c.crossings if m.kind[e] == GRAPH]


# ---------------------------------------------------------------------------
# Overlay


def _split_for_crossing(m: Map, e: int, sd: int, on_split=None):
    """Split e for a crossing that arrives from side sd; return (arrival, departure) corners."""
    n_before = m.ne
    x = m.subdivide(e)
    if on_split is not None:
        on_split(e, n_before, x)
    return (2 * n_before, sd), (2 * n_before, -sd)


def draw_path(m: Map, crossings: Sequence[tuple[int, int]], kind: str, label=None,
              closed: bool = False, on_split=None) -> list[int]:
    """Draw a curve through the current faces of m, one point per crossing.

    ``crossings`` lists ``(edge, side left behind)``; no edge may appear twice.
    Consecutive points are joined inside the face between them.  For a closed
    curve the last point is joined back to the first.  Returns the new edges
    in order along the curve, each oriented forward.
    """
    if len({e for e, _ in crossings}) != len(crossings):
        raise SurfaceError("draw_path needs distinct edges")
    new_edges = []
    first_arrival = None
    dep = None
    for e, sd in crossings:
        arr, nxt = _split_for_crossing(m, e, sd, on_split)
        if dep is None:
            first_arrival = arr
        else:
            new_edges.append(m.insert_edge(dep, arr, kind, label))
        dep = nxt
    if closed and crossings:
        new_edges.append(m.insert_edge(dep, first_arrival, kind, label))
    return new_edges


@dataclass
class Arrangement:
    base: CombinatorialSurface
    inserted_curves: list
    overlay: CombinatorialSurface
    crossing_vertices: list
    base_edge_of: dict  # overlay edge -> base edge, for pieces of base edges

    @property
    def complexity(self) -> int:
        m = self.overlay.map
        g_pieces = sum(1 for e in range(m.ne) if m.kind[e] == GRAPH)
        g_base = sum(1 for e in range(self.base.map.ne) if self.base.map.kind[e] == GRAPH)
        return m.nv + m.ne + (g_pieces - g_base)


class _Overlay:
    """Sequential insertion of base-map walks into a copy of the base map."""

    def __init__(self, base: CombinatorialSurface):
        self.base = base
        self.m = base.map.copy()
        self.base_edge = {e: e for e in range(self.m.ne)}
        self.base_fd = base.map.faces()
        self.crossing_vertices = []

    def _on_split(self, e, e2, x):
        if e in self.base_edge:
            self.base_edge[e2] = self.base_edge[e]
        else:
            self.crossing_vertices.append(x)

    def base_face_of(self, f: int) -> int:
        fd = self.m.faces()
        for d, s in fd.orbits[f]:
            e = d >> 1
            if e in self.base_edge:
                return self.base_fd.side_face[(self.base_edge[e], edge_side(self.m, d, s))]
        raise SurfaceError("face without a base edge")

    def _route(self, dep, goal):
        """BFS across inserted edges from the face of corner dep until goal(face) holds."""
        fd = self.m.faces()
        start = fd.state_face[dep]
        prev = {start: None}
        queue = [start]
        for f in queue:
            tgt = goal(f)
            if tgt is not None:
                path = []
                while prev[f] is not None:
                    f, e, sd = prev[f]
                    path.append((e, sd))
                return list(reversed(path)), tgt
            for d, s in fd.orbits[f]:
                e = d >> 1
                if e in self.base_edge:
                    continue
                sd = edge_side(self.m, d, s)
                g = fd.side_face[(e, -sd)]
                if g not in prev:
                    prev[g] = (f, e, sd)
                    queue.append(g)
        raise SurfaceError("curve cannot be routed inside its face")

    def _advance(self, dep, path, kind, label):
        for e, sd in path:
            arr, nxt = _split_for_crossing(self.m, e, sd, self._on_split)
            self.m.insert_edge(dep, arr, kind, label)
            dep = nxt
        return dep

    def insert_walk(self, c: DrawnCurve, kind: str, label):
        check_curve(self.base, c)
        if not c.crossings:
            return
        n = len(c.crossings)
        e0, sd0 = c.crossings[0]
        piece = min(e for e, b in self.base_edge.items() if b == e0)
        first_arr, dep = _split_for_crossing(self.m, piece, sd0, self._on_split)
        for i in range(1, n):
            be, bsd = c.crossings[i]

            def goal(f, be=be, bsd=bsd):
                for d, s in self.m.faces().orbits[f]:
                    e = d >> 1
                    if self.base_edge.get(e) == be and edge_side(self.m, d, s) == bsd:
                        return e
                return None

            path, target = self._route(dep, goal)
            dep = self._advance(dep, path, kind, label)
            arr, nxt = _split_for_crossing(self.m, target, bsd, self._on_split)
            self.m.insert_edge(dep, arr, kind, label)
            dep = nxt
        if c.closed:
            def reaches_start(f):
                return True if f == self.m.faces().state_face[first_arr] else None

            path, _ = self._route(dep, reaches_start)
            dep = self._advance(dep, path, kind, label)
            self.m.insert_edge(dep, first_arr, kind, label)


def overlay(s: CombinatorialSurface, curves: Sequence[DrawnCurve]) -> Arrangement:
    """Insert curves as new map edges, putting their union in general position.

    Curves go in one after another.  Inside each face a new curve is routed to
    cross the curves already present as rarely as possible, so every crossing
    becomes a degree-4 vertex.  Open curves must run between boundary faces.
    """
    ov = _Overlay(s)
    for i, c in enumerate(curves):
        if not c.closed and c.crossings:
            if c.faces[0] not in s.boundary_terminals or c.faces[-1] not in s.boundary_terminals:
                raise SurfaceError("open curves must run from boundary to boundary")
        ov.insert_walk(c, CURVE, i)
    fd = ov.m.faces()
    boundaries = {}
    for f in range(fd.count):
        bf = ov.base_face_of(f)
        if bf in s.boundary_terminals and all(ov.m.kind[d >> 1] == BOUNDARY for d, _ in fd.orbits[f]):
            boundaries[f] = s.boundary_terminals[bf]
    out = s.with_map(ov.m, boundaries)
    return Arrangement(s, list(curves), out, list(ov.crossing_vertices), dict(ov.base_edge))
