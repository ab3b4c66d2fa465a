"""Systems of arcs, covering-space regions and shortest curves in them.

Every search runs on *cells*: the non-boundary faces of the arrangement of
G with the arcs of K.  Crossing a piece of a G edge costs its weight;
crossing an arc costs nothing but is counted, and the pair
``(length, arc crossings)`` is compared lexicographically.  Both are packed
into one integer ``length * BIG + crossings``.

Words over the arcs are tuples of letters ``(k, +1)`` (crossing arc k from its
side 0 to its side 1) and ``(k, -1)``.
"""
from __future__ import annotations

import heapq
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .surface import (
    ARC,
    BOUNDARY,
    GRAPH,
    CombinatorialSurface,
    DrawnCurve,
    Map,
    SurfaceError,
    _Overlay,
    draw_path,
    edge_side,
    orientation_frames,
)

log = logging.getLogger(__name__)

BIG = 1 << 24  # arc crossings never reach this many


class ContractibleError(ValueError):
    """A closed word that reduces to the identity."""


# ---------------------------------------------------------------------------
# words


def reduce_word(word) -> tuple:
    out = []
    for k, sg in word:
        if out and out[-1] == (k, -sg):
            out.pop()
        else:
            out.append((k, sg))
    return tuple(out)


def inverse(word) -> tuple:
    return tuple((k, -sg) for k, sg in reversed(word))


def cyclic_reduce(word) -> tuple:
    w = list(reduce_word(word))
    while len(w) >= 2 and w[0] == (w[-1][0], -w[-1][1]):
        w = w[1:-1]
    return tuple(w)


def canonical_cyclic(word) -> tuple:
    """Smallest rotation of the word or of its inverse."""
    w = cyclic_reduce(word)
    if not w:
        return w
    best = None
    for cand in (w, inverse(w)):
        for i in range(len(cand)):
            r = cand[i:] + cand[:i]
            if best is None or r < best:
                best = r
    return best


def unpack(cost: int) -> tuple[int, int]:
    return cost // BIG, cost % BIG


# ---------------------------------------------------------------------------
# cutting a map along edges


def cut_along(m: Map, cut: set[int]) -> tuple[Map, dict]:
    """Cut a map open along a set of edges.

    Every cut edge becomes two boundary copies, one per side, and every vertex
    on the cut splits into one vertex per sector.  Returns the new map and a
    dict from each new edge to ``(old edge, tail-frame side)``, with side 0
    for edges that were not cut.
    """
    new = Map()
    new_of_dart = {}  # non-cut dart -> new dart
    copy_of = {}  # (old edge, side) -> new edge
    pending = []
    for v in range(m.nv):
        r = m.rot[v]
        cuts = [i for i, d in enumerate(r) if (d >> 1) in cut]
        if not cuts:
            w = new.add_vertex()
            pending.append((w, [("d", d) for d in r]))
            continue
        for j, ci in enumerate(cuts):
            nxt = cuts[(j + 1) % len(cuts)]
            w = new.add_vertex()
            h, h2 = r[ci], r[nxt]
            inner = []
            i = (ci + 1) % len(r)
            while i != nxt:
                inner.append(("d", r[i]))
                i = (i + 1) % len(r)
            # the gap after a dart is the corner (dart, -1), before it (dart, +1)
            after = edge_side(m, h, -1)
            before = edge_side(m, h2, 1)
            pending.append((w, [("c", h, after)] + inner + [("c", h2, before)]))
    # create edges
    vertex_of = {}
    for w, items in pending:
        for it in items:
            if it[0] == "d":
                vertex_of[it[1]] = w
            else:
                vertex_of[(it[1], it[2])] = w
    for e in range(m.ne):
        if e in cut:
            for side in (1, -1):
                u = vertex_of[(2 * e, side)]
                v = vertex_of[(2 * e + 1, side)]
                copy_of[(e, side)] = new.add_edge(u, v, m.sign[e], m.kind[e], (m.label[e], e, side))
        else:
            ne = new.add_edge(vertex_of[2 * e], vertex_of[2 * e + 1], m.sign[e], m.kind[e], m.label[e])
            new_of_dart[2 * e] = 2 * ne
            new_of_dart[2 * e + 1] = 2 * ne + 1
    for w, items in pending:
        rot = []
        for it in items:
            if it[0] == "d":
                rot.append(new_of_dart[it[1]])
            else:
                d, side = it[1], it[2]
                rot.append(2 * copy_of[(d >> 1, side)] + (d & 1))
        new.rot[w] = rot
    origin = {ce: (e, side) for (e, side), ce in copy_of.items()}
    for d, nd in new_of_dart.items():
        if d % 2 == 0:
            origin[nd >> 1] = (d >> 1, 0)
    return new, origin


# ---------------------------------------------------------------------------
# arc system


@dataclass
class ArcSystem:
    """Arcs of K drawn into the carved surface, plus every table the searches need."""

    base: CombinatorialSurface
    arrangement: CombinatorialSurface
    arcs: list  # DrawnCurve in the base surface, boundary to boundary
    pieces: list  # per arc: arrangement edges in order along the arc
    piece_info: dict  # arrangement edge -> (arc, index, tail-frame side of arc side 0)
    disk: CombinatorialSurface
    disk_origin: dict
    frame: tuple  # boundary walk of the disk, see disk_frame()
    twist: tuple  # per arc: +1 if gluing the disk back preserves orientation
    cells: list  # arrangement face per cell
    cell_of_face: dict
    gnbrs: list  # per cell: [(cell, weight, edge, side left behind)]
    doors: list  # per cell: [(arc, sign, cell, edge, side left behind)]
    arc_cells: list  # per arc: [(side-0 cell, side-1 cell, edge)] along the arc
    frame_elements: dict  # (edge, side facing the cell) -> position in frame

    @property
    def g(self) -> int:
        return self.base.genus

    @property
    def t(self) -> int:
        return self.base.t

    @property
    def n_cells(self) -> int:
        return len(self.cells)

    def weight(self, length: int) -> Fraction:
        return Fraction(length, self.base.scale)

    def letter_of_crossing(self, e: int, side_left: int):
        """Arc letter for crossing arrangement edge e, or None for a G piece."""
        info = self.piece_info.get(e)
        if info is None:
            return None
        k, _, phi = info
        return (k, 1 if side_left == phi else -1)

    def word_of(self, c: DrawnCurve) -> tuple:
        out = []
        for e, sd in c.crossings:
            letter = self.letter_of_crossing(e, sd)
            if letter is not None:
                out.append(letter)
        return tuple(out)

    def length_of(self, c: DrawnCurve) -> Fraction:
        return sum((self.arrangement.edge_weight(e) for e, _ in c.crossings), Fraction(0))

    def graph_edges_of(self, c: DrawnCurve) -> list:
        """G-edge numbers crossed by c in order."""
        m = self.arrangement.map
        return [m.label[e] for e, _ in c.crossings if m.kind[e] == GRAPH]

    def face_cell(self, f: int) -> int:
        try:
            return self.cell_of_face[f]
        except KeyError:
            raise SurfaceError(f"face {f} is a boundary face") from None


def _boundary_faces(m: Map) -> set[int]:
    fd = m.faces()
    return {f for f, orb in enumerate(fd.orbits) if all(m.kind[d >> 1] == BOUNDARY for d, _ in orb)}


def _search_forest(m: Map, s: CombinatorialSurface, sources):
    """Multi-source Dijkstra over non-boundary faces; K edges are walls.

    ``sources`` is a list of (label, B edge, face).  Returns dist, root
    (the source B edge) and parent pointers.
    """
    fd = m.faces()
    dist, root, parent = {}, {}, {}
    heap = []
    for order, (label, b, f) in enumerate(sources):
        heap.append((0, order, f, b, None))
    heapq.heapify(heap)
    counter = len(heap)
    while heap:
        d, _, f, b, via = heapq.heappop(heap)
        if f in dist:
            continue
        dist[f], root[f], parent[f] = d, b, via
        for dd, sd in fd.orbits[f]:
            e = dd >> 1
            if m.kind[e] != GRAPH:
                continue
            side = edge_side(m, dd, sd)
            g = fd.side_face[(e, -side)]
            if g not in dist:
                counter += 1
                heapq.heappush(heap, (d + s.iweights[m.label[e]], counter, g, b, (f, e, side)))
    return dist, root, parent


def _path_to(parent, f):
    out = []
    while parent[f] is not None:
        g, e, side = parent[f]
        out.append((e, side))
        f = g
    return list(reversed(out))


def _non_boundary_side(m: Map, bfaces, e: int) -> int:
    fd = m.faces()
    return 1 if fd.side_face[(e, 1)] not in bfaces else -1


def _arc_candidates(m: Map, s: CombinatorialSurface, label_of):
    """Boundary-to-boundary dual paths made of two shortest paths, cheapest first."""
    fd = m.faces()
    bfaces = _boundary_faces(m)
    sources = []
    for e in range(m.ne):
        if m.kind[e] == BOUNDARY:
            side = _non_boundary_side(m, bfaces, e)
            sources.append((label_of(e), e, fd.side_face[(e, side)], side))
    sources.sort(key=lambda x: (x[0], x[1]))
    dist, root, parent = _search_forest(m, s, [(lb, b, f) for lb, b, f, _ in sources])
    bside = {b: side for _, b, _, side in sources}
    cands = []
    for e in range(m.ne):
        if m.kind[e] != GRAPH:
            continue
        a, b = fd.side_face[(e, 1)], fd.side_face[(e, -1)]
        if a == b or a not in dist or b not in dist:
            continue
        ra, rb = root[a], root[b]
        if label_of(ra) == label_of(rb):
            continue
        cost = dist[a] + s.iweights[m.label[e]] + dist[b]
        path = (
            [(ra, -bside[ra])] + _path_to(parent, a) + [(e, 1)]
            + [(x, -sd) for x, sd in reversed(_path_to(parent, b))] + [(rb, bside[rb])]
        )
        cands.append((cost, 0, e, path))
    for lb, tau, f, side in sources:
        if f not in dist or label_of(root[f]) == lb:
            continue
        r = root[f]
        path = [(r, -bside[r])] + _path_to(parent, f) + [(tau, side)]
        cands.append((dist[f], 1, tau, path))
    cands.sort(key=lambda c: c[:3])
    return cands


def _cells_connected(m: Map) -> bool:
    fd = m.faces()
    bfaces = _boundary_faces(m)
    cells = [f for f in range(fd.count) if f not in bfaces]
    if not cells:
        return False
    parent = {f: f for f in cells}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for e in range(m.ne):
        if m.kind[e] == GRAPH:
            a, b = fd.side_face[(e, 1)], fd.side_face[(e, -1)]
            parent[find(a)] = find(b)
    return len({find(f) for f in cells}) == 1


def _all_pairs_candidates(m: Map, s: CombinatorialSurface):
    """Fallback candidates: a shortest path from every boundary edge to every other."""
    fd = m.faces()
    bfaces = _boundary_faces(m)
    bedges = [e for e in range(m.ne) if m.kind[e] == BOUNDARY]
    cands = []
    for sigma in bedges:
        side = _non_boundary_side(m, bfaces, sigma)
        f0 = fd.side_face[(sigma, side)]
        dist, _, parent = _search_forest(m, s, [(0, sigma, f0)])
        for tau in bedges:
            if tau == sigma:
                continue
            tside = _non_boundary_side(m, bfaces, tau)
            f = fd.side_face[(tau, tside)]
            if f in dist:
                cands.append((dist[f], sigma, tau, [(sigma, -side)] + _path_to(parent, f) + [(tau, tside)]))
    cands.sort(key=lambda c: c[:3])
    return [(c[0], 2, (c[1], c[2]), c[3]) for c in cands]


def greedy_system_of_arcs(s: CombinatorialSurface) -> "ArcSystem":
    """Cut the carved surface into a disk with g + t - 1 disjoint arcs.

    Arcs are added one at a time, cheapest first.  The first t - 1 join
    different boundary components (tracked with union-find); the remaining g
    start and end on the boundary complex and must keep the rest of the
    surface connected.  Each arc is a shortest path from a boundary, one edge,
    and a shortest path back to a boundary.
    """
    if s.t < 1:
        raise SurfaceError("need at least one boundary face")
    if s.genus + s.t < 2:
        raise SurfaceError("a disk needs no arcs")
    ov = _Overlay(s)
    terminals = list(s.boundary_terminals.values())
    comp = {tid: tid for tid in terminals}

    def find(x):
        while comp[x] != x:
            x = comp[x]
        return x

    pieces = []
    drawn = []  # (crossings in current map at draw time) mapped to base
    for stage_arc in range(s.genus + s.t - 1):
        joining = stage_arc < s.t - 1
        m = ov.m
        if joining:
            cands = _arc_candidates(m, s, lambda e: find(m.label[e]))
        else:
            cands = _arc_candidates(m, s, lambda e: e)
        chosen = None
        for attempt in (0, 1):
            for cost, _, _, path in cands:
                trial = ov.m.copy()
                split_log = []
                new_edges = draw_path(trial, path, ARC, len(pieces), on_split=lambda e, e2, x: split_log.append((e, e2)))
                if joining or _cells_connected(trial):
                    chosen = (path, trial, split_log, new_edges)
                    break
            if chosen is not None or joining:
                break
            cands = _all_pairs_candidates(m, s)
        if chosen is None:
            raise SurfaceError("could not find a non-separating arc")
        path, trial, split_log, new_edges = chosen
        base_path = [(ov.base_edge[e], sd) for e, sd in path]
        for e, e2 in split_log:
            ov._on_split(e, e2, None)
        ov.m = trial
        pieces.append(new_edges)
        drawn.append(base_path)
        if joining:
            ta = m.label[path[0][0]]
            tb = m.label[path[-1][0]]
            comp[find(ta)] = find(tb)
    return _finish_arc_system(s, ov, pieces, drawn)


def _finish_arc_system(s, ov, pieces, drawn) -> ArcSystem:
    m = ov.m
    fd = m.faces()
    base_fd = s.map.faces()
    arcs = []
    for base_path in drawn:
        faces = [base_fd.side_face[(base_path[0][0], base_path[0][1])]]
        for e, sd in base_path:
            faces.append(base_fd.side_face[(e, -sd)])
        arcs.append(DrawnCurve(tuple(faces), tuple(base_path), False))
    piece_info = {}
    for k, es in enumerate(pieces):
        phi = 1
        for i, e in enumerate(es):
            piece_info[e] = (k, i, phi)
            phi *= m.sign[e]
    bfaces = _boundary_faces(m)
    boundary_terminals = {}
    for f in bfaces:
        d, _ = fd.orbits[f][0]
        boundary_terminals[f] = m.label[d >> 1]
    arrangement = s.with_map(m, boundary_terminals)
    cells = [f for f in range(fd.count) if f not in bfaces]
    cell_of_face = {f: i for i, f in enumerate(cells)}
    gnbrs = [[] for _ in cells]
    doors = [[] for _ in cells]
    for e in range(m.ne):
        if m.kind[e] == GRAPH:
            a, b = fd.side_face[(e, 1)], fd.side_face[(e, -1)]
            w = s.iweights[m.label[e]]
            ca, cb = cell_of_face[a], cell_of_face[b]
            gnbrs[ca].append((cb, w, e, 1))
            gnbrs[cb].append((ca, w, e, -1))
    arc_cells = []
    for k, es in enumerate(pieces):
        row = []
        for e in es:
            phi = piece_info[e][2]
            left = cell_of_face[fd.side_face[(e, phi)]]
            right = cell_of_face[fd.side_face[(e, -phi)]]
            doors[left].append((k, 1, right, e, phi))
            doors[right].append((k, -1, left, e, -phi))
            row.append((left, right, e))
        arc_cells.append(row)
    cut = {e for es in pieces for e in es}
    cut |= {e for e in range(m.ne) if m.kind[e] == BOUNDARY}
    dmap, origin = _main_component(*cut_along(m, cut))
    dfd = dmap.faces()
    dbound = {}
    for f, orb in enumerate(dfd.orbits):
        if all(dmap.kind[d >> 1] in (BOUNDARY, ARC) for d, _ in orb):
            dbound[f] = "D"
    disk = CombinatorialSurface(dmap, s.vertex_ids, s.edge_ids, s.weights, dbound)
    frame, frame_elements = _disk_frame(dmap, dfd, dbound, origin, piece_info)
    frames = orientation_frames(dmap)
    twist = []
    for k, es in enumerate(pieces):
        e = es[0]
        inv = {v: ce for ce, v in origin.items()}
        up = dmap.ends(inv[(e, 1)])[0]
        um = dmap.ends(inv[(e, -1)])[0]
        twist.append(frames[up] * frames[um])
    return ArcSystem(
        s, arrangement, arcs, pieces, piece_info, disk, origin, frame, tuple(twist),
        cells, cell_of_face, gnbrs, doors, arc_cells, frame_elements,
    )


def _main_component(m: Map, origin: dict) -> tuple[Map, dict]:
    """Keep the connected component that contains graph edges; drop the rest."""
    parent = list(range(m.nv))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for e in range(m.ne):
        u, v = m.ends(e)
        parent[find(u)] = find(v)
    root = next(find(m.ends(e)[0]) for e in range(m.ne) if m.kind[e] == GRAPH)
    out = Map()
    vmap = {}
    for v in range(m.nv):
        if find(v) == root:
            vmap[v] = out.add_vertex()
    emap = {}
    for e in range(m.ne):
        u, v = m.ends(e)
        if u in vmap:
            emap[e] = out.add_edge(vmap[u], vmap[v], m.sign[e], m.kind[e], m.label[e])
    for v, nv in vmap.items():
        out.rot[nv] = [2 * emap[d >> 1] + (d & 1) for d in m.rot[v]]
    return out, {emap[e]: o for e, o in origin.items() if e in emap}


def _disk_frame(dmap: Map, dfd, dbound, origin, piece_info):
    """Boundary walk of the disk as items ("B", terminal) and ("K", arc, side, direction).

    ``side`` is 0 or 1 (the side of the arc this stretch of disk boundary lies
    on) and ``direction`` is +1 when the walk follows the arc's own direction.
    Also returns a dict from boundary elements ``(arrangement edge, side
    facing the cell)`` to item positions.
    """
    if len(dbound) != 1:
        return (), {}
    (f,) = dbound
    items = []
    elems = []
    for d, s in dfd.orbits[f]:
        e = d >> 1
        if dmap.kind[e] == BOUNDARY:
            item = ("B", dmap.label[e][0])
        else:
            old, side = origin[e]
            k, _, phi = piece_info[old]
            item = ("K", k, 0 if side == phi else 1, 1 if d % 2 == 0 else -1)
        elem = origin[e]
        if not items or items[-1] != item:
            items.append(item)
        elems.append((elem, len(items) - 1))
    if len(items) > 1 and items[0] == items[-1]:
        items.pop()
        elems = [(el, 0 if i == len(items) else i) for el, i in elems]
    starts = [i for i, it in enumerate(items) if it[0] == "B" and items[i - 1][0] == "K"]
    shift = 0
    if starts:
        shift = min(starts, key=lambda i: (str(items[i][1]), i))
    n = len(items)
    items = items[shift:] + items[:shift]
    elem_item = {el: (i - shift) % n for el, i in elems}
    return tuple(items), elem_item


# ---------------------------------------------------------------------------
# cover regions


@dataclass
class CoverRegion:
    """Finitely many copies of the disk glued along lifts of arcs.

    ``glue[(copy, arc, sign)]`` is the copy entered when crossing ``arc`` in
    direction ``sign`` from ``copy``.  For annular regions, crossings listed in
    ``seam`` raise the winding level by one (and their reverses lower it).
    Nodes are ``copy * n_cells + cell``.
    """

    arcs: ArcSystem
    kind: str  # "universal" | "annulus" | "moebius"
    copies: list
    glue: dict
    word: tuple = ()
    seam: frozenset = frozenset()
    start: int | None = None
    end: int | None = None

    @property
    def n_cells(self) -> int:
        return self.arcs.n_cells

    @property
    def n_nodes(self) -> int:
        return len(self.copies) * self.arcs.n_cells

    def node(self, copy: int, cell: int) -> int:
        return copy * self.arcs.n_cells + cell

    def split(self, node: int) -> tuple[int, int]:
        return divmod(node, self.arcs.n_cells)

    @property
    def gluings(self) -> list:
        """Each gluing once, as (copy on side 0, copy on side 1, arc)."""
        return sorted((a, b, k) for (a, k, sg), b in self.glue.items() if sg == 1)

    def neighbors(self, node: int):
        """Yield (node, cost, level change, edge, side left behind)."""
        a = self.arcs
        ci, cell = divmod(node, a.n_cells)
        base = ci * a.n_cells
        for nb, w, e, sd in a.gnbrs[cell]:
            yield base + nb, w * BIG, 0, e, sd
        for k, sg, nb, e, sd in a.doors[cell]:
            cj = self.glue.get((ci, k, sg))
            if cj is None:
                continue
            dl = 0
            if (ci, k, sg) in self.seam:
                dl = 1
            elif (cj, k, -sg) in self.seam:
                dl = -1
            yield cj * a.n_cells + nb, 1, dl, e, sd

    def dump(self) -> str:
        lines = ["copies: " + " ".join(str(i) for i in range(len(self.copies)))]
        for a, b, k in self.gluings:
            lines.append(f"glue {a} {b} arc {k}")
        for i in range(len(self.copies)):
            lines.append(f"copy {i} faces {self.arcs.n_cells}")
        return "\n".join(lines) + "\n"


def relevant_region_universal(a: ArcSystem, word) -> CoverRegion:
    """The disk copies visited by a lift of a path with this arc word."""
    for k, sg in word:
        if not (0 <= k < len(a.pieces)) or sg not in (1, -1):
            raise ValueError(f"word crosses nonexistent arc {k}")
    w = reduce_word(word)
    copies = [w[:i] for i in range(len(w) + 1)]
    glue = {}
    for i, (k, sg) in enumerate(w):
        glue[(i, k, sg)] = i + 1
        glue[(i + 1, k, -sg)] = i
    return CoverRegion(a, "universal", copies, glue, w, frozenset(), 0, len(w))


def ball_region(a: ArcSystem, depth: int) -> CoverRegion:
    """All copies whose reduced word has length <= depth."""
    letters = [(k, sg) for k in range(len(a.pieces)) for sg in (1, -1)]
    copies = [()]
    index = {(): 0}
    glue = {}
    frontier = [()]
    for _ in range(depth):
        nxt = []
        for w in frontier:
            for lt in letters:
                if w and w[-1] == (lt[0], -lt[1]):
                    continue
                nw = w + (lt,)
                index[nw] = len(copies)
                copies.append(nw)
                glue[(index[w], lt[0], lt[1])] = index[nw]
                glue[(index[nw], lt[0], -lt[1])] = index[w]
                nxt.append(nw)
        frontier = nxt
    return CoverRegion(a, "universal", copies, glue, (), frozenset(), 0, None)


def one_sided(a: ArcSystem, word) -> bool:
    p = 1
    for k, _ in word:
        p *= a.twist[k]
    return p == -1


def annular_region(a: ArcSystem, word) -> CoverRegion:
    """Unroll a closed word once and glue the last copy back to the first."""
    for k, sg in word:
        if not (0 <= k < len(a.pieces)):
            raise ValueError(f"word crosses nonexistent arc {k}")
    w = cyclic_reduce(word)
    if not w:
        raise ContractibleError("closed word is contractible")
    n = len(w)
    glue = {}
    for i, (k, sg) in enumerate(w):
        j = (i + 1) % n
        glue[(i, k, sg)] = j
        glue[(j, k, -sg)] = i
    kind = "moebius" if one_sided(a, w) else "annulus"
    seam = frozenset({(n - 1, w[-1][0], w[-1][1])})
    return CoverRegion(a, kind, list(range(n)), glue, w, seam)


# ---------------------------------------------------------------------------
# searches


def dijkstra(region: CoverRegion, sources, targets=None, blocked=None):
    """Plain Dijkstra over region nodes with packed costs.

    Returns (dist, parent, reached_target) where parent[node] is
    (previous node, edge, side) or None.
    """
    dist = {}
    parent = {}
    heap = [(0, s, None) for s in sorted(set(sources))]
    heapq.heapify(heap)
    targets = set(targets) if targets is not None else None
    while heap:
        d, u, via = heapq.heappop(heap)
        if u in dist:
            continue
        dist[u] = d
        parent[u] = via
        if targets is not None and u in targets:
            return dist, parent, u
        for v, c, _, e, sd in region.neighbors(u):
            if v in dist or (blocked is not None and v in blocked):
                continue
            heapq.heappush(heap, (d + c, v, (u, e, sd)))
    return dist, parent, None


def _node_path(parent, node):
    nodes = [node]
    steps = []
    while parent[node] is not None:
        prev, e, sd = parent[node]
        steps.append((e, sd))
        nodes.append(prev)
        node = prev
    return list(reversed(nodes)), list(reversed(steps))


def project(region: CoverRegion, nodes, steps, closed=False) -> DrawnCurve:
    a = region.arcs
    faces = tuple(a.cells[n % a.n_cells] for n in nodes)
    return DrawnCurve(faces, tuple(steps), closed)


@dataclass
class Found:
    """A curve found by a search, with its packed cost and region nodes."""

    curve: DrawnCurve
    cost: int
    nodes: list = field(default_factory=list)

    @property
    def length(self) -> int:
        return self.cost // BIG

    @property
    def crossings(self) -> int:
        return self.cost % BIG


def shortest_homotopic_path(a: ArcSystem, p: DrawnCurve) -> DrawnCurve:
    return homotopic_path(a, p).curve


def homotopic_path(a: ArcSystem, p: DrawnCurve) -> Found:
    if p.closed:
        raise ValueError("expected an open curve")
    start, end = a.face_cell(p.faces[0]), a.face_cell(p.faces[-1])
    region = relevant_region_universal(a, a.word_of(p))
    s = region.node(0, start)
    t = region.node(region.end, end)
    dist, parent, hit = dijkstra(region, [s], [t])
    nodes, steps = _node_path(parent, t)
    return Found(project(region, nodes, steps), dist[t], nodes)


def path_between(region: CoverRegion, sources, targets) -> Found | None:
    dist, parent, hit = dijkstra(region, sources, targets)
    if hit is None:
        return None
    nodes, steps = _node_path(parent, hit)
    return Found(project(region, nodes, steps), dist[hit], nodes)


def _winding_search(region: CoverRegion, start: int, goal_level: int = 1):
    """Shortest walk from (start, level 0) to (start, goal_level) in the cyclic cover."""
    heap = [(0, start, 0, None)]
    seen = {}
    parent = {}
    while heap:
        d, u, lv, via = heapq.heappop(heap)
        if (u, lv) in seen:
            continue
        seen[(u, lv)] = d
        parent[(u, lv)] = via
        if u == start and lv == goal_level:
            break
        for v, c, dl, e, sd in region.neighbors(u):
            key = (v, lv + dl)
            if key not in seen:
                heapq.heappush(heap, (d + c, v, lv + dl, ((u, lv), e, sd)))
    else:
        return None
    key = (start, goal_level)
    nodes, steps = [key], []
    while parent[key] is not None:
        prev, e, sd = parent[key]
        steps.append((e, sd))
        nodes.append(prev)
        key = prev
    nodes.reverse()
    steps.reverse()
    return seen[(start, goal_level)], [n for n, _ in nodes], steps


def shortest_cycle_through_face(r: CoverRegion, f: int) -> DrawnCurve:
    return cycle_through(r, f).curve


def cycle_through(r: CoverRegion, node: int) -> Found:
    """Shortest closed walk through a region node winding once around the core."""
    if r.kind != "annulus":
        raise ValueError("region is not an annulus")
    if not (0 <= node < r.n_nodes):
        raise ValueError("face not in region")
    res = _winding_search(r, node)
    if res is None:
        raise ValueError("no non-contractible cycle through this face")
    cost, nodes, steps = res
    return Found(project(r, nodes, steps, closed=True), cost, nodes)


# ---------------------------------------------------------------------------
# boundary of a region, and cutting a region open along a dual path


def region_boundary(r: CoverRegion) -> dict:
    """Boundary elements ``(copy, edge, side facing the cell)`` -> component id.

    Each copy's disk boundary is split by its glued arc sides into runs; a run
    ending at an arc endpoint continues into the run of the neighbouring copy
    that touches the same endpoint.
    """
    a = r.arcs
    frame = a.frame
    n = len(frame)
    parent = {}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def glued(ci, item):
        _, k, side, _ = item
        return (ci, k, 1 if side == 0 else -1) in r.glue

    run_of = {}
    ends = {}  # (copy, arc, side, endpoint) -> run touching that endpoint
    for ci in range(len(r.copies)):
        cut_pos = [i for i, it in enumerate(frame) if it[0] == "K" and glued(ci, it)]
        if not cut_pos:
            for i in range(n):
                run_of[(ci, i)] = (ci, 0)
            parent[(ci, 0)] = (ci, 0)
            continue
        for j, p in enumerate(cut_pos):
            q = cut_pos[(j + 1) % len(cut_pos)]
            run = (ci, p)
            parent[run] = run
            i = (p + 1) % n
            while i != q:
                run_of[(ci, i)] = run
                i = (i + 1) % n
            # run lies between glued items p (before) and q (after)
            _, k, side, dirn = frame[p]
            ends[(ci, k, side, "E" if dirn == 1 else "S")] = run
            _, k2, side2, dirn2 = frame[q]
            ends[(ci, k2, side2, "S" if dirn2 == 1 else "E")] = run
    for (ci, k, side, pt), run in ends.items():
        sg = 1 if side == 0 else -1
        cj = r.glue[(ci, k, sg)]
        other = ends.get((cj, k, 1 - side, pt))
        if other is not None:
            parent[find(run)] = find(other)
    ids = {}
    out = {}
    for (ci, i), run in sorted(run_of.items()):
        root = find(run)
        ids.setdefault(root, len(ids))
    for (e, side), i in a.frame_elements.items():
        for ci in range(len(r.copies)):
            if (ci, i) in run_of:
                out[(ci, e, side)] = ids[find(run_of[(ci, i)])]
    return out


def _orbit_positions(a: ArcSystem):
    cache = getattr(a, "_orbit_pos", None)
    if cache is None:
        m = a.arrangement.map
        fd = m.faces()
        cache = []
        for f in a.cells:
            cache.append({(d >> 1, edge_side(m, d, s)): i for i, (d, s) in enumerate(fd.orbits[f])})
        a._orbit_pos = cache
    return cache


def _boundary_sources(r: CoverRegion, bnd: dict, comp: int):
    """Region nodes touching boundary component ``comp`` with the touching element."""
    a = r.arcs
    pos = _orbit_positions(a)
    out = []
    for (ci, e, side), c in sorted(bnd.items()):
        if c != comp:
            continue
        for cell in range(a.n_cells):
            if (e, side) in pos[cell]:
                out.append((r.node(ci, cell), (e, side)))
    return out


@dataclass
class DualPath:
    """A simple path through region nodes from boundary element to boundary element."""

    nodes: list
    steps: list  # (edge, side left behind) between consecutive nodes
    start: tuple  # (edge, side) boundary element in the first node
    end: tuple


def _boundary_path(r: CoverRegion, src, dst_comp, bnd, region_for_search=None, accept=None):
    """Shortest dual paths from boundary sources to a boundary component, cheapest first."""
    search = region_for_search or r
    start_of = {}
    for node, el in src:
        start_of.setdefault(node, el)
    dist, parent, _ = dijkstra(search, list(start_of))
    targets = _boundary_sources(search, bnd, dst_comp)
    order = sorted((dist[n], n, el) for n, el in targets if n in dist)
    for _, node, el in order:
        nodes, steps = _node_path(parent, node)
        path = DualPath(nodes, steps, start_of[nodes[0]], el)
        if accept is None or accept(path):
            return path
    return None


def _halves(r: CoverRegion, path: DualPath):
    """For each node on the path: (entry position, exit position) in its cell orbit."""
    a = r.arcs
    pos = _orbit_positions(a)
    out = {}
    k = len(path.nodes)
    for j, node in enumerate(path.nodes):
        cell = node % a.n_cells
        entry = path.start if j == 0 else (path.steps[j - 1][0], -path.steps[j - 1][1])
        exit_ = path.end if j == k - 1 else path.steps[j]
        out[node] = (pos[cell][entry], pos[cell][exit_], len(pos[cell]))
    return out


def _half(h, p) -> int:
    """0 if orbit position p lies strictly after the exit and before the entry, else 1."""
    pin, pout, n = h
    return 0 if 0 < (p - pout) % n < (pin - pout) % n else 1


def cut_and_close(r: CoverRegion, path: DualPath) -> Found:
    """Shortest closed walk crossing the dual path exactly once.

    Each node on the path is split in two halves by the path.  An edge the
    path itself crosses is split at the crossing point into its tail part and
    head part, and each part joins the halves that contain it on either side.
    The answer is the cheapest walk in this cut-open region from one half of a
    path node to the other half, closed up inside that node.
    """
    a = r.arcs
    nc = a.n_cells
    pos = _orbit_positions(a)
    fwd = _orbit_forward(a)
    halves = _halves(r, path)

    def part_half(node, p, part):
        pin, pout, _ = halves[node]
        former = 0 if fwd[node % nc][p] else 1
        if p == pout:
            return 1 if part == former else 0
        return 0 if part == former else 1

    def qneighbors(q):
        node, hv = q
        cell = node % nc
        h = halves.get(node)
        for v, c, _, e, sd in r.neighbors(node):
            vcell = v % nc
            hvv = halves.get(v)
            if h is not None:
                p = pos[cell][(e, sd)]
                if p == h[0] or p == h[1]:
                    pv = pos[vcell][(e, -sd)]
                    for part in (0, 1):
                        if part_half(node, p, part) == hv:
                            yield (v, part_half(v, pv, part)), c, e, sd
                    continue
                if _half(h, p) != hv:
                    continue
            hv2 = None if hvv is None else _half(hvv, pos[vcell][(e, -sd)])
            yield (v, hv2), c, e, sd

    best = None
    for node in path.nodes:
        src, dst = (node, 1), (node, 0)
        dist = {}
        parent = {}
        heap = [(0, src, None)]
        while heap:
            d, q, via = heapq.heappop(heap)
            if q in dist:
                continue
            if best is not None and d >= best[0]:
                break
            dist[q] = d
            parent[q] = via
            if q == dst:
                break
            for q2, c, e, sd in qneighbors(q):
                if q2 not in dist:
                    heapq.heappush(heap, (d + c, q2, (q, e, sd)))
        if dst in dist:
            qs, steps = [dst], []
            q = dst
            while parent[q] is not None:
                prev, e, sd = parent[q]
                steps.append((e, sd))
                qs.append(prev)
                q = prev
            qs.reverse()
            steps.reverse()
            best = (dist[dst], [x for x, _ in qs], steps)
    if best is None:
        raise ValueError("no closed walk crosses the cutting path")
    cost, nodes, steps = best
    return Found(project(r, nodes, steps, closed=True), cost, nodes)


def _orbit_forward(a: ArcSystem):
    cache = getattr(a, "_orbit_fwd", None)
    if cache is None:
        fd = a.arrangement.map.faces()
        cache = [[d % 2 == 0 for d, _ in fd.orbits[f]] for f in a.cells]
        a._orbit_fwd = cache
    return cache


def shortest_noncontractible_annulus(r: CoverRegion) -> DrawnCurve:
    return annulus_cycle(r).curve


def annulus_cycle(r: CoverRegion) -> Found:
    """Cut along a shortest path between the two boundaries, then close up across it."""
    if r.kind != "annulus":
        raise ValueError("region is not an annulus")
    if r.n_nodes == 0:
        raise ValueError("degenerate region")
    path = annulus_cutting_path(r)
    return cut_and_close(r, path)


def annulus_cutting_path(r: CoverRegion) -> DualPath:
    bnd = region_boundary(r)
    comps = sorted(set(bnd.values()))
    if len(comps) != 2:
        raise ValueError(f"annular region has {len(comps)} boundary components")
    src = _boundary_sources(r, bnd, comps[0])
    path = _boundary_path(r, src, comps[1], bnd)
    if path is None:
        raise ValueError("boundaries of the annulus are not connected")
    return path


def double_cover(r: CoverRegion) -> CoverRegion:
    """Orientation double cover of a Moebius region: the annulus of the doubled word."""
    return annular_region(r.arcs, r.word + r.word)


def moebius_cutting_path(r: CoverRegion) -> DualPath | None:
    """A shortest non-separating boundary-to-boundary path of a Moebius region.

    Computed as the projection of a shortest path between the two boundary
    components of the double cover; projections that revisit a node are
    skipped.
    """
    dc = double_cover(r)
    n = len(r.copies)
    nc = r.n_cells
    bnd = region_boundary(dc)
    comps = sorted(set(bnd.values()))
    if len(comps) != 2:
        return None

    def proj(node):
        ci, cell = divmod(node, nc)
        return (ci % n) * nc + cell

    def simple(p: DualPath):
        ns = [proj(x) for x in p.nodes]
        return len(set(ns)) == len(ns)

    for c0, c1 in ((comps[0], comps[1]), (comps[1], comps[0])):
        src = _boundary_sources(dc, bnd, c0)
        p = _boundary_path(dc, src, c1, bnd, accept=simple)
        if p is not None:
            return DualPath([proj(x) for x in p.nodes], p.steps, p.start, p.end)
    return None


def moebius_via_double_cover(r: CoverRegion) -> Found:
    """Minimum over nodes of the distance between its two lifts in the double cover."""
    dc = double_cover(r)
    n = len(r.copies)
    nc = r.n_cells
    best = None
    for node in range(r.n_nodes):
        s = node
        t = node + n * nc
        found = path_between(dc, [s], [t])
        if found is not None and (best is None or found.cost < best[0].cost):
            ns = [(x // nc % n) * nc + x % nc for x in found.nodes]
            best = (found, ns)
    if best is None:
        raise ValueError("no one-sided cycle")
    found, ns = best
    return Found(DrawnCurve(found.curve.faces, found.curve.crossings, True), found.cost, ns)


def shortest_noncontractible_moebius(r: CoverRegion) -> DrawnCurve:
    return moebius_cycle(r).curve


def moebius_cycle(r: CoverRegion) -> Found:
    if r.kind != "moebius":
        raise ValueError("region is not a Moebius strip")
    path = moebius_cutting_path(r)
    if path is None:
        log.warning("no simple non-separating cutting path; using the double cover directly")
        return moebius_via_double_cover(r)
    res = cut_and_close(r, path)
    res.cutting_path = path
    return res


def shortest_homotopic_cycle(a: ArcSystem, word) -> DrawnCurve:
    return homotopic_cycle(a, word).curve


def homotopic_cycle(a: ArcSystem, word) -> Found:
    r = annular_region(a, word)
    return moebius_cycle(r) if r.kind == "moebius" else annulus_cycle(r)
