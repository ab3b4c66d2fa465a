"""Ground truth for small instances: validity, exact minimum multicut, generators."""
from __future__ import annotations

import heapq
import json
import math
import random
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .surface import CombinatorialSurface, SurfaceError, build_surface, format_weight, surface_to_spec


@dataclass
class Instance:
    surface: CombinatorialSurface
    terminals: tuple
    pairs: tuple
    seed: int | None = None

    def __post_init__(self):
        vids = {str(v) for v in self.surface.vertex_ids}
        for tid in self.terminals:
            if str(tid) not in vids:
                raise SurfaceError(f"terminal {tid!r} is not a vertex")
        tset = {str(t) for t in self.terminals}
        for a, b in self.pairs:
            if str(a) not in tset or str(b) not in tset:
                raise SurfaceError(f"pair ({a!r}, {b!r}) does not reference terminals")
            if str(a) == str(b):
                raise SurfaceError(f"pair ({a!r}, {b!r}) can never be separated")

    @property
    def edge_ids(self) -> list:
        return self.surface.edge_ids

    def weight_of(self, edges: Iterable) -> Fraction:
        idx = self.surface.edge_index
        return sum((self.surface.weights[idx[e]] for e in edges), Fraction(0))

    def scaled(self, factor) -> "Instance":
        return Instance(self.surface.scaled(factor), self.terminals, self.pairs, self.seed)

    def to_dict(self) -> dict:
        d = surface_to_spec(self.surface)
        d["terminals"] = list(self.terminals)
        d["pairs"] = [list(p) for p in self.pairs]
        if self.seed is not None:
            d["seed"] = self.seed
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=1) + "\n"


def instance_from_dict(d: dict) -> Instance:
    s = build_surface(d)
    try:
        terminals = tuple(d["terminals"])
        pairs = tuple(tuple(p) for p in d["pairs"])
    except (KeyError, TypeError) as exc:
        raise SurfaceError(f"missing field: {exc}") from exc
    if any(len(p) != 2 for p in pairs):
        raise SurfaceError("pairs must have two entries")
    return Instance(s, terminals, pairs, d.get("seed"))


def load_instance(text: str) -> Instance:
    try:
        d = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SurfaceError(f"malformed JSON: {exc}") from exc
    return instance_from_dict(d)


# ---------------------------------------------------------------------------
# validity


def _vertex_index(inst: Instance) -> dict:
    return {str(v): i for i, v in enumerate(inst.surface.vertex_ids)}


def _components(inst: Instance, removed: set[int]) -> list[int]:
    m = inst.surface.map
    parent = list(range(m.nv))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for e in range(m.ne):
        if m.label[e] in removed:
            continue
        u, v = m.ends(e)
        parent[find(u)] = find(v)
    return [find(v) for v in range(m.nv)]


def separated(inst: Instance, removed: set[int]) -> bool:
    """Are all pairs disconnected once the G-edges numbered in ``removed`` are deleted?"""
    comp = _components(inst, removed)
    vi = _vertex_index(inst)
    return all(comp[vi[str(a)]] != comp[vi[str(b)]] for a, b in inst.pairs)


def validate_multicut(inst: Instance, edges: Iterable) -> bool:
    idx = inst.surface.edge_index
    removed = set()
    for e in edges:
        if e not in idx:
            raise KeyError(f"unknown edge id {e!r}")
        removed.add(idx[e])
    return separated(inst, removed)


# ---------------------------------------------------------------------------
# exact minimum multicut


class TooLarge(ValueError):
    pass


def exact_multicut(inst: Instance, cap: int = 22) -> tuple[Fraction, list]:
    """Minimum-weight multicut by branching on the edges of connecting paths.

    Repeatedly pick a terminal pair that is still connected and a connecting
    path through the fewest undecided edges; one of those edges must be cut,
    and branching on "cut the i-th, keep the ones before it" covers every case
    exactly once.  Ties go to the lexicographically smallest sorted index list.
    """
    s = inst.surface
    m = s.map
    n_e = len(s.edge_ids)
    if n_e > cap:
        raise TooLarge(f"instance has {n_e} edges, above the oracle cap of {cap}")
    w = s.iweights
    vi = _vertex_index(inst)
    pairs = [(vi[str(a)], vi[str(b)]) for a, b in inst.pairs]
    adj = [[] for _ in range(m.nv)]
    for e in range(m.ne):
        u, v = m.ends(e)
        k = m.label[e]
        adj[u].append((v, k))
        adj[v].append((u, k))

    best = [None, None]

    def path_between(src, dst, cut, keep):
        # 0-1 BFS: kept edges are free, undecided edges cost one
        dist = {src: 0}
        prev = {src: None}
        dq = deque([src])
        done = set()
        while dq:
            x = dq.popleft()
            if x in done:
                continue
            done.add(x)
            if x == dst:
                break
            for y, k in adj[x]:
                if k in cut:
                    continue
                c = 0 if k in keep else 1
                nd = dist[x] + c
                if y not in dist or nd < dist[y]:
                    dist[y] = nd
                    prev[y] = (x, k)
                    if c == 0:
                        dq.appendleft(y)
                    else:
                        dq.append(y)
        if dst not in prev:
            return None
        out = []
        x = dst
        while prev[x] is not None:
            x, k = prev[x]
            out.append(k)
        return out

    def connected_pair(cut, keep):
        for a, b in pairs:
            p = path_between(a, b, cut, keep)
            if p is not None:
                return p
        return None

    def rec(cut: frozenset, keep: frozenset, weight: int):
        if best[0] is not None and weight > best[0]:
            return
        path = connected_pair(cut, keep)
        if path is None:
            key = (weight, sorted(cut))
            if best[0] is None or key < (best[0], best[1]):
                best[0], best[1] = key
            return
        undecided = []
        for k in path:
            if k not in keep and k not in undecided:
                undecided.append(k)
        if not undecided:
            return
        undecided.sort()
        kept = set(keep)
        for k in undecided:
            if best[0] is None or weight + w[k] <= best[0]:
                rec(cut | {k}, frozenset(kept), weight + w[k])
            kept.add(k)

    rec(frozenset(), frozenset(), 0)
    weight = Fraction(best[0], s.scale)
    return weight, [s.edge_ids[k] for k in best[1]]


def brute_force_multicut(inst: Instance) -> tuple[Fraction, list]:
    """Every edge subset, smallest weight then smallest sorted index list."""
    s = inst.surface
    n_e = len(s.edge_ids)
    best = None
    for mask in range(1 << n_e):
        cut = {k for k in range(n_e) if mask >> k & 1}
        wt = sum(s.iweights[k] for k in cut)
        if best is not None and wt > best[0]:
            continue
        if separated(inst, cut):
            key = (wt, sorted(cut))
            if best is None or key < best:
                best = key
    return Fraction(best[0], s.scale), [s.edge_ids[k] for k in best[1]]


# ---------------------------------------------------------------------------
# builders


def planar_spec(points: dict, edges: Sequence, weights=None, outer=None) -> dict:
    """Rotation-system JSON for a straight-line planar drawing.

    ``edges`` are ``(id, u, v)``; ``outer`` may name one vertex placed at
    infinity, joined to its neighbours along the rays through them.
    """
    weights = weights or {}
    inc = {v: [] for v in points}
    if outer is not None:
        inc[outer] = []
    for eid, u, v in edges:
        for x, y in ((u, v), (v, u)):
            if x == outer:
                continue
            if y == outer:
                ang = math.atan2(points[x][1], points[x][0])
            else:
                ang = math.atan2(points[y][1] - points[x][1], points[y][0] - points[x][0])
            inc[x].append((ang, eid))
        if outer in (u, v):
            other = v if u == outer else u
            inc[outer].append((-math.atan2(points[other][1], points[other][0]), eid))
    rotations = {str(v): [e for _, e in sorted(lst)] for v, lst in inc.items()}
    vertices = list(points) + ([outer] if outer is not None else [])
    return {
        "vertices": vertices,
        "edges": [
            {"id": eid, "u": u, "v": v, "w": str(weights.get(eid, 1)), "sign": 1}
            for eid, u, v in edges
        ],
        "rotations": rotations,
    }


def path_instance(w1="3", w2="1") -> Instance:
    """a - x - b with the given weights and the single pair {a, b}."""
    spec = planar_spec(
        {"a": (0, 0), "x": (1, 0), "b": (2, 0)},
        [("ax", "a", "x"), ("xb", "x", "b")],
        {"ax": w1, "xb": w2},
    )
    spec.update(terminals=["a", "b"], pairs=[["a", "b"]])
    return instance_from_dict(spec)


def star_instance(spokes=(1, 2, 4)) -> Instance:
    pts = {"c": (0, 0)}
    edges = []
    weights = {}
    names = []
    for i, w in enumerate(spokes):
        ang = 2 * math.pi * i / len(spokes)
        name = f"t{i}"
        names.append(name)
        pts[name] = (math.cos(ang), math.sin(ang))
        edges.append((f"s{i}", "c", name))
        weights[f"s{i}"] = w
    spec = planar_spec(pts, edges, weights)
    spec.update(terminals=names, pairs=[[a, b] for i, a in enumerate(names) for b in names[i + 1:]])
    return instance_from_dict(spec)


def cylinder_instance(layer_weights: Sequence[Sequence[int]], ring_weight: int = 50) -> Instance:
    """Concentric rings between a centre terminal and a terminal at infinity.

    ``layer_weights[i][j]`` weighs the j-th radial edge of layer i; layer 0
    leaves the centre and the last layer reaches the outer terminal, so a
    closed curve separating the two terminals inside one layer crosses
    exactly that layer.  Edges along the rings weigh ``ring_weight``.
    """
    p = len(layer_weights[0])
    rings = len(layer_weights) - 1
    if rings < 1 or p < 3:
        raise ValueError("need at least two layers of at least three edges")
    pts = {"in": (0.0, 0.0)}
    edges, weights = [], {}
    name = lambda r, j: "in" if r < 0 else "out" if r == rings else f"r{r}_{j}"
    for r in range(rings):
        for j in range(p):
            ang = 2 * math.pi * j / p
            pts[name(r, j)] = ((r + 1) * math.cos(ang), (r + 1) * math.sin(ang))
        for j in range(p):
            eid = f"c{r}_{j}"
            edges.append((eid, name(r, j), name(r, (j + 1) % p)))
            weights[eid] = ring_weight
    for i, row in enumerate(layer_weights):
        for j in range(p):
            eid = f"s{i}_{j}"
            edges.append((eid, name(i - 1, j), name(i, j)))
            weights[eid] = row[j]
    spec = planar_spec(pts, edges, weights, outer="out")
    spec.update(terminals=["in", "out"], pairs=[["in", "out"]])
    return instance_from_dict(spec)


def torus_grid_instance(rows: int = 3, cols: int = 3, seed: int = 0, terminals=None, pairs=None) -> Instance:
    """rows x cols grid with both directions wrapped around (Euler genus 2)."""
    if rows < 3 or cols < 3:
        raise ValueError("torus grid needs at least 3 rows and columns")
    rng = random.Random(seed)
    vid = lambda i, j: f"v{i}_{j}"
    edges, rot = [], {}
    for i in range(rows):
        for j in range(cols):
            edges.append({"id": f"h{i}_{j}", "u": vid(i, j), "v": vid(i, (j + 1) % cols),
                          "w": str(rng.randint(1, 9)), "sign": 1})
            edges.append({"id": f"u{i}_{j}", "u": vid(i, j), "v": vid((i + 1) % rows, j),
                          "w": str(rng.randint(1, 9)), "sign": 1})
    for i in range(rows):
        for j in range(cols):
            rot[vid(i, j)] = [f"h{i}_{j}", f"u{i}_{j}", f"h{i}_{(j - 1) % cols}", f"u{(i - 1) % rows}_{j}"]
    terminals = terminals or [vid(0, 0), vid(1, 1)]
    pairs = [[terminals[0], terminals[1]]] if pairs is None else pairs
    spec = {"vertices": [vid(i, j) for i in range(rows) for j in range(cols)], "edges": edges,
            "rotations": rot, "terminals": terminals, "pairs": pairs}
    return instance_from_dict(spec)


def projective_wheel_instance(k: int = 3, seed: int = 0, terminals=None, pairs=None) -> Instance:
    """A wheel whose rim is glued to itself antipodally: a map on the projective plane.

    The hub sees 2k spokes; each of the k rim vertices gets two spokes, and
    the rim edge closing the cycle is twisted.
    """
    rng = random.Random(seed)
    edges, rot = [], {}
    for i in range(k):
        edges.append({"id": f"a{i}", "u": "h", "v": f"r{i}", "w": str(rng.randint(1, 9)), "sign": 1})
    for i in range(k):
        edges.append({"id": f"b{i}", "u": "h", "v": f"r{i}", "w": str(rng.randint(1, 9)), "sign": -1})
    for i in range(k):
        edges.append({"id": f"m{i}", "u": f"r{i}", "v": f"r{(i + 1) % k}",
                      "w": str(rng.randint(1, 9)), "sign": -1 if i == k - 1 else 1})
    rot["h"] = [f"a{i}" for i in range(k)] + [f"b{i}" for i in range(k)]
    for i in range(k):
        rot[f"r{i}"] = [f"m{i}", f"a{i}", f"m{(i - 1) % k}", f"b{i}"]
    terminals = terminals or ["h", "r0"]
    pairs = [[terminals[0], terminals[1]]] if pairs is None else pairs
    spec = {"vertices": ["h"] + [f"r{i}" for i in range(k)], "edges": edges, "rotations": rot,
            "terminals": terminals, "pairs": pairs}
    return instance_from_dict(spec)


def random_planar_instance(seed: int, v_count: int, t: int, pair_density: float = 1.0,
                           weight_range=(1, 16), max_edges: int | None = None,
                           keep_fraction: float = 0.75) -> Instance:
    """Seeded planar instance from a stacked triangulation with random deletions.

    Edges are deleted in random order while the graph stays connected, until
    at most ``max_edges`` remain (or about ``keep_fraction`` of them when no
    limit is given).  Weights are integers drawn from ``weight_range``.
    """
    if not (v_count >= t >= 2) or v_count < 3:
        raise ValueError("need v_count >= t >= 2 and v_count >= 3")
    if not (0 < pair_density <= 1):
        raise ValueError("pair_density must lie in (0, 1]")
    rng = random.Random(seed)
    rot = {0: [1, 2], 1: [2, 0], 2: [0, 1]}
    faces = [(0, 1, 2), (0, 2, 1)]
    for v in range(3, v_count):
        fi = rng.randrange(len(faces))
        a, b, c = faces.pop(fi)
        for x, after, nxt in ((a, b, c), (b, c, a), (c, a, b)):
            r = rot[x]
            r.insert(r.index(after) + 1, v)
        rot[v] = [a, b, c]
        faces += [(a, b, v), (b, c, v), (c, a, v)]
    pairs_uv = sorted({(min(u, v), max(u, v)) for u in rot for v in rot[u]})
    alive = set(pairs_uv)
    limit = max_edges if max_edges is not None else max(v_count - 1, round(keep_fraction * len(pairs_uv)))
    order = list(pairs_uv)
    rng.shuffle(order)
    for uv in order:
        if len(alive) <= limit:
            break
        trial = alive - {uv}
        if _connected(v_count, trial):
            alive = trial
    if len(alive) > limit:
        raise ValueError("cannot reach the requested edge count")
    eid = {uv: f"e{i}" for i, uv in enumerate(sorted(alive))}
    lo, hi = weight_range
    edges = [{"id": eid[uv], "u": f"v{uv[0]}", "v": f"v{uv[1]}", "w": str(rng.randint(lo, hi)), "sign": 1}
             for uv in sorted(alive)]
    rotations = {}
    for v in range(v_count):
        rotations[f"v{v}"] = [eid[(min(v, u), max(v, u))] for u in rot[v] if (min(v, u), max(v, u)) in alive]
    terms = sorted(rng.sample(range(v_count), t))
    names = [f"v{x}" for x in terms]
    all_pairs = [[a, b] for i, a in enumerate(names) for b in names[i + 1:]]
    pairs = [p for p in all_pairs if rng.random() < pair_density]
    if not pairs:
        pairs = [all_pairs[rng.randrange(len(all_pairs))]]
    spec = {"vertices": [f"v{v}" for v in range(v_count)], "edges": edges, "rotations": rotations,
            "terminals": names, "pairs": pairs}
    inst = instance_from_dict(spec)
    inst.seed = seed
    return inst


def _connected(n: int, edges) -> bool:
    adj = {v: [] for v in range(n)}
    for u, v in edges:
        adj[u].append(v)
        adj[v].append(u)
    seen = {0}
    stack = [0]
    while stack:
        x = stack.pop()
        for y in adj[x]:
            if y not in seen:
                seen.add(y)
                stack.append(y)
    return len(seen) == n


# ---------------------------------------------------------------------------
# brute force over closed curves in a cover region


def region_dual_graph(arcs, region) -> tuple[list, list]:
    """Nodes and edges ``(x, y, weight, level change)`` of a region's dual multigraph.

    Rebuilt from the arrangement faces and the region's gluing table; shares
    no search code with the homotopy module.
    """
    arr = arcs.arrangement
    m = arr.map
    fd = m.faces()
    holes = set(arr.boundary_terminals)
    cells = [f for f in range(fd.count) if f not in holes]
    index = {f: i for i, f in enumerate(cells)}
    nc = len(cells)
    ncopies = len(region.copies)
    edges = []
    for e in range(m.ne):
        if m.kind[e] == "G":
            a, b = index[fd.side_face[(e, 1)]], index[fd.side_face[(e, -1)]]
            w = arcs.base.iweights[m.label[e]]
            for c in range(ncopies):
                edges.append((c * nc + a, c * nc + b, w, 0))
        elif m.kind[e] == "K":
            k, _, phi = arcs.piece_info[e]
            left, right = index[fd.side_face[(e, phi)]], index[fd.side_face[(e, -phi)]]
            for c in range(ncopies):
                c2 = region.glue.get((c, k, 1))
                if c2 is None:
                    continue
                lvl = 1 if (c, k, 1) in region.seam else -1 if (c2, k, -1) in region.seam else 0
                edges.append((c * nc + left, c2 * nc + right, 0, lvl))
    return list(range(nc * ncopies)), edges


def simple_cycles(nodes, edges):
    """Every simple cycle of a multigraph as a list of (edge index, direction)."""
    adj = {v: [] for v in nodes}
    for i, (x, y, _, _) in enumerate(edges):
        adj[x].append((y, i, 1))
        if x != y:
            adj[y].append((x, i, -1))
    out = []
    for i, (x, y, _, _) in enumerate(edges):
        if x == y:
            out.append([(i, 1)])
    for s in nodes:
        stack = [(s, [], {s})]
        while stack:
            v, path, seen = stack.pop()
            for y, i, d in adj[v]:
                if edges[i][0] == edges[i][1]:
                    continue
                if y == s and path and i != path[0][0] and (len(path) > 1 or i > path[0][0]):
                    out.append(path + [(i, d)])
                elif y > s and y not in seen:
                    stack.append((y, path + [(i, d)], seen | {y}))
    return out


def brute_noncontractible(arcs, region, through=None, odd=False):
    """Shortest closed walk with nonzero winding, by cycle enumeration.

    With ``through`` set to a node, the walk must visit that node: a simple
    cycle plus a detour there and back.  With ``odd`` the winding must be odd.
    Lengths are in integer weight units.
    """
    nodes, edges = region_dual_graph(arcs, region)
    best = None
    dist = None
    if through is not None:
        inf = float("inf")
        dist = {u: {v: (0 if u == v else inf) for v in nodes} for u in nodes}
        for x, y, w, _ in edges:
            if w < dist[x][y]:
                dist[x][y] = dist[y][x] = w
        for k in nodes:
            for i in nodes:
                dik = dist[i][k]
                for j in nodes:
                    if dik + dist[k][j] < dist[i][j]:
                        dist[i][j] = dik + dist[k][j]
    for cyc in simple_cycles(nodes, edges):
        wind = sum(d * edges[i][3] for i, d in cyc)
        if wind == 0 or (odd and wind % 2 == 0):
            continue
        length = sum(edges[i][2] for i, _ in cyc)
        if through is not None:
            on = {edges[i][0] for i, _ in cyc} | {edges[i][1] for i, _ in cyc}
            length += 2 * min(dist[through][v] for v in on)
        if best is None or length < best:
            best = length
    return best


def min_crossings(arcs, closed_nodes, closed_steps, path_nodes, path_steps, path_start, path_end) -> int:
    """Fewest crossings between a closed dual walk and a simple dual path.

    Inside each face the two curves are chords of the face boundary and cross
    when their endpoints interleave.  Where both cross the same edge, the
    walk's point may sit on either side of the path's point; every
    combination of those choices is tried.
    """
    m = arcs.arrangement.map
    fd = m.faces()
    nc = arcs.n_cells
    orbit = [fd.orbits[f] for f in arcs.cells]
    pos = [{(d >> 1, s if d % 2 == 0 else -s * m.sign[d >> 1]): i for i, (d, s) in enumerate(o)} for o in orbit]
    fwd = [[d % 2 == 0 for d, _ in o] for o in orbit]
    path_edges = {}
    for j, (e, _) in enumerate(path_steps):
        path_edges[(frozenset((path_nodes[j], path_nodes[j + 1])), e)] = j
    k = len(closed_steps)
    shared = []
    for j, (e, _) in enumerate(closed_steps):
        key = (frozenset((closed_nodes[j], closed_nodes[(j + 1) % k])), e)
        if key in path_edges:
            shared.append(j)
    path_chord = {}
    for j, node in enumerate(path_nodes):
        a_in = path_start if j == 0 else (path_steps[j - 1][0], -path_steps[j - 1][1])
        a_out = path_end if j == len(path_nodes) - 1 else path_steps[j]
        path_chord[node] = (a_in, a_out)

    def coord(node, el, part, on_path):
        cell = node % nc
        p = pos[cell][el]
        if on_path or part is None:
            return p + 0.5
        first = (part == 0) == fwd[cell][p]
        return p + (0.25 if first else 0.75)

    def inside(x, lo, hi, n):
        return 0 < (x - lo) % n < (hi - lo) % n

    best = None
    for mask in range(1 << len(shared)):
        part = {j: (mask >> i) & 1 for i, j in enumerate(shared)}
        total = 0
        for j in range(k):
            node = closed_nodes[j]
            if node not in path_chord:
                continue
            cell = node % nc
            n = len(orbit[cell])
            jin = (j - 1) % k
            g_in = (closed_steps[jin][0], -closed_steps[jin][1])
            g_out = closed_steps[j]
            q1 = coord(node, g_in, part.get(jin), False)
            q2 = coord(node, g_out, part.get(j), False)
            a_in, a_out = path_chord[node]
            p1 = coord(node, a_in, None, True)
            p2 = coord(node, a_out, None, True)
            if inside(q1, p1, p2, n) != inside(q2, p1, p2, n):
                total += 1
        if best is None or total < best:
            best = total
    return best


def unrolled_path_oracle(arcs, word, start_face, end_face) -> tuple[int, int]:
    """(length, arc crossings) of the best path in the explicitly unrolled region.

    The region is a chain of disk copies, one per letter of the freely
    reduced word, rebuilt here from the arrangement; the search is a plain
    Dijkstra on (length, crossings) tuples.
    """
    reduced = []
    for k, sg in word:
        if reduced and reduced[-1] == (k, -sg):
            reduced.pop()
        else:
            reduced.append((k, sg))
    m = arcs.arrangement.map
    fd = m.faces()
    holes = set(arcs.arrangement.boundary_terminals)
    adj = {}
    n = len(reduced) + 1
    for e in range(m.ne):
        a, b = fd.side_face[(e, 1)], fd.side_face[(e, -1)]
        if a in holes or b in holes:
            continue
        if m.kind[e] == "G":
            w = arcs.base.iweights[m.label[e]]
            for c in range(n):
                adj.setdefault((c, a), []).append(((c, b), (w, 0)))
                adj.setdefault((c, b), []).append(((c, a), (w, 0)))
        elif m.kind[e] == "K":
            k, _, phi = arcs.piece_info[e]
            left, right = fd.side_face[(e, phi)], fd.side_face[(e, -phi)]
            for c, (kk, sg) in enumerate(reduced):
                if kk != k:
                    continue
                x, y = ((c, left), (c + 1, right)) if sg == 1 else ((c, right), (c + 1, left))
                adj.setdefault(x, []).append((y, (0, 1)))
                adj.setdefault(y, []).append((x, (0, 1)))
    src, dst = (0, start_face), (n - 1, end_face)
    dist = {src: (0, 0)}
    heap = [((0, 0), src)]
    done = set()
    while heap:
        d, u = heapq.heappop(heap)
        if u in done:
            continue
        done.add(u)
        if u == dst:
            return d
        for v, (w, kc) in adj.get(u, ()):
            nd = (d[0] + w, d[1] + kc)
            if v not in dist or nd < dist[v]:
                dist[v] = nd
                heapq.heappush(heap, (nd, v))
    raise ValueError("end face unreachable")


def random_dual_walk(arcs, rng, steps: int):
    """A random walk through the arrangement cells as (faces, crossings)."""
    cell = rng.randrange(arcs.n_cells)
    faces = [arcs.cells[cell]]
    crossings = []
    for _ in range(steps):
        opts = [(nb, e, sd) for nb, _, e, sd in arcs.gnbrs[cell]]
        opts += [(nb, e, sd) for _, _, nb, e, sd in arcs.doors[cell]]
        if not opts:
            break
        cell, e, sd = opts[rng.randrange(len(opts))]
        faces.append(arcs.cells[cell])
        crossings.append((e, sd))
    return tuple(faces), tuple(crossings)


def brute_steiner(n_vertices: int, edges, terminals) -> int | None:
    """Minimum Steiner tree weight: best spanning tree over every vertex superset of the terminals."""
    terms = set(terminals)
    others = [v for v in range(n_vertices) if v not in terms]
    best = None
    for mask in range(1 << len(others)):
        keep = terms | {others[i] for i in range(len(others)) if mask >> i & 1}
        # Kruskal on the induced subgraph
        parent = {v: v for v in keep}

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        total, joined = 0, 0
        for u, v, w in sorted((e for e in edges if e[0] in keep and e[1] in keep), key=lambda e: e[2]):
            ru, rv = find(u), find(v)
            if ru != rv:
                parent[ru] = rv
                total += w
                joined += 1
        if joined == len(keep) - 1 and (best is None or total < best):
            best = total
    return best


def random_graph(rng, n: int, extra: int, weight_range=(1, 20)):
    """Connected random graph: a random spanning tree plus ``extra`` edges."""
    edges = []
    for v in range(1, n):
        edges.append((rng.randrange(v), v, rng.randint(*weight_range)))
    for _ in range(extra):
        u, v = rng.sample(range(n), 2)
        edges.append((u, v, rng.randint(*weight_range)))
    return edges
