"""Candidate topologies of drawn graphs relative to the arcs, cycle words and layouts.

A topology is described inside the disk D obtained by cutting along the
arcs.  Each arc k is crossed ``counts[k]`` times; every crossing shows up
twice on the boundary of D, once on each side of the arc.  Inside D the graph
is a non-crossing family of small trees ("blocks") whose leaves are exactly
those boundary points:

* ``chord``  two leaves joined by a path;
* ``star``   one vertex of degree 3 or 4;
* ``h01`` / ``h12``  two degree-3 vertices on four leaves a, b, c, d, the
  first pairing {a, b} with {c, d}, the second {b, c} with {d, a}.

A block may not have all its leaves on one side of one arc, since that would
bound a bigon with the arc.
"""
from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass
from functools import lru_cache
from math import comb
from typing import Iterator, Sequence

from .homotopy import ArcSystem, canonical_cyclic, cyclic_reduce

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class Topology:
    counts: tuple  # crossings per arc
    blocks: tuple  # (kind, leaf point indices in boundary order)
    points: tuple  # (arc, side, crossing index) per boundary point
    n_vertices: int
    edges: tuple  # (u, v, word, sign); word read from u to v
    rotation: tuple  # per vertex: ((edge, end), ...) in the disk orientation
    n_faces: int
    bound: int

    @property
    def canonical(self) -> str:
        parts = [",".join(map(str, self.counts))]
        edge_txt = sorted(
            f"{u}-{v}:" + "".join(f"{k}{'+' if s > 0 else '-'}" for k, s in w) for u, v, w, _ in self.edges
        )
        parts.append(" ".join(edge_txt))
        parts.append(" ".join(f"{kind}{list(leaves)}" for kind, leaves in self.blocks))
        return " | ".join(parts)

    def degree(self, v: int) -> int:
        return len(self.rotation[v])

    def cycle_words(self) -> list:
        """Closed arc words of the graph-theoretic cycles, canonical, without repeats."""
        from .exhaustive import cycles_of

        out = []
        for c in cycles_of(self):
            w = canonical_cyclic(c.word)
            if w and w not in out:
                out.append(w)
        return out


# ---------------------------------------------------------------------------
# the boundary of the disk


def boundary_points(frame: Sequence, counts: Sequence[int]) -> tuple[list, list]:
    """Crossing points in boundary order, and the pieces/terminals between them.

    Returns ``(points, segments)``: ``points[i] = (arc, side, j)`` with j the
    1-based crossing index along the arc, and ``segments[i]`` the list of
    items met after point i and before point i+1: ``("K", arc, side, interval)``
    for a stretch of arc side between crossings ``interval`` and
    ``interval + 1``, and ``("B", terminal)``.
    """
    points = []
    stream = []  # items and points in boundary order
    for item in frame:
        if item[0] == "B":
            stream.append(("B", item[1]))
            continue
        _, k, side, dirn = item
        c = counts[k]
        iv = 0 if dirn == 1 else c
        stream.append(("K", k, side, iv))
        order = range(1, c + 1) if dirn == 1 else range(c, 0, -1)
        for j in order:
            stream.append(("P", k, side, j))
            iv += dirn
            stream.append(("K", k, side, iv))
    for x in stream:
        if x[0] == "P":
            points.append(x[1:])
    n = len(points)
    if n == 0:
        return points, [[x for x in stream]]
    segments = [[] for _ in range(n)]
    first = next(i for i, x in enumerate(stream) if x[0] == "P")
    cur = n - 1
    for x in stream[first:] + stream[:first]:
        if x[0] == "P":
            cur = (cur + 1) % n
        else:
            segments[cur].append(x)
    return points, segments


# ---------------------------------------------------------------------------
# non-crossing block families


BLOCK_KINDS = {2: ("chord",), 3: ("star",), 4: ("star", "h01", "h12")}


def block_families(labels: Sequence, max_block: int = 4) -> Iterator[tuple]:
    """Every non-crossing family of blocks covering the points once.

    ``labels[i]`` names the arc side of point i; blocks with one label only
    are skipped.
    """
    n = len(labels)
    labels = tuple(labels)

    @lru_cache(maxsize=None)
    def fam(i: int, j: int) -> tuple:
        if i >= j:
            return ((),)
        out = []
        for size in range(2, max_block + 1):
            for rest in itertools.combinations(range(i + 1, j), size - 1):
                members = (i,) + rest
                if len({labels[m] for m in members}) == 1:
                    continue
                bounds = members + (j,)
                gaps = [fam(a + 1, b) for a, b in zip(bounds, bounds[1:])]
                if any(not g for g in gaps):
                    continue
                for kind in BLOCK_KINDS[size]:
                    for combo in itertools.product(*gaps):
                        out.append(((kind, members),) + tuple(b for g in combo for b in g))
        return tuple(out)

    yield from fam(0, n)


def _regions(n: int, blocks) -> list[int]:
    """Region id of each boundary segment of the disk once the blocks are drawn.

    Segment s runs from point s to point s+1.  Blocks do not cross, so the
    region of a segment is the gap of the innermost block around it.
    """
    owner = [None] * n
    for b in sorted(range(len(blocks)), key=lambda i: blocks[i][1][0] - blocks[i][1][-1]):
        leaves = blocks[b][1]
        for idx in range(len(leaves) - 1):
            for s in range(leaves[idx], leaves[idx + 1]):
                owner[s] = (b, idx)
    ids = {}
    return [ids.setdefault(o, len(ids)) for o in owner]


def face_count(points, segments, blocks) -> tuple[int, bool]:
    """(faces of the drawn graph on the surface, whether each has a terminal)."""
    n = len(points)
    reg = _regions(n, blocks)
    parent = list(range(max(reg) + 1))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    piece_region = {}
    has_b = set()
    for s, items in enumerate(segments):
        for it in items:
            if it[0] == "B":
                has_b.add(reg[s])
            else:
                _, k, side, iv = it
                other = piece_region.get((k, 1 - side, iv))
                if other is not None:
                    parent[find(reg[s])] = find(other)
                piece_region[(k, side, iv)] = reg[s]
    roots = {find(r) for r in range(len(parent))}
    with_b = {find(r) for r in has_b}
    return len(roots), roots == with_b


def build_graph(points, blocks, twist):
    """Trace the drawn graph: (n_vertices, edges, rotation)."""
    partner = {}
    index = {p: i for i, p in enumerate(points)}
    for i, (k, side, j) in enumerate(points):
        partner[i] = index[(k, 1 - side, j)]
    # link[x] for a point: what its block attaches it to, ("p", point) or ("v", vertex, slot)
    link = {}
    rotation = []
    edges = []
    for kind, leaves in blocks:
        if kind == "chord":
            a, b = leaves
            link[a] = ("p", b)
            link[b] = ("p", a)
        elif kind == "star":
            v = len(rotation)
            rotation.append([None] * len(leaves))
            for slot, p in enumerate(leaves):
                link[p] = ("v", v, slot)
        else:
            a, b, c, d = leaves
            x, y = len(rotation), len(rotation) + 1
            rotation += [[None] * 3, [None] * 3]
            first, second = ((a, b), (c, d)) if kind == "h01" else ((b, c), (d, a))
            for slot, p in enumerate(first):
                link[p] = ("v", x, slot)
            for slot, p in enumerate(second):
                link[p] = ("v", y, slot)
            # the middle edge of an H stays inside the disk
            rotation[x][2] = (len(edges), 0)
            rotation[y][2] = (len(edges), 1)
            edges.append((x, y, (), 1))

    def walk(p):
        """Follow the graph from boundary point p (entered from inside D) to a vertex."""
        word = []
        sign = 1
        seen = set()
        while True:
            k, side, _ = points[p]
            word.append((k, 1 if side == 0 else -1))
            sign *= twist[k]
            q = partner[p]
            seen.add(p)
            seen.add(q)
            nxt = link[q]
            if nxt[0] == "v":
                return tuple(word), sign, nxt, seen
            p = nxt[1]
            if p in seen:
                return tuple(word), sign, None, seen

    used = set()
    for v in range(len(rotation)):
        for slot in range(len(rotation[v])):
            if rotation[v][slot] is not None:
                continue
            p = next(q for q, l in link.items() if l == ("v", v, slot))
            word, sign, end, seen = walk(p)
            used |= seen
            _, w, wslot = end
            e = len(edges)
            edges.append((v, w, word, sign))
            rotation[v][slot] = (e, 0)
            rotation[w][wslot] = (e, 1)
    # closed curves through chords only get a vertex of degree two
    for p in range(len(points)):
        if p in used:
            continue
        word, sign, end, seen = walk(p)
        used |= seen
        v = len(rotation)
        e = len(edges)
        edges.append((v, v, word, sign))
        rotation.append([(e, 0), (e, 1)])
    return len(rotation), tuple(edges), tuple(tuple(r) for r in rotation)


# ---------------------------------------------------------------------------
# enumeration


def _count_vectors(n_arcs: int, per_arc: int, total: int):
    """Crossing counts per arc, fewest crossings first."""
    vecs = [c for c in itertools.product(range(per_arc + 1), repeat=n_arcs) if 0 < sum(c) <= total]
    vecs.sort(key=lambda c: (sum(c), c))
    yield from vecs


def enumerate_for_frame(frame, twist, n_arcs: int, bound: int, total: int | None = None,
                        effort: dict | None = None) -> Iterator[Topology]:
    """Topologies with at most ``bound`` vertices, edges and crossings per arc.

    ``total`` additionally caps the crossings summed over all arcs (default
    ``bound``).  With ``effort = {"limit": n}`` the stream stops after n block
    families have been examined and sets ``effort["exhausted"]``.
    """
    total = bound if total is None else total
    limit = effort.get("limit") if effort is not None else None
    examined = 0
    for counts in _count_vectors(n_arcs, bound, total):
        points, segments = boundary_points(frame, counts)
        labels = [(k, side) for k, side, _ in points]
        for blocks in block_families(labels):
            examined += 1
            if effort is not None:
                effort["examined"] = examined
                if limit is not None and examined > limit:
                    effort["exhausted"] = True
                    return
            nf, ok = face_count(points, segments, blocks)
            if not ok:
                continue
            nv, edges, rotation = build_graph(points, blocks, twist)
            if nv > bound or len(edges) > bound:
                continue
            yield Topology(tuple(counts), blocks, tuple(points), nv, edges, rotation, nf, bound)


_MODEL_CACHE: dict = {}


def model_arc_system(g: int, t: int) -> ArcSystem:
    """Arcs of a fixed reference surface with Euler genus g and t terminals."""
    key = (g, t)
    if key not in _MODEL_CACHE:
        from . import oracle
        from .homotopy import greedy_system_of_arcs
        from .surface import carve_terminals

        if g == 0:
            inst = oracle.star_instance(tuple(range(1, t + 1)))
        elif g == 1:
            rim = max(3, t)
            names = ["h"] + [f"r{i}" for i in range(t - 1)]
            inst = oracle.projective_wheel_instance(rim, terminals=names[:t], pairs=[names[:2]] if t > 1 else [])
        elif g == 2:
            names = [f"v{i}_{i}" for i in range(t)]
            size = max(3, t)
            inst = oracle.torus_grid_instance(size, size, terminals=names, pairs=[names[:2]] if t > 1 else [])
        else:
            raise NotImplementedError("reference surfaces exist for Euler genus 0, 1 and 2")
        _MODEL_CACHE[key] = greedy_system_of_arcs(carve_terminals(inst.surface, inst.terminals))
    return _MODEL_CACHE[key]


def enumerate_candidate_topologies(g: int, t: int, kappa: int, arcs: ArcSystem | None = None,
                                   total: int | None = None, effort: dict | None = None) -> Iterator[Topology]:
    """All candidate topologies for bound multiplier kappa.

    With ``arcs`` the topologies are drawn relative to that system of arcs;
    otherwise relative to a reference surface of the same type.
    """
    if kappa < 1:
        raise ValueError("kappa must be at least 1")
    a = arcs if arcs is not None else model_arc_system(g, t)
    bound = kappa * (g + t)
    yield from enumerate_for_frame(a.frame, a.twist, len(a.pieces), bound, total, effort)


# ---------------------------------------------------------------------------
# cycle words and layouts


def enumerate_cycle_layouts(a: ArcSystem, kappa: int, max_length: int | None = None) -> Iterator[tuple]:
    """Canonical closed words with each arc used at most kappa*(g+t) times.

    Words are cyclically reduced, nonempty (so never contractible: the arcs
    cut the surface into a disk, whose fundamental group is free on them) and
    listed once up to rotation and reversal.
    """
    n_arcs = len(a.pieces)
    bound = kappa * (a.g + a.t)
    max_length = n_arcs * bound if max_length is None else max_length
    letters = [(k, s) for k in range(n_arcs) for s in (1, -1)]

    def rec(word, used):
        if word and canonical_cyclic(word) == word and cyclic_reduce(word) == word:
            yield word
        if len(word) == max_length:
            return
        for lt in letters:
            if used[lt[0]] == bound:
                continue
            if word and word[-1] == (lt[0], -lt[1]):
                continue
            used[lt[0]] += 1
            yield from rec(word + (lt,), used)
            used[lt[0]] -= 1

    yield from rec((), [0] * n_arcs)


@dataclass(frozen=True)
class Layout:
    tree_groups: tuple  # tuple of tuples of portal-lift ids
    cycle_words: tuple


def enumerate_good_layouts(lifts: Sequence, words: Sequence, max_lifts: int, max_trees: int,
                           max_cycles: int, max_group: int | None = None,
                           anchor=None) -> Iterator[Layout]:
    """Groupings of chosen portal lifts into trees, with up to ``max_cycles`` words.

    Every group has at least two lifts.  When ``anchor`` is given, each group
    must contain a lift satisfying it (used to fix one lift per group in the
    base copy of the region).
    """
    lifts = list(lifts)
    max_group = max_lifts if max_group is None else max_group

    def groups_from(start, remaining, n_left):
        if n_left == 0:
            return
        for size in range(2, min(max_group, remaining) + 1):
            for combo in itertools.combinations(range(start, len(lifts)), size):
                grp = tuple(lifts[i] for i in combo)
                if anchor is not None and not any(anchor(x) for x in grp):
                    continue
                yield combo[0], grp, size

    def forests(first_min, remaining, n_left):
        yield ()
        if n_left == 0:
            return
        for lead, grp, size in groups_from(first_min, remaining, n_left):
            for rest in forests(lead + 1, remaining - size, n_left - 1):
                if any(set(grp) & set(x) for x in rest):
                    continue
                yield (grp,) + rest

    word_sets = [()]
    for r in range(1, max_cycles + 1):
        word_sets += list(itertools.combinations(words, r))
    for forest in forests(0, max_lifts, max_trees):
        for ws in word_sets:
            if not forest and not ws:
                continue
            yield Layout(forest, ws)


def good_layout_count(n_lifts: int, n_words: int, max_group: int, max_cycles: int) -> int:
    """Closed form for at most one tree: groups times word subsets, minus the empty layout."""
    groups = 1 + sum(comb(n_lifts, s) for s in range(2, max_group + 1))
    words = sum(comb(n_words, r) for r in range(0, max_cycles + 1))
    return groups * words - 1
