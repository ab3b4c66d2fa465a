"""Dreyfus-Wagner Steiner trees, used in the dual graphs of cover regions."""
from __future__ import annotations

import heapq
from itertools import combinations
from dataclasses import dataclass
from typing import Callable, Hashable, Iterable, Sequence

from .homotopy import BIG, CoverRegion, project
from .surface import DrawnCurve


class SteinerError(ValueError):
    pass


@dataclass
class SteinerInstance:
    """A graph given by a neighbour function, plus terminals.

    ``neighbors(u)`` yields ``(v, cost, edge label)``; costs are nonnegative
    integers (packed lengths in region searches).
    """

    neighbors: Callable[[Hashable], Iterable[tuple]]
    terminals: Sequence
    single: dict | None = None  # optional cache of subset tables, see dreyfus_wagner

    @classmethod
    def from_edges(cls, edges, terminals) -> "SteinerInstance":
        adj: dict = {}
        for u, v, c, *rest in edges:
            lab = rest[0] if rest else (u, v)
            adj.setdefault(u, []).append((v, c, lab))
            adj.setdefault(v, []).append((u, c, lab))
        return cls(lambda x: adj.get(x, ()), list(terminals))

    @classmethod
    def from_region(cls, region: CoverRegion, terminals, single: dict | None = None) -> "SteinerInstance":
        adj = region_adjacency(region)
        return cls(adj.__getitem__, list(terminals), single)


def region_adjacency(region: CoverRegion) -> list:
    """Neighbour lists of every region node, computed once per region."""
    adj = getattr(region, "_adjacency", None)
    if adj is None:
        adj = [
            [(v, c, (e, sd)) for v, c, _, e, sd in region.neighbors(u)]
            for u in range(region.n_nodes)
        ]
        region._adjacency = adj
    return adj


@dataclass
class SteinerTree:
    cost: int
    edges: list  # (u, v, label), u the endpoint nearer the root terminal
    nodes: set


def _grow(inst: SteinerInstance, start: dict):
    """Multi-source Dijkstra from initial labels; returns (dist, parent)."""
    dist = {}
    parent = {}
    # ties are broken by push order, which depends only on the graph
    heap = [(c, i, v, None) for i, (v, c) in enumerate(sorted(start.items(), key=lambda x: (x[1], repr(x[0]))))]
    heapq.heapify(heap)
    seq = len(heap)
    nb = inst.neighbors
    while heap:
        d, _, u, via = heapq.heappop(heap)
        if u in dist:
            continue
        dist[u] = d
        parent[u] = via
        for v, c, lab in nb(u):
            if v not in dist:
                seq += 1
                heapq.heappush(heap, (d + c, seq, v, (u, lab)))
    return dist, parent


def dreyfus_wagner(inst: SteinerInstance, cap: int = 12) -> SteinerTree:
    """Minimum Steiner tree by dynamic programming over terminal subsets.

    ``table(S)[v]`` is the cheapest tree joining the terminals in S and v.
    Each subset first merges two complementary sub-trees at a common node,
    then spreads those labels with one multi-source shortest-path run.
    Tables only depend on their subset, so ``inst.single`` may share them
    between instances over the same graph.
    """
    terms = list(dict.fromkeys(inst.terminals))
    if len(terms) > cap:
        raise SteinerError(f"{len(terms)} terminals exceed the cap of {cap}")
    if not terms:
        raise SteinerError("no terminals")
    if len(terms) == 1:
        return SteinerTree(0, [], {terms[0]})
    root, rest = terms[0], terms[1:]
    tables = inst.single if inst.single is not None else {}

    def table(members: frozenset):
        hit = tables.get(members)
        if hit is not None:
            return hit
        if len(members) == 1:
            (t,) = members
            dist, parent = _grow(inst, {t: 0})
            tables[members] = (dist, {}, parent)
            return tables[members]
        order = sorted(members, key=repr)
        first, others = order[0], order[1:]
        merged, choice = {}, {}
        # every split once: the part holding the first member, smallest parts first
        for size in range(0, len(others)):
            for extra in combinations(others, size):
                sub = frozenset((first,) + extra)
                a, b = table(sub)[0], table(members - sub)[0]
                small, large = (a, b) if len(a) <= len(b) else (b, a)
                for v, c in small.items():
                    c2 = large.get(v)
                    if c2 is None:
                        continue
                    tot = c + c2
                    if v not in merged or tot < merged[v]:
                        merged[v] = tot
                        choice[v] = sub
        dist, parent = _grow(inst, merged)
        tables[members] = (dist, choice, parent)
        return tables[members]

    full = frozenset(rest)
    best = table(full)[0]
    if root not in best:
        raise SteinerError("terminals are not connected")
    edges = []
    nodes = set()

    def build(members, v):
        _, choice, parent = tables[members]
        while True:
            nodes.add(v)
            via = parent.get(v)
            if via is None:
                break
            u, lab = via
            edges.append((u, v, lab))
            v = u
        if v in choice:
            sub = choice[v]
            build(sub, v)
            build(members - sub, v)

    build(full, root)
    return SteinerTree(best[root], edges, nodes)


def tree_curves(region: CoverRegion, tree: SteinerTree) -> list[DrawnCurve]:
    """Project a region tree to the surface, one drawn curve per tree edge."""
    out = []
    for u, v, (e, sd) in tree.edges:
        # the search stored the edge as crossed from u towards v
        out.append(project(region, [u, v], [(e, sd)]))
    return out


def steiner_forest_for_layout(region: CoverRegion, groups, cap: int = 12) -> list[SteinerTree]:
    """One optimal Steiner tree per group of region nodes (portal lifts)."""
    trees = []
    for group in groups:
        if len(group) < 2:
            raise SteinerError("a tree needs at least two lifts")
        trees.append(dreyfus_wagner(SteinerInstance.from_region(region, group), cap))
    return trees


def tree_length(tree: SteinerTree) -> int:
    return tree.cost // BIG
