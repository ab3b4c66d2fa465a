"""Main solver: candidates from skeleta, portals and layouts, filtered by validity."""
from __future__ import annotations

import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, islice

from .homotopy import BIG, ArcSystem, ball_region, dijkstra, greedy_system_of_arcs, inverse, reduce_word
from .skeleton import SkeletonBuilder, build_all_skeleta, place_portals
from .steiner import SteinerError, SteinerInstance, dreyfus_wagner, tree_curves
from .surface import ARC, GRAPH, DrawnCurve, carve_terminals, format_weight
from .topologies import enumerate_candidate_topologies, enumerate_cycle_layouts

log = logging.getLogger(__name__)


class SolverFailure(RuntimeError):
    """No valid candidate within the caps and the instance is too large for the oracle."""


@dataclass
class SolverConfig:
    epsilon: Fraction = Fraction(1, 2)
    kappa_init: int = 2
    kappa_cap: int = 8
    oracle_cap: int = 22
    region_depth: int = 1  # copies of the disk around the root copy holding portal lifts
    max_group: int = 4  # portal lifts per tree
    max_cycles: int = 2  # closed words per layout
    max_trees: int = 1
    tree_budget: int = 20000  # Steiner trees computed per kappa round
    topology_budget: int = 2000  # candidate topologies kept per kappa round
    family_budget: int = 200_000  # block families examined per kappa round
    word_length: int = 4  # closed words up to this length are always tried as cycles
    steiner_cap: int = 12
    c_range: int = 1
    c_p: int = 1
    jobs: int = 1

    def __post_init__(self):
        self.epsilon = Fraction(self.epsilon)
        if self.epsilon <= 0:
            raise ValueError("epsilon must be positive")
        if self.kappa_init < 1 or self.kappa_init > self.kappa_cap:
            raise ValueError("need 1 <= kappa_init <= kappa_cap")
        if self.max_group < 2:
            raise ValueError("max_group must be at least 2")


@dataclass
class MulticutSolution:
    cut_edges: list
    weight: Fraction
    epsilon: Fraction
    kappa: int | None
    stats: dict = field(default_factory=dict)
    certificate: dict | None = None

    def to_dict(self, certificate: bool = True) -> dict:
        d = {
            "weight": format_weight(self.weight),
            "cut_edges": list(self.cut_edges),
            "epsilon": format_weight(self.epsilon),
            "kappa": self.kappa,
            "stats": self.stats,
        }
        d["certificate"] = self.certificate if certificate else None
        return d


# ---------------------------------------------------------------------------
# candidates


@dataclass
class Candidate:
    trees: list  # per tree: list of DrawnCurve (one per tree edge)
    cycles: list  # DrawnCurve
    length: int  # drawn length with multiplicity, integer units
    crossed: frozenset  # G-edge numbers
    layout: tuple = ()


def _crossed(a: ArcSystem, curves) -> set:
    m = a.arrangement.map
    out = set()
    for c in curves:
        for e, _ in c.crossings:
            if m.kind[e] == GRAPH:
                out.add(m.label[e])
    return out


def _drawn_length(a: ArcSystem, curves) -> int:
    m = a.arrangement.map
    iw = a.base.iweights
    return sum(iw[m.label[e]] for c in curves for e, _ in c.crossings if m.kind[e] == GRAPH)


def assemble_candidate(a: ArcSystem, forest, cycles, layout=()) -> Candidate:
    """Union of projected trees and closed curves, with its crossed G-edge set."""
    curves = [c for tree in forest for c in tree] + list(cycles)
    return Candidate(list(forest), list(cycles), _drawn_length(a, curves), frozenset(_crossed(a, curves)), layout)


class _Separation:
    """Connectivity of G after deleting edges, against the terminal pairs."""

    def __init__(self, surface, pairs):
        m = surface.map
        self.n = m.nv
        self.ends = [m.ends(e) for e in range(m.ne)]
        vi = {str(v): i for i, v in enumerate(surface.vertex_ids)}
        self.pairs = [(vi[str(x)], vi[str(y)]) for x, y in pairs]
        self.cache: dict = {}

    def __call__(self, removed: frozenset) -> bool:
        hit = self.cache.get(removed)
        if hit is not None:
            return hit
        parent = list(range(self.n))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for e, (u, v) in enumerate(self.ends):
            if e not in removed:
                parent[find(u)] = find(v)
        ok = all(find(x) != find(y) for x, y in self.pairs)
        self.cache[removed] = ok
        return ok


def is_multicut_dual(surface, pairs, candidate) -> bool:
    """True iff deleting the G-edges crossed by the candidate separates every pair."""
    crossed = candidate.crossed if isinstance(candidate, Candidate) else frozenset(candidate)
    return _Separation(surface, pairs)(frozenset(crossed))


# ---------------------------------------------------------------------------
# layouts


def _is_power(word) -> bool:
    n = len(word)
    return any(n % d == 0 and word == word[:d] * (n // d) for d in range(1, n))


_TOPOLOGIES: dict = {}


def _topologies(a: ArcSystem, kappa: int, budget: int, effort: int):
    """Candidate topologies for an arc system, shared by systems with the same frame."""
    names: dict = {}
    frame = []
    for item in a.frame:
        if item[0] == "B":
            item = ("B", names.setdefault(item[1], len(names)))
        frame.append(item)
    key = (tuple(frame), a.twist, len(a.pieces), a.g, a.t, kappa, budget, effort)
    if key not in _TOPOLOGIES:
        spent = {"limit": effort}
        gen = enumerate_candidate_topologies(a.g, a.t, kappa, arcs=a, effort=spent)
        topos = list(islice(gen, budget))
        more = next(gen, None) is not None
        _TOPOLOGIES[key] = (topos, more or spent.get("exhausted", False))
    return _TOPOLOGIES[key]


class _Round:
    """Everything computed for one value of kappa."""

    def __init__(self, a: ArcSystem, cfg: SolverConfig, kappa: int, builder: SkeletonBuilder):
        self.a = a
        self.cfg = cfg
        self.kappa = kappa
        self.builder = builder
        self.topologies, self.truncated = _topologies(a, kappa, cfg.topology_budget, cfg.family_budget)
        self.skeleta, self.raw_skeleta = build_all_skeleta(a, cfg.epsilon, kappa, self.topologies, builder=builder)
        words = set(enumerate_cycle_layouts(a, kappa, cfg.word_length))
        for topo in self.topologies:
            words.update(topo.cycle_words())
        self.words = sorted((w for w in words if not _is_power(w)), key=lambda w: (len(w), w))
        self.region = ball_region(a, cfg.region_depth)

    def cycles(self) -> list:
        """(length, word, curve) for each closed word, shortest first."""
        out = []
        for w in self.words:
            core = self.builder.word_data(w).core
            out.append((core.length, w, core.curve))
        out.sort(key=lambda x: (x[0], len(x[1]), x[1]))
        return out

    def lift_sets(self) -> list:
        """Distinct sets of portal lifts over all skeleta, with a skeleton index each."""
        a, r = self.a, self.region
        seen = {}
        for si, sk in enumerate(self.skeleta):
            ps = place_portals(sk, self.cfg.epsilon, a.g, a.t, self.cfg.c_p)
            cells = sorted({a.face_cell(p.face) for p in ps.portals})
            lifts = tuple(r.node(c, cell) for c in range(len(r.copies)) for cell in cells)
            seen.setdefault(lifts, si)
        return sorted(seen.items(), key=lambda x: x[1])


class _Distances:
    """Cached single-source searches from portal lifts."""

    def __init__(self, region):
        self.region = region
        self.rows: dict = {}
        self.triples: dict = {}

    def row(self, u) -> list:
        if u not in self.rows:
            dist = dijkstra(self.region, [u])[0]
            self.rows[u] = [dist.get(v) for v in range(self.region.n_nodes)]
        return self.rows[u]

    def __call__(self, u, v) -> int | None:
        return self.row(u)[v]

    def triple(self, a, b, c) -> int:
        """Exact cost of the cheapest tree joining three lifts."""
        key = tuple(sorted((a, b, c)))
        if key not in self.triples:
            ra, rb, rc = self.row(a), self.row(b), self.row(c)
            self.triples[key] = min(
                x + y + z for x, y, z in zip(ra, rb, rc) if x is not None and y is not None and z is not None
            )
        return self.triples[key]


def _translates(region, group) -> list:
    """Deck translates of a group that still lie in the region and hold a root-copy lift."""
    n = region.n_cells
    index = {w: i for i, w in enumerate(region.copies)}
    split = [divmod(x, n) for x in group]
    out = []
    for c0 in sorted({c for c, _ in split}):
        back = inverse(region.copies[c0])
        moved = []
        for c, cell in split:
            j = index.get(reduce_word(back + region.copies[c]))
            if j is None:
                break
            moved.append(j * n + cell)
        else:
            out.append(tuple(sorted(moved)))
    return out


def _groups(lift_sets, dist: _Distances, max_group: int, bound: int | None, region):
    """Groups of portal lifts holding a root-copy lift, with a lower bound on their tree cost.

    A group must fit inside the portal lifts of one skeleton.  Groups whose
    bound reaches ``bound`` (a drawn length) are never built.
    """
    union = sorted({x for lifts, _ in lift_sets for x in lifts})
    member = {x: 0 for x in union}
    for i, (lifts, _) in enumerate(lift_sets):
        for x in lifts:
            member[x] |= 1 << i
    out = {}
    n_cells = region.n_cells
    for i, root in enumerate(union):
        if root >= n_cells:
            break  # only root-copy anchors
        stack = [((root,), i, 0, member[root])]
        while stack:
            g, last, far, sets = stack.pop()
            if len(g) >= 2:
                # translates project to the same tree; keep the smallest
                if min(_translates(region, g)) == g:
                    out[g] = far
            if len(g) == max_group:
                continue
            for j in range(last + 1, len(union)):
                x = union[j]
                common = sets & member[x]
                if not common:
                    continue
                ds = [dist(y, x) for y in g]
                if None in ds:
                    continue
                # a tree is at least as long as the one joining any three of its lifts
                tri = [dist.triple(g[p], g[q], x) for p, q in combinations(range(len(g)), 2)]
                f = max([far] + ds + tri)
                if bound is not None and f // BIG >= bound:
                    continue
                stack.append((g + (x,), j, f, common))
    return sorted(out.items(), key=lambda kv: (kv[1], len(kv[0]), kv[0]))


_POOL_CONTEXT: dict = {}


def _tree_job(group):
    ctx = _POOL_CONTEXT
    try:
        inst = SteinerInstance.from_region(ctx["region"], list(group), ctx["tables"])
        return dreyfus_wagner(inst, ctx["cap"])
    except SteinerError:
        return None


_BATCH = 64


# ---------------------------------------------------------------------------
# the search


class _Search:
    def __init__(self, inst, a: ArcSystem, cfg: SolverConfig):
        self.inst = inst
        self.a = a
        self.cfg = cfg
        self.sep = _Separation(inst.surface, inst.pairs)
        self.best = None  # (weight, length, sorted ids, candidate)
        self.best_length = None
        self.n_candidates = 0
        self.n_valid = 0
        self.n_layouts = 0
        self.groups_total = 0
        self._single: dict = {}

    def offer(self, cand: Candidate) -> None:
        self.n_layouts += 1
        if cand.crossed in self.sep.cache:
            return  # already judged; an identical cut cannot improve the choice
        self.n_candidates += 1
        if not self.sep(cand.crossed):
            return
        self.n_valid += 1
        iw = self.a.base.iweights
        key = (sum(iw[e] for e in cand.crossed), cand.length, tuple(sorted(cand.crossed)))
        if self.best is None or key < self.best[:3]:
            self.best = key + (cand,)
        if self.best_length is None or cand.length < self.best_length:
            self.best_length = cand.length

    def run_round(self, rnd: _Round) -> None:
        a, cfg = self.a, self.cfg
        cycles = rnd.cycles()
        # cycle-only layouts
        cyc_sets = [()]
        for k in range(1, cfg.max_cycles + 1):
            cyc_sets += list(combinations(range(len(cycles)), k))
        cyc_sets.sort(key=lambda s: (sum(cycles[i][0] for i in s), s))
        for s in cyc_sets[1:]:
            if self.best_length is not None and sum(cycles[i][0] for i in s) > self.best_length:
                break
            self.offer(assemble_candidate(a, [], [cycles[i][2] for i in s], ("cycles",) + tuple(cycles[i][1] for i in s)))
        cyc_len = [sum(cycles[i][0] for i in s) for s in cyc_sets]
        # layouts with one tree
        dist = _Distances(rnd.region)
        groups = _groups(rnd.lift_sets(), dist, cfg.max_group, self.best_length, rnd.region)
        budget = cfg.tree_budget
        pos = 0
        pool = None
        if cfg.jobs > 1:
            _POOL_CONTEXT.update(region=rnd.region, cap=cfg.steiner_cap, tables={})
            pool = ProcessPoolExecutor(cfg.jobs)
        try:
            while pos < len(groups) and budget > 0:
                # fixed batches, so the worker count never changes what is searched
                chunk = []
                while pos < len(groups) and len(chunk) < _BATCH and budget > 0:
                    grp, far = groups[pos]
                    if self.best_length is not None and far // BIG >= self.best_length:
                        pos = len(groups)
                        break
                    pos += 1
                    chunk.append((grp, far))
                    budget -= 1
                trees = self._trees(rnd.region, [g for g, _ in chunk], pool)
                for (grp, far), tree in zip(chunk, trees):
                    if tree is None or (self.best_length is not None and far // BIG >= self.best_length):
                        continue
                    tlen = tree.cost // BIG
                    curves = tree_curves(rnd.region, tree)
                    for s, cl in zip(cyc_sets, cyc_len):
                        if self.best_length is not None and tlen + cl > self.best_length:
                            break
                        layout = ("tree", grp) + tuple(cycles[i][1] for i in s)
                        self.offer(assemble_candidate(a, [curves], [cycles[i][2] for i in s], layout))
        finally:
            if pool is not None:
                pool.shutdown()
        self.groups_total = len(groups)

    def _trees(self, region, chunk, pool=None):
        if pool is not None:
            return list(pool.map(_tree_job, chunk, chunksize=max(1, len(chunk) // (4 * self.cfg.jobs))))
        out = []
        tables = self._single.setdefault(id(region), {})
        for grp in chunk:
            try:
                out.append(dreyfus_wagner(SteinerInstance.from_region(region, list(grp), tables), self.cfg.steiner_cap))
            except SteinerError:
                out.append(None)
        return out


def _curve_word(a: ArcSystem, c: DrawnCurve) -> list:
    """Crossing word of a drawn curve: G edges by id, arcs as k<index><sign>."""
    m = a.arrangement.map
    out = []
    for e, sd in c.crossings:
        if m.kind[e] == GRAPH:
            out.append(str(a.base.edge_ids[m.label[e]]))
        elif m.kind[e] == ARC:
            k, sg = a.letter_of_crossing(e, sd)
            out.append(f"k{k}{'+' if sg > 0 else '-'}")
    return out


def certificate(a: ArcSystem, cand: Candidate) -> dict:
    return {
        "trees": [[_curve_word(a, c) for c in tree] for tree in cand.trees],
        "cycles": [_curve_word(a, c) for c in cand.cycles],
    }


def certificate_edges(cert: dict) -> set:
    """Edge ids named by a certificate's crossing words."""
    out = set()
    words = [w for tree in cert["trees"] for w in tree] + list(cert["cycles"])
    for w in words:
        for tok in w:
            if not (tok.startswith("k") and tok[-1] in "+-" and tok[1:-1].isdigit()):
                out.add(tok)
    return out


def solve(inst, epsilon=Fraction(1, 2), config: SolverConfig | None = None) -> MulticutSolution:
    cfg = config or SolverConfig(epsilon=epsilon)
    cfg.epsilon = Fraction(cfg.epsilon)
    if not inst.pairs:
        raise ValueError("instance has no terminal pairs")
    surface = inst.surface
    sep = _Separation(surface, inst.pairs)
    stats = {"topologies": 0, "skeleta": 0, "layouts": 0, "candidates": 0, "valid": 0}
    if sep(frozenset()):
        return MulticutSolution([], Fraction(0), cfg.epsilon, None, stats, {"trees": [], "cycles": []})

    carved = carve_terminals(surface, inst.terminals)
    a = greedy_system_of_arcs(carved)
    search = _Search(inst, a, cfg)
    builder = SkeletonBuilder(a, cfg.epsilon, cfg.c_range)
    kappa = cfg.kappa_init
    rounds = []
    while kappa <= cfg.kappa_cap:
        try:
            rnd = _Round(a, cfg, kappa, builder)
        except NotImplementedError as exc:
            log.warning("no candidate topologies for g=%d t=%d: %s", a.g, a.t, exc)
            break
        stats["topologies"] += len(rnd.topologies)
        stats["skeleta"] += len(rnd.skeleta)
        search.run_round(rnd)
        rounds.append({"kappa": kappa, "topologies_truncated": rnd.truncated, "skeleta_raw": rnd.raw_skeleta,
                       "words": len(rnd.words), "groups": search.groups_total})
        if search.best is not None:
            break
        log.info("no valid candidate at kappa=%d; escalating", kappa)
        kappa *= 2
    stats.update(layouts=search.n_layouts, candidates=search.n_candidates, valid=search.n_valid, rounds=rounds)
    if search.best is not None:
        cand = search.best[3]
        ids = [surface.edge_ids[e] for e in sorted(cand.crossed)]
        weight = sum((surface.weights[e] for e in cand.crossed), Fraction(0))
        log.info("solved at kappa=%d weight=%s", kappa, format_weight(weight))
        cert = certificate(a, cand)
        return MulticutSolution(ids, weight, cfg.epsilon, kappa, stats, cert)
    if len(surface.edge_ids) <= cfg.oracle_cap:
        from .oracle import exact_multicut

        weight, ids = exact_multicut(inst, cfg.oracle_cap)
        stats["fallback"] = "exact"
        return MulticutSolution(list(ids), weight, cfg.epsilon, None, stats, None)
    raise SolverFailure(f"no valid candidate up to kappa={cfg.kappa_cap} and {len(surface.edge_ids)} edges "
                        f"exceed the oracle cap of {cfg.oracle_cap}")
