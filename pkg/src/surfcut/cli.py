"""Command-line entry point: solve, exact, validate, gen, skeleta, trace."""
from __future__ import annotations

import argparse
import json
import logging
import sys
import time
from fractions import Fraction

from . import oracle
from .homotopy import greedy_system_of_arcs
from .skeleton import build_all_skeleta, place_portals
from .solver import SolverConfig, SolverFailure, solve
from .surface import SurfaceError, carve_terminals, format_weight

log = logging.getLogger("surfcut")

EXIT_OK, EXIT_INPUT, EXIT_FAILED = 0, 1, 2


class InputError(Exception):
    pass


def _read_text(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        with open(path) as fh:
            return fh.read()
    except OSError as exc:
        raise InputError(str(exc)) from exc


def _load(path: str) -> oracle.Instance:
    try:
        return oracle.load_instance(_read_text(path))
    except (ValueError, KeyError, TypeError, SurfaceError) as exc:
        raise InputError(f"bad instance: {exc}") from exc


def _epsilon(text: str) -> Fraction:
    try:
        eps = Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}")
    if eps <= 0:
        raise argparse.ArgumentTypeError("epsilon must be positive")
    return eps


def _config(args) -> SolverConfig:
    try:
        return SolverConfig(
            epsilon=args.epsilon,
            kappa_init=args.kappa_init,
            kappa_cap=args.kappa_cap,
            oracle_cap=args.oracle_cap,
            jobs=args.jobs,
        )
    except ValueError as exc:
        raise InputError(str(exc)) from exc


def _emit(obj) -> None:
    sys.stdout.write(json.dumps(obj, indent=1, sort_keys=False) + "\n")


# ---------------------------------------------------------------------------
# subcommands


def cmd_solve(args) -> int:
    inst = _load(args.instance)
    if not inst.pairs:
        raise InputError("instance has no terminal pairs")
    sol = solve(inst, config=_config(args))
    _emit(sol.to_dict(certificate=args.certificate))
    return EXIT_OK


def cmd_exact(args) -> int:
    inst = _load(args.instance)
    try:
        weight, ids = oracle.exact_multicut(inst, args.oracle_cap)
    except oracle.TooLarge as exc:
        log.error("%s", exc)
        return EXIT_FAILED
    _emit({"weight": format_weight(weight), "cut_edges": list(ids)})
    return EXIT_OK


def cmd_validate(args) -> int:
    inst = _load(args.instance)
    try:
        cut = json.loads(_read_text(args.cut))
    except json.JSONDecodeError as exc:
        raise InputError(f"bad cut: {exc}") from exc
    if isinstance(cut, dict):
        cut = cut.get("cut_edges")
    if not isinstance(cut, list):
        raise InputError("cut must be a list of edge ids or an object with cut_edges")
    try:
        ok = oracle.validate_multicut(inst, cut)
    except KeyError as exc:
        raise InputError(str(exc.args[0])) from exc
    _emit({"valid": ok})
    return EXIT_OK


def cmd_gen(args) -> int:
    try:
        if args.kind == "planar":
            inst = oracle.random_planar_instance(
                args.seed, args.vertices, args.terminals, args.pair_density,
                (args.min_weight, args.max_weight), args.max_edges,
            )
        elif args.kind == "torus":
            inst = oracle.torus_grid_instance(args.rows, args.cols, args.seed)
        else:
            inst = oracle.projective_wheel_instance(args.rim, args.seed)
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    sys.stdout.write(inst.to_json())
    return EXIT_OK


def _curve_json(a, c) -> dict:
    from .solver import _curve_word

    return {"crossings": _curve_word(a, c), "closed": c.closed}


def cmd_skeleta(args) -> int:
    inst = _load(args.instance)
    cfg = _config(args)
    a = greedy_system_of_arcs(carve_terminals(inst.surface, inst.terminals))
    skeleta, raw = build_all_skeleta(a, cfg.epsilon, cfg.kappa_init)
    out = []
    for i, sk in enumerate(skeleta):
        ps = place_portals(sk, cfg.epsilon, a.g, a.t, cfg.c_p)
        out.append({
            "id": i,
            "topology": sk.topology,
            "ranges": list(sk.ranges),
            "length": format_weight(a.weight(sk.length)),
            "portals": len(ps.portals),
            "edges": [
                dict(_curve_json(a, e.curve), role=e.role, length=format_weight(a.weight(e.length)))
                for e in sk.edges
            ],
        })
    _emit({"g": a.g, "t": a.t, "kappa": cfg.kappa_init, "built": raw, "skeleta": out})
    return EXIT_OK


def cmd_trace(args) -> int:
    inst = _load(args.instance)
    if not inst.pairs:
        raise InputError("instance has no terminal pairs")
    cfg = _config(args)
    t0 = time.perf_counter()
    carved = carve_terminals(inst.surface, inst.terminals)
    a = greedy_system_of_arcs(carved)
    t_arcs = time.perf_counter() - t0
    sol = solve(inst, config=cfg)
    t_total = time.perf_counter() - t0
    _emit({
        "vertices": len(inst.surface.vertex_ids),
        "edges": len(inst.surface.edge_ids),
        "g": a.g,
        "t": a.t,
        "arcs": len(a.arcs),
        "cells": a.n_cells,
        "arc_seconds": round(t_arcs, 3),
        "total_seconds": round(t_total, 3),
        "kappa": sol.kappa,
        "weight": format_weight(sol.weight),
        "stats": sol.stats,
    })
    return EXIT_OK


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="surfcut", description="Multicuts of graphs embedded on surfaces.")
    p.add_argument("-v", "--verbose", action="count", default=0, help="diagnostics on stderr")
    sub = p.add_subparsers(dest="command", required=True)

    def solver_flags(sp):
        sp.add_argument("--epsilon", type=_epsilon, default=Fraction(1, 2))
        sp.add_argument("--kappa-init", type=int, default=2)
        sp.add_argument("--kappa-cap", type=int, default=8)
        sp.add_argument("--oracle-cap", type=int, default=22)
        sp.add_argument("--seed", type=int, default=0, help="accepted for symmetry; solving is deterministic")
        sp.add_argument("--jobs", type=int, default=1)

    sp = sub.add_parser("solve", help="approximate minimum multicut")
    sp.add_argument("instance", nargs="?", default="-")
    solver_flags(sp)
    sp.add_argument("--certificate", action="store_true", help="include the drawn dual's crossing words")
    sp.set_defaults(func=cmd_solve)

    sp = sub.add_parser("exact", help="exact minimum multicut by branch and bound")
    sp.add_argument("instance", nargs="?", default="-")
    sp.add_argument("--oracle-cap", type=int, default=22)
    sp.set_defaults(func=cmd_exact)

    sp = sub.add_parser("validate", help="check that a cut separates every pair")
    sp.add_argument("instance")
    sp.add_argument("cut", nargs="?", default="-", help="JSON list of edge ids, or a solve/exact result")
    sp.set_defaults(func=cmd_validate)

    sp = sub.add_parser("gen", help="generate an instance")
    sp.add_argument("--kind", choices=("planar", "torus", "projective"), default="planar")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--vertices", type=int, default=10)
    sp.add_argument("--terminals", type=int, default=3)
    sp.add_argument("--pair-density", type=float, default=1.0)
    sp.add_argument("--min-weight", type=int, default=1)
    sp.add_argument("--max-weight", type=int, default=16)
    sp.add_argument("--max-edges", type=int, default=20)
    sp.add_argument("--rows", type=int, default=3)
    sp.add_argument("--cols", type=int, default=3)
    sp.add_argument("--rim", type=int, default=3)
    sp.set_defaults(func=cmd_gen)

    sp = sub.add_parser("skeleta", help="dump every skeleton as JSON")
    sp.add_argument("instance", nargs="?", default="-")
    solver_flags(sp)
    sp.set_defaults(func=cmd_skeleta)

    sp = sub.add_parser("trace", help="per-stage statistics of a solve run")
    sp.add_argument("instance", nargs="?", default="-")
    solver_flags(sp)
    sp.set_defaults(func=cmd_trace)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    logging.basicConfig(
        level=logging.WARNING - 10 * min(args.verbose, 2),
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )
    try:
        return args.func(args)
    except InputError as exc:
        log.error("%s", exc)
        return EXIT_INPUT
    except SolverFailure as exc:
        log.error("%s", exc)
        return EXIT_FAILED


if __name__ == "__main__":
    sys.exit(main())
