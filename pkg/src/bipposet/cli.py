"""Command-line batch verification.

Exit status: 0 when every check passes, 1 when some check fails, 2 on usage
or precondition errors.
"""

from __future__ import annotations

import argparse
import random
import sys
import time
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path
from typing import Any, Sequence

from bipposet import __version__
from bipposet.bcfw import NotGrassmannianError, verify_corollary_bcfw
from bipposet.exactgeom import GenericityError, RationalPolytope, parse_cost
from bipposet.moves import (
    DEFAULT_MAX_CHAINS,
    ChainCapExceeded,
    detect_moves,
    lemma_sweep,
    move_graph,
    move_label,
)
from bipposet.report import Record, Report, record, skipped
from bipposet.skeleton import (
    NotALatticeError,
    OrientationError,
    PreconditionError,
    SkeletonPoset,
    build_bip_poset,
    build_generic_poset,
    check_atom_map,
    check_directionally_simple,
    check_distinct_joins,
    check_edge_lengths,
    check_hasse_property,
    check_join_equals_pseudojoin,
    check_lattice,
    check_nonrevisiting,
)
from bipposet.symgroup import Permutation, all_permutations, is_grassmannian, longest
from bipposet.topology import DEFAULT_MAX_FACES, classify_interval

COMMANDS = ("verify-structure", "verify-topology", "move-graph", "bcfw", "poset")


class UsageError(ValueError):
    pass


# subjects are plain tuples so they pickle cheaply for worker processes:
# ("w", "3412") or ("polytope", path, cost)
Subject = tuple[str, ...]


def _name(subject: Subject) -> str:
    return subject[1] if subject[0] == "w" else f"{Path(subject[1]).name}@{subject[2]}"


def _build(subject: Subject) -> SkeletonPoset:
    if subject[0] == "w":
        return build_bip_poset(Permutation.parse(subject[1]))
    Q = RationalPolytope.from_file(subject[1])
    return build_generic_poset(Q, parse_cost(subject[2]))


def _intervals(P: SkeletonPoset, opts: dict[str, Any], full_default: bool) -> list[tuple[str, str]]:
    u, v = opts.get("u"), opts.get("v")
    if u is not None or v is not None:
        u = u if u is not None else P.bottom
        v = v if v is not None else P.top
        for x in (u, v):
            if x not in P:
                raise UsageError(f"{x} is not an element of the poset")
        if not P.lt(u, v):
            raise UsageError(f"need u < v, got ({u}, {v})")
        return [(u, v)]
    if full_default and not opts.get("all_intervals"):
        return [(P.bottom, P.top)]
    return [(a, b) for a, b in P.intervals() if a != b]


def _structure(P: SkeletonPoset, name: str, opts: dict[str, Any]) -> list[Record]:
    out = []
    out.append(_check_record(name, "hasse", check_hasse_property(P)))
    lattice = check_lattice(P)
    out.append(_check_record(name, "lattice", lattice))
    ds = check_directionally_simple(P)
    out.append(record(
        name, "directionally_simple", ds.ok,
        **({} if ds.ok else {"witness": {"vertex": ds.vertex, "edges": ds.edges, "reason": ds.reason}}),
        faces=len(set(ds.faces.values())),
    ))
    if not lattice:
        for check in ("join_pseudojoin", "distinct_joins", "atom_map"):
            out.append(skipped(name, check, "not a lattice"))
    else:
        out.append(_check_record(name, "join_pseudojoin", check_join_equals_pseudojoin(P)))
        for check, fn in (("distinct_joins", check_distinct_joins), ("atom_map", check_atom_map)):
            count, bad = 0, None
            for u, v in P.intervals():
                count += 1
                res = fn(P, u, v)
                if not res:
                    bad = res.witness
                    break
            out.append(record(name, check, bad is None, intervals=count, **({"witness": bad} if bad else {})))
    count, bad = 0, None
    for F in sorted(set(ds.faces.values()), key=lambda f: (len(f), sorted(f))):
        count += 1
        res = check_nonrevisiting(P, F, trusted=True)
        if not res:
            bad = res.witness
            break
    out.append(record(name, "nonrevisiting", bad is None, faces=count, **({"witness": bad} if bad else {})))
    if P.perms is not None:
        out.append(_check_record(name, "edge_lengths", check_edge_lengths(P)))
    return out


def _check_record(name: str, check: str, res: Any) -> Record:
    return record(name, check, bool(res), **({"witness": res.witness} if res.witness else {}))


def _topology(P: SkeletonPoset, name: str, opts: dict[str, Any]) -> list[Record]:
    out = []
    Q = P.polytope
    for u, v in _intervals(P, opts, full_default=False):
        verdict = classify_interval(P, u, v, opts["max_faces"])
        geometric = Q.is_face(P.interval(u, v)) if Q is not None else None
        agree = geometric is None or geometric == verdict.face
        out.append(record(name, "topology", verdict.ok and agree, **verdict.to_json(), face_geometric=geometric))
        if verdict.betti is None:
            out.append(skipped(name, "betti", "face cap exceeded", u=u, v=v))
    return out


def _moves(P: SkeletonPoset, name: str, opts: dict[str, Any]) -> tuple[list[Record], list[str]]:
    out, dots = [], []
    for u, v in _intervals(P, opts, full_default=True):
        try:
            G = move_graph(P, u, v, opts["max_chains"])
        except ChainCapExceeded as exc:
            out.append(skipped(name, "move_graph", str(exc), u=u, v=v))
            continue
        a = len(P.atoms(u, v))
        kappa = G.vertex_connectivity() if a >= 2 and len(G) >= 2 else None
        connected = G.is_connected()
        labels: Counter[str] = Counter()
        for c in G.nodes:
            for m in detect_moves(P, c):
                labels[move_label(P, m)] += 1
        out.append(record(
            name, "move_graph", connected and (kappa is None or kappa >= a - 1),
            u=u, v=v, a=a, nodes=len(G), edges=len(G.edges), connected=connected, kappa=kappa,
            polygon_sizes={str(k): c for k, c in G.polygon_histogram().items()},
            # each flip is seen from both of its chains
            move_labels={k: c // 2 for k, c in sorted(labels.items())},
        ))
        if opts.get("dot"):
            dots.append(G.to_dot(f"moves_{u}_{v}"))
        if opts.get("replay_lemmas"):
            tally = lemma_sweep(P, u, v, opts["max_chains"])
            out.append(record(name, "lemmas", tally.ok, u=u, v=v, checked=tally.checked,
                              violations=tally.violations[:5]))
    return out, dots


def _bcfw(w: Permutation, name: str, opts: dict[str, Any]) -> list[Record]:
    try:
        r = verify_corollary_bcfw(w, opts["max_chains"])
    except ChainCapExceeded as exc:
        return [skipped(name, "bcfw", str(exc))]
    return [
        record(name, "atoms_equal_support", r.a == r.atoms, a=r.a, atoms=r.atoms),
        record(name, "move_graph_connected", r.connected, chains=r.chains,
               polygon_sizes={str(k): c for k, c in r.polygon_sizes.items()}),
        record(name, "vertex_connectivity", r.kappa_ok, kappa=r.kappa, a=r.a),
        record(name, "trip_roundtrip", not r.roundtrip_failures, chains=r.chains,
               failures=len(r.roundtrip_failures),
               **({"witness": r.roundtrip_failures[0]} if r.roundtrip_failures else {}),
               bridge_sequences=r.bridge_sequences),
    ]


def run_subject(command: str, subject: Subject, opts: dict[str, Any]) -> tuple[list[Record], list[str]]:
    name = _name(subject)
    if command == "bcfw":
        return _bcfw(Permutation.parse(subject[1]), name, opts), []
    P = _build(subject)
    if command == "verify-structure":
        return _structure(P, name, opts), []
    if command == "verify-topology":
        return _topology(P, name, opts), []
    if command == "move-graph":
        return _moves(P, name, opts)
    return [record(name, "poset", True, poset=P.to_json(tables=opts.get("tables", False)))], []


def _subjects(args: argparse.Namespace) -> list[Subject]:
    if args.vertices:
        if not args.cost:
            raise UsageError("--vertices needs --cost")
        return [("polytope", args.vertices, args.cost)]
    ws: list[Permutation] = [Permutation.parse(w) for w in args.w or []]
    if args.permutahedron:
        ws.append(longest(args.permutahedron))
    if args.n:
        pool = all_permutations(args.n)
        if args.all_grassmannian or args.command == "bcfw":
            pool = [w for w in pool if is_grassmannian(w)]
        if args.sample:
            rng = random.Random(args.seed)
            pool = sorted(rng.sample(pool, min(args.sample, len(pool))))
        ws.extend(pool)
    if not ws:
        raise UsageError("give --w, --n, --permutahedron or --vertices/--cost")
    seen = []
    for w in ws:
        if w not in seen:
            seen.append(w)
    if args.command == "bcfw":
        bad = [str(w) for w in seen if not is_grassmannian(w)]
        if bad:
            raise NotGrassmannianError(f"not Grassmannian: {', '.join(bad)}")
    return [("w", str(w)) for w in seen]


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="bipposet", description="Verify 1-skeleton posets of Bruhat interval polytopes.")
    p.add_argument("command", choices=COMMANDS)
    scope = p.add_argument_group("scope")
    scope.add_argument("--n", type=int, help="all permutations of size n")
    scope.add_argument("--w", action="append", help="a permutation such as 3412 (repeatable)")
    scope.add_argument("--permutahedron", type=int, metavar="N", help="the longest element of S_N")
    scope.add_argument("--all-grassmannian", action="store_true", help="restrict --n to Grassmannian permutations")
    scope.add_argument("--sample", type=int, metavar="K", help="random sample of K permutations from --n")
    scope.add_argument("--seed", type=int, default=0)
    scope.add_argument("--vertices", help="vertex file for a generic polytope")
    scope.add_argument("--cost", help="cost vector for --vertices, e.g. 1,2,4")
    scope.add_argument("--u")
    scope.add_argument("--v")
    scope.add_argument("--all-intervals", action="store_true", help="move graphs of every interval")
    caps = p.add_argument_group("caps")
    caps.add_argument("--max-chains", type=int, default=DEFAULT_MAX_CHAINS)
    caps.add_argument("--max-faces", type=int, default=DEFAULT_MAX_FACES)
    out = p.add_argument_group("output")
    out.add_argument("--output", "-o", help="report path (default: stdout)")
    out.add_argument("--format", choices=("json", "csv"), default="json")
    out.add_argument("--dot", help="write move graphs in DOT format to this path")
    out.add_argument("--tables", action="store_true", help="include join/meet tables in poset export")
    out.add_argument("--timings", action="store_true", help="add wall-clock timings to the report")
    out.add_argument("--replay-lemmas", action="store_true", help="replay chain-walk checks on every interval")
    p.add_argument("--jobs", "-j", type=int, default=1)
    return p


def _config(args: argparse.Namespace) -> dict[str, Any]:
    keys = ("n", "w", "permutahedron", "all_grassmannian", "sample", "seed", "vertices", "cost", "u", "v",
            "all_intervals", "max_chains", "max_faces", "format", "tables", "replay_lemmas")
    return {k: getattr(args, k) for k in keys}


def _run_all(args: argparse.Namespace, subjects: list[Subject], opts: dict[str, Any]) -> list[tuple[list[Record], list[str]]]:
    if args.jobs <= 1 or len(subjects) == 1:
        return [run_subject(args.command, s, opts) for s in subjects]
    with ProcessPoolExecutor(max_workers=args.jobs) as pool:
        futures = [pool.submit(run_subject, args.command, s, opts) for s in subjects]
        return [f.result() for f in futures]


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.max_chains <= 0 or args.max_faces <= 0 or args.jobs <= 0:
        parser.error("caps and --jobs must be positive")
    opts = {
        "u": args.u, "v": args.v, "all_intervals": args.all_intervals,
        "max_chains": args.max_chains, "max_faces": args.max_faces,
        "dot": bool(args.dot), "tables": args.tables, "replay_lemmas": args.replay_lemmas,
    }
    started = time.perf_counter()
    try:
        subjects = _subjects(args)
        results = _run_all(args, subjects, opts)
    except (UsageError, PreconditionError, GenericityError, OrientationError,
            NotALatticeError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2

    report = Report(args.command, __version__, _config(args))
    dots = []
    for recs, d in results:
        report.records.extend(recs)
        dots.extend(d)
    if args.timings:
        report.timings = {"total_seconds": round(time.perf_counter() - started, 3)}
    text = report.dumps(args.format)
    if args.output:
        Path(args.output).write_text(text)
    else:
        sys.stdout.write(text)
    if args.dot:
        Path(args.dot).write_text("".join(dots))
    s = report.summary()
    print(f"{args.command}: {s['pass']} pass, {s['fail']} fail, {s['skip']} skip", file=sys.stderr)
    return 1 if report.failed else 0


if __name__ == "__main__":
    sys.exit(main())
