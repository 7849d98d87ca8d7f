"""``share-alloc``: solve, verify, generate and benchmark sharing instances.

Exit codes: 0 yes/success, 1 no, 2 input error, 3 search refused (node cap).
Results go to standard output as one JSON object; diagnostics go to stderr.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from fractions import Fraction
from pathlib import Path

import networkx as nx

from . import reductions
from ._limits import SearchBudgetExceeded
from .envy import (
    min_envy_fpt,
    solve_ersa_auto,
    solve_ersa_bounded_shared,
    solve_ersa_fpt_agents,
    solve_ersa_identical_clique,
    solve_ersa_milp,
    solve_ersa_treewidth,
)
from .io import (
    generate_random,
    parse_decomposition,
    parse_instance,
    parse_sharing,
    serialize_instance,
    serialize_sharing,
)
from .model import InvalidSharingError, envious_agents, validate_sharing, welfare
from .oracle import max_welfare_bruteforce, min_envy_bruteforce
from .welfare_solvers import maximize_ewsa_simple, solve_ewsa_bounded_exact, solve_ewsa_simple, solve_uwsa

EXIT_YES, EXIT_NO, EXIT_INPUT, EXIT_REFUSED = 0, 1, 2, 3


class UsageError(ValueError):
    pass


def _read(path: str) -> bytes:
    try:
        return Path(path).read_bytes()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None


def _value(x) -> str | int | None:
    if x is None:
        return None
    if isinstance(x, Fraction):
        return str(x)
    return x


# --- solve ------------------------------------------------------------------


def _solve_uwsa(inst, args):
    if args.algorithm in ("auto", "matching"):
        k = args.k if args.k is not None else 0
        res = solve_uwsa(inst, args.b, k)
        return (res.answer if args.k is not None else None), res.optimum, res.witness, "matching"
    if args.algorithm == "brute":
        opt = max_welfare_bruteforce(inst, args.b, node_cap=args.node_cap)
        ans = None if args.k is None else opt.utilitarian >= args.k
        return ans, opt.utilitarian, opt.utilitarian_witness, "brute"
    raise UsageError(f"algorithm {args.algorithm} does not solve uwsa")


def _solve_ewsa(inst, args):
    if args.algorithm == "brute":
        opt = max_welfare_bruteforce(inst, args.b, node_cap=args.node_cap)
        ans = None if args.k is None else opt.egalitarian >= args.k
        return ans, opt.egalitarian, opt.egalitarian_witness, "brute"
    if args.algorithm not in ("auto", "matching"):
        raise UsageError(f"algorithm {args.algorithm} does not solve ewsa")
    if args.b == 1:
        value, wit = maximize_ewsa_simple(inst)
        if args.k is None:
            return None, value, wit, "matching"
        ok, kwit = solve_ewsa_simple(inst, args.k)
        return ok, value, kwit, "matching"
    if args.algorithm == "matching":
        raise UsageError("the matching algorithm only covers b = 1; use auto or brute")
    if args.k is None:
        raise UsageError("--k is required for ewsa with b >= 2")
    ok, wit = solve_ewsa_bounded_exact(inst, args.b, args.k, node_cap=args.node_cap)
    return ok, None, wit, "exact-search"


def _solve_ersa(inst, args):
    if args.b != 1:
        raise UsageError("ersa is defined for simple sharings; use --b 1")
    alg, k = args.algorithm, args.k
    if k is None and alg in ("auto", "bounded-shared"):
        raise UsageError(f"--k is required for --algorithm {alg}")
    if k is not None and k < 0:
        raise UsageError("--k must be non-negative")
    if alg == "auto":
        ok, wit, used = solve_ersa_auto(inst, k, node_cap=args.node_cap)
        return ok, None, wit, used
    if alg == "fpt-agents":
        if k is None:
            value, wit = min_envy_fpt(inst, node_cap=args.node_cap)
            return None, value, wit, alg
        ok, wit = solve_ersa_fpt_agents(inst, k, node_cap=args.node_cap)
        return ok, None, wit, alg
    if alg == "bounded-shared":
        s_max = args.s_max if args.s_max is not None else inst.n // 2
        ok, wit = solve_ersa_bounded_shared(inst, k, s_max, node_cap=args.node_cap)
        return ok, None, wit, alg
    if alg == "treewidth":
        dec = parse_decomposition(_read(args.decomposition)) if args.decomposition else None
        ok, value, wit = solve_ersa_treewidth(inst, dec, k)
    elif alg == "identical-clique":
        ok, value, wit = solve_ersa_identical_clique(inst, k)
    elif alg == "milp":
        ok, value, wit = solve_ersa_milp(inst, k)
    elif alg == "brute":
        value, wit = min_envy_bruteforce(inst, 1, node_cap=args.node_cap)
        ok = None if k is None else value <= k
    else:
        raise UsageError(f"algorithm {alg} does not solve ersa")
    if ok is False:
        wit = None
    return ok, value, wit, alg


def cmd_solve(args) -> int:
    inst = parse_instance(_read(args.instance))
    if args.b < 1:
        raise UsageError("--b must be at least 1")
    start = time.perf_counter()
    handler = {"uwsa": _solve_uwsa, "ewsa": _solve_ewsa, "ersa": _solve_ersa}[args.problem]
    answer, value, witness, algorithm = handler(inst, args)
    elapsed = (time.perf_counter() - start) * 1000
    if answer is False:
        witness = None
    if args.witness and witness is not None:
        Path(args.witness).write_text(serialize_sharing(witness))
    out = {
        "answer": answer,
        "value": _value(value),
        "algorithm": algorithm,
        "elapsed_ms": round(elapsed, 3),
    }
    print(json.dumps(out))
    return EXIT_NO if answer is False else EXIT_YES


# --- verify -----------------------------------------------------------------


def cmd_verify(args) -> int:
    start = time.perf_counter()
    inst = parse_instance(_read(args.instance))
    sharing = parse_sharing(_read(args.sharing))
    result = validate_sharing(inst, sharing)
    out: dict = {"answer": result.ok, "value": None, "algorithm": "verify"}
    if result.ok:
        envy = envious_agents(inst, sharing)
        uw, ew = welfare(inst, sharing)
        out["envious"] = sorted(envy.envious)
        out["utilitarian"] = str(uw)
        out["egalitarian"] = str(ew)
        value = {"ersa": len(envy), "uwsa": uw, "ewsa": ew}[args.problem]
        out["value"] = _value(value)
        if args.k is not None:
            out["answer"] = value <= args.k if args.problem == "ersa" else value >= args.k
    else:
        out["violations"] = [{"kind": v.kind, "message": v.message} for v in result.violations]
        for v in result.violations:
            print(f"violation ({v.kind}): {v.message}", file=sys.stderr)
    out["elapsed_ms"] = round((time.perf_counter() - start) * 1000, 3)
    print(json.dumps(out))
    return EXIT_YES if out["answer"] else EXIT_NO


# --- gen --------------------------------------------------------------------


def _graph(args) -> nx.Graph:
    if args.vertices is None:
        raise UsageError("--vertices is required for graph gadgets")
    g = nx.Graph()
    g.add_nodes_from(range(args.vertices))
    for part in filter(None, (p.strip() for p in (args.edges or "").split(","))):
        try:
            a, b = (int(x) for x in part.split("-"))
        except ValueError:
            raise UsageError(f"bad edge {part!r}; write edges as 0-1,1-2") from None
        if not (0 <= a < args.vertices and 0 <= b < args.vertices) or a == b:
            raise UsageError(f"edge {part!r} needs two distinct vertices below {args.vertices}")
        g.add_edge(a, b)
    return g


def _ints(text: str | None, what: str) -> list[int]:
    try:
        return [int(x) for x in (text or "").replace(",", " ").split()]
    except ValueError:
        raise UsageError(f"{what} must be a list of integers") from None


def cmd_gen(args) -> int:
    meta: dict = {}
    if args.random:
        inst = generate_random(args.seed, args.n, args.m, args.sharing, args.attention, args.u_max)
    else:
        gadget = args.gadget
        if gadget == "independent-set":
            inst, meta["k"] = reductions.gen_independent_set_ersa(_graph(args), args.ell)
        elif gadget == "clique":
            inst, meta["k"] = reductions.gen_clique_ersa(_graph(args), args.ell)
        elif gadget == "multicolored-clique":
            colors = _ints(args.colors, "--colors")
            if len(colors) != args.vertices:
                raise UsageError("--colors needs one color per vertex")
            inst, meta["k"] = reductions.gen_multicolored_clique_ersa(
                _graph(args), dict(enumerate(colors)), args.ell
            )
        elif gadget == "3sat":
            clauses = [_ints(c, "--cnf") for c in (args.cnf or "").split(",") if c.strip()]
            inst, meta["k"] = reductions.gen_3sat_ersa(clauses)
        else:
            inst, meta["b"], meta["k"] = reductions.gen_n3dm_ewsa(
                _ints(args.x, "--x"), _ints(args.y, "--y"), _ints(args.z, "--z"), args.t
            )
    text = serialize_instance(inst)
    if args.out:
        Path(args.out).write_text(text)
        print(json.dumps({"answer": True, "value": meta or None, "algorithm": "gen", "elapsed_ms": 0}))
    else:
        sys.stdout.write(text)
        if meta:
            print(json.dumps(meta), file=sys.stderr)
    return EXIT_YES


def cmd_bench(args) -> int:
    from .bench import run_bench

    report = run_bench(args.corpus, jobs=args.jobs, node_cap=args.node_cap)
    Path(args.report).write_text(json.dumps(report, indent=1) + "\n")
    out = {"answer": True, "value": len(report["instances"]), "algorithm": "bench", "elapsed_ms": report["elapsed_ms"]}
    print(json.dumps(out))
    return EXIT_YES


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="share-alloc", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("solve", help="decide or optimize one instance")
    s.add_argument("--problem", choices=["uwsa", "ewsa", "ersa"], required=True)
    s.add_argument("--b", type=int, default=1, help="per-agent share bound")
    s.add_argument("--k", type=Fraction, default=None, help="threshold (welfare) or envy bound")
    s.add_argument(
        "--algorithm",
        default="auto",
        choices=["auto", "matching", "fpt-agents", "treewidth", "identical-clique", "bounded-shared", "milp", "brute"],
    )
    s.add_argument("--instance", required=True)
    s.add_argument("--witness", help="write the witness sharing here")
    s.add_argument("--decomposition", help="tree decomposition for --algorithm treewidth")
    s.add_argument("--s-max", type=int, default=None, help="shared-resource bound for bounded-shared")
    s.add_argument("--node-cap", type=int, default=None)
    s.set_defaults(func=cmd_solve)

    v = sub.add_parser("verify", help="validate a sharing against an instance")
    v.add_argument("--instance", required=True)
    v.add_argument("--sharing", required=True)
    v.add_argument("--problem", choices=["uwsa", "ewsa", "ersa"], default="ersa")
    v.add_argument("--k", type=Fraction, default=None)
    v.set_defaults(func=cmd_verify)

    g = sub.add_parser("gen", help="generate a random or gadget instance")
    src = g.add_mutually_exclusive_group(required=True)
    src.add_argument("--random", action="store_true")
    src.add_argument("--gadget", choices=["independent-set", "3sat", "multicolored-clique", "clique", "n3dm"])
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--n", type=int, default=5)
    g.add_argument("--m", type=int, default=5)
    g.add_argument("--sharing", default="clique", help="clique | path | tree | er:p")
    g.add_argument("--attention", default="same_as_sharing_bidirected")
    g.add_argument("--u-max", type=int, default=5)
    g.add_argument("--vertices", type=int)
    g.add_argument("--edges", help="comma-separated pairs, e.g. 0-1,1-2")
    g.add_argument("--ell", type=int, default=2)
    g.add_argument("--colors", help="one color per vertex, e.g. 0,0,1,1")
    g.add_argument("--cnf", help='clauses separated by commas, literals by spaces: "1 2 3, -1"')
    g.add_argument("--x")
    g.add_argument("--y")
    g.add_argument("--z")
    g.add_argument("--t", type=int)
    g.add_argument("--out")
    g.set_defaults(func=cmd_gen)

    b = sub.add_parser("bench", help="solve every instance in a corpus directory")
    b.add_argument("--corpus", required=True)
    b.add_argument("--report", required=True)
    b.add_argument("--jobs", type=int, default=1)
    b.add_argument("--node-cap", type=int, default=None)
    b.set_defaults(func=cmd_bench)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_YES
    try:
        if getattr(args, "k", None) is not None and args.k.denominator != 1 and getattr(args, "problem", "") == "ersa":
            raise UsageError("--k must be an integer for ersa")
        if getattr(args, "problem", "") == "ersa" and args.k is not None:
            args.k = int(args.k)
        return args.func(args)
    except SearchBudgetExceeded as exc:
        print(f"refused: {exc}", file=sys.stderr)
        return EXIT_REFUSED
    except InvalidSharingError as exc:
        print(f"invalid sharing: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
