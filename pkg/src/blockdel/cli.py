"""Command-line front end: parse graphs, pick a solver, report verdicts.

Subcommands: ``solve`` (decide one instance), ``approx`` (approximation
only), ``kernelize`` (reduce and dump the kernel), ``difftest`` (seeded
differential run of solvers against the oracle), ``gen`` (emit generator
graphs in the edge-list format).

Exit statuses: 0 = ran to completion without a verdict (approx/kernelize
reductions, difftest agreement, gen), 10 = YES, 20 = NO, 1 = difftest found
a mismatch, 2 = usage, configuration, or input-format error.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path
from typing import Sequence

from .branching import Instance, Solution, solve as branch_solve
from .compression import solve_cactus, solve_complete_block
from .generators import (
    chain_of_cliques,
    gen_kxk_reduction,
    random_graph,
    random_grid,
)
from .graphs import (
    ALL_BICONNECTED,
    CLIQUES,
    CYCLES_AND_K2,
    Graph,
    GraphFormatError,
    format_edge_list,
    is_in_phi,
    parse_edge_list,
)
from .kernel import approximate, kernelize
from .oracle import OracleCapExceeded, brute_force, differential_run

FORMAT_VERSION = 1

EXIT_OK = 0
EXIT_MISMATCH = 1
EXIT_USAGE = 2
EXIT_YES = 10
EXIT_NO = 20

CLASS_BY_NAME = {
    "biconnected": ALL_BICONNECTED,
    "cliques": CLIQUES,
    "cycles": CYCLES_AND_K2,
}

SOLVER_NAMES = ("branch", "compress", "kernel-branch", "brute", "approx")


class UsageError(Exception):
    """Configuration or input problem that should exit with status 2."""


def _read_input(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc}") from exc


def _load_graph(path: str) -> Graph:
    return parse_edge_list(_read_input(path))


def _emit(record: dict, human_lines: list[str], mode: str, out=None) -> None:
    stream = out or sys.stdout
    if mode == "structured":
        print(json.dumps(record, indent=2, sort_keys=True), file=stream)
    else:
        for line in human_lines:
            print(line, file=stream)


def _validate_common(d: int, k: int | None) -> None:
    if d < 1:
        raise UsageError("--d must be at least 1")
    if k is not None and k < 0:
        raise UsageError("--k must be non-negative")


# --------------------------------------------------------------------------
# solve


def _dispatch_solver(
    name: str, inst: Instance
) -> tuple[str, list[int] | None, dict]:
    """Run one solver; return (answer, solution or None, extras).

    ``answer`` is "yes", "no", or (approx only) "unknown".  The solution is
    reported in the coordinates of the graph it solves: the input graph for
    every solver except kernel-branch, whose set lives on the kernel.
    """
    extras: dict = {"branch_nodes": 0, "leaves": 0, "rules_applied": []}
    if name == "branch":
        sol = branch_solve(inst)
    elif name == "brute":
        sol = brute_force(inst)
    elif name == "compress":
        if inst.pclass.kind == "cliques":
            sol = solve_complete_block(inst)
        elif inst.pclass.kind == "cycles":
            sol = solve_cactus(inst)
        else:
            raise UsageError(
                "--solver compress requires --class cliques or cycles"
            )
    elif name == "kernel-branch":
        try:
            reduced, trace = kernelize(inst)
        except ValueError as exc:
            raise UsageError(f"kernel-branch: {exc}") from exc
        extras["rules_applied"] = list(trace.rules_fired())
        extras["trace_lines"] = trace.log().splitlines()
        if trace.verdict == "no":
            extras["kernel_size"] = None
            return "no", None, extras
        extras["kernel_size"] = reduced.graph.n
        extras["kernel_graph"] = reduced.graph
        sol = branch_solve(reduced)
        if sol is None:
            return "no", None, extras
        extras["branch_nodes"] = sol.branch_nodes
        extras["leaves"] = sol.leaves
        return "yes", sorted(sol.deleted), extras
    elif name == "approx":
        u = approximate(inst.graph, inst.pclass, inst.d)
        if len(u) <= inst.k:
            return "yes", sorted(u), extras
        return "unknown", None, extras
    else:  # pragma: no cover - argparse restricts choices
        raise UsageError(f"unknown solver {name!r}")

    if sol is None:
        return "no", None, extras
    extras["branch_nodes"] = sol.branch_nodes
    extras["leaves"] = sol.leaves
    return "yes", sorted(sol.deleted), extras


def cmd_solve(args: argparse.Namespace) -> int:
    _validate_common(args.d, args.k)
    pclass = CLASS_BY_NAME[args.pclass]
    if args.solver == "compress" and args.pclass == "biconnected":
        raise UsageError("--solver compress requires --class cliques or cycles")
    g = _load_graph(args.input)
    inst = Instance(graph=g, pclass=pclass, d=args.d, k=args.k)

    start = time.perf_counter()
    answer, solution, extras = _dispatch_solver(args.solver, inst)
    elapsed_ms = (time.perf_counter() - start) * 1000.0

    scope = "kernel" if args.solver == "kernel-branch" else "input"
    if answer == "yes":
        target = extras.get("kernel_graph", g)
        check_d = inst.d
        assert is_in_phi(target.delete_vertices(solution), pclass, check_d)

    trace_path = None
    if args.solver == "kernel-branch" and args.trace_out:
        Path(args.trace_out).write_text(
            "\n".join(extras.get("trace_lines", [])) + "\n"
        )
        trace_path = args.trace_out

    record = {
        "format_version": FORMAT_VERSION,
        "command": "solve",
        "input": args.input,
        "class": args.pclass,
        "d": args.d,
        "k": args.k,
        "solver": args.solver,
        "answer": answer,
        "solution": solution,
        "solution_scope": scope,
        "stats": {
            "branch_nodes": extras["branch_nodes"],
            "leaves": extras["leaves"],
            "rules_applied": extras["rules_applied"],
            "elapsed_ms": round(elapsed_ms, 3),
        },
        "kernel_size": extras.get("kernel_size"),
        "trace_path": trace_path,
    }
    lines = [f"answer: {answer}"]
    if solution is not None:
        lines.append("solution: " + " ".join(map(str, solution)))
        if scope == "kernel":
            lines.append("solution scope: kernel coordinates")
    if args.solver == "kernel-branch" and extras.get("kernel_size") is not None:
        lines.append(f"kernel size: {extras['kernel_size']}")
    if extras["rules_applied"]:
        lines.append("rules: " + ",".join(extras["rules_applied"]))
    lines.append(f"elapsed: {elapsed_ms:.1f} ms")
    _emit(record, lines, args.output)
    if answer == "yes":
        return EXIT_YES
    if answer == "no":
        return EXIT_NO
    return EXIT_OK


# --------------------------------------------------------------------------
# approx


def cmd_approx(args: argparse.Namespace) -> int:
    _validate_common(args.d, None)
    pclass = CLASS_BY_NAME[args.pclass]
    g = _load_graph(args.input)
    try:
        u = approximate(g, pclass, args.d)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    assert is_in_phi(g.delete_vertices(u), pclass, args.d)
    record = {
        "format_version": FORMAT_VERSION,
        "command": "approx",
        "input": args.input,
        "class": args.pclass,
        "d": args.d,
        "deleted": sorted(u),
        "size": len(u),
    }
    lines = [
        f"deleted {len(u)} vertices: " + " ".join(map(str, sorted(u))),
    ]
    _emit(record, lines, args.output)
    return EXIT_OK


# --------------------------------------------------------------------------
# kernelize


def cmd_kernelize(args: argparse.Namespace) -> int:
    _validate_common(args.d, args.k)
    pclass = CLASS_BY_NAME[args.pclass]
    g = _load_graph(args.input)
    inst = Instance(graph=g, pclass=pclass, d=args.d, k=args.k)
    try:
        reduced, trace = kernelize(inst)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc

    trace_path = None
    if args.trace_out:
        Path(args.trace_out).write_text(trace.log() + "\n")
        trace_path = args.trace_out

    record = {
        "format_version": FORMAT_VERSION,
        "command": "kernelize",
        "input": args.input,
        "class": args.pclass,
        "d": args.d,
        "k": args.k,
        "verdict": trace.verdict,
        "rules_applied": list(trace.rules_fired()),
        "trace": trace.log().splitlines(),
        "trace_path": trace_path,
    }
    lines = [f"verdict: {trace.verdict}"]
    lines.extend(trace.log().splitlines())

    if trace.verdict == "no":
        record["kernel"] = None
        _emit(record, lines, args.output)
        return EXIT_NO

    record["kernel"] = {
        "n": reduced.graph.n,
        "m": reduced.graph.m,
        "k": reduced.k,
        "vertices": sorted(reduced.graph.vertices),
        "edges": [list(e) for e in sorted(reduced.graph.edges())],
        "synthetic": {str(m): list(pair) for m, pair in trace.synthetic.items()},
    }
    lines.append(f"kernel: {reduced.graph.n} vertices, budget {reduced.k}")
    if trace.synthetic:
        lines.append(
            "synthetic: "
            + " ".join(f"{m}<-({a},{b})" for m, (a, b) in sorted(trace.synthetic.items()))
        )
    if args.kernel_out:
        Path(args.kernel_out).write_text(format_edge_list(reduced.graph))
        lines.append(f"kernel edge list written to {args.kernel_out}")
        record["kernel_path"] = args.kernel_out
    _emit(record, lines, args.output)
    return EXIT_OK


# --------------------------------------------------------------------------
# difftest


def cmd_difftest(args: argparse.Namespace) -> int:
    solvers = tuple(s.strip() for s in args.solvers.split(",") if s.strip())
    for s in solvers:
        if s not in ("branch", "compress", "kernel-branch"):
            raise UsageError(f"unknown difftest solver {s!r}")
    if args.trials < 0:
        raise UsageError("--trials must be non-negative")
    report = differential_run(
        base_seed=args.seed,
        trials=args.trials,
        solvers=solvers,
        n=args.n,
        edge_probability=args.p,
    )
    record = {
        "format_version": FORMAT_VERSION,
        "command": "difftest",
        "seed": args.seed,
        "trials": report.trials,
        "solvers": list(solvers),
        "all_agree": report.all_agree,
        "mismatches": [r.replay_line() for r in report.mismatches],
    }
    _emit(record, report.summary().splitlines(), args.output)
    return EXIT_OK if report.all_agree else EXIT_MISMATCH


# --------------------------------------------------------------------------
# gen


def _structured_graph(name: str, size: int) -> Graph:
    if name == "path":
        return Graph.from_edges(range(size), [(i, i + 1) for i in range(size - 1)])
    if name == "cycle":
        if size < 3:
            raise UsageError("--size must be at least 3 for a cycle")
        return Graph.from_edges(range(size), [(i, (i + 1) % size) for i in range(size)])
    if name == "clique":
        return Graph.from_edges(
            range(size), [(a, b) for a in range(size) for b in range(a + 1, size)]
        )
    if name == "diamond":
        return Graph.from_edges(range(4), [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3)])
    if name == "bowtie":
        return Graph.from_edges(range(5), [(0, 1), (0, 2), (1, 2), (0, 3), (0, 4), (3, 4)])
    if name == "block-chain":
        return chain_of_cliques([3] * max(size, 1))
    raise UsageError(f"unknown structured graph {name!r}")  # pragma: no cover


def cmd_gen(args: argparse.Namespace) -> int:
    params: dict = {"seed": args.seed}
    instance_fields = None
    if args.family == "random":
        if not 0.0 <= args.p <= 1.0:
            raise UsageError("--p must lie in [0, 1]")
        g = random_graph(args.n, args.p, seed=args.seed)
        params.update(n=args.n, p=args.p)
    elif args.family == "grid":
        g = random_grid(args.k, args.p, seed=args.seed, plant_clique=args.plant)
        params.update(k=args.k, p=args.p, plant=args.plant)
    elif args.family == "kxk":
        grid = random_grid(args.k, args.p, seed=args.seed, plant_clique=args.plant)
        inst = gen_kxk_reduction(grid, args.k)
        g = inst.graph
        params.update(k=args.k, p=args.p, plant=args.plant)
        instance_fields = {"class": "biconnected", "d": inst.d, "k": inst.k}
    elif args.family == "structured":
        g = _structured_graph(args.name, args.size)
        params = {"name": args.name, "size": args.size}
    else:  # pragma: no cover - argparse restricts choices
        raise UsageError(f"unknown family {args.family!r}")

    text = format_edge_list(g)
    record = {
        "format_version": FORMAT_VERSION,
        "command": "gen",
        "family": args.family,
        "params": params,
        "graph": {
            "n": g.n,
            "m": g.m,
            "edge_list": text,
        },
    }
    lines = []
    if instance_fields:
        record["instance"] = instance_fields
        lines.extend(
            f"# {key} {value}" for key, value in instance_fields.items()
        )
    lines.append(text.rstrip("\n"))
    _emit(record, lines, args.output)
    return EXIT_OK


# --------------------------------------------------------------------------
# parser


def _add_common(p: argparse.ArgumentParser, *, with_k: bool = True) -> None:
    p.add_argument("--input", default="-", help="edge-list file, or - for stdin")
    p.add_argument(
        "--class",
        dest="pclass",
        choices=sorted(CLASS_BY_NAME),
        default="biconnected",
        help="block class the remainder must satisfy",
    )
    p.add_argument("--d", type=int, required=True, help="maximum block size")
    if with_k:
        p.add_argument("--k", type=int, required=True, help="deletion budget")
    p.add_argument(
        "--output",
        choices=("human", "structured"),
        default="human",
        help="human-readable lines or one JSON record",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="blockdel",
        description="Solvers for bounded block vertex deletion.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_solve = sub.add_parser("solve", help="decide one instance")
    _add_common(p_solve)
    p_solve.add_argument(
        "--solver",
        choices=SOLVER_NAMES,
        default="branch",
        help="branch (default), compress, kernel-branch, brute, or approx "
        "(approx answers yes or unknown, never no)",
    )
    p_solve.add_argument(
        "--trace-out", default=None, help="write the kernel-branch rule trace here"
    )
    p_solve.set_defaults(fn=cmd_solve)

    p_approx = sub.add_parser("approx", help="run the approximation only")
    _add_common(p_approx, with_k=False)
    p_approx.set_defaults(fn=cmd_approx)

    p_kern = sub.add_parser("kernelize", help="reduce an instance to its kernel")
    _add_common(p_kern)
    p_kern.add_argument(
        "--trace-out", default=None, help="write the rule trace to this file"
    )
    p_kern.add_argument(
        "--kernel-out", default=None, help="write the kernel edge list to this file"
    )
    p_kern.set_defaults(fn=cmd_kernelize)

    p_diff = sub.add_parser(
        "difftest", help="differential-test solvers against the oracle"
    )
    p_diff.add_argument("--trials", type=int, default=100)
    p_diff.add_argument("--n", type=int, default=8, help="vertices per instance")
    p_diff.add_argument("--p", type=float, default=0.35, help="edge probability")
    p_diff.add_argument("--seed", type=int, default=0)
    p_diff.add_argument(
        "--solvers",
        default="branch",
        help="comma-separated subset of branch,compress,kernel-branch",
    )
    p_diff.add_argument(
        "--output", choices=("human", "structured"), default="human"
    )
    p_diff.set_defaults(fn=cmd_difftest)

    p_gen = sub.add_parser("gen", help="emit a generator graph as an edge list")
    p_gen.add_argument(
        "--family",
        choices=("random", "grid", "kxk", "structured"),
        default="random",
    )
    p_gen.add_argument("--n", type=int, default=8)
    p_gen.add_argument("--p", type=float, default=0.35)
    p_gen.add_argument("--k", type=int, default=3, help="grid side for grid/kxk")
    p_gen.add_argument("--seed", type=int, default=0)
    p_gen.add_argument(
        "--plant", action="store_true", help="plant a column-clique in the grid"
    )
    p_gen.add_argument(
        "--name",
        choices=("path", "cycle", "clique", "diamond", "bowtie", "block-chain"),
        default="path",
        help="structured family member",
    )
    p_gen.add_argument("--size", type=int, default=5)
    p_gen.add_argument(
        "--output", choices=("human", "structured"), default="human"
    )
    p_gen.set_defaults(fn=cmd_gen)

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except GraphFormatError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OracleCapExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
