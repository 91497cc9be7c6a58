"""Ground truth by exhaustive search, plus a differential test harness.

``brute_force`` tries all deletion sets in increasing size, lexicographic
within a size, so its answer doubles as a determinism reference.  It is
deliberately capped: anything beyond desk scale should go through a real
solver.  ``differential_run`` pits the solvers against the oracle on a
seeded stream of random instances and reports any disagreement with enough
detail to replay it.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from itertools import combinations
from typing import Callable, Sequence

from .branching import Instance, Solution
from .graphs import is_in_phi

ORACLE_CAP_ENV = "BPBVD_ORACLE_CAP"
DEFAULT_CAP = 14


class OracleCapExceeded(ValueError):
    """Raised when an instance is too large for exhaustive search."""


def _cap(explicit: int | None) -> int:
    if explicit is not None:
        return explicit
    raw = os.environ.get(ORACLE_CAP_ENV)
    return int(raw) if raw else DEFAULT_CAP


def brute_force(inst: Instance, cap: int | None = None) -> Solution | None:
    """Smallest deletion set by direct enumeration, or None if infeasible.

    Refuses graphs with more than ``cap`` vertices (default 14, overridable
    via the BPBVD_ORACLE_CAP environment variable or the ``cap`` argument).
    """
    g = inst.graph
    limit = _cap(cap)
    if g.n > limit:
        raise OracleCapExceeded(
            f"instance has {g.n} vertices, oracle cap is {limit}"
        )
    verts = g.vertices
    for size in range(min(inst.k, g.n) + 1):
        for combo in combinations(verts, size):
            if is_in_phi(g.delete_vertices(combo), inst.pclass, inst.d):
                return Solution(deleted=frozenset(combo))
    return None


# --------------------------------------------------------------------------
# differential harness
# --------------------------------------------------------------------------

SolverFn = Callable[[Instance], bool]


@dataclass(frozen=True)
class TrialRecord:
    """Outcome of one differential trial."""

    seed: int
    n: int
    class_name: str
    d: int
    k: int
    verdicts: dict[str, bool]
    agree: bool

    def replay_line(self) -> str:
        parts = [
            f"seed={self.seed}",
            f"n={self.n}",
            f"class={self.class_name}",
            f"d={self.d}",
            f"k={self.k}",
        ]
        for name in sorted(self.verdicts):
            parts.append(f"{name}={'yes' if self.verdicts[name] else 'no'}")
        parts.append(f"agree={'1' if self.agree else '0'}")
        return " ".join(parts)


@dataclass
class DifferentialReport:
    records: list[TrialRecord] = field(default_factory=list)

    @property
    def trials(self) -> int:
        return len(self.records)

    @property
    def mismatches(self) -> list[TrialRecord]:
        return [r for r in self.records if not r.agree]

    @property
    def all_agree(self) -> bool:
        return not self.mismatches

    def summary(self) -> str:
        lines = [f"trials={self.trials} mismatches={len(self.mismatches)}"]
        lines.extend(r.replay_line() for r in self.mismatches)
        return "\n".join(lines)


# Solver lookups import inside the function bodies so the oracle stays
# importable on its own and the kernel module can depend on brute_force
# without a cycle.


def _run_branch(inst: Instance) -> bool:
    from . import branching

    return branching.solve(inst) is not None


def _run_compress(inst: Instance) -> bool:
    from . import compression

    if inst.pclass.kind == "cliques":
        return compression.solve_complete_block(inst) is not None
    if inst.pclass.kind == "cycles":
        return compression.solve_cactus(inst) is not None
    raise ValueError("compression solver needs the clique or cycle class")


def _run_kernel_branch(inst: Instance) -> bool:
    from . import branching, kernel

    reduced, trace = kernel.kernelize(inst)
    if trace.verdict == "no":
        return False
    return branching.solve(reduced) is not None


SOLVER_REGISTRY: dict[str, SolverFn] = {
    "branch": _run_branch,
    "compress": _run_compress,
    "kernel-branch": _run_kernel_branch,
}


def differential_run(
    base_seed: int,
    trials: int,
    solvers: Sequence[str | tuple[str, SolverFn]] = ("branch",),
    n: int = 8,
    edge_probability: float = 0.35,
) -> DifferentialReport:
    """Run seeded random instances through the named solvers and the oracle.

    Solver entries are registry names ("branch", "compress",
    "kernel-branch") or (name, callable) pairs; each callable maps an
    Instance to a yes/no verdict.  Every trial also runs ``brute_force``,
    and ``agree`` records whether all verdicts coincide.
    """
    from .generators import SplitMix64, random_graph
    from .graphs import ALL_BICONNECTED, CLIQUES, CYCLES_AND_K2

    resolved: list[tuple[str, SolverFn]] = []
    for entry in solvers:
        if isinstance(entry, str):
            resolved.append((entry, SOLVER_REGISTRY[entry]))
        else:
            resolved.append(entry)

    wants_compress = any(name == "compress" for name, _ in resolved)
    classes = (CLIQUES, CYCLES_AND_K2) if wants_compress else (
        ALL_BICONNECTED,
        CLIQUES,
        CYCLES_AND_K2,
    )
    report = DifferentialReport()
    for i in range(trials):
        seed = base_seed + i
        rng = SplitMix64(seed)
        g = random_graph(n, edge_probability, rng.next_u64())
        pclass = classes[rng.randint(0, len(classes) - 1)]
        d = rng.randint(3, 5)
        k = rng.randint(0, 4)
        inst = Instance(graph=g, pclass=pclass, d=d, k=k)

        verdicts: dict[str, bool] = {}
        verdicts["oracle"] = brute_force(inst) is not None
        for name, fn in resolved:
            verdicts[name] = fn(inst)
        agree = len(set(verdicts.values())) == 1
        report.records.append(
            TrialRecord(
                seed=seed,
                n=g.n,
                class_name=pclass.name,
                d=d,
                k=k,
                verdicts=verdicts,
                agree=agree,
            )
        )
    return report
