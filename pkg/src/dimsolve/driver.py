"""The solve loop: bound the dimension, solve the linear program, test the
index-erased model for inductiveness, and linearize the next level against
the accumulated model until a solution is found or resources run out.

Soundness: a Solved outcome always carries a model that passed the
independent inductiveness re-check against the original clauses, so the
answer never depends on the abstraction being precise.  Unknown covers both
abstraction failures and exhausted bounds; no unsafety claim is ever made.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

from .kdim import kdim
from .linear_solver import SolverTimeout, solve_linear
from .models import Model, inductive, linearize
from .syntax import Program

UNKNOWN_NOT_SOLVED = "not-solved"
UNKNOWN_MAX_K = "max-k"
UNKNOWN_TIMEOUT = "timeout"


@dataclass
class Config:
    max_k: int = 8
    widen_delay: int = 1
    narrow: bool = True
    split_budget: int = 10_000
    timeout_s: float | None = None
    trace: bool = False


@dataclass
class SolveOutcome:
    status: str  # "solved" | "unknown"
    model: Model | None
    reason: str = ""
    k_reached: int = 0
    stats: list[dict] = field(default_factory=list)

    @property
    def solved(self) -> bool:
        return self.status == "solved"


def solve(p: Program, cfg: Config | None = None, trace=None) -> SolveOutcome:
    cfg = cfg or Config()
    if trace is None and cfg.trace:
        import sys
        trace = lambda msg: print(msg, file=sys.stderr)
    deadline = time.monotonic() + cfg.timeout_s if cfg.timeout_s is not None else None
    stats: list[dict] = []
    k = 0
    current = kdim(p, 0)
    accumulated = Model()
    while True:
        began = time.monotonic()
        try:
            verdict = solve_linear(current, widen_delay=cfg.widen_delay,
                                   narrow=cfg.narrow, deadline=deadline,
                                   trace=trace)
        except SolverTimeout:
            return SolveOutcome("unknown", None, UNKNOWN_TIMEOUT, k, stats)
        entry = {"k": k, "clauses": len(current.clauses),
                 "solved": verdict.solved, "seconds": time.monotonic() - began}
        stats.append(entry)
        if trace:
            trace(f"k={k} clauses={entry['clauses']} linear-solve="
                  f"{'solved' if verdict.solved else 'not solved'} "
                  f"({entry['seconds']:.2f}s)")
        if not verdict.solved:
            return SolveOutcome("unknown", None, UNKNOWN_NOT_SOLVED, k, stats)
        accumulated = accumulated.union(verdict.model)
        if inductive(accumulated, p, cfg.split_budget):
            if trace:
                trace(f"k={k}: model is inductive")
            return SolveOutcome("solved", accumulated.erase_indices(), "", k, stats)
        if trace:
            trace(f"k={k}: model not inductive")
        if deadline is not None and time.monotonic() > deadline:
            return SolveOutcome("unknown", None, UNKNOWN_TIMEOUT, k, stats)
        if k + 1 > cfg.max_k:
            return SolveOutcome("unknown", None, UNKNOWN_MAX_K, k, stats)
        current = linearize(kdim(p, k + 1), accumulated)
        k += 1
