"""Fixpoint engine for linear Horn clause programs.

Computes one convex polyhedron per predicate as an over-approximation of the
least model, by synchronous Kleene rounds with widening after a configurable
number of growth steps.  The approximation counts as a solution when every
``false`` variant stays empty; if a false variant becomes feasible the engine
first tries a bounded descending (narrowing) phase to recover precision, and
reports NotSolved if that fails.  Narrowing is deliberately *not* run when
the false variants are already empty: the extrapolated interpretations are
what later iterations of the outer algorithm need.

Every Solved model is re-verified against the input clauses before being
returned; a gate failure downgrades the verdict to NotSolved.
"""

from __future__ import annotations

import sys
import time
from dataclasses import dataclass, field

from .models import ConstrainedFact, Model, satisfies_program
from .polyhedra import Polyhedron
from .syntax import FALSE_NAME, PredRef, Program, canonical_params, is_linear


@dataclass
class AbstractState:
    interp: dict[PredRef, Polyhedron] = field(default_factory=dict)
    changes: dict[PredRef, int] = field(default_factory=dict)

    def lookup(self, pred: PredRef) -> Polyhedron | None:
        return self.interp.get(pred)


@dataclass
class LinearVerdict:
    model: Model | None
    reason: str = ""

    @property
    def solved(self) -> bool:
        return self.model is not None


class NonLinearProgram(ValueError):
    pass


class SolverTimeout(Exception):
    pass


def _contributions(p: Program, s: AbstractState) -> dict[PredRef, Polyhedron]:
    """One synchronous evaluation of all clauses against the current state."""
    new: dict[PredRef, Polyhedron] = {}
    for c in p.clauses:
        rows = list(c.constraint)
        dead = False
        for atom in c.body:
            interp = s.lookup(atom.pred)
            if interp is None or interp.is_empty():
                dead = True
                break
            mapping = dict(zip(interp.dims, (v.name for v in atom.args)))
            rows.extend(interp.rename(mapping).constraints)
        if dead:
            continue
        body = Polyhedron(c.vars(), rows)
        if body.is_empty():
            continue
        head_vars = [v.name for v in c.head.args]
        params = canonical_params(len(head_vars))
        poly = body.project(head_vars).rename(
            dict(zip(head_vars, (v.name for v in params))))
        old = new.get(c.head.pred)
        new[c.head.pred] = poly if old is None else old.hull(poly)
    return {pred: poly for pred, poly in new.items() if not poly.is_empty()}


def step(p: Program, s: AbstractState, widen_delay: int = 1) -> AbstractState:
    """One Kleene round: join new contributions into the state, widening any
    predicate that has already grown more than ``widen_delay`` times."""
    contrib = _contributions(p, s)
    out = AbstractState(dict(s.interp), dict(s.changes))
    for pred, poly in contrib.items():
        old = out.interp.get(pred)
        if old is None:
            out.interp[pred] = poly
            out.changes[pred] = 1
            continue
        grown = old.hull(poly)
        if grown.entails(old):
            continue  # old already covers the new contributions
        count = out.changes.get(pred, 0) + 1
        out.changes[pred] = count
        out.interp[pred] = old.widen(grown) if count > widen_delay else grown
    return out


def stabilized(s1: AbstractState, s2: AbstractState) -> bool:
    if set(s1.interp) != set(s2.interp):
        return False
    return all(s1.interp[q].entails(s2.interp[q]) and s2.interp[q].entails(s1.interp[q])
               for q in s1.interp)


def _false_feasible(s: AbstractState) -> bool:
    return any(pred.base == FALSE_NAME and not poly.is_empty()
               for pred, poly in s.interp.items())


def _to_model(s: AbstractState) -> Model:
    m = Model()
    for pred, poly in s.interp.items():
        if pred.base == FALSE_NAME or poly.is_empty():
            continue
        m.add(ConstrainedFact(pred, canonical_params(len(poly.dims)), poly))
    return m


def solve_linear(p: Program, widen_delay: int = 1, narrow: bool = True,
                 deadline: float | None = None, trace=None) -> LinearVerdict:
    if not is_linear(p):
        raise NonLinearProgram("solve_linear requires a linear program")
    npreds = max(len(p.signatures), 1)
    total_constraints = sum(len(c.constraint) for c in p.clauses)
    max_rounds = 10 * (widen_delay + total_constraints + 8) + 10 * npreds
    state = AbstractState()
    rounds = 0
    while True:
        if deadline is not None and time.monotonic() > deadline:
            raise SolverTimeout
        nxt = step(p, state, widen_delay)
        rounds += 1
        if stabilized(state, nxt):
            break
        state = nxt
        if rounds > max_rounds:
            raise RuntimeError("fixpoint iteration failed to stabilize")
    if trace:
        trace(f"fixpoint after {rounds} rounds")
    if narrow and _false_feasible(state):
        for i in range(npreds + 2):
            if deadline is not None and time.monotonic() > deadline:
                raise SolverTimeout
            refined = AbstractState(_contributions(p, state), dict(state.changes))
            if stabilized(state, refined):
                break
            state = refined
        if trace:
            trace(f"narrowing ran {i + 1} descending rounds")
    if _false_feasible(state):
        return LinearVerdict(None, "false variant reachable in the abstraction")
    model = _to_model(state)
    if not satisfies_program(model, p):
        print("warning: fixpoint model failed the clause re-check; "
              "reporting NotSolved", file=sys.stderr)
        return LinearVerdict(None, "soundness gate failed")
    return LinearVerdict(model)
