"""Models as finite disjunctions of constrained facts.

A model maps each predicate to a list of constrained facts (a disjunction);
predicates absent from the map denote the empty interpretation, and the
reserved ``false`` is always interpreted as empty.  Clause satisfaction is
decided exactly over the rationals: for every choice of one disjunct per body
atom, the body region must be covered by the disjunction of head facts,
checked by recursive region subtraction with a configurable split budget.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

from .polyhedra import Polyhedron
from .syntax import (Atom, Clause, FALSE, PredRef, Program, Var,
                     canonical_params, render_atom)
from .terms import Constraint

DEFAULT_SPLIT_BUDGET = 10_000


@dataclass(frozen=True)
class ConstrainedFact:
    pred: PredRef
    params: tuple[Var, ...]
    constraint: Polyhedron  # dims are exactly the param names

    def renamed_to(self, args: tuple[Var, ...]) -> Polyhedron:
        mapping = {p.name: a.name for p, a in zip(self.params, args)}
        return self.constraint.rename(mapping)

    def __repr__(self):
        body = ",".join(repr(c) for c in self.constraint.constraints)
        return f"{render_atom(Atom(self.pred, self.params))} :- [{body}]."


class Model:
    """Finite disjunctions of constrained facts per predicate."""

    def __init__(self, facts=()):
        self.facts: dict[PredRef, list[ConstrainedFact]] = {}
        for f in facts:
            self.add(f)

    def add(self, fact: ConstrainedFact):
        params = canonical_params(len(fact.params))
        poly = fact.renamed_to(params).simplify()
        if poly.is_empty():
            return
        norm = ConstrainedFact(fact.pred, params, poly)
        known = self.facts.setdefault(fact.pred, [])
        if norm not in known:
            known.append(norm)

    def facts_for(self, pred: PredRef) -> list[ConstrainedFact]:
        if pred == FALSE:
            return []  # false is always interpreted as empty
        return self.facts.get(pred, [])

    def union(self, other: "Model") -> "Model":
        m = Model(f for fs in self.facts.values() for f in fs)
        for fs in other.facts.values():
            for f in fs:
                m.add(f)
        return m

    def erase_indices(self) -> "Model":
        m = Model()
        for fs in self.facts.values():
            for f in fs:
                m.add(ConstrainedFact(f.pred.erase(), f.params, f.constraint))
        return m

    def all_facts(self) -> list[ConstrainedFact]:
        def key(f: ConstrainedFact):
            p = f.pred
            return (p.base, p.d if p.d is not None else -1, p.kind or "", repr(f))
        return sorted((f for fs in self.facts.values() for f in fs), key=key)

    def render(self) -> str:
        return "".join(repr(f) + "\n" for f in self.all_facts())

    def __eq__(self, other):
        return isinstance(other, Model) and {
            p: set(fs) for p, fs in self.facts.items()} == {
            p: set(fs) for p, fs in other.facts.items()}

    def __repr__(self):
        return self.render()

    @staticmethod
    def parse(text: str) -> "Model":
        from .parser import parse_model_facts
        m = Model()
        for atom, constraints in parse_model_facts(text):
            params = tuple(v.name for v in atom.args)
            poly = Polyhedron(params, constraints)
            m.add(ConstrainedFact(atom.pred, atom.args, poly))
        return m


class SplitBudgetExceeded(Exception):
    pass


def _covered(body: Polyhedron, heads: list[Polyhedron], budget: int) -> bool:
    """True iff every rational point of ``body`` lies in some head region.

    Region subtraction: peel each head region off the body; covered iff
    nothing satisfiable remains.  Exceeding the split budget raises, which
    callers treat as "not covered" (sound: it can only delay termination).
    """
    regions = [body]
    created = 0
    for head in heads:
        next_regions = []
        for r in regions:
            prefix: list[Constraint] = []
            for c in head.constraints:
                for neg in c.negations():
                    piece = r.conjoin(prefix + [neg])
                    created += 1
                    if created > budget:
                        raise SplitBudgetExceeded
                    if piece.sat():
                        next_regions.append(piece)
                prefix.append(c)
        regions = next_regions
        if not regions:
            return True
    return not regions


def satisfies_clause(m: Model, clause: Clause,
                     split_budget: int = DEFAULT_SPLIT_BUDGET) -> bool:
    dims = clause.vars()
    head_polys: list[Polyhedron] = []
    for f in m.facts_for(clause.head.pred):
        poly = f.renamed_to(clause.head.args)
        head_polys.append(poly.with_dims(dims))
    for choice in product(*(m.facts_for(a.pred) for a in clause.body)):
        rows = list(clause.constraint)
        for atom, fact in zip(clause.body, choice):
            if len(fact.params) != len(atom.args):
                raise ValueError(f"arity mismatch for {atom.pred!r}")
            rows.extend(fact.renamed_to(atom.args).constraints)
        body = Polyhedron(dims, rows)
        if body.is_empty():
            continue
        if not head_polys:
            return False
        try:
            if not _covered(body, head_polys, split_budget):
                return False
        except SplitBudgetExceeded:
            return False
    return True


def satisfies_program(m: Model, p: Program,
                      split_budget: int = DEFAULT_SPLIT_BUDGET) -> bool:
    """Clause satisfaction with the model taken as-is (no index erasure)."""
    return all(satisfies_clause(m, c, split_budget) for c in p.clauses)


def inductive(m: Model, p: Program, split_budget: int = DEFAULT_SPLIT_BUDGET) -> bool:
    """Is the index-erased model a solution of the program?"""
    return not violations(m, p, split_budget)


def violations(m: Model, p: Program, split_budget: int = DEFAULT_SPLIT_BUDGET) -> list[Clause]:
    erased = m.erase_indices()
    return [c for c in p.clauses if not satisfies_clause(erased, c, split_budget)]


# ---------------------------------------------------------------------------
# linearization

def linearize(p_next: Program, s: Model) -> Program:
    """Substitute the solved interpretations for every body atom below the
    top dimension level of ``p_next``; one clause per disjunct combination,
    unsatisfiable results dropped, constraints projected onto the variables
    still in use.  The output is linear when ``p_next`` is a transformed
    program at level one above the model."""
    level = max((pred.d for pred in p_next.signatures if pred.indexed), default=0)
    out: list[Clause] = []
    for c in p_next.clauses:
        keep: list[Atom] = []
        substitute: list[Atom] = []
        for a in c.body:
            if a.pred.indexed and a.pred.d < level:
                substitute.append(a)
            else:
                keep.append(a)
        used: list[str] = []
        for a in (c.head, *keep):
            for v in a.args:
                if v.name not in used:
                    used.append(v.name)
        for choice in product(*(s.facts_for(a.pred) for a in substitute)):
            rows = list(c.constraint)
            for atom, fact in zip(substitute, choice):
                rows.extend(fact.renamed_to(atom.args).constraints)
            poly = Polyhedron(c.vars(), rows)
            if poly.is_empty():
                continue
            projected = poly.project(used).simplify()
            out.append(Clause(0, c.head, projected.constraints, tuple(keep),
                              provenance=c.provenance))
    return Program.from_clauses(out)
