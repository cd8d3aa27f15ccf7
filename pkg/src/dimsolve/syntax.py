"""Abstract syntax for constrained Horn clause programs in CLP form.

A clause is ``head :- constraints, body_atoms`` where atom arguments are
distinct variables (the normalizer introduces fresh variables plus equality
constraints for integer literals and repeated variables).  ``false`` is the
reserved nullary head of integrity constraints; its dimension-indexed copies
produced by the bounding transformation behave like ordinary predicates.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field, replace

from .terms import EQ, Constraint, Var, render_constraint

EXACT = "exact"    # printed name(d)
ATMOST = "atmost"  # printed name[d]

FALSE_NAME = "false"


@dataclass(frozen=True)
class PredRef:
    base: str
    kind: str | None = None
    d: int | None = None

    @property
    def indexed(self) -> bool:
        return self.kind is not None

    def with_index(self, kind: str, d: int) -> "PredRef":
        return PredRef(self.base, kind, d)

    def erase(self) -> "PredRef":
        return PredRef(self.base)

    def __repr__(self):
        if self.kind == EXACT:
            return f"{self.base}({self.d})"
        if self.kind == ATMOST:
            return f"{self.base}[{self.d}]"
        return self.base


FALSE = PredRef(FALSE_NAME)


@dataclass(frozen=True)
class Atom:
    pred: PredRef
    args: tuple[Var, ...] = ()

    def __repr__(self):
        return render_atom(self)


@dataclass(frozen=True)
class Clause:
    id: int = field(compare=False)
    head: Atom
    constraint: tuple[Constraint, ...]
    body: tuple[Atom, ...]
    # transformation bookkeeping: ("rule1"|"rule2a"|"rule2b"|"eps", source id, d)
    provenance: tuple | None = field(default=None, compare=False, repr=False)

    @property
    def is_integrity(self) -> bool:
        return self.head.pred == FALSE

    def vars(self) -> list[str]:
        seen: dict[str, None] = {}
        for a in (self.head, *self.body):
            for v in a.args:
                seen.setdefault(v.name)
        for c in self.constraint:
            for v in c.vars():
                seen.setdefault(v)
        return list(seen)

    def __repr__(self):
        return render_clause(self)


@dataclass(frozen=True)
class Program:
    clauses: tuple[Clause, ...]
    signatures: dict[PredRef, int] = field(compare=False, hash=False)

    @staticmethod
    def from_clauses(clauses) -> "Program":
        clauses = tuple(replace(c, id=i + 1) for i, c in enumerate(clauses))
        sigs: dict[PredRef, int] = {}
        for c in clauses:
            for a in (c.head, *c.body):
                old = sigs.setdefault(a.pred, len(a.args))
                if old != len(a.args):
                    raise ArityError(
                        f"predicate {a.pred!r} used with arity {len(a.args)} and {old}")
        return Program(clauses, sigs)

    def preds(self) -> list[PredRef]:
        return list(self.signatures)

    def clauses_for(self, pred: PredRef) -> list[Clause]:
        return [c for c in self.clauses if c.head.pred == pred]

    def __repr__(self):
        return render_program(self)


class ArityError(ValueError):
    pass


def is_linear(p: Program) -> bool:
    """A program is linear when no clause has more than one body atom."""
    return all(len(c.body) <= 1 for c in p.clauses)


_LETTERS = [chr(c) for c in range(ord("A"), ord("Z") + 1)]


def canonical_params(n: int) -> tuple[Var, ...]:
    """Canonical parameter tuple A, B, C, ... used for facts and fresh heads."""
    names = _LETTERS[:n] if n <= len(_LETTERS) else _LETTERS + [f"V{i}" for i in range(1, n - len(_LETTERS) + 1)]
    return tuple(Var(x) for x in names[:n])


def fresh_names(used: set[str]):
    for name in _LETTERS:
        if name not in used:
            used.add(name)
            yield name
    for i in itertools.count(1):
        name = f"V{i}"
        if name not in used:
            used.add(name)
            yield name


def normalize_clause(cid, head_pred, head_args, constraints, body, used_names) -> Clause:
    """Enforce distinct-variable atoms; args may be Var or int literals."""
    used = set(used_names)
    fresh = fresh_names(used)
    extra: list[Constraint] = []

    def fix(pred, args):
        seen: set[str] = set()
        out = []
        for a in args:
            if isinstance(a, int):
                v = next(fresh)
                extra.append(Constraint.make({v: 1}, -a, EQ))
                out.append(Var(v))
            elif a.name in seen:
                v = next(fresh)
                extra.append(Constraint.make({v: 1, a.name: -1}, 0, EQ))
                out.append(Var(v))
            else:
                seen.add(a.name)
                out.append(a)
        return Atom(pred, tuple(out))

    head = fix(head_pred, head_args)
    atoms = [fix(a.pred, a.args) for a in body]
    return Clause(cid, head, tuple(constraints) + tuple(extra), tuple(atoms))


# ---------------------------------------------------------------------------
# printing

def render_atom(a: Atom) -> str:
    if not a.args:
        if a.pred.indexed and a.pred.base != FALSE_NAME:
            return f"{a.pred!r}()"  # disambiguates from a unary plain atom
        return repr(a.pred)
    return f"{a.pred!r}({', '.join(v.name for v in a.args)})"


def render_clause(c: Clause) -> str:
    items = [render_constraint(x) for x in c.constraint] + [render_atom(a) for a in c.body]
    if not items:
        return f"{render_atom(c.head)}."
    return f"{render_atom(c.head)} :- {', '.join(items)}."


def render_program(p: Program) -> str:
    return "".join(render_clause(c) + "\n" for c in p.clauses)


# ---------------------------------------------------------------------------
# structural comparison up to variable renaming

def alpha_equal(c1: Clause, c2: Clause) -> bool:
    """Heads, bodies and constraint multisets equal under a variable bijection."""
    if c1.head.pred != c2.head.pred or len(c1.body) != len(c2.body):
        return False
    for a, b in zip(c1.body, c2.body):
        if a.pred != b.pred or len(a.args) != len(b.args):
            return False
    mapping: dict[str, str] = {}
    for a, b in zip((c1.head, *c1.body), (c2.head, *c2.body)):
        for v, w in zip(a.args, b.args):
            if mapping.setdefault(v.name, w.name) != w.name:
                return False
    if len(set(mapping.values())) != len(mapping):
        return False
    cvars1 = {v for c in c1.constraint for v in c.vars()}
    cvars2 = {v for c in c2.constraint for v in c.vars()}
    free1 = sorted(cvars1 - set(mapping))
    free2 = sorted(cvars2 - set(mapping.values()))
    if len(free1) != len(free2):
        return False
    target = sorted(c2.constraint, key=repr)
    for perm in itertools.permutations(free2):
        m = dict(mapping, **dict(zip(free1, perm)))
        if len(set(m.values())) != len(m):
            continue
        if sorted((c.rename(m) for c in c1.constraint), key=repr) == target:
            return True
    return False


def multiset_alpha_equal(cs1, cs2) -> bool:
    """Clause multisets equal up to per-clause variable renaming."""
    cs1, cs2 = list(cs1), list(cs2)
    if len(cs1) != len(cs2):
        return False
    remaining = list(cs2)
    for c in cs1:
        for other in remaining:
            if alpha_equal(c, other):
                remaining.remove(other)
                break
        else:
            return False
    return True


# ---------------------------------------------------------------------------
# index erasure

def erase_indices_program(p: Program) -> Program:
    def erase_atom(a: Atom) -> Atom:
        return Atom(a.pred.erase(), a.args)

    out = [replace(c, head=erase_atom(c.head), body=tuple(erase_atom(a) for a in c.body))
           for c in p.clauses]
    return Program.from_clauses(out)
