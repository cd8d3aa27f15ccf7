"""Convex polyhedra in constraint form, with exact rational reasoning.

Satisfiability and projection use Fourier-Motzkin elimination (equalities are
substituted away Gaussian-style first); entailment reduces to satisfiability
of negations; the convex hull uses the standard lifted encoding; widening is
the classic constraint-based operator extended with the usual refinement that
keeps constraints of the new polyhedron able to stand in for a dropped one.
Everything is exact; no floating point anywhere.
"""

from __future__ import annotations

from fractions import Fraction

from .terms import EQ, LE, LT, Constraint, FALSE_CONSTRAINT, linear_combination

_ROW_CAP = 200_000  # guard against pathological Fourier-Motzkin blowup


class DimensionMismatch(ValueError):
    pass


def _prune(rows: list[Constraint]) -> list[Constraint] | None:
    """Drop trivial and dominated rows; None when a contradiction is found."""
    eqs: dict[tuple, Constraint] = {}
    ineqs: dict[tuple, Constraint] = {}
    for r in rows:
        if r.is_contradiction():
            return None
        if r.is_trivial():
            continue
        if r.rel == EQ:
            eqs.setdefault((r.terms, r.const), r)
            continue
        old = ineqs.get(r.terms)
        if old is None:
            ineqs[r.terms] = r
        else:
            # same left-hand side: keep the stronger bound
            if (r.const, r.rel == LT) > (old.const, old.rel == LT):
                ineqs[r.terms] = r
    return list(eqs.values()) + list(ineqs.values())


def _eliminate(rows: list[Constraint], elim: set[str]) -> list[Constraint] | None:
    """Eliminate the given variables; None when the system is infeasible."""
    rows = _prune(rows)
    if rows is None:
        return None
    remaining = set(elim)
    while remaining:
        occur = {v: [r for r in rows if v in dict(r.terms)] for v in remaining}
        # equalities allow exact substitution; do those first
        subst_var = None
        for v in sorted(remaining):
            if any(r.rel == EQ for r in occur[v]):
                subst_var = v
                break
        if subst_var is not None:
            v = subst_var
            eq = next(r for r in occur[v] if r.rel == EQ)
            a = dict(eq.terms)[v]
            new_rows = []
            for r in rows:
                if r is eq:
                    continue
                b = dict(r.terms).get(v, 0)
                if b == 0:
                    new_rows.append(r)
                else:
                    new_rows.append(linear_combination([(1, r), (Fraction(-b, a), eq)], r.rel))
            rows = _prune(new_rows)
            if rows is None:
                return None
            remaining.discard(v)
            continue
        # Fourier-Motzkin on the variable with the fewest pos*neg pairings
        def cost(v: str) -> tuple[int, str]:
            pos = sum(1 for r in occur[v] if dict(r.terms)[v] > 0)
            neg = len(occur[v]) - pos
            return (pos * neg, v)

        v = min(remaining, key=cost)
        pos, neg, rest = [], [], []
        for r in rows:
            c = dict(r.terms).get(v, 0)
            (pos if c > 0 else neg if c < 0 else rest).append(r)
        for p in pos:
            cp = dict(p.terms)[v]
            for n in neg:
                cn = dict(n.terms)[v]
                rel = LT if LT in (p.rel, n.rel) else LE
                rest.append(linear_combination([(-cn, p), (cp, n)], rel))
                if len(rest) > _ROW_CAP:
                    raise RuntimeError("Fourier-Motzkin row cap exceeded")
        rows = _prune(rest)
        if rows is None:
            return None
        remaining.discard(v)
    return rows


class Polyhedron:
    """A conjunction of atomic constraints over an ordered variable tuple."""

    __slots__ = ("dims", "constraints", "_sat")

    def __init__(self, dims, constraints=()):
        self.dims = tuple(dims)
        rows = _prune(list(constraints))
        if rows is None:
            self.constraints = (FALSE_CONSTRAINT,)
            self._sat = False
        else:
            bad = set().union(*(r.vars() for r in rows)) - set(self.dims) if rows else set()
            if bad:
                raise DimensionMismatch(f"constraint variables {sorted(bad)} not in dims")
            self.constraints = tuple(sorted(rows, key=_order_key))
            self._sat = None

    @staticmethod
    def top(dims) -> "Polyhedron":
        return Polyhedron(dims)

    @staticmethod
    def bottom(dims) -> "Polyhedron":
        return Polyhedron(dims, (FALSE_CONSTRAINT,))

    def sat(self) -> bool:
        if self._sat is None:
            self._sat = _eliminate(list(self.constraints), set(self.dims)) is not None
        return self._sat

    def is_empty(self) -> bool:
        return not self.sat()

    def conjoin(self, extra) -> "Polyhedron":
        return Polyhedron(self.dims, self.constraints + tuple(extra))

    def with_dims(self, dims) -> "Polyhedron":
        missing = set(self.dims) - set(dims)
        if missing:
            raise DimensionMismatch(f"cannot drop dims {sorted(missing)} implicitly")
        return Polyhedron(dims, self.constraints)

    def rename(self, mapping: dict[str, str]) -> "Polyhedron":
        dims = tuple(mapping.get(d, d) for d in self.dims)
        if len(set(dims)) != len(dims):
            raise DimensionMismatch("renaming collapses dimensions")
        return Polyhedron(dims, (c.rename(mapping) for c in self.constraints))

    def entails_constraint(self, c: Constraint) -> bool:
        return all(self.conjoin([n]).is_empty() for n in c.negations())

    def entails(self, other: "Polyhedron") -> bool:
        if not set(other.dims) <= set(self.dims):
            raise DimensionMismatch("entailment target uses unknown dimensions")
        if self.is_empty():
            return True
        return all(self.entails_constraint(c) for c in other.constraints)

    def project(self, keep) -> "Polyhedron":
        keep = tuple(keep)
        if not set(keep) <= set(self.dims):
            raise DimensionMismatch("projection keeps unknown dimensions")
        rows = _eliminate(list(self.constraints), set(self.dims) - set(keep))
        if rows is None:
            return Polyhedron.bottom(keep)
        return Polyhedron(keep, rows)

    def hull(self, other: "Polyhedron") -> "Polyhedron":
        if set(self.dims) != set(other.dims):
            raise DimensionMismatch("hull arguments must share dimensions")
        if self.is_empty():
            return other.with_dims(self.dims)
        if other.is_empty():
            return self
        y = {d: f"{d}#1" for d in self.dims}
        z = {d: f"{d}#2" for d in self.dims}
        s1, s2 = "#s1", "#s2"
        rows = []
        for c, copy, s in ((self, y, s1), (other, z, s2)):
            for r in c.constraints:
                coeffs = {copy[v]: k for v, k in r.terms}
                coeffs[s] = r.const
                rows.append(Constraint.make(coeffs, 0, LE if r.rel == LT else r.rel))
        for d in self.dims:
            rows.append(Constraint.make({d: 1, y[d]: -1, z[d]: -1}, 0, EQ))
        rows.append(Constraint.make({s1: 1, s2: 1}, -1, EQ))
        rows.append(Constraint.make({s1: -1}, 0, LE))
        rows.append(Constraint.make({s2: -1}, 0, LE))
        out = _eliminate(rows, set(y.values()) | set(z.values()) | {s1, s2})
        if out is None:
            return Polyhedron.bottom(self.dims)
        return Polyhedron(self.dims, out).simplify()

    def widen(self, other: "Polyhedron") -> "Polyhedron":
        if set(self.dims) != set(other.dims):
            raise DimensionMismatch("widen arguments must share dimensions")
        if self.is_empty():
            return other.with_dims(self.dims)
        if other.is_empty():
            return self
        cs1 = _decompose(self.simplify().constraints)
        cs2 = _decompose(other.simplify().constraints)
        kept = [a for a in cs1 if other.entails_constraint(a)]
        extra = []
        base = Polyhedron(self.dims, cs1)
        for b in cs2:
            if b in kept or b in extra:
                continue
            for a in cs1:
                swapped = Polyhedron(self.dims, [x for x in cs1 if x != a] + [b])
                if swapped.entails(base) and base.entails(swapped):
                    extra.append(b)
                    break
        return Polyhedron(self.dims, kept + extra).simplify()

    def simplify(self) -> "Polyhedron":
        if self.is_empty():
            return Polyhedron.bottom(self.dims)
        kept = _recombine(self.constraints)
        for c in sorted(kept, key=_order_key, reverse=True):
            rest = [k for k in kept if k != c]
            if Polyhedron(self.dims, rest).entails_constraint(c):
                kept = rest
        return Polyhedron(self.dims, kept)

    def eval_point(self, point: dict) -> bool:
        return all(c.eval_point(point) for c in self.constraints)

    def __eq__(self, other):
        return (isinstance(other, Polyhedron)
                and self.dims == other.dims
                and self.constraints == other.constraints)

    def __hash__(self):
        return hash((self.dims, self.constraints))

    def __repr__(self):
        return "{" + ",".join(repr(c) for c in self.constraints) + "}"


def _order_key(c: Constraint):
    return (c.rel != EQ, c.terms, c.const, c.rel)


def _recombine(constraints) -> list[Constraint]:
    """Merge opposite non-strict inequality pairs back into equalities."""
    rows = list(constraints)
    ineqs = {(c.terms, c.const): c for c in rows if c.rel == LE}
    out, used = [], set()
    for c in rows:
        if c in used:
            continue
        if c.rel == LE:
            flipped = Constraint.make({v: -k for v, k in c.terms}, -c.const, LE)
            mate = ineqs.get((flipped.terms, flipped.const))
            if mate is not None and mate is not c:
                out.append(Constraint.make(dict(c.terms), c.const, EQ))
                used.add(mate)
                used.add(c)
                continue
        out.append(c)
    return out


def _decompose(constraints) -> list[Constraint]:
    """Split equalities into opposite non-strict inequality pairs."""
    out = []
    for c in constraints:
        if c.rel == EQ:
            out.append(Constraint.make(dict(c.terms), c.const, LE))
            out.append(Constraint.make({v: -k for v, k in c.terms}, -c.const, LE))
        else:
            out.append(c)
    return out


# Operation-style aliases used throughout the package and the tests.

def sat(c: Polyhedron) -> bool:
    return c.sat()


def entails(c1: Polyhedron, c2: Polyhedron) -> bool:
    return c1.entails(c2)


def project(c: Polyhedron, keep) -> Polyhedron:
    return c.project(keep)


def hull(c1: Polyhedron, c2: Polyhedron) -> Polyhedron:
    return c1.hull(c2)


def widen(c1: Polyhedron, c2: Polyhedron) -> Polyhedron:
    return c1.widen(c2)


def simplify(c: Polyhedron) -> Polyhedron:
    return c.simplify()
