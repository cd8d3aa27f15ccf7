"""The at-most-k-dimension transformation.

Every predicate p of the source program is split into indexed copies p(d)
(derivations of dimension exactly d) and p[d] (dimension at most d) for
0 <= d <= k.  The output program's derivation trees are, after contracting
the bookkeeping steps introduced by rule 3, exactly the source program's
derivation trees of dimension at most k.

Rule groups, in output order:

1. A body-free clause H :- C yields H(0) :- C.  A one-atom clause
   H :- C, B yields H(d) :- C, B(d) for every 0 <= d <= k.
2. For a clause H :- C, B1..Br with r > 1 and each 1 <= d <= k:
   (a) one child keeps dimension d, the rest drop below:
       H(d) :- C, Bj(d), Bi[d-1] (i != j), for each j;
   (b) a set J of children ties at dimension d-1, the rest drop to d-2:
       H(d) :- C, Bi(d-1) for i in J, Bi[d-2] otherwise, emitted when all
       indices are defined (d >= 2 unless J covers every child).
       ``tie_subsets="pairs"`` restricts J to two-element sets; the default
       "all" admits every J with |J| >= 2, which is required for ties of
       three or more equally-deep children (see the regression tests).
3. Bookkeeping clauses H[d] :- H(e) for every predicate H, 0 <= d <= k,
   0 <= e <= d.
"""

from __future__ import annotations

from itertools import combinations

from .syntax import (ATMOST, EXACT, Atom, Clause, PredRef, Program,
                     canonical_params, erase_indices_program)


def _indexed(atom: Atom, kind: str, d: int) -> Atom:
    return Atom(atom.pred.with_index(kind, d), atom.args)


def _bases(p: Program) -> list[str]:
    return sorted({pred.base for pred in p.signatures})


def kdim(p: Program, k: int, tie_subsets: str = "all") -> Program:
    if k < 0:
        raise ValueError("dimension bound must be nonnegative")
    if any(pred.indexed for pred in p.signatures):
        raise ValueError("input program already contains indexed predicates")
    if tie_subsets not in ("all", "pairs"):
        raise ValueError(f"unknown tie_subsets mode {tie_subsets!r}")

    out: list[Clause] = []
    for c in p.clauses:
        if len(c.body) == 0:
            out.append(Clause(0, _indexed(c.head, EXACT, 0), c.constraint, (),
                              provenance=("rule1", c.id, 0)))
        elif len(c.body) == 1:
            for d in range(k + 1):
                out.append(Clause(0, _indexed(c.head, EXACT, d), c.constraint,
                                  (_indexed(c.body[0], EXACT, d),),
                                  provenance=("rule1", c.id, d)))
    for c in p.clauses:
        r = len(c.body)
        if r <= 1:
            continue
        for d in range(1, k + 1):
            for j in range(r):
                body = tuple(_indexed(b, EXACT, d) if i == j else _indexed(b, ATMOST, d - 1)
                             for i, b in enumerate(c.body))
                out.append(Clause(0, _indexed(c.head, EXACT, d), c.constraint, body,
                                  provenance=("rule2a", c.id, d, j)))
            sizes = (2,) if tie_subsets == "pairs" else range(2, r + 1)
            for size in sizes:
                for J in combinations(range(r), size):
                    if size < r and d < 2:
                        continue  # some child would need a negative index
                    body = tuple(_indexed(b, EXACT, d - 1) if i in J
                                 else _indexed(b, ATMOST, d - 2)
                                 for i, b in enumerate(c.body))
                    out.append(Clause(0, _indexed(c.head, EXACT, d), c.constraint, body,
                                      provenance=("rule2b", c.id, d, J)))
    for base in _bases(p):
        arity = next(n for pred, n in p.signatures.items() if pred.base == base)
        params = canonical_params(arity)
        for d in range(k + 1):
            for e in range(d + 1):
                out.append(Clause(0, Atom(PredRef(base, ATMOST, d), params), (),
                                  (Atom(PredRef(base, EXACT, e), params),),
                                  provenance=("eps", None, d, e)))
    return Program.from_clauses(out)


def clause_count(p: Program, k: int, tie_subsets: str = "all") -> int:
    """Closed-form size of kdim(p, k); cross-checked against the output."""
    total = 0
    for c in p.clauses:
        r = len(c.body)
        if r == 0:
            total += 1
        elif r == 1:
            total += k + 1
        else:
            for d in range(1, k + 1):
                total += r
                if tie_subsets == "pairs":
                    full = r * (r - 1) // 2
                    total += full if (r == 2 or d >= 2) else 0
                else:
                    total += 1  # J covering every child, defined for all d >= 1
                    if d >= 2:
                        total += 2 ** r - 2 - r  # proper subsets of size >= 2
    total += len(_bases(p)) * (k + 1) * (k + 2) // 2
    return total


def erase_indices(x):
    """Drop dimension annotations from a Program or a Model."""
    if isinstance(x, Program):
        return erase_indices_program(x)
    return x.erase_indices()
