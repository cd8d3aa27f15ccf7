import random

import pytest

from dimsolve.parser import parse
from dimsolve.polyhedra import Polyhedron
from dimsolve.terms import EQ, LE, LT, Constraint

# The motivating three-clause program: binary recursion plus a safety query.
FIB_SRC = """\
fib(A, B) :- A >= 0, A =< 1, B = A.
fib(A, B) :- A > 1, A2 = A - 2, fib(A2, B2),
             A1 = A - 1, fib(A1, B1), B = B1 + B2.
false :- A > 5, fib(A, B), B < A.
"""

# Benchmark variant with unit base values (the form the verification
# benchmark suites use); see benchmarks/fib.pl and notes in the README.
FIB_BENCH_SRC = """\
fib(A, B) :- A >= 0, A =< 1, B = 1.
fib(A, B) :- A > 1, A2 = A - 2, fib(A2, B2),
             A1 = A - 1, fib(A1, B1), B = B1 + B2.
false :- A > 5, fib(A, B), B < A.
"""


@pytest.fixture
def fib():
    return parse(FIB_SRC)


@pytest.fixture
def fib_bench():
    return parse(FIB_BENCH_SRC)


def C(coeffs, const, rel=LE):
    return Constraint.make(coeffs, const, rel)


def poly(dims, *constraints):
    return Polyhedron(dims, constraints)


def grid_points(dims, lo=-3, hi=3):
    """All integer points of the box [lo, hi]^n as dicts."""
    pts = [{}]
    for d in dims:
        pts = [dict(p, **{d: v}) for p in pts for v in range(lo, hi + 1)]
    return pts


def random_constraint(rng, dims, coeff_range=(-4, 4)):
    coeffs = {}
    for d in dims:
        if rng.random() < 0.7:
            coeffs[d] = rng.randint(*coeff_range)
    const = rng.randint(*coeff_range)
    rel = rng.choice([LE, LE, LE, EQ, LT])
    return Constraint.make(coeffs, const, rel)


def random_poly(rng, dims, n_constraints=None, coeff_range=(-4, 4)):
    n = n_constraints if n_constraints is not None else rng.randint(1, 4)
    return Polyhedron(dims, [random_constraint(rng, dims, coeff_range) for _ in range(n)])


def random_program(rng: random.Random, max_preds=4, max_body=3):
    """Small unary-predicate programs with binary/ternary recursion; every
    predicate has a base clause so derivations exist.  Coefficients and
    offsets stay within [-3, 3]."""
    npreds = rng.randint(1, max_preds)
    preds = [f"p{i}" for i in range(npreds)]
    lines = []
    for i, name in enumerate(preds):
        lo = rng.randint(-2, 1)
        lines.append(f"{name}(X) :- X >= {lo}, X =< {lo + rng.randint(0, 3)}.")
    n_rec = rng.randint(0, 2)
    for _ in range(n_rec):
        name = rng.choice(preds)
        r = rng.randint(1, max_body)
        items = []
        if rng.random() < 0.5:
            items.append(f"X >= {rng.randint(-1, 1)}")
        for j in range(r):
            callee = rng.choice(preds)
            off = rng.randint(-2, 2)
            op = rng.choice(["=", ">=", "=<"])
            items.append(f"Y{j} {op} X - {off}" if off >= 0 else f"Y{j} {op} X + {-off}")
            items.append(f"{callee}(Y{j})")
        lines.append(f"{name}(X) :- {', '.join(items)}.")
    if rng.random() < 0.4:
        lines.append(f"false :- X >= {rng.randint(2, 3)}, {preds[0]}(X).")
    return parse("\n".join(lines) + "\n")
