"""Dimension-bounded constrained Horn clause solver over linear integer arithmetic.

The pipeline: parse clauses in CLP syntax, bound the tree dimension of
derivations to obtain a linear under-approximation, solve that with an exact
polyhedral fixpoint engine, test the index-erased model for inductiveness
against the original clauses, and substitute the model into the next
dimension level until a solution is found or resources run out.
"""

from .driver import Config, SolveOutcome, solve
from .kdim import clause_count, erase_indices, kdim
from .linear_solver import (AbstractState, LinearVerdict, solve_linear,
                            stabilized, step)
from .models import (ConstrainedFact, Model, inductive, linearize,
                     satisfies_clause, satisfies_program, violations)
from .parser import ParseError, parse
from .polyhedra import (DimensionMismatch, Polyhedron, entails, hull, project,
                        sat, simplify, widen)
from .syntax import (Atom, Clause, PredRef, Program, Var, is_linear,
                     render_program)
from .terms import Constraint
from .trees import (DerivTree, Node, dim, enumerate_trees, height,
                    render_tree, tree_constraint)

__all__ = [
    "AbstractState", "Atom", "Clause", "Config", "Constraint",
    "ConstrainedFact", "DerivTree", "DimensionMismatch", "LinearVerdict",
    "Model", "Node", "ParseError", "Polyhedron", "PredRef", "Program",
    "SolveOutcome", "Var", "clause_count", "dim", "entails", "enumerate_trees",
    "erase_indices", "height", "hull", "inductive", "is_linear", "kdim",
    "linearize", "parse", "project", "render_program", "render_tree", "sat",
    "satisfies_clause", "satisfies_program", "simplify", "solve",
    "solve_linear", "stabilized", "step", "tree_constraint", "violations",
    "widen",
]
