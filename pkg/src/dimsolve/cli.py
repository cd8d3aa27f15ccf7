"""Command line interface.

``dimsolve [options] <file>`` runs the full solve loop; the subcommands
expose the building blocks:

  dimsolve kdim --k N <file>          print the dimension-bounded program
  dimsolve solve-linear <file>        run the linear fixpoint engine once
  dimsolve dim <tree-file>            dimension of a dumped derivation tree

Exit codes: 0 solved (or subcommand success), 2 unknown / not solved,
1 input or usage errors.  Setting DIMSOLVE_TRACE=1 is equivalent to --trace.
"""

from __future__ import annotations

import argparse
import os
import re
import sys

from .driver import Config, SolveOutcome, solve
from .kdim import kdim
from .linear_solver import NonLinearProgram, solve_linear
from .parser import ParseError, parse
from .syntax import ATMOST, EXACT, ArityError, PredRef, render_program
from .trees import dim, enumerate_trees, height, parse_tree, render_tree

_SUBCOMMANDS = ("solve", "kdim", "solve-linear", "dim")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(1)


def _build_parser() -> _Parser:
    top = _Parser(prog="dimsolve")
    sub = top.add_subparsers(dest="command", required=True)

    s = sub.add_parser("solve", help="solve a set of Horn clauses")
    s.add_argument("file")
    s.add_argument("--max-k", type=int, default=8)
    s.add_argument("--widen-delay", type=int, default=1)
    s.add_argument("--narrow", type=int, choices=(0, 1), default=1)
    s.add_argument("--split-budget", type=int, default=10_000)
    s.add_argument("--timeout-s", type=float, default=None)
    s.add_argument("--trace", action="store_true")
    s.add_argument("--emit-model", metavar="PATH")
    s.add_argument("--dump-trees", type=int, metavar="N",
                   help="print the first N derivation trees and exit")
    s.add_argument("--root", help="root predicate for --dump-trees")
    s.add_argument("--max-nodes", type=int, default=9,
                   help="node budget for --dump-trees")

    k = sub.add_parser("kdim", help="print the at-most-k-dimension program")
    k.add_argument("--k", type=int, required=True)
    k.add_argument("file")

    sl = sub.add_parser("solve-linear", help="run the linear solver once")
    sl.add_argument("file")
    sl.add_argument("--widen-delay", type=int, default=1)
    sl.add_argument("--narrow", type=int, choices=(0, 1), default=1)

    d = sub.add_parser("dim", help="dimension of a dumped derivation tree")
    d.add_argument("file")
    return top


def _read(path: str) -> str:
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as e:
        print(f"dimsolve: cannot read {path}: {e.strerror}", file=sys.stderr)
        raise SystemExit(1)


def _parse_program(path: str):
    try:
        return parse(_read(path))
    except (ParseError, ArityError) as e:
        print(f"dimsolve: {path}: {e}", file=sys.stderr)
        raise SystemExit(1)


def _parse_predref(text: str) -> PredRef:
    m = re.fullmatch(r"([a-z][A-Za-z0-9_]*)(?:\((\d+)\)|\[(\d+)\])?", text)
    if not m:
        print(f"dimsolve: bad predicate reference {text!r}", file=sys.stderr)
        raise SystemExit(1)
    base, exact, atmost = m.groups()
    if exact is not None:
        return PredRef(base, EXACT, int(exact))
    if atmost is not None:
        return PredRef(base, ATMOST, int(atmost))
    return PredRef(base)


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    if not argv:
        argv = ["solve"]
    elif argv[0] not in _SUBCOMMANDS and argv[0] not in ("-h", "--help"):
        argv = ["solve", *argv]
    try:
        args = _build_parser().parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    try:
        return _run(args)
    except SystemExit as e:
        return int(e.code or 0)


def _run(args) -> int:
    if args.command == "kdim":
        program = _parse_program(args.file)
        try:
            sys.stdout.write(render_program(kdim(program, args.k)))
        except ValueError as e:
            print(f"dimsolve: {e}", file=sys.stderr)
            return 1
        return 0

    if args.command == "solve-linear":
        program = _parse_program(args.file)
        try:
            verdict = solve_linear(program, widen_delay=args.widen_delay,
                                   narrow=bool(args.narrow))
        except NonLinearProgram as e:
            print(f"dimsolve: {e}", file=sys.stderr)
            return 1
        if not verdict.solved:
            print("NOT SOLVED")
            return 2
        sys.stdout.write(verdict.model.render())
        return 0

    if args.command == "dim":
        try:
            tree = parse_tree(_read(args.file))
        except ValueError as e:
            print(f"dimsolve: {args.file}: {e}", file=sys.stderr)
            return 1
        print(dim(tree))
        return 0

    # default: solve
    program = _parse_program(args.file)
    if args.dump_trees is not None:
        root = (_parse_predref(args.root) if args.root
                else program.clauses[0].head.pred if program.clauses else None)
        if root is None:
            print("dimsolve: empty program has no trees", file=sys.stderr)
            return 1
        for i, t in enumerate(enumerate_trees(program, root, args.max_nodes)):
            if i >= args.dump_trees:
                break
            sys.stdout.write(render_tree(t))
            print(f"# dim={dim(t)} height={height(t)}")
        return 0
    cfg = Config(max_k=args.max_k, widen_delay=args.widen_delay,
                 narrow=bool(args.narrow), split_budget=args.split_budget,
                 timeout_s=args.timeout_s,
                 trace=args.trace or os.environ.get("DIMSOLVE_TRACE") == "1")
    outcome: SolveOutcome = solve(program, cfg)
    if outcome.solved:
        print("SOLVED")
        sys.stdout.write(outcome.model.render())
        if args.emit_model:
            with open(args.emit_model, "w", encoding="utf-8") as fh:
                fh.write(outcome.model.render())
        return 0
    print(f"UNKNOWN {outcome.reason}")
    return 2


if __name__ == "__main__":
    raise SystemExit(main())
