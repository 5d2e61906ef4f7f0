"""Command-line front end.

Exit codes: 0 equivalent (or success), 1 not equivalent, 2 error,
3 engines disagree (``check --engine all``).
"""

from __future__ import annotations

import argparse
import random
import sys
import time
from typing import Optional, Sequence

from .equivalences import (ENGINES, EquivalenceId, UnsupportedEngineError, characteriser,
                           engine_supports, equivalence_relation, resolve_alphabet,
                           tester_formula)
from .lts import Lts, LtsError, format_aut, parse_aut, random_lts
from .logic import FormulaSyntaxError, FormulaTypeError, Prop, parse_formula, to_text, type_check
from .naive import EvaluationError, GuardrailError, NaiveEngine
from . import oracles
from .needdriven import NeedDrivenEngine
from .relations import PairSpace

EXIT_EQUIVALENT, EXIT_INEQUIVALENT, EXIT_ERROR, EXIT_DISAGREE = 0, 1, 2, 3

EPILOG = """exit codes:
  0  equivalent / success
  1  not equivalent
  2  error (bad input, unsupported engine, order-2 formula, guardrail)
  3  engines disagree (check --engine all)
"""


class CliError(Exception):
    pass


def _alphabet(text: Optional[str]) -> Optional[tuple[str, ...]]:
    if text is None:
        return None
    return tuple(a.strip() for a in text.split(",") if a.strip())


def _load(path: str, alphabet) -> Lts:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise CliError(f"cannot read {path}: {exc.strerror}") from None
    try:
        return parse_aut(text, alphabet)
    except LtsError as exc:
        raise CliError(f"{path}: {exc}") from None


def _print_stats(stats: dict, out) -> None:
    keys = ("iterations", "explored_args", "table_entries", "seconds")
    parts = [f"{k}={stats[k]:.4f}" if k == "seconds" else f"{k}={stats[k]}"
             for k in keys if k in stats]
    print("  stats: " + " ".join(parts), file=out)


def _run_engine(engine: str, lts1: Lts, p: int, lts2: Lts, q: int, eq: EquivalenceId,
                alphabet, dumps: list[str]) -> tuple[bool, dict]:
    stats: dict = {}
    start = time.perf_counter()
    if engine == "oracle":
        l1, l2, _ = resolve_alphabet(lts1, lts2, alphabet)
        verdict = oracles.equivalent(l1, p, l2, q, eq)
    elif engine == "needdriven":
        l1, l2, alph = resolve_alphabet(lts1, lts2, alphabet)
        ev = NeedDrivenEngine(l1, l2)
        rel = ev.run(characteriser(tester_formula(eq, alph)))
        verdict = (p, q) in rel
        stats.update(iterations=ev.stats.iterations, explored_args=ev.stats.explored_args,
                     table_entries=ev.stats.table_entries)
        for inst in ev.instances:
            if inst.graph is not None:
                dumps.append(inst.graph.to_dot(ev.space))
    elif engine == "treq":
        from .treq import treq_run
        l1, l2, _ = resolve_alphabet(lts1, lts2, alphabet)
        fwd, bwd = treq_run(l1, l2), treq_run(l2, l1)
        verdict = (p, q) not in fwd.relation and (q, p) not in bwd.relation
        stats.update(iterations=fwd.rounds + bwd.rounds,
                     explored_args=len(fwd.graph) + len(bwd.graph))
        dumps.append(fwd.graph.to_dot(PairSpace(l1, l2)))
        dumps.append(bwd.graph.to_dot(PairSpace(l2, l1)))
    else:
        rel = equivalence_relation(lts1, lts2, eq, engine, alphabet=alphabet, stats=stats)
        verdict = (p, q) in rel
    stats["seconds"] = time.perf_counter() - start
    return verdict, stats


def cmd_check(args, out) -> int:
    alphabet = _alphabet(args.alphabet)
    lts1 = _load(args.lts1, alphabet)
    lts2 = _load(args.lts2, alphabet)
    try:
        eq = EquivalenceId.parse(args.equiv)
    except ValueError as exc:
        raise CliError(str(exc)) from None
    for lts, s, flag in ((lts1, args.p, "--p"), (lts2, args.q, "--q")):
        if not 0 <= s < lts.num_states:
            raise CliError(f"{flag} {s} is not a state (0..{lts.num_states - 1})")
    engines = [e for e in ENGINES if engine_supports(e, eq)] if args.engine == "all" \
        else [args.engine]
    if args.engine != "all" and not engine_supports(args.engine, eq):
        if eq is EquivalenceId.POSSIBLE_FUTURES:
            raise CliError("order-2 formula not evaluable")
        raise CliError(f"engine {args.engine} does not support {eq.value}")
    dumps: list[str] = []
    verdicts = {}
    for engine in engines:
        try:
            verdict, stats = _run_engine(engine, lts1, args.p, lts2, args.q, eq, alphabet, dumps)
        except GuardrailError as exc:
            if args.engine != "all":
                raise
            print(f"{engine}: skipped ({exc})", file=out)
            continue
        verdicts[engine] = verdict
        label = "EQUIVALENT" if verdict else "NOT EQUIVALENT"
        print(f"{engine}: {label}" if args.engine == "all" else label, file=out)
        if args.stats:
            _print_stats(stats, out)
    if args.dump_deps:
        with open(args.dump_deps, "w", encoding="utf-8") as fh:
            fh.write("".join(dumps))
    values = set(verdicts.values())
    if len(values) > 1:
        print("ENGINES DISAGREE", file=out)
        return EXIT_DISAGREE
    if args.engine == "all":
        print("EQUIVALENT" if values == {True} else "NOT EQUIVALENT", file=out)
    return EXIT_EQUIVALENT if values == {True} else EXIT_INEQUIVALENT


def cmd_modelcheck(args, out) -> int:
    alphabet = _alphabet(args.alphabet)
    lts1 = _load(args.lts1, alphabet)
    lts2 = _load(args.lts2, alphabet)
    if args.formula:
        try:
            with open(args.formula, encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            raise CliError(f"cannot read {args.formula}: {exc.strerror}") from None
    else:
        text = args.expr
    phi = parse_formula(text)
    t = type_check([], phi, dim=2)
    if t != Prop(2):
        raise CliError(f"formula has type {t}, expected a closed P2 formula")
    l1, l2, _ = resolve_alphabet(lts1, lts2, alphabet)
    ev = NaiveEngine(l1, l2) if args.engine == "naive" else NeedDrivenEngine(l1, l2)
    rel = ev.run(phi)
    print(f"# pairs (p,q) with p a state of {args.lts1} and q a state of {args.lts2}, "
          f"each numbered locally from 0", file=out)
    for p, q in sorted(rel.pairs()):
        print(f"({p},{q})", file=out)
    if args.stats:
        _print_stats({"iterations": ev.stats.iterations, "table_entries": ev.stats.table_entries,
                      "explored_args": ev.stats.explored_args}, out)
    return 0


def cmd_emit_formula(args, out) -> int:
    try:
        eq = EquivalenceId.parse(args.equiv)
    except ValueError as exc:
        raise CliError(str(exc)) from None
    alphabet = _alphabet(args.alphabet) or ()
    phi = tester_formula(eq, alphabet, alphabet_bound=args.alphabet_bound)
    if args.characteriser:
        phi = characteriser(phi)
    print(to_text(phi), file=out)
    return 0


def cmd_gen_random(args, out) -> int:
    if args.states < 1:
        raise CliError("--states must be at least 1")
    if not 0 <= args.actions <= 26:
        raise CliError("--actions must lie in 0..26")
    if not 0.0 <= args.density <= 1.0:
        raise CliError("--density must lie in [0, 1]")
    lts = random_lts(args.states, args.actions, args.density, random.Random(args.seed))
    out.write(format_aut(lts))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="spectrum", description="Process equivalence checking by fixpoint model checking.",
        epilog=EPILOG, formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = parser.add_subparsers(dest="command", required=True)
    equivs = ", ".join(e.value for e in EquivalenceId)

    c = sub.add_parser("check", help="decide whether two states are equivalent",
                       epilog=EPILOG, formatter_class=argparse.RawDescriptionHelpFormatter)
    c.add_argument("--lts1", required=True, help="first system (.aut)")
    c.add_argument("--lts2", required=True, help="second system (.aut)")
    c.add_argument("--p", type=int, required=True, help="state of the first system")
    c.add_argument("--q", type=int, required=True, help="state of the second system")
    c.add_argument("--equiv", required=True, help=f"one of: {equivs}")
    c.add_argument("--engine", default="needdriven", choices=list(ENGINES) + ["all"])
    c.add_argument("--alphabet", help="declared alphabet, comma separated")
    c.add_argument("--stats", action="store_true", help="print iteration statistics")
    c.add_argument("--dump-deps", metavar="FILE", help="write dependency graphs as DOT")
    c.set_defaults(func=cmd_check)

    m = sub.add_parser("modelcheck", help="list the pairs satisfying a closed formula")
    m.add_argument("--lts1", required=True)
    m.add_argument("--lts2", required=True)
    src = m.add_mutually_exclusive_group(required=True)
    src.add_argument("--expr", help="formula text")
    src.add_argument("--formula", metavar="FILE", help="file holding the formula")
    m.add_argument("--engine", default="needdriven", choices=["naive", "needdriven"])
    m.add_argument("--alphabet")
    m.add_argument("--stats", action="store_true")
    m.set_defaults(func=cmd_modelcheck)

    e = sub.add_parser("emit-formula", help="print the formula defining an equivalence")
    e.add_argument("--equiv", required=True, help=f"one of: {equivs}")
    e.add_argument("--alphabet", required=True, help="actions, comma separated")
    e.add_argument("--alphabet-bound", type=int, default=4)
    kind = e.add_mutually_exclusive_group()
    kind.add_argument("--tester", action="store_true", help="the tester (default)")
    kind.add_argument("--characteriser", action="store_true",
                      help="the characterising formula !phi & !swap(phi)")
    e.set_defaults(func=cmd_emit_formula)

    g = sub.add_parser("gen-random", help="print a pseudo-random system in .aut format")
    g.add_argument("--states", type=int, required=True)
    g.add_argument("--actions", type=int, required=True)
    g.add_argument("--density", type=float, default=0.3)
    g.add_argument("--seed", type=int, default=0)
    g.set_defaults(func=cmd_gen_random)
    return parser


def main(argv: Optional[Sequence[str]] = None, out=None) -> int:
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    try:
        return args.func(args, out)
    except (CliError, LtsError, FormulaSyntaxError, FormulaTypeError, EvaluationError,
            UnsupportedEngineError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
