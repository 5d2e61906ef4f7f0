"""Formulas defining the process equivalences, and a one-call checker.

A tester ``phi`` holds on ``(p, q)`` when ``p`` shows a behaviour that ``q``
cannot reproduce; ``!phi & !swap(phi)`` then holds exactly on equivalent
pairs. Testers for the trace-like equivalences come from a recursive
template over two relation parameters, the simulation-like ones from a plain
least fixpoint.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from enum import Enum
from itertools import combinations
from typing import Optional, Sequence

from .logic import (TOP, And, App, Arrow, Formula, Lam, Modal, Mu, Neg, Prop, Var, Variance,
                    apply, bottom, box, conj, disj, or_, order_of, parse_formula, substitute,
                    swap, to_text, type_check, xor)
from .lts import Lts, common_alphabet
from .naive import EvaluationError, NaiveEngine, UnsupportedOrderError
from .relations import Rel2

DEFAULT_ALPHABET_BOUND = 4

P2 = Prop(2)


class EquivalenceId(str, Enum):
    TRACE = "trace"
    COMPLETED_TRACE = "completed_trace"
    FAILURE = "failure"
    FAILURE_TRACE = "failure_trace"
    READINESS = "readiness"
    READY_TRACE = "ready_trace"
    SIMULATION = "simulation"
    COMPLETED_SIMULATION = "completed_simulation"
    READY_SIMULATION = "ready_simulation"
    TWO_NESTED_SIMULATION = "two_nested_simulation"
    BISIMULATION = "bisimulation"
    POSSIBLE_FUTURES = "possible_futures"

    @classmethod
    def parse(cls, name: str) -> "EquivalenceId":
        try:
            return cls(name)
        except ValueError:
            names = ", ".join(e.value for e in cls)
            raise ValueError(f"unknown equivalence {name!r} (expected one of: {names})") from None


E = EquivalenceId

TRACE_FAMILY = (E.TRACE, E.COMPLETED_TRACE, E.FAILURE, E.FAILURE_TRACE, E.READINESS,
                E.READY_TRACE)
SIMULATION_FAMILY = (E.SIMULATION, E.COMPLETED_SIMULATION, E.READY_SIMULATION,
                     E.TWO_NESTED_SIMULATION, E.BISIMULATION)


@dataclass(frozen=True)
class HierarchyEdge:
    finer: EquivalenceId
    coarser: EquivalenceId
    # False for the edges placing completed simulation, which the classic
    # spectrum diagram leaves out
    in_diagram: bool = True


HIERARCHY: tuple[HierarchyEdge, ...] = (
    HierarchyEdge(E.BISIMULATION, E.TWO_NESTED_SIMULATION),
    HierarchyEdge(E.TWO_NESTED_SIMULATION, E.READY_SIMULATION),
    HierarchyEdge(E.TWO_NESTED_SIMULATION, E.POSSIBLE_FUTURES),
    HierarchyEdge(E.READY_SIMULATION, E.READY_TRACE),
    HierarchyEdge(E.READY_SIMULATION, E.SIMULATION),
    HierarchyEdge(E.READY_TRACE, E.FAILURE_TRACE),
    HierarchyEdge(E.READY_TRACE, E.READINESS),
    HierarchyEdge(E.POSSIBLE_FUTURES, E.READINESS),
    HierarchyEdge(E.READINESS, E.FAILURE),
    HierarchyEdge(E.FAILURE_TRACE, E.FAILURE),
    HierarchyEdge(E.FAILURE, E.COMPLETED_TRACE),
    HierarchyEdge(E.COMPLETED_TRACE, E.TRACE),
    HierarchyEdge(E.SIMULATION, E.TRACE),
    HierarchyEdge(E.READY_SIMULATION, E.COMPLETED_SIMULATION, in_diagram=False),
    HierarchyEdge(E.COMPLETED_SIMULATION, E.SIMULATION, in_diagram=False),
)


def finer_than(a: EquivalenceId, b: EquivalenceId) -> bool:
    """Reflexive-transitive closure of the stored hierarchy."""
    if a == b:
        return True
    return any(e.finer == a and finer_than(e.coarser, b) for e in HIERARCHY)


# -- predicate macros --

def subsets(alphabet: Sequence[str]) -> list[tuple[str, ...]]:
    """All subsets, by increasing size and then lexicographically by alphabet position."""
    return [c for k in range(len(alphabet) + 1) for c in combinations(alphabet, k)]


def fail(actions: Sequence[str], index: int = 1) -> Formula:
    return conj(box(a, index, bottom()) for a in actions)


def ready(actions: Sequence[str], alphabet: Sequence[str], index: int = 1) -> Formula:
    """Exactly the actions in ``actions`` are enabled in component ``index``."""
    enabled = [Modal(a, index, TOP) for a in actions]
    disabled = [box(a, index, bottom()) for a in alphabet if a not in actions]
    return conj(enabled + disabled)


def deadlock(alphabet: Sequence[str], index: int = 1) -> Formula:
    return fail(alphabet, index)


# -- templates --

def _neg(f: Formula) -> Formula:
    return f.body if isinstance(f, Neg) else Neg(f)


def _simplify(f: Formula) -> Formula:
    """Remove double negations; turn ``!(!a & b)`` into ``a | !b``."""
    if isinstance(f, Neg):
        body = _simplify(f.body)
        if isinstance(body, Neg):
            return body.body
        if isinstance(body, And) and isinstance(body.left, Neg) \
                and not isinstance(body.right, Neg):
            return or_(body.left.body, _neg(body.right))
        return Neg(body)
    if isinstance(f, And):
        return And(_simplify(f.left), _simplify(f.right))
    if isinstance(f, Modal):
        return Modal(f.action, f.index, _simplify(f.body))
    if isinstance(f, Lam):
        return Lam(f.var, f.variance, f.param_type, _simplify(f.body))
    if isinstance(f, Mu):
        return Mu(f.var, f.type, _simplify(f.body))
    if isinstance(f, App):
        return App(_simplify(f.fun), _simplify(f.arg))
    return f


def _check_order0(items: Sequence[Formula], free: Sequence[str]) -> None:
    ctx = [(x, Variance.MONO, P2) for x in free]
    for f in items:
        type_check(ctx, f, dim=2)
        if order_of(f, ctx) > 0:
            raise ValueError(f"template entry {to_text(f)} is not of order 0")


def _normalize(f: Formula) -> Formula:
    # reprinting and reparsing renames every binder apart
    return parse_formula(to_text(f))


def template_trace(mod: Sequence[Formula], pred: Sequence[Formula]) -> Formula:
    """Tester built from moves ``mod`` (open in ``X``) and closed predicates ``pred``."""
    _check_order0(mod, ["X"])
    _check_order0(pred, [])
    X, Y, F = Var("X"), Var("Y"), Var("F")
    calls = [apply(F, psi, _simplify(Neg(substitute(swap(psi), "X", Neg(Y))))) for psi in mod]
    body = disj([And(X, Y)] + calls)
    t = Arrow(P2, Variance.MONO, Arrow(P2, Variance.MONO, P2))
    mu = Mu("F", t, Lam("X", Variance.MONO, P2, Lam("Y", Variance.MONO, P2, body)))
    return _normalize(disj(apply(mu, phi, _simplify(Neg(swap(phi)))) for phi in pred))


def template_sim(mod: Sequence[Formula], test: Formula) -> Formula:
    """Tester ``mu X. test | psi_1 | .. | psi_k``."""
    _check_order0(mod, ["X"])
    _check_order0([test], [])
    return _normalize(Mu("X", P2, disj([test] + list(mod))))


def _trace_moves(alphabet) -> list[Formula]:
    return [Modal(a, 1, Var("X")) for a in alphabet]


def _sim_moves(alphabet) -> list[Formula]:
    return [Modal(a, 1, box(a, 2, Var("X"))) for a in alphabet]


def possible_futures_tester(alphabet: Sequence[str]) -> Formula:
    """Order-2 tester; type checks but is outside what the engines evaluate."""
    fun = Arrow(P2, Variance.MONO, P2)
    t = Arrow(fun, Variance.MONO, Arrow(fun, Variance.MONO, Arrow(P2, Variance.MONO, P2)))
    G1, G2, X = Var("G1"), Var("G2"), Var("X")

    def after(index, a, g, boxed):
        inner = App(g, Var("Z"))
        body = box(a, index, inner) if boxed else Modal(a, index, inner)
        return Lam("Z", Variance.MONO, P2, body)

    calls = [apply(Var("FF"), after(1, a, G1, False), after(2, a, G2, True), X) for a in alphabet]
    body = disj([App(G1, App(G2, X))] + calls)
    mu = Mu("FF", t, Lam("G1", Variance.MONO, fun, Lam("G2", Variance.MONO, fun,
                                                     Lam("X", Variance.MONO, P2, body))))
    ident = Lam("X", Variance.MONO, P2, Var("X"))
    phi_t = tester_formula(E.TRACE, alphabet)
    return _normalize(apply(mu, ident, ident, or_(phi_t, swap(phi_t))))


def tester_formula(eq: EquivalenceId | str, alphabet: Sequence[str], *,
                   alphabet_bound: int = DEFAULT_ALPHABET_BOUND) -> Formula:
    eq = EquivalenceId.parse(eq) if isinstance(eq, str) else eq
    alphabet = tuple(alphabet)
    powerset_rows = (E.FAILURE, E.FAILURE_TRACE, E.READINESS, E.READY_TRACE, E.READY_SIMULATION)
    if eq in powerset_rows and len(alphabet) > alphabet_bound:
        raise ValueError(f"alphabet of {len(alphabet)} actions exceeds the bound "
                         f"{alphabet_bound} for {eq.value}")
    moves = _trace_moves(alphabet)
    X = Var("X")
    if eq is E.TRACE:
        return template_trace(moves, [TOP])
    if eq is E.COMPLETED_TRACE:
        # the deadlock predicate alone only compares completed traces; the
        # trivial predicate adds the comparison of plain traces
        return template_trace(moves, [TOP, deadlock(alphabet)])
    if eq is E.FAILURE:
        return template_trace(moves, [fail(A) for A in subsets(alphabet)])
    if eq is E.FAILURE_TRACE:
        return template_trace(moves + [And(X, fail(A)) for A in subsets(alphabet)], [TOP])
    if eq is E.READINESS:
        return template_trace(moves, [ready(A, alphabet) for A in subsets(alphabet)])
    if eq is E.READY_TRACE:
        return template_trace(moves + [And(X, ready(A, alphabet)) for A in subsets(alphabet)],
                              [TOP])
    sim = _sim_moves(alphabet)
    if eq is E.SIMULATION:
        return template_sim(sim, bottom())
    if eq is E.COMPLETED_SIMULATION:
        return template_sim(sim, xor(deadlock(alphabet, 1), deadlock(alphabet, 2)))
    if eq is E.READY_SIMULATION:
        test = disj(xor(ready(A, alphabet, 1), ready(A, alphabet, 2)) for A in subsets(alphabet))
        return template_sim(sim, test)
    if eq is E.TWO_NESTED_SIMULATION:
        return template_sim(sim, swap(template_sim(sim, bottom())))
    if eq is E.BISIMULATION:
        return template_sim(sim + [Modal(a, 2, box(a, 1, X)) for a in alphabet], bottom())
    if eq is E.POSSIBLE_FUTURES:
        return possible_futures_tester(alphabet)
    raise ValueError(f"unknown equivalence {eq!r}")


def characteriser(tester: Formula) -> Formula:
    return And(Neg(tester), Neg(swap(tester)))


def defining_formula(eq: EquivalenceId | str, alphabet: Sequence[str], *,
                     alphabet_bound: int = DEFAULT_ALPHABET_BOUND) -> Formula:
    """Closed formula holding on ``(p, q)`` exactly when ``p`` and ``q`` are equivalent."""
    return characteriser(tester_formula(eq, alphabet, alphabet_bound=alphabet_bound))


def is_evaluable(eq: EquivalenceId | str) -> bool:
    """Whether the defining formula is within order 1."""
    return EquivalenceId.parse(eq) is not E.POSSIBLE_FUTURES


# -- checking --

ENGINES = ("naive", "needdriven", "treq", "oracle")


class UnsupportedEngineError(ValueError):
    pass


@dataclass
class Verdict:
    equivalent: bool
    engine: str
    equivalence: EquivalenceId
    stats: dict = field(default_factory=dict)


def resolve_alphabet(lts1: Lts, lts2: Lts, alphabet: Optional[Sequence[str]] = None
                     ) -> tuple[Lts, Lts, tuple[str, ...]]:
    """Both systems over one alphabet: the declared one, or the union of their own."""
    if alphabet is None:
        alphabet = common_alphabet(lts1, lts2)
    alphabet = tuple(alphabet)
    return lts1.with_alphabet(alphabet), lts2.with_alphabet(alphabet), alphabet


def engine_supports(engine: str, eq: EquivalenceId) -> bool:
    if engine == "oracle":
        return True
    if engine == "treq":
        return eq is E.TRACE
    if engine in ("naive", "needdriven"):
        return eq is not E.POSSIBLE_FUTURES
    return False


def equivalence_relation(lts1: Lts, lts2: Lts, eq: EquivalenceId | str, engine: str = "needdriven",
                         *, alphabet: Optional[Sequence[str]] = None,
                         alphabet_bound: int = DEFAULT_ALPHABET_BOUND, force: bool = False,
                         stats: Optional[dict] = None) -> Rel2:
    """All pairs ``(p, q)`` of the two systems that are equivalent, via a formula engine."""
    from .needdriven import NeedDrivenEngine

    eq = EquivalenceId.parse(eq) if isinstance(eq, str) else eq
    lts1, lts2, alphabet = resolve_alphabet(lts1, lts2, alphabet)
    if engine == "treq":
        if eq is not E.TRACE:
            raise UnsupportedEngineError("engine treq only decides trace equivalence")
        from .treq import treq_run
        fwd, bwd = treq_run(lts1, lts2), treq_run(lts2, lts1)
        if stats is not None:
            stats.update(explored_args=len(fwd.graph) + len(bwd.graph),
                         iterations=fwd.rounds + bwd.rounds)
        return (fwd.relation | bwd.relation.transpose()).complement()
    if engine not in ("naive", "needdriven"):
        raise UnsupportedEngineError(f"engine {engine!r} does not evaluate formulas")
    if eq is E.POSSIBLE_FUTURES:
        raise UnsupportedOrderError("order-2 formula not evaluable")
    phi = defining_formula(eq, alphabet, alphabet_bound=alphabet_bound)
    if engine == "naive":
        ev = NaiveEngine(lts1, lts2, force=force)
    else:
        ev = NeedDrivenEngine(lts1, lts2, force=force)
    result = ev.run(phi)
    if stats is not None:
        stats.update(iterations=ev.stats.iterations, table_entries=ev.stats.table_entries,
                     explored_args=ev.stats.explored_args)
    return result


def check_equivalence(lts1: Lts, p: int, lts2: Lts, q: int, eq: EquivalenceId | str,
                      engine: str = "needdriven", *, alphabet: Optional[Sequence[str]] = None,
                      alphabet_bound: int = DEFAULT_ALPHABET_BOUND, force: bool = False
                      ) -> Verdict:
    eq = EquivalenceId.parse(eq) if isinstance(eq, str) else eq
    if engine not in ENGINES:
        raise UnsupportedEngineError(f"unknown engine {engine!r}")
    if not engine_supports(engine, eq):
        if eq is E.POSSIBLE_FUTURES:
            raise UnsupportedOrderError("order-2 formula not evaluable")
        raise UnsupportedEngineError(f"engine {engine} does not support {eq.value}")
    lts1.check_state(p)
    lts2.check_state(q)
    stats: dict = {}
    start = time.perf_counter()
    if engine == "oracle":
        from .oracles import equivalent
        l1, l2, alphabet = resolve_alphabet(lts1, lts2, alphabet)
        verdict = equivalent(l1, p, l2, q, eq)
    else:
        rel = equivalence_relation(lts1, lts2, eq, engine, alphabet=alphabet,
                                   alphabet_bound=alphabet_bound, force=force, stats=stats)
        verdict = (p, q) in rel
    stats["seconds"] = time.perf_counter() - start
    return Verdict(verdict, engine, eq, stats)


__all__ = [
    "DEFAULT_ALPHABET_BOUND", "ENGINES", "EquivalenceId", "EvaluationError", "HIERARCHY",
    "HierarchyEdge", "SIMULATION_FAMILY", "TRACE_FAMILY", "UnsupportedEngineError", "Verdict",
    "characteriser", "check_equivalence", "deadlock", "defining_formula", "engine_supports",
    "equivalence_relation", "fail", "finer_than", "possible_futures_tester", "ready",
    "resolve_alphabet", "subsets", "template_sim", "template_trace", "tester_formula",
]
