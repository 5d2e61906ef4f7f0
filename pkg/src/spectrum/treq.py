"""Dedicated trace-inclusion checker.

This is the trace tester specialised by hand: the recursive function over
pairs of relations ``(X, Y)`` is explored from ``(S1 x S2, {})`` along the
moves ``(X, Y) -> (<a>1 X, [a]2 Y)`` for every action, then solved on the
explored nodes. The result holds the pairs ``(p, q)`` where ``p`` has a
finite trace that ``q`` lacks.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

from .lts import Lts
from .needdriven import DEFAULT_BUDGET, DependencyGraph, ExplorationBudgetExceeded
from .relations import PairSpace, Rel2


@dataclass
class TreqResult:
    relation: Rel2
    graph: DependencyGraph
    rounds: int
    values: dict[tuple[int, int], int] = field(repr=False)


def treq_run(lts1: Lts, lts2: Lts, *, budget: int = DEFAULT_BUDGET) -> TreqResult:
    space = PairSpace(lts1, lts2)
    acts = space.alphabet
    root = (space.full, 0)
    graph = DependencyGraph(root)
    graph.add(root)
    work = deque([root])
    while work:
        node = work.popleft()
        x, y = node
        for k, a in enumerate(acts):
            target = (space.diamond(a, 1, x), space.box(a, 2, y))
            graph.edges[(node, k)] = target
            if graph.add(target):
                if len(graph) > budget:
                    raise ExplorationBudgetExceeded(f"more than {budget} argument pairs explored")
                work.append(target)

    values = {n: 0 for n in graph.nodes}
    succ = {n: [graph.edges[(n, k)] for k in range(len(acts))] for n in graph.nodes}
    rounds = 0
    changed = True
    while changed:
        rounds += 1
        changed = False
        # in place, in discovery order: later nodes already see this round's updates
        for n in graph.nodes:
            v = n[0] & n[1]
            for t in succ[n]:
                v |= values[t]
            if v != values[n]:
                values[n] = v
                changed = True
    return TreqResult(space.rel(values[root]), graph, rounds, values)


def treq(lts1: Lts, lts2: Lts, *, budget: int = DEFAULT_BUDGET) -> Rel2:
    """Pairs ``(p, q)`` such that some trace of ``p`` is not a trace of ``q``."""
    return treq_run(lts1, lts2, budget=budget).relation


def trace_equivalent(lts1: Lts, p: int, lts2: Lts, q: int, *, budget: int = DEFAULT_BUDGET) -> bool:
    lts1.check_state(p)
    lts2.check_state(q)
    return (p, q) not in treq(lts1, lts2, budget=budget) \
        and (q, p) not in treq(lts2, lts1, budget=budget)
