"""Direct decision procedures for every equivalence, used as ground truth.

These work on plain Python sets and share no code with the formula engines.
Simulation-like relations are computed by deleting violating pairs from the
full product until nothing changes. Trace-like equivalences are decided by a
synchronised subset construction. A bounded enumerator of the defining sets
serves as a second, independent oracle for the trace-like family.
"""

from __future__ import annotations

from collections import deque
from itertools import combinations
from typing import Callable

from .lts import Lts, common_alphabet
from .relations import Rel2

TRACE_VARIANTS = ("trace", "completed_trace", "failure", "readiness", "failure_trace",
                  "ready_trace")
ENUMERATION_LIMIT = 2_000_000


def _shared(lts1: Lts, lts2: Lts) -> tuple[Lts, Lts, tuple[str, ...]]:
    alphabet = common_alphabet(lts1, lts2)
    return lts1.with_alphabet(alphabet), lts2.with_alphabet(alphabet), alphabet


def _subsets(alphabet) -> list[frozenset[str]]:
    return [frozenset(c) for k in range(len(alphabet) + 1) for c in combinations(alphabet, k)]


# -- simulation family --

def _greatest(lts1: Lts, lts2: Lts, side: Callable[[int, int], bool], both_ways: bool) -> Rel2:
    l1, l2, alphabet = _shared(lts1, lts2)
    rel = {(p, q) for p in l1.states for q in l2.states if side(p, q)}

    def forth(p, q):
        return all(any((p2, q2) in rel for q2 in l2.successors(q, a))
                   for a in alphabet for p2 in l1.successors(p, a))

    def back(p, q):
        return all(any((p2, q2) in rel for p2 in l1.successors(p, a))
                   for a in alphabet for q2 in l2.successors(q, a))

    changed = True
    while changed:
        changed = False
        for pair in sorted(rel):
            if not forth(*pair) or (both_ways and not back(*pair)):
                rel.discard(pair)
                changed = True
    return Rel2.from_pairs(l1.num_states, l2.num_states, rel)


def simulation_preorder(lts1: Lts, lts2: Lts) -> Rel2:
    """Greatest simulation from the first system into the second."""
    return _greatest(lts1, lts2, lambda p, q: True, False)


def completed_simulation_preorder(lts1: Lts, lts2: Lts) -> Rel2:
    return _greatest(lts1, lts2,
                     lambda p, q: (not lts1.initial_actions(p)) == (not lts2.initial_actions(q)),
                     False)


def ready_simulation_preorder(lts1: Lts, lts2: Lts) -> Rel2:
    return _greatest(lts1, lts2, lambda p, q: lts1.initial_actions(p) == lts2.initial_actions(q),
                     False)


def two_nested_simulation_preorder(lts1: Lts, lts2: Lts) -> Rel2:
    """Greatest simulation contained in the converse of the simulation preorder."""
    back = simulation_preorder(lts2, lts1)
    return _greatest(lts1, lts2, lambda p, q: (q, p) in back, False)


def bisimulation(lts1: Lts, lts2: Lts) -> Rel2:
    return _greatest(lts1, lts2, lambda p, q: True, True)


PREORDERS = {
    "simulation": simulation_preorder,
    "completed_simulation": completed_simulation_preorder,
    "ready_simulation": ready_simulation_preorder,
    "two_nested_simulation": two_nested_simulation_preorder,
}


# -- trace family by subset construction --

def _steps(lts: Lts, variant: str, alphabet, subsets):
    """Labelled moves on sets of states for the variant's extended alphabet."""
    out = [(a, lambda S, a=a: frozenset(t for s in S for t in lts.successors(s, a)))
           for a in alphabet]
    if variant == "failure_trace":
        out += [(A, lambda S, A=A: frozenset(s for s in S if not (lts.initial_actions(s) & A)))
                for A in subsets]
    elif variant == "ready_trace":
        out += [(A, lambda S, A=A: frozenset(s for s in S if lts.initial_actions(s) == A))
                for A in subsets]
    return out


def _observation(lts: Lts, variant: str, S: frozenset[int]):
    if variant == "completed_trace":
        return any(not lts.initial_actions(s) for s in S)
    if variant == "failure":
        inits = {lts.initial_actions(s) for s in S}
        # failures are determined by the minimal sets of initial actions
        return frozenset(i for i in inits if not any(j < i for j in inits))
    if variant == "readiness":
        return frozenset(lts.initial_actions(s) for s in S)
    return None


def _sync(l1: Lts, S0: frozenset[int], l2: Lts, T0: frozenset[int], steps1, steps2,
          observe1, observe2) -> bool:
    start = (S0, T0)
    seen = {start}
    queue = deque([start])
    while queue:
        S, T = queue.popleft()
        if bool(S) != bool(T):
            return False
        if not S:
            continue
        if observe1(S) != observe2(T):
            return False
        for (_, f1), (_, f2) in zip(steps1, steps2):
            nxt = (f1(S), f2(T))
            if nxt not in seen:
                seen.add(nxt)
                queue.append(nxt)
    return True


def trace_family_equivalent(lts1: Lts, p: int, lts2: Lts, q: int, variant: str) -> bool:
    if variant not in TRACE_VARIANTS:
        raise ValueError(f"unknown trace variant {variant!r}")
    l1, l2, alphabet = _shared(lts1, lts2)
    l1.check_state(p)
    l2.check_state(q)
    subsets = _subsets(alphabet)
    return _sync(l1, frozenset([p]), l2, frozenset([q]),
                 _steps(l1, variant, alphabet, subsets), _steps(l2, variant, alphabet, subsets),
                 lambda S: _observation(l1, variant, S), lambda T: _observation(l2, variant, T))


def _disjoint_union(lts1: Lts, lts2: Lts) -> Lts:
    n1 = lts1.num_states
    trans = list(lts1.transitions) + [(p + n1, a, q + n1) for p, a, q in lts2.transitions]
    return Lts.build(n1 + lts2.num_states, trans, common_alphabet(lts1, lts2))


def trace_classes(lts: Lts) -> list[int]:
    """Trace-equivalence class id of every state (ids are smallest members)."""
    ids = list(range(lts.num_states))
    for s in lts.states:
        for r in range(s):
            if ids[r] == r and trace_family_equivalent(lts, r, lts, s, "trace"):
                ids[s] = r
                break
    return ids


def possible_futures_equivalent(lts1: Lts, p: int, lts2: Lts, q: int) -> bool:
    l1, l2, alphabet = _shared(lts1, lts2)
    l1.check_state(p)
    l2.check_state(q)
    cls = trace_classes(_disjoint_union(l1, l2))
    n1 = l1.num_states
    return _sync(l1, frozenset([p]), l2, frozenset([q]),
                 _steps(l1, "trace", alphabet, []), _steps(l2, "trace", alphabet, []),
                 lambda S: frozenset(cls[s] for s in S),
                 lambda T: frozenset(cls[t + n1] for t in T))


# -- bounded enumeration of the defining sets --

def _enumerate(lts: Lts, p: int, variant: str, depth: int, alphabet, budget: list[int]):
    """Observable sequences of ``p`` with at most ``depth`` symbols.

    For failure and ready traces a symbol is an action or a refusal/ready set.
    Two such sets are never taken in a row: that only repeats an idempotent
    filter and adds no information.
    """
    subsets = _subsets(alphabet)
    init = {s: lts.initial_actions(s) for s in lts.states}
    succ = {(s, a): lts.successors(s, a) for s in lts.states for a in alphabet}
    observing = variant in ("failure_trace", "ready_trace")
    out = set()
    frontier = {((), p, False)}
    for level in range(depth + 1):
        for word, s, _ in frontier:
            i = init[s]
            if variant in ("trace", "failure_trace", "ready_trace"):
                out.add(word)
            elif variant == "completed_trace":
                out.add(("T",) + word)
                if not i:
                    out.add(("C",) + word)
            elif variant == "failure":
                out.update((word, A) for A in subsets if not (i & A))
            elif variant == "readiness":
                out.add((word, i))
        if level == depth:
            break
        nxt = set()
        for word, s, after_obs in frontier:
            for a in init[s]:
                nxt.update((word + (a,), t, False) for t in succ[(s, a)])
            if observing and not after_obs:
                if variant == "failure_trace":
                    nxt.update((word + (A,), s, True) for A in subsets if not (init[s] & A))
                else:
                    nxt.add((word + (init[s],), s, True))
        budget[0] -= len(nxt)
        if budget[0] < 0:
            raise RuntimeError("bounded enumeration exceeded its size guard")
        frontier = nxt
    return frozenset(out)


def _bounded_traces(lts: Lts, p: int, depth: int, budget: list[int]) -> frozenset:
    return _enumerate(lts, p, "trace", depth, lts.alphabet, budget)


def bounded_enumeration_check(lts1: Lts, p: int, lts2: Lts, q: int, variant: str, depth: int,
                              *, limit: int = ENUMERATION_LIMIT) -> bool:
    """Compare the variant's defining sets restricted to sequences of ``depth`` symbols.

    Possible futures are compared as pairs of a trace and the target's trace
    set, both truncated to ``depth``.
    """
    if depth <= 0:
        return True
    l1, l2, alphabet = _shared(lts1, lts2)
    l1.check_state(p)
    l2.check_state(q)
    budget = [limit]
    if variant == "possible_futures":
        return _bounded_futures(l1, p, depth, budget) == _bounded_futures(l2, q, depth, budget)
    if variant not in TRACE_VARIANTS:
        raise ValueError(f"unknown variant {variant!r}")
    return _enumerate(l1, p, variant, depth, alphabet, budget) == \
        _enumerate(l2, q, variant, depth, alphabet, budget)


def _bounded_futures(lts: Lts, p: int, depth: int, budget: list[int]) -> frozenset:
    futures = {s: _bounded_traces(lts, s, depth, budget) for s in lts.states}
    out = set()
    frontier = {((), p)}
    for step in range(depth + 1):
        for word, s in frontier:
            out.add((word, futures[s]))
        if step == depth:
            break
        frontier = {(word + (a,), t) for word, s in frontier
                    for a in lts.initial_actions(s) for t in lts.successors(s, a)}
        budget[0] -= len(frontier)
        if budget[0] < 0:
            raise RuntimeError("bounded enumeration exceeded its size guard")
    return frozenset(out)


# -- dispatch --

def equivalent(lts1: Lts, p: int, lts2: Lts, q: int, eq) -> bool:
    name = getattr(eq, "value", eq)
    if name in TRACE_VARIANTS:
        return trace_family_equivalent(lts1, p, lts2, q, name)
    if name == "possible_futures":
        return possible_futures_equivalent(lts1, p, lts2, q)
    if name == "bisimulation":
        return (p, q) in bisimulation(lts1, lts2)
    if name in PREORDERS:
        pre = PREORDERS[name]
        return (p, q) in pre(lts1, lts2) and (q, p) in pre(lts2, lts1)
    raise ValueError(f"unknown equivalence {name!r}")


def equivalence_relation(lts1: Lts, lts2: Lts, eq) -> Rel2:
    """All equivalent pairs ``(p, q)`` according to the oracle."""
    name = getattr(eq, "value", eq)
    n1, n2 = lts1.num_states, lts2.num_states
    if name == "bisimulation":
        return bisimulation(lts1, lts2)
    if name in PREORDERS:
        pre = PREORDERS[name]
        return pre(lts1, lts2) & pre(lts2, lts1).transpose()
    return Rel2.from_pairs(n1, n2, [(p, q) for p in range(n1) for q in range(n2)
                                    if equivalent(lts1, p, lts2, q, name)])


__all__ = [
    "PREORDERS", "TRACE_VARIANTS", "bisimulation", "bounded_enumeration_check",
    "completed_simulation_preorder", "equivalence_relation", "equivalent",
    "possible_futures_equivalent", "ready_simulation_preorder", "simulation_preorder",
    "trace_classes", "trace_family_equivalent", "two_nested_simulation_preorder",
]
