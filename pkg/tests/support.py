"""Shared fixtures data and small independent helpers for the tests."""

from __future__ import annotations

import random
from pathlib import Path

from spectrum.logic import TOP, And, Modal, Mu, Neg, Prop, Top, Var, box, or_
from spectrum.lts import Lts, parse_aut, random_lts

DATA = Path(__file__).parent / "data"

PHI_T = ("(mu F(X:+,Y:+):P2->P2->P2. (X & Y) | F <a>1 X [a]2 Y | F <b>1 X [b]2 Y) "
         "true false")


def example_pair() -> tuple[Lts, Lts]:
    left = parse_aut((DATA / "example_left.aut").read_text())
    right = parse_aut((DATA / "example_right.aut").read_text())
    return left, right


def lts(n: int, edges, alphabet=None) -> Lts:
    return Lts.build(n, edges, alphabet)


def ab_and_ab_plus_a() -> tuple[Lts, Lts]:
    """``a.b`` (root 0) and ``a.b + a`` (root 0)."""
    first = lts(3, [(0, "a", 1), (1, "b", 2)])
    second = lts(4, [(0, "a", 1), (1, "b", 2), (0, "a", 3)])
    return first, second


def branching_pair() -> tuple[Lts, Lts]:
    """``a.(b + c)`` (root 0) and ``a.b + a.c`` (root 0)."""
    first = lts(4, [(0, "a", 1), (1, "b", 2), (1, "c", 3)])
    second = lts(5, [(0, "a", 1), (1, "b", 2), (0, "a", 3), (3, "c", 4)])
    return first, second


def random_pair(rng: random.Random, max_states: int = 3, actions: int = 2):
    n1, n2 = rng.randint(1, max_states), rng.randint(1, max_states)
    density = rng.choice([0.15, 0.25, 0.35, 0.5])
    return random_lts(n1, actions, density, rng), random_lts(n2, actions, density, rng)


def random_formula(rng: random.Random, depth: int, actions=("a", "b"), max_index: int = 2,
                   bound=()):
    """Random closed order-0 formula.

    ``bound`` lists the enclosing fixpoint variables with a flag telling
    whether the current position is positive for them; a variable is only
    emitted where it is, so every fixpoint body is monotone.
    """
    def sub(b=bound):
        return random_formula(rng, depth - 1, actions, max_index, b)

    usable = [x for x, positive in bound if positive]
    if depth <= 0:
        if usable and rng.random() < 0.5:
            return Var(rng.choice(usable))
        return TOP if rng.random() < 0.5 else Neg(TOP)
    k = rng.randrange(6)
    if k == 0:
        return Neg(sub([(x, not positive) for x, positive in bound]))
    if k == 1:
        return And(sub(), sub())
    if k == 2:
        return or_(sub(), sub())
    if k == 3:
        return Modal(rng.choice(actions), rng.randint(1, max_index), sub())
    if k == 4:
        return box(rng.choice(actions), rng.randint(1, max_index), sub())
    name = f"Z{len(bound)}"
    return Mu(name, Prop(2), sub(list(bound) + [(name, True)]))


def eval_sets(phi, l1: Lts, l2: Lts, env=None) -> frozenset:
    """Straightforward set-based evaluation of order-0 formulas."""
    env = dict(env or {})
    full = frozenset((p, q) for p in l1.states for q in l2.states)

    def go(f, env):
        if isinstance(f, Top):
            return full
        if isinstance(f, Var):
            return env[f.name]
        if isinstance(f, Neg):
            return full - go(f.body, env)
        if isinstance(f, And):
            return go(f.left, env) & go(f.right, env)
        if isinstance(f, Modal):
            inner = go(f.body, env)
            if f.index == 1:
                return frozenset((p, q) for p, q in full
                                 if f.action in l1.alphabet
                                 and any((p2, q) in inner for p2 in l1.successors(p, f.action)))
            return frozenset((p, q) for p, q in full
                             if f.action in l2.alphabet
                             and any((p, q2) in inner for q2 in l2.successors(q, f.action)))
        if isinstance(f, Mu):
            cur = frozenset()
            while True:
                nxt = go(f.body, {**env, f.var: cur})
                if nxt == cur:
                    return cur
                cur = nxt
        raise TypeError(f"unsupported in the set evaluator: {f!r}")

    return go(phi, env)
