import random

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from spectrum.equivalences import characteriser
from spectrum.logic import (TOP, And, Modal, Neg, box, parse_formula, swap)
from spectrum.lts import Lts, random_lts
from spectrum.naive import (EvaluationError, FuncTable, GuardrailError, NaiveEngine,
                            UnsupportedOrderError, check_pair, mc)
from spectrum.relations import Rel2

from support import PHI_T, eval_sets, example_pair, random_formula, random_pair


def rel(*pairs):
    return Rel2.from_pairs(2, 3, pairs)


FULL = Rel2.full(2, 3)
EMPTY = Rel2.empty(2, 3)
# the four arguments reachable from the initial call on the two-system example
ARGS = [(FULL, EMPTY),
        (rel((1, 0), (1, 1), (1, 2)), rel((0, 0), (1, 0))),
        (rel((0, 0), (0, 1), (0, 2)), rel((0, 1), (0, 2), (1, 1), (1, 2))),
        (EMPTY, FULL)]
ANSWER = rel((1, 0), (0, 1), (0, 2))


def test_top_is_full_product():
    l1, l2 = example_pair()
    assert mc(TOP, None, l1, l2) == FULL


def test_phi_t_on_example():
    l1, l2 = example_pair()
    assert mc(parse_formula(PHI_T), None, l1, l2) == ANSWER


def test_intermediate_tables_on_example():
    l1, l2 = example_pair()
    ev = NaiveEngine(l1, l2, record=True)
    ev.run(parse_formula(PHI_T))
    (tables,) = ev.history
    rows = [[t(*args) for args in ARGS] for t in tables]
    assert rows[0] == [EMPTY] * 4
    assert rows[1] == [EMPTY, rel((1, 0)), rel((0, 1), (0, 2)), EMPTY]
    assert rows[2] == [rel((1, 0)), ANSWER, ANSWER, EMPTY]
    assert rows[3] == rows[4] == [ANSWER, ANSWER, ANSWER, EMPTY]
    # the last sweep only confirms stability
    assert tables[-1] == tables[-2]


def test_check_pair_examples():
    l1, l2 = example_pair()
    phi = parse_formula(PHI_T)
    assert not check_pair(phi, 0, 0, l1, l2)
    assert check_pair(phi, 1, 0, l1, l2)
    assert check_pair(characteriser(phi), 0, 0, l1, l2)


def test_statistics():
    l1, l2 = example_pair()
    ev = NaiveEngine(l1, l2)
    ev.run(parse_formula(PHI_T))
    assert ev.stats.sweep_entries == [4096] * ev.iteration_count
    assert ev.iteration_count == 5
    assert ev.table_entries_computed == 5 * 4096
    ev.run(parse_formula("<a>1 [b]2 true"))
    assert ev.iteration_count == 0


def test_function_values_and_partial_application():
    l1, l2 = example_pair()
    ev = NaiveEngine(l1, l2)
    fn = ev.run(parse_formula("lambda X:+:P2, Y:+:P2. X & Y"))
    assert isinstance(fn, FuncTable) and fn.arity == 2 and len(fn) == 64 * 64
    a, b = rel((0, 0), (1, 1)), rel((1, 1), (1, 2))
    assert fn(a, b) == rel((1, 1))
    assert fn(a)(b) == fn(a, b)
    with pytest.raises(EvaluationError):
        fn(a, b, a)


def test_environment_values():
    l1, l2 = example_pair()
    x = rel((0, 0))
    assert mc(parse_formula("X | <b>1 X", free=["X"]), {"X": x}, l1, l2) == rel((0, 0), (1, 0))
    fn = mc(parse_formula("lambda Z:+:P2. <b>2 Z"), None, l1, l2)
    assert mc(parse_formula("G true", free=["G"]), {"G": fn}, l1, l2) == FULL
    with pytest.raises(EvaluationError):
        mc(parse_formula("X", free=["X"]), {"X": Rel2.full(3, 3)}, l1, l2)


def test_higher_order_rejected():
    l1, l2 = example_pair()
    phi = parse_formula("(lambda g:+:+P2->P2. g true) (lambda x:+:P2. x)")
    with pytest.raises(UnsupportedOrderError, match="order-2"):
        mc(phi, None, l1, l2)


def test_guardrail():
    # 5 x 5 states give 2^25 possible arguments
    big = Lts.build(5, [(0, "a", 1)])
    other = Lts.build(5, [(0, "a", 1)])
    phi = parse_formula("(mu F(X:+):P2->P2. X | F <a>1 X) true")
    with pytest.raises(GuardrailError, match="force"):
        mc(phi, None, big, other)
    # order-0 formulas never tabulate, whatever the size
    assert mc(parse_formula("mu X:P2. <a>1 true | <a>1 X"), None, big, other).pairs() == \
        [(0, q) for q in range(5)]


def test_function_fixpoint_on_three_states():
    l1 = Lts.build(3, [(0, "a", 1), (1, "a", 2)])
    l2 = Lts.build(3, [(0, "a", 1)])
    phi = parse_formula("(mu F(X:+):P2->P2. X | F <a>1 X) (<a>1 true)")
    ev = NaiveEngine(l1, l2)
    assert ev.run(phi) == Rel2.from_pairs(3, 3, [(p, q) for p in (0, 1) for q in range(3)])


def test_nested_fixpoints():
    # states from which an a-path reaches a b-step, on the first component
    l1 = Lts.build(3, [(0, "a", 1), (1, "a", 2), (2, "b", 2)])
    l2 = Lts.build(1, [], ["a", "b"])
    phi = parse_formula("mu X:P2. <b>1 true | <a>1 (mu Y:P2. X | <a>1 Y)")
    assert mc(phi, None, l1, l2) == Rel2.from_pairs(3, 1, [(0, 0), (1, 0), (2, 0)])


def test_order0_agrees_with_set_evaluator_on_larger_systems():
    rng = random.Random(11)
    for _ in range(40):
        n1, n2 = rng.randint(1, 5), rng.randint(1, 5)
        k = rng.randint(1, 2)
        l1, l2 = random_lts(n1, k, 0.3, rng), random_lts(n2, k, 0.3, rng)
        phi = random_formula(rng, 5, actions=l1.alphabet)
        assert set(mc(phi, None, l1, l2).pairs()) == eval_sets(phi, l1, l2)


pairs_and_formulas = st.builds(
    lambda seed: (lambda rng: (random_pair(rng), random_formula(rng, 5)))(random.Random(seed)),
    st.integers(0, 1_000_000))


@given(pairs_and_formulas)
@settings(max_examples=120, deadline=None)
def test_matches_set_evaluator(case):
    (l1, l2), phi = case
    assert set(mc(phi, None, l1, l2).pairs()) == eval_sets(phi, l1, l2)


@given(pairs_and_formulas)
@settings(max_examples=80, deadline=None)
def test_boolean_and_modal_identities(case):
    (l1, l2), phi = case
    ev = NaiveEngine(l1, l2)
    value = ev.run(phi)
    assert ev.run(Neg(Neg(phi))) == value
    for a in "ab":
        for i in (1, 2):
            assert ev.run(box(a, i, phi)) == ev.run(Modal(a, i, Neg(phi))).complement()


@given(pairs_and_formulas, st.integers(0, 1_000_000))
@settings(max_examples=60, deadline=None)
def test_commutation_and_extrusion(case, seed):
    (l1, l2), phi = case
    ev = NaiveEngine(l1, l2)
    assert ev.run(Modal("a", 1, Modal("b", 2, phi))) == ev.run(Modal("b", 2, Modal("a", 1, phi)))
    # psi never moves the second component
    psi = random_formula(random.Random(seed), 3, max_index=1)
    assert ev.run(Modal("a", 2, And(phi, psi))) == ev.run(And(Modal("a", 2, phi), psi))
    assert ev.run(Modal("b", 1, And(phi, swap(psi)))) == ev.run(And(Modal("b", 1, phi), swap(psi)))


def test_fixpoint_tables_grow_and_are_monotone():
    rng = random.Random(3)
    phi = parse_formula(PHI_T)
    for _ in range(10):
        l1, l2 = random_pair(rng, max_states=2)
        ev = NaiveEngine(l1, l2, record=True)
        ev.run(phi)
        (tables,) = ev.history
        assert ev.iteration_count <= (l1.num_states * l2.num_states + 1) * len(tables[0])
        for before, after in zip(tables, tables[1:]):
            assert np.all(before.data & ~after.data == 0)
        final = tables[-1]
        size = ev.space.size
        for _ in range(50):
            x, y = rng.randrange(size), rng.randrange(size)
            x2, y2 = x | rng.randrange(size), y | rng.randrange(size)
            assert final(x, y).issubset(final(x2, y2))
