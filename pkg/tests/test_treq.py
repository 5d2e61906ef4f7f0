import random

import pytest

from spectrum import oracles
from spectrum.logic import parse_formula
from spectrum.lts import Lts, random_lts
from spectrum.naive import NaiveEngine
from spectrum.needdriven import ExplorationBudgetExceeded, analyze_fixpoint_call, explore
from spectrum.relations import Rel2
from spectrum.treq import trace_equivalent, treq, treq_run

from support import PHI_T, ab_and_ab_plus_a, example_pair, random_pair


def test_example_pair():
    l1, l2 = example_pair()
    result = treq_run(l1, l2)
    assert result.relation == Rel2.from_pairs(2, 3, [(1, 0), (0, 1), (0, 2)])
    assert len(result.graph) == 4
    # in-place updates settle no later than the round-based solver
    assert result.rounds <= 4


def test_trace_equivalent_examples():
    l1, l2 = example_pair()
    assert trace_equivalent(l1, 0, l2, 0)
    assert not trace_equivalent(l1, 1, l2, 0)


def test_diagonal_is_empty_on_identical_systems():
    rng = random.Random(1)
    for _ in range(20):
        lts = random_lts(rng.randint(1, 4), 2, 0.3, rng)
        rel = treq(lts, lts)
        assert all((p, p) not in rel for p in lts.states)


def test_ab_versus_ab_plus_a():
    first, second = ab_and_ab_plus_a()
    assert (0, 0) not in treq(first, second)
    assert (0, 0) not in treq(second, first)
    assert trace_equivalent(first, 0, second, 0)
    # after a, the b-successor of the first root is not matched by the dead end
    assert not trace_equivalent(first, 1, second, 3)


def test_missing_action_on_one_side():
    l1 = Lts.build(1, [(0, "c", 0)], ["a", "c"])
    l2 = Lts.build(1, [(0, "a", 0)])
    assert treq(l1, l2).pairs() == [(0, 0)]
    assert treq(l2, l1).pairs() == [(0, 0)]


def test_agrees_with_oracle_and_engines():
    rng = random.Random(31)
    phi = parse_formula(PHI_T)
    for _ in range(500):
        l1, l2 = random_pair(rng, max_states=4)
        for p in l1.states:
            for q in l2.states:
                assert trace_equivalent(l1, p, l2, q) == \
                    oracles.trace_family_equivalent(l1, p, l2, q, "trace")
        if l1.num_states * l2.num_states <= 9:
            assert treq(l1, l2) == NaiveEngine(l1, l2).run(phi)


def test_graph_matches_need_driven_exploration():
    rng = random.Random(8)
    analysis, _ = analyze_fixpoint_call(parse_formula(PHI_T))
    for _ in range(50):
        l1, l2 = random_pair(rng)
        n1, n2 = l1.num_states, l2.num_states
        ours = treq_run(l1, l2).graph
        theirs = explore(analysis, [Rel2.full(n1, n2), Rel2.empty(n1, n2)], l1, l2)
        assert ours.nodes == theirs.nodes
        assert ours.edges == theirs.edges


def test_values_are_a_fixpoint():
    rng = random.Random(12)
    for _ in range(30):
        l1, l2 = random_pair(rng)
        result = treq_run(l1, l2)
        graph, values = result.graph, result.values
        for node in graph.nodes:
            expect = node[0] & node[1]
            for target in graph.successors(node):
                expect |= values[target]
            assert values[node] == expect
        bound = l1.num_states * l2.num_states * len(graph) + 1
        assert result.rounds <= bound


def test_budget():
    l1 = Lts.build(3, [(0, "a", 1), (1, "a", 2), (2, "b", 0)])
    l2 = Lts.build(3, [(0, "a", 0), (0, "b", 1), (1, "a", 2)])
    with pytest.raises(ExplorationBudgetExceeded):
        treq(l1, l2, budget=1)
