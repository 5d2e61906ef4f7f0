import random

import pytest
from hypothesis import given, settings, strategies as st

from spectrum.lts import (AutParseError, Lts, LtsError, common_alphabet, format_aut,
                          initial_actions, parse_aut, pre_image, random_lts, successors)

from support import DATA, example_pair

RIGHT_AS_LISTED = """des (2,5,3)
(0,"b",1)
(1,"a",2)
(1,"b",0)
(2,"b",0)
(2,"a",1)
"""


def test_empty_system():
    lts = parse_aut("des (0,0,1)")
    assert lts.num_states == 1
    assert lts.alphabet == ()
    assert lts.transitions == frozenset()


def test_left_example():
    left, _ = example_pair()
    assert left.num_states == 2
    assert left.alphabet == ("b", "a")
    assert left.transitions == {(0, "b", 1), (1, "b", 0), (1, "a", 1)}


def test_right_example_keeps_initial_as_metadata():
    right = parse_aut(RIGHT_AS_LISTED)
    assert right.initial == 2
    assert right.num_states == 3
    assert len(right.transitions) == 5
    assert right.transitions == example_pair()[1].transitions


def test_declared_alphabet_may_add_unused_actions():
    lts = parse_aut('des (0,1,1)\n(0,"a",0)\n', ["a", "c"])
    assert lts.alphabet == ("a", "c")
    assert lts.successors(0, "c") == frozenset()


def test_bare_labels_and_spacing():
    lts = parse_aut("des ( 0 , 1 , 2 )\n(0 , go , 1)\n")
    assert lts.transitions == {(0, "go", 1)}


@pytest.mark.parametrize("text, fragment", [
    ("", "missing"),
    ("des 0 0 1", "malformed header"),
    ("des (0,0,0)", "positive"),
    ("des (3,0,2)", "initial"),
    ('des (0,2,2)\n(0,"a",1)\n', "announces 2"),
    ('des (0,1,2)\n(0,"a",2)\n', "out of range"),
    ('des (0,1,2)\n0 a 1\n', "malformed transition"),
    ('des (0,2,2)\n(0,"a",1)\n(0,"a",1)\n', "duplicate"),
])
def test_parse_errors(text, fragment):
    with pytest.raises(AutParseError, match=fragment):
        parse_aut(text)


def test_label_outside_declared_alphabet():
    with pytest.raises(AutParseError, match="outside declared alphabet"):
        parse_aut('des (0,1,1)\n(0,"b",0)\n', ["a"])


def test_parse_error_reports_line():
    with pytest.raises(AutParseError) as info:
        parse_aut('des (0,2,2)\n(0,"a",1)\n(0,"a",7)\n')
    assert info.value.line == 3


def test_successors_examples():
    left, right = example_pair()
    assert successors(left, 1, "a") == {1}
    assert successors(left, 0, "a") == frozenset()
    dead = Lts.build(2, [(0, "a", 1)])
    assert all(dead.successors(1, a) == frozenset() for a in dead.alphabet)


def test_successors_errors():
    left, _ = example_pair()
    with pytest.raises(LtsError):
        left.successors(0, "c")
    with pytest.raises(LtsError):
        left.successors(5, "a")


def test_initial_actions_examples():
    left, right = example_pair()
    assert initial_actions(left, 1) == {"a", "b"}
    assert initial_actions(right, 0) == {"b"}
    assert initial_actions(Lts.build(2, [(0, "a", 1)]), 1) == frozenset()
    with pytest.raises(LtsError):
        initial_actions(left, 2)


def test_pre_image_examples():
    left, right = example_pair()
    assert pre_image(left, "a", {0, 1}) == {1}
    assert pre_image(left, "a", set()) == frozenset()
    assert pre_image(right, "b", right.states) == {0, 1, 2}
    with pytest.raises(LtsError):
        pre_image(left, "z", {0})


def test_lts_invariants_enforced():
    with pytest.raises(LtsError):
        Lts(2, ("a",), frozenset({(0, "b", 1)}))
    with pytest.raises(LtsError):
        Lts(2, ("a",), frozenset({(0, "a", 2)}))
    with pytest.raises(LtsError):
        Lts(0, (), frozenset())
    with pytest.raises(LtsError):
        Lts(1, ("a", "a"), frozenset())


def test_with_alphabet_must_keep_used_actions():
    left, _ = example_pair()
    assert left.with_alphabet(["a", "b", "c"]).alphabet == ("a", "b", "c")
    with pytest.raises(LtsError):
        left.with_alphabet(["a"])


def test_common_alphabet_order():
    a = Lts.build(1, [(0, "b", 0)])
    b = Lts.build(1, [(0, "a", 0), (0, "b", 0)])
    assert common_alphabet(a, b) == ("b", "a")


def test_format_is_sorted_and_reparses():
    _, right = example_pair()
    text = format_aut(right)
    assert text.splitlines()[0] == "des (0, 5, 3)"
    assert parse_aut(text) == right


def test_random_generation_is_seeded():
    a = random_lts(4, 2, 0.4, random.Random(3))
    b = random_lts(4, 2, 0.4, random.Random(3))
    assert a == b
    assert a.alphabet == ("a", "b")


def test_random_density_extremes():
    assert len(random_lts(3, 2, 1.0, random.Random(0)).transitions) == 3 * 3 * 2
    assert len(random_lts(3, 2, 0.0, random.Random(0)).transitions) == 0
    with pytest.raises(LtsError):
        random_lts(3, 2, 1.5, random.Random(0))


def test_golden_random_file():
    expected = (DATA / "random_seed42_n3_k2.aut").read_text()
    assert format_aut(random_lts(3, 2, 0.3, random.Random(42))) == expected


systems = st.builds(
    lambda n, k, d, seed: random_lts(n, k, d, random.Random(seed)),
    st.integers(1, 5), st.integers(0, 3), st.floats(0, 1), st.integers(0, 10_000))


@given(systems)
@settings(max_examples=60, deadline=None)
def test_round_trip(lts):
    again = parse_aut(format_aut(lts), lts.alphabet)
    assert again == lts


@given(systems, st.data())
@settings(max_examples=60, deadline=None)
def test_pre_image_monotone(lts, data):
    if not lts.alphabet:
        return
    a = data.draw(st.sampled_from(lts.alphabet))
    small = data.draw(st.sets(st.sampled_from(list(lts.states))))
    extra = data.draw(st.sets(st.sampled_from(list(lts.states))))
    assert lts.pre_image(a, small) <= lts.pre_image(a, small | extra)


@given(systems)
@settings(max_examples=60, deadline=None)
def test_initial_actions_via_pre_image(lts):
    for p in lts.states:
        assert lts.initial_actions(p) == {a for a in lts.alphabet
                                          if p in lts.pre_image(a, lts.states)}
