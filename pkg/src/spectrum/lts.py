"""Finite labeled transition systems and the Aldebaran (.aut) text format."""

from __future__ import annotations

import random
import re
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

Transition = tuple[int, str, int]

_ACTION_RE = re.compile(r'^[^\s"\']+$')
_HEADER_RE = re.compile(r'^des\s*\(\s*(\d+)\s*,\s*(\d+)\s*,\s*(\d+)\s*\)$')
_EDGE_RE = re.compile(r'^\(\s*(\d+)\s*,\s*(?:"([^"]*)"|([^\s,"]+))\s*,\s*(\d+)\s*\)$')


class LtsError(ValueError):
    """Raised for malformed transition systems or invalid queries against them."""


class AutParseError(LtsError):
    def __init__(self, message: str, line: int):
        super().__init__(f"line {line}: {message}")
        self.line = line


def is_action(name: str) -> bool:
    return bool(name) and _ACTION_RE.match(name) is not None


@dataclass(frozen=True)
class Lts:
    """An immutable LTS over dense state indices ``0 .. num_states-1``.

    ``alphabet`` may declare actions that label no transition. ``initial`` is
    metadata carried over from the .aut header; checks take explicit states.
    """

    num_states: int
    alphabet: tuple[str, ...]
    transitions: frozenset[Transition]
    initial: int = 0
    _succ: dict = field(init=False, repr=False, compare=False, hash=False)
    _pred: dict = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        if self.num_states < 1:
            raise LtsError("an LTS needs at least one state")
        if len(set(self.alphabet)) != len(self.alphabet):
            raise LtsError("duplicate action in alphabet")
        for a in self.alphabet:
            if not is_action(a):
                raise LtsError(f"invalid action name {a!r}")
        if not 0 <= self.initial < self.num_states:
            raise LtsError(f"initial state {self.initial} out of range")
        alpha = set(self.alphabet)
        succ: dict[tuple[int, str], set[int]] = {}
        pred: dict[tuple[int, str], set[int]] = {}
        for p, a, q in self.transitions:
            if a not in alpha:
                raise LtsError(f"transition label {a!r} not in alphabet")
            for s in (p, q):
                if not 0 <= s < self.num_states:
                    raise LtsError(f"state {s} out of range [0, {self.num_states})")
            succ.setdefault((p, a), set()).add(q)
            pred.setdefault((q, a), set()).add(p)
        object.__setattr__(self, "_succ", {k: frozenset(v) for k, v in succ.items()})
        object.__setattr__(self, "_pred", {k: frozenset(v) for k, v in pred.items()})

    @classmethod
    def build(cls, num_states: int, transitions: Iterable[Transition],
              alphabet: Optional[Sequence[str]] = None, initial: int = 0) -> "Lts":
        transitions = list(transitions)
        if alphabet is None:
            alphabet = _first_occurrence(a for _, a, _ in transitions)
        return cls(num_states, tuple(alphabet), frozenset(transitions), initial)

    @property
    def states(self) -> range:
        return range(self.num_states)

    def with_alphabet(self, alphabet: Sequence[str]) -> "Lts":
        """Same LTS over a (superset) alphabet, in the given order."""
        missing = set(self.alphabet) - set(alphabet)
        if missing:
            raise LtsError(f"alphabet drops used actions {sorted(missing)}")
        return Lts(self.num_states, tuple(alphabet), self.transitions, self.initial)

    def check_state(self, p: int) -> None:
        if not (isinstance(p, int) and 0 <= p < self.num_states):
            raise LtsError(f"unknown state {p!r}")

    def check_action(self, a: str) -> None:
        if a not in self.alphabet:
            raise LtsError(f"unknown action {a!r}")

    def successors(self, p: int, a: str) -> frozenset[int]:
        self.check_state(p)
        self.check_action(a)
        return self._succ.get((p, a), frozenset())

    def initial_actions(self, p: int) -> frozenset[str]:
        self.check_state(p)
        return frozenset(a for a in self.alphabet if (p, a) in self._succ)

    def pre_image(self, a: str, target: Iterable[int]) -> frozenset[int]:
        self.check_action(a)
        out: set[int] = set()
        for q in target:
            out |= self._pred.get((q, a), frozenset())
        return frozenset(out)

    def sorted_transitions(self) -> list[Transition]:
        order = {a: i for i, a in enumerate(self.alphabet)}
        return sorted(self.transitions, key=lambda t: (t[0], order[t[1]], t[2]))


def successors(lts: Lts, p: int, a: str) -> frozenset[int]:
    return lts.successors(p, a)


def initial_actions(lts: Lts, p: int) -> frozenset[str]:
    return lts.initial_actions(p)


def pre_image(lts: Lts, a: str, target: Iterable[int]) -> frozenset[int]:
    return lts.pre_image(a, target)


def _first_occurrence(items: Iterable[str]) -> list[str]:
    seen: dict[str, None] = {}
    for x in items:
        seen.setdefault(x, None)
    return list(seen)


def parse_aut(text: str, declared_alphabet: Optional[Sequence[str]] = None) -> Lts:
    """Parse Aldebaran text: ``des (i0, m, n)`` then ``m`` lines ``(from, "label", to)``.

    Without ``declared_alphabet`` the alphabet is the labels in order of first use.
    """
    lines = [(i, ln.strip()) for i, ln in enumerate(text.splitlines(), start=1)]
    lines = [(i, ln) for i, ln in lines if ln]
    if not lines:
        raise AutParseError("missing 'des' header", 1)
    lineno, header = lines[0]
    m = _HEADER_RE.match(header)
    if not m:
        raise AutParseError(f"malformed header {header!r}", lineno)
    initial, num_trans, num_states = (int(g) for g in m.groups())
    if num_states < 1:
        raise AutParseError("state count must be positive", lineno)
    if initial >= num_states:
        raise AutParseError(f"initial state {initial} out of range", lineno)
    body = lines[1:]
    if len(body) != num_trans:
        raise AutParseError(
            f"header announces {num_trans} transitions, found {len(body)}",
            body[-1][0] if body else lineno)
    transitions = []
    for lineno, ln in body:
        m = _EDGE_RE.match(ln)
        if not m:
            raise AutParseError(f"malformed transition {ln!r}", lineno)
        src, quoted, bare, dst = m.groups()
        label = quoted if quoted is not None else bare
        if not is_action(label):
            raise AutParseError(f"invalid label {label!r}", lineno)
        src, dst = int(src), int(dst)
        for s in (src, dst):
            if s >= num_states:
                raise AutParseError(f"state {s} out of range [0, {num_states})", lineno)
        if declared_alphabet is not None and label not in declared_alphabet:
            raise AutParseError(f"label {label!r} outside declared alphabet", lineno)
        transitions.append((src, label, dst))
    if len(set(transitions)) != len(transitions):
        raise AutParseError("duplicate transition", body[-1][0])
    alphabet = (list(declared_alphabet) if declared_alphabet is not None
                else _first_occurrence(a for _, a, _ in transitions))
    return Lts(num_states, tuple(alphabet), frozenset(transitions), initial)


def format_aut(lts: Lts) -> str:
    ts = lts.sorted_transitions()
    out = [f"des ({lts.initial}, {len(ts)}, {lts.num_states})"]
    out.extend(f'({p}, "{a}", {q})' for p, a, q in ts)
    return "\n".join(out) + "\n"


def default_actions(k: int) -> tuple[str, ...]:
    if not 0 <= k <= 26:
        raise LtsError("between 0 and 26 actions supported")
    return tuple("abcdefghijklmnopqrstuvwxyz"[:k])


def random_lts(num_states: int, num_actions: int, density: float,
               rng: random.Random) -> Lts:
    """Each of the n*n*k possible transitions is present with probability ``density``."""
    if num_states < 1:
        raise LtsError("need at least one state")
    if not 0.0 <= density <= 1.0:
        raise LtsError("density must lie in [0, 1]")
    alphabet = default_actions(num_actions)
    transitions = [(p, a, q)
                   for p in range(num_states) for a in alphabet for q in range(num_states)
                   if rng.random() < density]
    return Lts(num_states, alphabet, frozenset(transitions))


def common_alphabet(lts1: Lts, lts2: Lts) -> tuple[str, ...]:
    return tuple(_first_occurrence([*lts1.alphabet, *lts2.alphabet]))
