"""Binary relations over ``Procs1 x Procs2`` as fixed-width bit sets.

Pair ``(p, q)`` lives at bit ``p * n2 + q``. Every operation here works on
plain Python ints and, elementwise, on numpy int64 arrays of such ints.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator

import numpy as np

from .lts import Lts, LtsError, common_alphabet

# lookup tables for modal operators are only built below this many relations
_TABLE_LIMIT = 1 << 16


@dataclass(frozen=True)
class Rel2:
    """An immutable set of state pairs, backed by an integer bit set."""

    n1: int
    n2: int
    bits: int

    @classmethod
    def from_pairs(cls, n1: int, n2: int, pairs: Iterable[tuple[int, int]]) -> "Rel2":
        bits = 0
        for p, q in pairs:
            if not (0 <= p < n1 and 0 <= q < n2):
                raise ValueError(f"pair {(p, q)} outside {n1}x{n2}")
            bits |= 1 << (p * n2 + q)
        return cls(n1, n2, bits)

    @classmethod
    def full(cls, n1: int, n2: int) -> "Rel2":
        return cls(n1, n2, (1 << (n1 * n2)) - 1)

    @classmethod
    def empty(cls, n1: int, n2: int) -> "Rel2":
        return cls(n1, n2, 0)

    def pairs(self) -> list[tuple[int, int]]:
        out = []
        bits, k = self.bits, 0
        while bits:
            if bits & 1:
                out.append(divmod(k, self.n2))
            bits >>= 1
            k += 1
        return out

    def __contains__(self, pair) -> bool:
        p, q = pair
        return 0 <= p < self.n1 and 0 <= q < self.n2 and bool(self.bits >> (p * self.n2 + q) & 1)

    def __iter__(self) -> Iterator[tuple[int, int]]:
        return iter(self.pairs())

    def __len__(self) -> int:
        return bin(self.bits).count("1")

    def _same(self, other: "Rel2") -> None:
        if (self.n1, self.n2) != (other.n1, other.n2):
            raise ValueError("relations over different state spaces")

    def __and__(self, other: "Rel2") -> "Rel2":
        self._same(other)
        return Rel2(self.n1, self.n2, self.bits & other.bits)

    def __or__(self, other: "Rel2") -> "Rel2":
        self._same(other)
        return Rel2(self.n1, self.n2, self.bits | other.bits)

    def complement(self) -> "Rel2":
        return Rel2(self.n1, self.n2, ((1 << (self.n1 * self.n2)) - 1) ^ self.bits)

    def issubset(self, other: "Rel2") -> bool:
        self._same(other)
        return self.bits & ~other.bits == 0

    def transpose(self) -> "Rel2":
        return Rel2.from_pairs(self.n2, self.n1, ((q, p) for p, q in self.pairs()))

    def __repr__(self) -> str:
        return f"Rel2({self.n1}x{self.n2}, {sorted(self.pairs())})"


class PairSpace:
    """The product state space of two LTS together with its modal operators.

    Both systems are read over their combined alphabet: an action missing
    from one of them simply has no transitions there.
    """

    def __init__(self, lts1: Lts, lts2: Lts):
        self.alphabet = common_alphabet(lts1, lts2)
        self.lts1 = lts1.with_alphabet(self.alphabet)
        self.lts2 = lts2.with_alphabet(self.alphabet)
        self.n1 = lts1.num_states
        self.n2 = lts2.num_states
        self.width = self.n1 * self.n2
        self.full = (1 << self.width) - 1
        self.size = 1 << self.width
        n1, n2 = self.n1, self.n2
        row = (1 << n2) - 1
        col = sum(1 << (p * n2) for p in range(n1))
        # per (action, index): [(mask, shift)], grouped by shift distance
        self._moves: dict[tuple[str, int], list[tuple[int, int]]] = {}
        for a in self.alphabet:
            groups: dict[int, int] = {}
            for p, b, p2 in self.lts1.transitions:
                if b == a:
                    d = (p - p2) * n2
                    groups[d] = groups.get(d, 0) | (row << (p2 * n2))
            self._moves[(a, 1)] = sorted((m, d) for d, m in groups.items())
            groups = {}
            for q, b, q2 in self.lts2.transitions:
                if b == a:
                    d = q - q2
                    groups[d] = groups.get(d, 0) | (col << q2)
            self._moves[(a, 2)] = sorted((m, d) for d, m in groups.items())
        self._tables: dict[tuple[str, int], np.ndarray] = {}

    def rel(self, bits: int) -> Rel2:
        return Rel2(self.n1, self.n2, int(bits))

    def bit(self, p: int, q: int) -> int:
        return 1 << (p * self.n2 + q)

    def rows(self, ps: Iterable[int]) -> int:
        """``ps x Procs2``"""
        row = (1 << self.n2) - 1
        return sum(row << (p * self.n2) for p in set(ps))

    def cols(self, qs: Iterable[int]) -> int:
        """``Procs1 x qs``"""
        return sum(1 << (p * self.n2 + q) for p in range(self.n1) for q in set(qs))

    def _check(self, a: str, i: int) -> None:
        if i not in (1, 2):
            raise ValueError(f"modal index {i} outside dimension 2")
        if a not in self.alphabet:
            raise LtsError(f"unknown action {a!r}")

    def diamond(self, a: str, i: int, r):
        """``<a>_i r``: pairs whose i-th component has an a-step into ``r``."""
        self._check(a, i)
        if isinstance(r, np.ndarray):
            if self.size <= _TABLE_LIMIT:
                return self._table(a, i)[r]
            return self._shift_moves(self._moves[(a, i)], r, np.zeros_like(r))
        return self._shift_moves(self._moves[(a, i)], r, 0)

    def box(self, a: str, i: int, r):
        return self.full ^ self.diamond(a, i, self.full ^ r)

    @staticmethod
    def _shift_moves(moves, r, acc):
        for mask, d in moves:
            part = r & mask
            acc = acc | (part << d if d >= 0 else part >> -d)
        return acc

    def _table(self, a: str, i: int) -> np.ndarray:
        t = self._tables.get((a, i))
        if t is None:
            every = np.arange(self.size, dtype=np.int64)
            t = self._shift_moves(self._moves[(a, i)], every, np.zeros_like(every))
            self._tables[(a, i)] = t
        return t
