"""Naive model checking of order-1, dimension-2 formulas by full tabulation.

Every lambda is tabulated on all argument tuples and every fixpoint is
computed by iteration from the everywhere-empty table until two successive
tables agree. Tabulation is vectorised: the body of a lambda is evaluated
once over a flat grid holding every argument tuple, with relations encoded
as int64 bit sets. Nested tabulations multiply the grid.

Inside the engine a proposition value is a Python int (grid-invariant) or an
int64 array with one entry per grid point. A function value of arity ``m``
is a :class:`_Table` whose data has shape ``(B, N**m)`` where ``N`` is the
number of relations and ``B`` is 1 or the grid size.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Optional, Union

import numpy as np

from .logic import (And, App, Arrow, Formula, Lam, Modal, Mu, Neg, Prop, Top, Var, Variance,
                    arity, free_vars, order_of, spine, type_check)
from .lts import Lts
from .relations import PairSpace, Rel2

GUARDRAIL_BITS = 24


class EvaluationError(RuntimeError):
    """A formula cannot be evaluated by this engine."""


class UnsupportedOrderError(EvaluationError):
    pass


class GuardrailError(EvaluationError):
    """A table would exceed the naive engine's size limit."""


@dataclass
class EvalStats:
    iterations: int = 0
    table_entries: int = 0
    sweep_entries: list[int] = field(default_factory=list)
    explored_args: int = 0

    def merge(self, other: "EvalStats") -> None:
        self.iterations += other.iterations
        self.table_entries += other.table_entries
        self.sweep_entries.extend(other.sweep_entries)
        self.explored_args += other.explored_args


@dataclass
class _Table:
    arity: int
    data: np.ndarray


class FuncTable:
    """A total table from ``arity``-tuples of relations to relations."""

    def __init__(self, space: PairSpace, arity: int, data: np.ndarray):
        self.space = space
        self.arity = arity
        self.data = data

    def _index(self, args) -> int:
        idx = 0
        for a in args:
            bits = a.bits if isinstance(a, Rel2) else int(a)
            idx = idx * self.space.size + bits
        return idx

    def __call__(self, *args):
        if len(args) > self.arity:
            raise EvaluationError(f"{len(args)} arguments for a function of arity {self.arity}")
        if len(args) == self.arity:
            return self.space.rel(int(self.data[self._index(args)]))
        width = self.space.size ** (self.arity - len(args))
        start = self._index(args) * width
        return FuncTable(self.space, self.arity - len(args), self.data[start:start + width])

    def __len__(self) -> int:
        return len(self.data)

    def __eq__(self, other):
        return (isinstance(other, FuncTable) and self.arity == other.arity
                and np.array_equal(self.data, other.data))


Value = Union[Rel2, FuncTable]


def _is_prop_value(v) -> bool:
    return isinstance(v, (int, np.integer, np.ndarray))


def _same(a, b) -> bool:
    if isinstance(a, _Table) or isinstance(b, _Table):
        x, y = a.data, b.data
    else:
        if isinstance(a, int) and isinstance(b, int):
            return a == b
        x, y = np.asarray(a), np.asarray(b)
    shape = np.broadcast_shapes(x.shape, y.shape)
    return bool(np.array_equal(np.broadcast_to(x, shape), np.broadcast_to(y, shape)))


def _scalar(v):
    if isinstance(v, np.integer):
        return int(v)
    return v


class NaiveEngine:
    """Tabulating evaluator over a fixed pair of transition systems."""

    def __init__(self, lts1: Lts, lts2: Lts, *, force: bool = False, record: bool = False,
                 space: Optional[PairSpace] = None):
        self.space = space or PairSpace(lts1, lts2)
        self.force = force
        self.record = record
        self.stats = EvalStats()
        # one list of successive tables per function fixpoint evaluated at the top grid
        self.history: list[list[FuncTable]] = []
        self._grid = 1
        self._fv: dict[int, frozenset[str]] = {}

    @property
    def iteration_count(self) -> int:
        return self.stats.iterations

    @property
    def table_entries_computed(self) -> int:
        return self.stats.table_entries

    def run(self, phi: Formula, env: Optional[Mapping[str, Value]] = None) -> Value:
        env = dict(env or {})
        ctx = [(name, Variance.ANY if isinstance(v, Rel2) else Variance.MONO, _value_type(v))
               for name, v in env.items()]
        type_check(ctx, phi, dim=2)
        if order_of(phi, ctx) > 1:
            raise UnsupportedOrderError("order-2 formula not evaluable")
        self.stats = EvalStats()
        self.history = []
        self._grid = 1
        inner = {name: self._import(v) for name, v in env.items()}
        return self._export(self._eval(phi, inner))

    def _import(self, v: Value):
        if isinstance(v, Rel2):
            if (v.n1, v.n2) != (self.space.n1, self.space.n2):
                raise EvaluationError("environment relation over a different state space")
            return v.bits
        if isinstance(v, FuncTable):
            return _Table(v.arity, np.asarray(v.data, dtype=np.int64)[None, :])
        raise EvaluationError(f"unsupported environment value {v!r}")

    def _export(self, v) -> Value:
        if isinstance(v, _Table):
            return FuncTable(self.space, v.arity, np.array(v.data[0]))
        if isinstance(v, np.ndarray):
            v = v.reshape(-1)[0]
        return self.space.rel(int(v))

    # -- evaluation --

    def _free(self, f: Formula) -> frozenset[str]:
        fv = self._fv.get(id(f))
        if fv is None:
            fv = self._fv[id(f)] = free_vars(f)
        return fv

    def _eval(self, f: Formula, env: dict):
        if isinstance(f, Top):
            return self.space.full
        if isinstance(f, Var):
            try:
                return env[f.name]
            except KeyError:
                raise EvaluationError(f"unbound variable {f.name}") from None
        if isinstance(f, Neg):
            return self.space.full ^ self._prop(f.body, env)
        if isinstance(f, And):
            return self._prop(f.left, env) & self._prop(f.right, env)
        if isinstance(f, Modal):
            if f.index not in (1, 2):
                raise EvaluationError(f"modal index {f.index} outside dimension 2")
            return self.space.diamond(f.action, f.index, self._prop(f.body, env))
        if isinstance(f, Lam):
            return self._tabulate(f, env)
        if isinstance(f, Mu):
            return self._fix(f, env)
        if isinstance(f, App):
            return self._app(f, env)
        raise EvaluationError(f"not a formula: {f!r}")

    def _prop(self, f: Formula, env: dict):
        v = self._eval(f, env)
        if not _is_prop_value(v):
            raise EvaluationError("function used where a proposition is expected")
        return v

    def _expand(self, v, factor: int):
        if isinstance(v, np.ndarray):
            return np.repeat(v, factor)
        if isinstance(v, _Table) and v.data.shape[0] > 1:
            return _Table(v.arity, np.repeat(v.data, factor, axis=0))
        return v

    def _guard(self, m: int, grid: Optional[int] = None) -> None:
        grid = self._grid * self.space.size ** m if grid is None else grid
        if grid > (1 << GUARDRAIL_BITS) and not self.force:
            raise GuardrailError(
                f"table of {grid} entries exceeds 2^{GUARDRAIL_BITS} (m*n1*n2 = "
                f"{m * self.space.width}); pass force=True to evaluate anyway")

    def _tabulate(self, f: Lam, env: dict):
        params = []
        g: Formula = f
        while isinstance(g, Lam):
            if not isinstance(g.param_type, Prop):
                raise UnsupportedOrderError("higher-order parameter")
            params.append(g.var)
            g = g.body
        m = len(params)
        n_rel = self.space.size
        outer = self._grid
        width = n_rel ** m
        grid = outer * width
        self._guard(m, grid)
        inner_idx = np.arange(width, dtype=np.int64)
        body_env = {k: self._expand(env[k], width) for k in self._free(f) if k in env}
        for j, name in enumerate(params):
            col = (inner_idx // n_rel ** (m - 1 - j)) % n_rel
            body_env[name] = np.tile(col, outer) if outer > 1 else col
        self._grid = grid
        try:
            body = self._eval(g, body_env)
        finally:
            self._grid = outer
        self.stats.table_entries += grid
        if isinstance(body, _Table):
            cols = body.data.shape[1]
            data = np.broadcast_to(body.data, (grid, cols)).reshape(outer, width * cols)
            return _Table(m + body.arity, data)
        data = np.broadcast_to(np.asarray(body, dtype=np.int64), (grid,)).reshape(outer, width)
        return _Table(m, data)

    def _fix(self, f: Mu, env: dict):
        t = f.type
        base = {k: env[k] for k in self._free(f) if k in env}
        if isinstance(t, Prop):
            cur = 0
            while True:
                self.stats.iterations += 1
                self.stats.table_entries += self._grid
                new = self._prop(f.body, {**base, f.var: cur})
                if _same(new, cur):
                    return new
                cur = new
        m = arity(t)
        if any(not isinstance(p, Prop) for p, _ in _params(t)):
            raise UnsupportedOrderError("fixpoint of order above 1")
        self._guard(m)
        cur = _Table(m, np.zeros((1, self.space.size ** m), dtype=np.int64))
        snapshots = [cur] if self.record and self._grid == 1 else None
        while True:
            self.stats.iterations += 1
            before = self.stats.table_entries
            new = self._eval(f.body, {**base, f.var: cur})
            if not isinstance(new, _Table) or new.arity != m:
                raise EvaluationError("fixpoint body does not denote a table of the declared arity")
            self.stats.sweep_entries.append(self.stats.table_entries - before)
            if snapshots is not None:
                snapshots.append(new)
            if _same(new, cur):
                if snapshots is not None:
                    self.history.append([FuncTable(self.space, m, s.data[0]) for s in snapshots])
                return new
            cur = new

    def _app(self, f: App, env: dict):
        head, args = spine(f)
        fn = self._eval(head, env)
        vals = []
        for a in args:
            v = self._eval(a, env)
            if not _is_prop_value(v):
                raise UnsupportedOrderError("function passed as an argument")
            vals.append(v)
        return self._apply(fn, vals)

    def _apply(self, fn, vals: list):
        while vals:
            if not isinstance(fn, _Table):
                raise EvaluationError("arity mismatch: applying a proposition")
            k = min(len(vals), fn.arity)
            fn = self._lookup(fn, vals[:k])
            vals = vals[k:]
        return fn

    def _lookup(self, t: _Table, args: list):
        n_rel = self.space.size
        m, k = t.arity, len(args)
        offset = 0
        for j, a in enumerate(args):
            offset = offset + a * n_rel ** (m - 1 - j)
        rows = t.data.shape[0]
        if k == m:
            if rows == 1:
                return _scalar(t.data[0, offset])
            return t.data[np.arange(rows), offset]
        width = n_rel ** (m - k)
        if rows == 1 and not isinstance(offset, np.ndarray):
            return _Table(m - k, t.data[:, offset:offset + width])
        g = self._grid
        row_idx = np.arange(g) if rows > 1 else np.zeros(g, dtype=np.int64)
        off = np.broadcast_to(offset, (g,))
        return _Table(m - k, t.data[row_idx[:, None], off[:, None] + np.arange(width)[None, :]])


def _params(t):
    out = []
    while isinstance(t, Arrow):
        out.append((t.param, t.variance))
        t = t.result
    return out


def _value_type(v: Value):
    if isinstance(v, Rel2):
        return Prop(2)
    t = Prop(2)
    for _ in range(v.arity):
        t = Arrow(Prop(2), Variance.MONO, t)
    return t


def mc(phi: Formula, env: Optional[Mapping[str, Value]], lts1: Lts, lts2: Lts, *,
       force: bool = False) -> Value:
    """Evaluate ``phi`` on the pair of systems by full tabulation."""
    return NaiveEngine(lts1, lts2, force=force).run(phi, env)


def check_pair(phi: Formula, p: int, q: int, lts1: Lts, lts2: Lts, *, force: bool = False) -> bool:
    lts1.check_state(p)
    lts2.check_state(q)
    result = mc(phi, None, lts1, lts2, force=force)
    if not isinstance(result, Rel2):
        raise EvaluationError("formula does not denote a relation")
    return (p, q) in result
