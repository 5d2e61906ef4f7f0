"""Need-driven evaluation of recursively defined relation transformers.

A fixpoint ``mu F. lambda x1..xm. body`` applied to concrete arguments is
only computed on the argument tuples reachable from the demanded one. The
body is analysed into call sites ``F B1 .. Bm`` (with ``F``-free arguments)
and a skeleton where each call site is a placeholder variable. Exploration
builds the dependency graph between argument tuples, and solving iterates
the skeleton over the graph's nodes until no value changes.

Fixpoints outside that fragment fall back to full tabulation.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from itertools import product
from typing import Mapping, Optional, Sequence

import numpy as np

from .logic import (And, App, Formula, Lam, Modal, Mu, Neg, Prop, Var, arity, disj, free_vars,
                    spine, to_text)
from .lts import Lts
from .naive import EvalStats, EvaluationError, FuncTable, NaiveEngine, Value, _Table
from .relations import PairSpace, Rel2

DEFAULT_BUDGET = 1 << 16

ArgNode = tuple[int, ...]


class NotAnalyzable(EvaluationError):
    """A fixpoint body outside the need-driven fragment."""


class ExplorationBudgetExceeded(EvaluationError):
    pass


@dataclass(frozen=True)
class CallSite:
    args: tuple[Formula, ...]
    placeholder: str


@dataclass(frozen=True)
class FixpointAnalysis:
    mu: Mu
    params: tuple[str, ...]
    sites: tuple[CallSite, ...]
    skeleton: Formula
    # F-free disjuncts of the body when it is a plain disjunction of calls and
    # F-free parts; None when the skeleton must be evaluated as a whole
    residual: Optional[Formula]

    @property
    def arity(self) -> int:
        return len(self.params)


@dataclass
class DependencyGraph:
    root: ArgNode
    nodes: list[ArgNode] = field(default_factory=list)
    edges: dict[tuple[ArgNode, int], ArgNode] = field(default_factory=dict)
    _index: dict[ArgNode, int] = field(default_factory=dict, repr=False)

    def add(self, node: ArgNode) -> bool:
        if node in self._index:
            return False
        self._index[node] = len(self.nodes)
        self.nodes.append(node)
        return True

    def __contains__(self, node: ArgNode) -> bool:
        return node in self._index

    def __len__(self) -> int:
        return len(self.nodes)

    def successors(self, node: ArgNode) -> list[ArgNode]:
        out = []
        k = 0
        while (node, k) in self.edges:
            out.append(self.edges[(node, k)])
            k += 1
        return out

    def to_dot(self, space: PairSpace, site_labels: Optional[Sequence[str]] = None) -> str:
        def show(bits: int) -> str:
            pairs = space.rel(bits).pairs()
            return "{" + ", ".join(f"({p},{q})" for p, q in pairs) + "}"

        lines = ["digraph deps {"]
        for i, node in enumerate(self.nodes):
            label = " / ".join(show(b) for b in node) or "()"
            shape = ",peripheries=2" if node == self.root else ""
            lines.append(f'  n{i} [label="{label}"{shape}];')
        for (src, k), dst in self.edges.items():
            lab = site_labels[k] if site_labels else str(k)
            lines.append(f'  n{self._index[src]} -> n{self._index[dst]} [label="{lab}"];')
        lines.append("}")
        return "\n".join(lines) + "\n"


def _flatten_or(f: Formula) -> list[Formula]:
    if isinstance(f, Neg) and isinstance(f.body, And) \
            and isinstance(f.body.left, Neg) and isinstance(f.body.right, Neg):
        return _flatten_or(f.body.left.body) + _flatten_or(f.body.right.body)
    return [f]


def analyze_mu(mu: Mu) -> FixpointAnalysis:
    """Split a fixpoint body into call sites and an ``F``-free skeleton."""
    m = arity(mu.type)
    body = mu.body
    params = []
    for _ in range(m):
        if not isinstance(body, Lam):
            raise NotAnalyzable("fixpoint body is not a lambda chain of the fixpoint's arity")
        params.append(body.var)
        body = body.body
    F = mu.var
    sites: list[CallSite] = []

    def go(g: Formula, bound: frozenset[str]) -> Formula:
        if isinstance(g, (App, Var)):
            head, args = spine(g)
            if isinstance(head, Var) and head.name == F:
                if len(args) != m:
                    raise NotAnalyzable(f"{F} not fully applied in {to_text(g)}")
                for a in args:
                    fv = free_vars(a)
                    if F in fv:
                        raise NotAnalyzable(f"{F} occurs inside the argument {to_text(a)}")
                    if fv & bound:
                        raise NotAnalyzable(f"argument {to_text(a)} depends on a local binder")
                name = f"#call{len(sites)}"
                sites.append(CallSite(tuple(args), name))
                return Var(name)
            if isinstance(g, Var):
                return g
            return App(go(g.fun, bound), go(g.arg, bound))
        if isinstance(g, (Lam, Mu)):
            if g.var == F or F not in free_vars(g):
                return g
            inner = go(g.body, bound | {g.var})
            if isinstance(g, Lam):
                return Lam(g.var, g.variance, g.param_type, inner)
            return Mu(g.var, g.type, inner)
        if isinstance(g, Neg):
            return Neg(go(g.body, bound))
        if isinstance(g, And):
            return And(go(g.left, bound), go(g.right, bound))
        if isinstance(g, Modal):
            return Modal(g.action, g.index, go(g.body, bound))
        return g

    skeleton = go(body, frozenset())
    placeholders = {s.placeholder for s in sites}
    residual = None
    parts = _flatten_or(skeleton)
    direct = [p for p in parts if isinstance(p, Var) and p.name in placeholders]
    rest = [p for p in parts if not (isinstance(p, Var) and p.name in placeholders)]
    if len(direct) == len(sites) and not any(free_vars(p) & placeholders for p in rest):
        residual = disj(rest)
    return FixpointAnalysis(mu, tuple(params), tuple(sites), skeleton, residual)


def analyze_fixpoint_call(phi: Formula) -> tuple[FixpointAnalysis, list[Formula]]:
    """Analyse ``(mu F. ...) A1 .. Am`` into the fixpoint's analysis and the initial arguments."""
    head, args = spine(phi)
    if not isinstance(head, Mu):
        raise NotAnalyzable("not an application of a fixpoint")
    analysis = analyze_mu(head)
    if len(args) != analysis.arity:
        raise NotAnalyzable(f"fixpoint of arity {analysis.arity} applied to {len(args)} arguments")
    return analysis, list(args)


@dataclass
class _Instance:
    """One fixpoint closed over a concrete environment, with its explored graph."""
    analysis: FixpointAnalysis
    env: dict
    graph: Optional[DependencyGraph] = None
    values: dict[ArgNode, int] = field(default_factory=dict)
    residuals: dict[ArgNode, int] = field(default_factory=dict)
    # root value per round, starting from the initial all-empty assignment
    history: list[dict[ArgNode, int]] = field(default_factory=list)
    rounds: int = 0


@dataclass(frozen=True)
class _Lazy:
    """A need-driven fixpoint used as a function value, possibly partially applied."""
    inst: _Instance
    pre: tuple[int, ...] = ()

    @property
    def arity(self) -> int:
        return self.inst.analysis.arity - len(self.pre)


class NeedDrivenEngine(NaiveEngine):
    """Evaluator that computes analysable fixpoints only where they are needed."""

    def __init__(self, lts1: Lts, lts2: Lts, *, budget: int = DEFAULT_BUDGET,
                 fallback: bool = True, force: bool = False, space: Optional[PairSpace] = None):
        super().__init__(lts1, lts2, force=force, space=space)
        self.budget = budget
        self.fallback = fallback
        self.instances: list[_Instance] = []
        self.fallbacks: list[str] = []
        self._cache: dict = {}

    @property
    def explored_args(self) -> int:
        return self.stats.explored_args

    def run(self, phi: Formula, env: Optional[Mapping[str, Value]] = None) -> Value:
        self.instances = []
        self.fallbacks = []
        self._cache = {}
        return super().run(phi, env)

    def _export(self, v) -> Value:
        if isinstance(v, _Lazy):
            v = self._materialize(v)
        return super()._export(v)

    # -- fixpoints --

    def _fix(self, f: Mu, env: dict):
        base = {k: env[k] for k in self._free(f) if k in env}
        if self._grid > 1 or any(isinstance(v, np.ndarray) for v in base.values()):
            return super()._fix(f, env)
        key = (id(f), tuple(sorted((k, self._key(v)) for k, v in base.items())))
        inst = self._cache.get(key)
        if inst is None:
            try:
                analysis = analyze_mu(f)
            except NotAnalyzable as exc:
                if not self.fallback:
                    raise
                self.fallbacks.append(str(exc))
                return super()._fix(f, env)
            inst = _Instance(analysis, base)
            self._cache[key] = (inst, f)
            self.instances.append(inst)
        else:
            inst = inst[0]
        lazy = _Lazy(inst)
        if lazy.arity == 0:
            return self._call(inst, ())
        return lazy

    @staticmethod
    def _key(v):
        if isinstance(v, _Table):
            return ("table", v.data.tobytes())
        if isinstance(v, _Lazy):
            return ("lazy", id(v.inst), v.pre)
        return v

    def _apply(self, fn, vals: list):
        while vals:
            if not isinstance(fn, _Lazy):
                return super()._apply(fn, vals)
            k = min(len(vals), fn.arity)
            use, vals = vals[:k], vals[k:]
            if k < fn.arity:
                if any(isinstance(v, np.ndarray) for v in use):
                    fn = self._lookup(self._materialize(fn), use)
                else:
                    fn = _Lazy(fn.inst, fn.pre + tuple(int(v) for v in use))
            else:
                fn = self._call_vector(fn.inst, list(fn.pre) + use)
        return fn

    def _call_vector(self, inst: _Instance, args: list):
        if not any(isinstance(a, np.ndarray) for a in args):
            return self._call(inst, tuple(int(a) for a in args))
        grid = self._grid
        cols = np.stack([np.broadcast_to(np.asarray(a, dtype=np.int64), (grid,)) for a in args],
                        axis=1)
        uniq, inverse = np.unique(cols, axis=0, return_inverse=True)
        outer = self._grid
        self._grid = 1
        try:
            results = np.array([self._call(inst, tuple(int(x) for x in row)) for row in uniq],
                               dtype=np.int64)
        finally:
            self._grid = outer
        return results[inverse.reshape(-1)]

    def _materialize(self, fn: _Lazy) -> _Table:
        m = fn.arity
        n_rel = self.space.size
        if m * self.space.width > 24 and not self.force:
            raise EvaluationError("function value too large to tabulate")
        inst = fn.inst
        nodes = [fn.pre + args for args in product(range(n_rel), repeat=m)]
        # explore everything first so a single solve covers the whole table
        fresh = [n for n in nodes if n not in inst.values]
        if fresh:
            if inst.graph is None:
                inst.graph = DependencyGraph(fresh[0])
            for n in fresh:
                self._explore(inst, n)
            self._solve(inst)
        data = np.array([inst.values[n] for n in nodes], dtype=np.int64)
        return _Table(m, data[None, :])

    def _call(self, inst: _Instance, node: ArgNode) -> int:
        if inst.graph is None:
            inst.graph = DependencyGraph(node)
        if node not in inst.values:
            self._explore(inst, node)
            self._solve(inst)
        return inst.values[node]

    def _node_env(self, inst: _Instance, node: ArgNode) -> dict:
        env = dict(inst.env)
        env.update(zip(inst.analysis.params, node))
        return env

    def _explore(self, inst: _Instance, start: ArgNode) -> None:
        graph = inst.graph
        queue: deque[ArgNode] = deque()
        if graph.add(start):
            queue.append(start)
        self.stats.explored_args += bool(queue)
        while queue:
            node = queue.popleft()
            env = self._node_env(inst, node)
            for k, site in enumerate(inst.analysis.sites):
                target = tuple(int(self._prop(a, env)) for a in site.args)
                graph.edges[(node, k)] = target
                if graph.add(target):
                    self.stats.explored_args += 1
                    if len(graph) > self.budget:
                        raise ExplorationBudgetExceeded(
                            f"more than {self.budget} argument tuples explored")
                    queue.append(target)

    def _solve(self, inst: _Instance) -> None:
        """Round-based iteration; each round computes every node from the previous round."""
        a = inst.analysis
        graph = inst.graph
        values = {n: inst.values.get(n, 0) for n in graph.nodes}
        if a.residual is not None:
            for n in graph.nodes:
                if n not in inst.residuals:
                    inst.residuals[n] = int(self._prop(a.residual, self._node_env(inst, n)))
        if not inst.history:
            inst.history.append(dict(values))
        sites = range(len(a.sites))
        while True:
            inst.rounds += 1
            self.stats.iterations += 1
            self.stats.table_entries += len(graph.nodes)
            self.stats.sweep_entries.append(len(graph.nodes))
            new = {}
            for n in graph.nodes:
                if a.residual is not None:
                    v = inst.residuals[n]
                    for k in sites:
                        v |= values[graph.edges[(n, k)]]
                else:
                    env = self._node_env(inst, n)
                    for k, site in enumerate(a.sites):
                        env[site.placeholder] = values[graph.edges[(n, k)]]
                    v = int(self._prop(a.skeleton, env))
                new[n] = v
            inst.history.append(new)
            if new == values:
                break
            values = new
        inst.values = values


def explore(analysis: FixpointAnalysis, initial_args: Sequence[Rel2], lts1: Lts, lts2: Lts, *,
            budget: int = DEFAULT_BUDGET, env: Optional[Mapping[str, Value]] = None
            ) -> DependencyGraph:
    """Dependency graph of the fixpoint reachable from ``initial_args``."""
    engine = NeedDrivenEngine(lts1, lts2, budget=budget)
    inst = _Instance(analysis, {k: engine._import(v) for k, v in (env or {}).items()})
    root = tuple(a.bits for a in initial_args)
    inst.graph = DependencyGraph(root)
    engine._explore(inst, root)
    return inst.graph


def solve(analysis: FixpointAnalysis, graph: DependencyGraph, lts1: Lts, lts2: Lts, *,
          env: Optional[Mapping[str, Value]] = None) -> tuple[Rel2, list[dict[ArgNode, int]]]:
    """Least fixpoint over the graph's nodes; returns the root value and the per-round values."""
    engine = NeedDrivenEngine(lts1, lts2)
    inst = _Instance(analysis, {k: engine._import(v) for k, v in (env or {}).items()}, graph)
    engine._solve(inst)
    return engine.space.rel(inst.values[graph.root]), inst.history


def mc_needdriven(phi: Formula, env: Optional[Mapping[str, Value]], lts1: Lts, lts2: Lts, *,
                  budget: int = DEFAULT_BUDGET) -> Value:
    return NeedDrivenEngine(lts1, lts2, budget=budget).run(phi, env)


__all__ = [
    "ArgNode", "CallSite", "DependencyGraph", "ExplorationBudgetExceeded", "FixpointAnalysis",
    "FuncTable", "NeedDrivenEngine", "NotAnalyzable", "EvalStats", "analyze_fixpoint_call",
    "analyze_mu", "explore", "mc_needdriven", "solve",
]
