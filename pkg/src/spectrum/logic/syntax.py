"""Types and abstract syntax of the higher-order, higher-dimensional fixpoint logic.

The core AST has eight node kinds. Falsity, disjunction, boxes, xor,
implication and greatest fixpoints are derived and expand into core nodes
when built, so every consumer only ever sees the core.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Union


class Variance(Enum):
    MONO = "+"
    ANTI = "-"
    ANY = "0"

    def negate(self) -> "Variance":
        if self is Variance.MONO:
            return Variance.ANTI
        if self is Variance.ANTI:
            return Variance.MONO
        return self

    @classmethod
    def parse(cls, mark: str) -> "Variance":
        for v in cls:
            if v.value == mark:
                return v
        raise ValueError(f"unknown variance mark {mark!r}")


# -- types ------------------------------------------------------------------

@dataclass(frozen=True)
class Prop:
    dim: int

    def __str__(self) -> str:
        return f"P{self.dim}"


@dataclass(frozen=True)
class Arrow:
    param: "LogicType"
    variance: Variance
    result: "LogicType"

    def __str__(self) -> str:
        p = f"({self.param})" if isinstance(self.param, Arrow) else str(self.param)
        return f"{self.variance.value}{p} -> {self.result}"


LogicType = Union[Prop, Arrow]


def arrow(*parts) -> LogicType:
    """``arrow((P2, MONO), (P2, MONO), P2)`` builds ``+P2 -> +P2 -> P2``."""
    *params, result = parts
    for param, v in reversed(params):
        result = Arrow(param, v, result)
    return result


def normal_form(t: LogicType) -> tuple[list[tuple[LogicType, Variance]], Prop]:
    params = []
    while isinstance(t, Arrow):
        params.append((t.param, t.variance))
        t = t.result
    return params, t


def type_order(t: LogicType) -> int:
    params, _ = normal_form(t)
    return max((1 + type_order(p) for p, _ in params), default=0)


def arity(t: LogicType) -> int:
    return len(normal_form(t)[0])


# -- formulas ---------------------------------------------------------------

class Formula:
    """Base class for AST nodes; all nodes are frozen dataclasses."""

    __slots__ = ()

    def __str__(self) -> str:
        from .printer import to_text
        return to_text(self)


@dataclass(frozen=True, repr=False)
class Top(Formula):
    def __repr__(self):
        return "Top()"


@dataclass(frozen=True)
class Modal(Formula):
    action: str
    index: int
    body: Formula


@dataclass(frozen=True)
class Neg(Formula):
    body: Formula


@dataclass(frozen=True)
class And(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Var(Formula):
    name: str


@dataclass(frozen=True)
class Lam(Formula):
    var: str
    variance: Variance
    param_type: LogicType
    body: Formula


@dataclass(frozen=True)
class Mu(Formula):
    var: str
    type: LogicType
    body: Formula


@dataclass(frozen=True)
class App(Formula):
    fun: Formula
    arg: Formula


TOP = Top()


# -- derived forms ----------------------------------------------------------

def bottom() -> Formula:
    return Neg(TOP)


def or_(a: Formula, b: Formula) -> Formula:
    return Neg(And(Neg(a), Neg(b)))


def box(action: str, index: int, body: Formula) -> Formula:
    return Neg(Modal(action, index, Neg(body)))


def diamond(action: str, index: int, body: Formula) -> Formula:
    return Modal(action, index, body)


def xor(a: Formula, b: Formula) -> Formula:
    """Nonequivalence ``(a & !b) | (!a & b)``."""
    return or_(And(a, Neg(b)), And(Neg(a), b))


def implies(a: Formula, b: Formula) -> Formula:
    return or_(Neg(a), b)


def nu(var: str, t: LogicType, body: Formula) -> Formula:
    """Greatest fixpoint of a proposition, as ``!mu X. !body[!X/X]``."""
    if not isinstance(t, Prop):
        raise ValueError("greatest fixpoints are only provided at proposition type")
    return Neg(Mu(var, t, Neg(substitute(body, var, Neg(Var(var))))))


def conj(items: Iterable[Formula]) -> Formula:
    items = list(items)
    if not items:
        return TOP
    out = items[0]
    for f in items[1:]:
        out = And(out, f)
    return out


def disj(items: Iterable[Formula]) -> Formula:
    items = list(items)
    if not items:
        return bottom()
    out = items[0]
    for f in items[1:]:
        out = or_(out, f)
    return out


def apply(fun: Formula, *args: Formula) -> Formula:
    for a in args:
        fun = App(fun, a)
    return fun


def lambdas(params: Iterable[tuple[str, Variance, LogicType]], body: Formula) -> Formula:
    for name, v, t in reversed(list(params)):
        body = Lam(name, v, t, body)
    return body


def compose(outer: Formula, inner: Formula, name: str, t: LogicType = Prop(2)) -> Formula:
    """``outer . inner`` as the monotone function ``lambda name. outer (inner name)``."""
    return Lam(name, Variance.MONO, t, App(outer, App(inner, Var(name))))


def spine(f: Formula) -> tuple[Formula, list[Formula]]:
    """Split ``h a1 .. an`` into ``(h, [a1, .., an])``."""
    args = []
    while isinstance(f, App):
        args.append(f.arg)
        f = f.fun
    args.reverse()
    return f, args


def children(f: Formula) -> tuple[Formula, ...]:
    if isinstance(f, (Modal, Neg, Lam, Mu)):
        return (f.body,)
    if isinstance(f, And):
        return (f.left, f.right)
    if isinstance(f, App):
        return (f.fun, f.arg)
    return ()


def subformulas(f: Formula) -> Iterable[Formula]:
    stack = [f]
    while stack:
        g = stack.pop()
        yield g
        stack.extend(children(g))


def free_vars(f: Formula) -> frozenset[str]:
    if isinstance(f, Var):
        return frozenset([f.name])
    if isinstance(f, (Lam, Mu)):
        return free_vars(f.body) - {f.var}
    out: frozenset[str] = frozenset()
    for c in children(f):
        out |= free_vars(c)
    return out


def bound_vars(f: Formula) -> set[str]:
    return {g.var for g in subformulas(f) if isinstance(g, (Lam, Mu))}


def max_modal_index(f: Formula) -> int:
    """Largest modal index in ``f`` (0 when there is none)."""
    return max((g.index for g in subformulas(f) if isinstance(g, Modal)), default=0)


def actions(f: Formula) -> set[str]:
    return {g.action for g in subformulas(f) if isinstance(g, Modal)}


def size(f: Formula) -> int:
    return sum(1 for _ in subformulas(f))


def swap(f: Formula) -> Formula:
    """Exchange modal indices 1 and 2 throughout."""
    if isinstance(f, Modal):
        idx = {1: 2, 2: 1}.get(f.index, f.index)
        return Modal(f.action, idx, swap(f.body))
    return _map_children(f, swap)


def _map_children(f: Formula, fn) -> Formula:
    if isinstance(f, (Top, Var)):
        return f
    if isinstance(f, Modal):
        return Modal(f.action, f.index, fn(f.body))
    if isinstance(f, Neg):
        return Neg(fn(f.body))
    if isinstance(f, And):
        return And(fn(f.left), fn(f.right))
    if isinstance(f, Lam):
        return Lam(f.var, f.variance, f.param_type, fn(f.body))
    if isinstance(f, Mu):
        return Mu(f.var, f.type, fn(f.body))
    if isinstance(f, App):
        return App(fn(f.fun), fn(f.arg))
    raise TypeError(f"not a formula: {f!r}")


def fresh_name(base: str, avoid: set[str]) -> str:
    if base not in avoid:
        return base
    stem = base.rsplit("_", 1)[0] if "_" in base and base.rsplit("_", 1)[1].isdigit() else base
    for k in itertools.count(1):
        cand = f"{stem}_{k}"
        if cand not in avoid:
            return cand
    raise AssertionError("unreachable")


def substitute(f: Formula, x: str, psi: Formula) -> Formula:
    """Capture-avoiding ``f[psi/x]``."""
    psi_free = free_vars(psi)

    def go(g: Formula) -> Formula:
        if isinstance(g, Var):
            return psi if g.name == x else g
        if isinstance(g, (Lam, Mu)):
            if g.var == x or x not in free_vars(g.body):
                return g
            var, body = g.var, g.body
            if var in psi_free:
                var = fresh_name(var, psi_free | free_vars(body) | bound_vars(body) | {x})
                body = substitute(body, g.var, Var(var))
            if isinstance(g, Lam):
                return Lam(var, g.variance, g.param_type, go(body))
            return Mu(var, g.type, go(body))
        return _map_children(g, go)

    return go(f)


def alpha_equivalent(f: Formula, g: Formula) -> bool:
    def go(a, b, env_a, env_b, depth) -> bool:
        if type(a) is not type(b):
            return False
        if isinstance(a, Top):
            return True
        if isinstance(a, Var):
            ia, ib = env_a.get(a.name), env_b.get(b.name)
            return ia == ib and (ia is not None or a.name == b.name)
        if isinstance(a, Modal):
            return ((a.action, a.index) == (b.action, b.index)
                    and go(a.body, b.body, env_a, env_b, depth))
        if isinstance(a, Neg):
            return go(a.body, b.body, env_a, env_b, depth)
        if isinstance(a, (And, App)):
            return all(go(x, y, env_a, env_b, depth) for x, y in zip(children(a), children(b)))
        if isinstance(a, Lam) and (a.variance, a.param_type) != (b.variance, b.param_type):
            return False
        if isinstance(a, Mu) and a.type != b.type:
            return False
        return go(a.body, b.body, {**env_a, a.var: depth}, {**env_b, b.var: depth}, depth + 1)

    return go(f, g, {}, {}, 0)
