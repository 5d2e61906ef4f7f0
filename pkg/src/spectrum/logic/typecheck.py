"""Variance-aware type checking and order computation."""

from __future__ import annotations

from typing import Iterable, Sequence

from .syntax import (And, App, Arrow, Formula, Lam, LogicType, Modal, Mu, Neg, Prop, Top,
                     Var, Variance, type_order)


class FormulaTypeError(TypeError):
    """A formula is not typable."""


class VarianceError(FormulaTypeError):
    """A variable occurs at a polarity its variance forbids."""


Binding = tuple[str, Variance, LogicType]


class TypingContext:
    """An ordered list of ``(name, variance, type)``; later entries shadow earlier ones."""

    def __init__(self, bindings: Iterable[Binding] = ()):
        self.bindings: tuple[Binding, ...] = tuple(bindings)

    def extend(self, name: str, variance: Variance, t: LogicType) -> "TypingContext":
        return TypingContext(self.bindings + ((name, variance, t),))

    def negate(self) -> "TypingContext":
        return TypingContext((n, v.negate(), t) for n, v, t in self.bindings)

    def lookup(self, name: str) -> Binding | None:
        for b in reversed(self.bindings):
            if b[0] == name:
                return b
        return None

    def __eq__(self, other):
        return isinstance(other, TypingContext) and self.bindings == other.bindings

    def __repr__(self):
        inner = ", ".join(f"{n}^{v.value}:{t}" for n, v, t in self.bindings)
        return f"TypingContext[{inner}]"


def _as_context(ctx) -> TypingContext:
    if ctx is None:
        return TypingContext()
    if isinstance(ctx, TypingContext):
        return ctx
    return TypingContext(ctx)


def type_check(ctx: TypingContext | Sequence[Binding] | None, phi: Formula,
               dim: int = 2) -> LogicType:
    """Return the unique type of ``phi`` under ``ctx`` at dimension ``dim``."""
    return _check(_as_context(ctx), phi, dim, None)


def _check(ctx: TypingContext, phi: Formula, dim: int, sink) -> LogicType:
    prop = Prop(dim)
    if isinstance(phi, Top):
        return prop
    if isinstance(phi, Modal):
        if not 1 <= phi.index <= dim:
            raise FormulaTypeError(f"modal index {phi.index} outside dimension {dim}")
        _expect(_check(ctx, phi.body, dim, sink), prop, phi.body)
        return prop
    if isinstance(phi, Neg):
        _expect(_check(ctx.negate(), phi.body, dim, sink), prop, phi.body)
        return prop
    if isinstance(phi, And):
        _expect(_check(ctx, phi.left, dim, sink), prop, phi.left)
        _expect(_check(ctx, phi.right, dim, sink), prop, phi.right)
        return prop
    if isinstance(phi, Var):
        b = ctx.lookup(phi.name)
        if b is None:
            raise FormulaTypeError(f"unbound variable {phi.name}")
        _, v, t = b
        if v is Variance.ANTI:
            raise VarianceError(f"variable {phi.name} used at a polarity its variance forbids")
        return t
    if isinstance(phi, Lam):
        _check_annotation(phi.param_type, dim)
        body_t = _check(ctx.extend(phi.var, phi.variance, phi.param_type), phi.body, dim, sink)
        t = Arrow(phi.param_type, phi.variance, body_t)
        if sink is not None:
            sink.append(t)
        return t
    if isinstance(phi, Mu):
        _check_annotation(phi.type, dim)
        try:
            body_t = _check(ctx.extend(phi.var, Variance.MONO, phi.type), phi.body, dim, sink)
        except VarianceError as exc:
            if str(exc).startswith(f"variable {phi.var} "):
                raise VarianceError(f"fixpoint over non-monotone body: {exc}") from exc
            raise
        _expect(body_t, phi.type, phi.body)
        if sink is not None:
            sink.append(phi.type)
        return phi.type
    if isinstance(phi, App):
        ft = _check(ctx, phi.fun, dim, sink)
        if not isinstance(ft, Arrow):
            raise FormulaTypeError(f"applying a non-function of type {ft}")
        if ft.variance is Variance.MONO:
            _expect(_check(ctx, phi.arg, dim, sink), ft.param, phi.arg)
        elif ft.variance is Variance.ANTI:
            _expect(_check(ctx.negate(), phi.arg, dim, sink), ft.param, phi.arg)
        else:
            _expect(_check(ctx, phi.arg, dim, sink), ft.param, phi.arg)
            _expect(_check(ctx.negate(), phi.arg, dim, sink), ft.param, phi.arg)
        return ft.result
    raise FormulaTypeError(f"not a formula: {phi!r}")


def _check_annotation(t: LogicType, dim: int) -> None:
    if isinstance(t, Prop):
        if t.dim != dim:
            raise FormulaTypeError(f"annotation {t} does not match dimension {dim}")
    else:
        _check_annotation(t.param, dim)
        _check_annotation(t.result, dim)


def _expect(got: LogicType, want: LogicType, where: Formula) -> None:
    if got != want:
        raise FormulaTypeError(f"type mismatch: expected {want}, got {got} for {where}")


def binder_types(phi: Formula, ctx=None, dim: int = 2) -> list[LogicType]:
    """Types of every lambda and mu in ``phi``, collected while type checking."""
    sink: list[LogicType] = []
    _check(_as_context(ctx), phi, dim, sink)
    return sink


def order_of(phi: Formula, ctx=None, dim: int = 2) -> int:
    """Highest type order introduced by a binder: a mu's annotation or a lambda's arrow.

    Zero exactly when no function type occurs.
    """
    return max((type_order(t) for t in binder_types(phi, ctx, dim)), default=0)
