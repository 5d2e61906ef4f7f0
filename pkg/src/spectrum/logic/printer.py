"""Pretty printer emitting the surface syntax read by :mod:`.parser`.

Derived forms are recognised structurally (``!true`` as ``false``,
``!(!a & !b)`` as ``a | b``, ``!<x>i !b`` as ``[x]i b``), so parsing the
output rebuilds exactly the same core tree up to bound-variable names.
"""

from __future__ import annotations

from .syntax import (And, App, Arrow, Formula, Lam, LogicType, Modal, Mu, Neg, Prop, Top, Var,
                     normal_form)

# precedence levels: higher binds tighter
_BINDER, _IMPL, _DISJ, _CONJ, _APP, _PREFIX = range(6)


def type_to_text(t: LogicType) -> str:
    if isinstance(t, Prop):
        return f"P{t.dim}"
    p = type_to_text(t.param)
    if isinstance(t.param, Arrow):
        p = f"({p})"
    return f"{t.variance.value}{p} -> {type_to_text(t.result)}"


def _as_or(f: Formula):
    if isinstance(f, Neg) and isinstance(f.body, And) \
            and isinstance(f.body.left, Neg) and isinstance(f.body.right, Neg):
        return f.body.left.body, f.body.right.body
    return None


def _as_box(f: Formula):
    if isinstance(f, Neg) and isinstance(f.body, Modal) and isinstance(f.body.body, Neg):
        return f.body.action, f.body.index, f.body.body.body
    return None


def _level(f: Formula) -> int:
    if isinstance(f, (Lam, Mu)):
        return _BINDER
    if _as_or(f) is not None:
        return _DISJ
    if isinstance(f, And):
        return _CONJ
    if isinstance(f, App):
        return _APP
    return _PREFIX


def to_text(f: Formula) -> str:
    return _show(f, _BINDER)


def _wrap(f: Formula, ctx: int) -> str:
    s = _show(f, ctx)
    lvl = _level(f)
    if lvl < ctx or (lvl == _BINDER and ctx > _BINDER):
        return f"({s})"
    return s


def _show(f: Formula, ctx: int) -> str:
    if isinstance(f, Top):
        return "true"
    if isinstance(f, Var):
        return f.name
    if isinstance(f, Neg) and isinstance(f.body, Top):
        return "false"
    ors = _as_or(f)
    if ors is not None:
        left, right = ors
        # '|' is left-associative: a right operand that is itself a disjunction needs parens
        r = _wrap(right, _CONJ) if _level(right) == _DISJ else _wrap(right, _DISJ)
        return f"{_wrap(left, _DISJ)} | {r}"
    bx = _as_box(f)
    if bx is not None:
        a, i, body = bx
        return f"[{a}]{i} {_wrap(body, _PREFIX)}"
    if isinstance(f, Neg):
        return f"!{_wrap(f.body, _PREFIX)}"
    if isinstance(f, Modal):
        return f"<{f.action}>{f.index} {_wrap(f.body, _PREFIX)}"
    if isinstance(f, And):
        r = _wrap(f.right, _APP)
        return f"{_wrap(f.left, _CONJ)} & {r}"
    if isinstance(f, App):
        return f"{_wrap(f.fun, _APP)} {_wrap(f.arg, _PREFIX)}"
    if isinstance(f, Lam):
        params = []
        g = f
        while isinstance(g, Lam):
            params.append(f"{g.var}:{g.variance.value}:{type_to_text(g.param_type)}")
            g = g.body
        return f"lambda {', '.join(params)}. {_show(g, _BINDER)}"
    if isinstance(f, Mu):
        return _show_mu(f)
    raise TypeError(f"not a formula: {f!r}")


def _show_mu(f: Mu) -> str:
    ps, _ = normal_form(f.type)
    names = []
    g = f.body
    for pt, v in ps:
        if not (isinstance(g, Lam) and g.param_type == pt and g.variance is v):
            break
        names.append(f"{g.var}:{v.value}")
        g = g.body
    if ps and len(names) == len(ps):
        return f"mu {f.var}({', '.join(names)}):{type_to_text(f.type)}. {_show(g, _BINDER)}"
    return f"mu {f.var}:{type_to_text(f.type)}. {_show(f.body, _BINDER)}"
