"""Recursive-descent parser for the formula surface syntax.

Grammar, loosest binding first::

    formula := disj ('->' formula)?
    disj    := xor ('|' xor)*
    xor     := conj ('^' conj)*
    conj    := app ('&' app)*
    app     := prefix prefix*                   application, left-associative
    prefix  := '!' prefix | '<' act '>' INT prefix | '[' act ']' INT prefix
             | binder | atom
    binder  := 'mu' NAME ':' type '.' formula
             | 'mu' NAME '(' param (',' param)* ')' ':' type '.' formula
             | 'nu' NAME ':' type '.' formula
             | 'lambda' param (',' param)* '.' formula
    param   := NAME ':' variance (':' type)?
    atom    := 'true' | 'false' | NAME | '(' formula ')'
    type    := variance? tatom ('->' type)?
    tatom   := 'P' INT | '(' type ')'

Binders extend as far right as possible. Modal operators bind tighter than
application, so ``F <a>1 X [a]2 Y`` applies ``F`` to two arguments. Bound
variables are renamed apart, so the result never reuses a binder name.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Optional

from .syntax import (TOP, And, App, Arrow, Formula, Lam, LogicType, Modal, Mu, Neg, Prop, Var,
                     Variance, bottom, box, fresh_name, implies, normal_form, nu, or_, xor)

KEYWORDS = {"true", "false", "mu", "nu", "lambda"}

_TOKEN_RE = re.compile(r"""
    (?P<ws>\s+)
  | (?P<arrow>->)
  | (?P<modal><[^<>\s]+>\d+|\[[^\[\]\s]+\]\d+)
  | (?P<name>[A-Za-z_][A-Za-z0-9_']*)
  | (?P<int>\d+)
  | (?P<punct>[!&|^().,:+\-])
""", re.VERBOSE)


class FormulaSyntaxError(ValueError):
    def __init__(self, message: str, pos: int, text: str = ""):
        super().__init__(f"{message} at position {pos}")
        self.pos = pos
        self.text = text


@dataclass
class Token:
    kind: str
    value: str
    pos: int


def tokenize(text: str) -> list[Token]:
    out = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if not m:
            raise FormulaSyntaxError(f"unexpected character {text[pos]!r}", pos, text)
        kind = m.lastgroup
        if kind != "ws":
            out.append(Token(kind, m.group(), pos))
        pos = m.end()
    out.append(Token("eof", "", len(text)))
    return out


class _Parser:
    def __init__(self, text: str, free: Iterable[str]):
        self.text = text
        self.toks = tokenize(text)
        self.i = 0
        self.free = set(free)
        self.used = set(self.free)
        self.scope: list[tuple[str, str]] = []

    # -- token helpers --
    @property
    def tok(self) -> Token:
        return self.toks[self.i]

    def error(self, msg: str, tok: Optional[Token] = None) -> FormulaSyntaxError:
        tok = tok or self.tok
        return FormulaSyntaxError(msg, tok.pos, self.text)

    def at(self, value: str) -> bool:
        return self.tok.value == value and self.tok.kind in ("punct", "arrow", "name")

    def eat(self, value: str) -> Token:
        if not self.at(value):
            raise self.error(f"expected {value!r}, found {self.tok.value or 'end of input'!r}")
        t = self.tok
        self.i += 1
        return t

    def name(self) -> Token:
        t = self.tok
        if t.kind != "name" or t.value in KEYWORDS:
            raise self.error(f"expected a variable name, found {t.value or 'end of input'!r}")
        self.i += 1
        return t

    # -- scoping --
    def bind(self, name: str) -> str:
        new = fresh_name(name, self.used)
        self.used.add(new)
        self.scope.append((name, new))
        return new

    def unbind(self, count: int = 1) -> None:
        del self.scope[len(self.scope) - count:]

    def resolve(self, tok: Token) -> str:
        for src, new in reversed(self.scope):
            if src == tok.value:
                return new
        if tok.value in self.free:
            return tok.value
        raise self.error(f"unbound variable {tok.value!r}", tok)

    # -- formulas --
    def parse(self) -> Formula:
        f = self.formula()
        if self.tok.kind != "eof":
            raise self.error(f"unexpected {self.tok.value!r}")
        return f

    def formula(self) -> Formula:
        left = self.disj()
        if self.at("->"):
            self.eat("->")
            return implies(left, self.formula())
        return left

    def disj(self) -> Formula:
        f = self.xor()
        while self.at("|"):
            self.eat("|")
            f = or_(f, self.xor())
        return f

    def xor(self) -> Formula:
        f = self.conj()
        while self.at("^"):
            self.eat("^")
            f = xor(f, self.conj())
        return f

    def conj(self) -> Formula:
        f = self.app()
        while self.at("&"):
            self.eat("&")
            f = And(f, self.app())
        return f

    def starts_prefix(self) -> bool:
        t = self.tok
        if t.kind == "modal":
            return True
        if t.kind == "name":
            return True
        return t.kind == "punct" and t.value in ("!", "(")

    def app(self) -> Formula:
        f = self.prefix()
        while self.starts_prefix():
            f = App(f, self.prefix())
        return f

    def prefix(self) -> Formula:
        t = self.tok
        if t.kind == "punct" and t.value == "!":
            self.i += 1
            return Neg(self.prefix())
        if t.kind == "modal":
            self.i += 1
            opener = t.value[0]
            close = t.value.index(">" if opener == "<" else "]")
            action, index = t.value[1:close], int(t.value[close + 1:])
            body = self.prefix()
            return Modal(action, index, body) if opener == "<" else box(action, index, body)
        if t.kind == "name" and t.value in ("mu", "nu", "lambda"):
            return self.binder()
        return self.atom()

    def atom(self) -> Formula:
        t = self.tok
        if t.kind == "name":
            if t.value == "true":
                self.i += 1
                return TOP
            if t.value == "false":
                self.i += 1
                return bottom()
            self.name()
            return Var(self.resolve(t))
        if self.at("("):
            self.eat("(")
            f = self.formula()
            self.eat(")")
            return f
        raise self.error(f"unexpected {t.value or 'end of input'!r}")

    def binder(self) -> Formula:
        kw = self.tok.value
        self.i += 1
        if kw == "lambda":
            params = [self.param(need_type=True)]
            while self.at(","):
                self.eat(",")
                params.append(self.param(need_type=True))
            self.eat(".")
            names = [self.bind(n) for n, _, _ in params]
            body = self.formula()
            self.unbind(len(names))
            for new, (_, v, t) in reversed(list(zip(names, params))):
                body = Lam(new, v, t, body)
            return body

        name_tok = self.name()
        params = []
        if kw == "mu" and self.at("("):
            self.eat("(")
            params.append(self.param(need_type=False))
            while self.at(","):
                self.eat(",")
                params.append(self.param(need_type=False))
            self.eat(")")
        self.eat(":")
        type_tok = self.tok
        t = self.type_()
        if params:
            t = self._merge_param_types(t, params, type_tok)
        else:
            t = _default_variances(t)
        self.eat(".")
        new = self.bind(name_tok.value)
        pnames = [self.bind(n) for n, _, _ in params]
        body = self.formula()
        self.unbind(1 + len(pnames))
        if params:
            ps, _ = normal_form(t)
            for pn, (pt, v) in reversed(list(zip(pnames, ps))):
                body = Lam(pn, v, pt, body)
        if kw == "nu":
            try:
                return nu(new, t, body)
            except ValueError as exc:
                raise self.error(str(exc), name_tok) from None
        return Mu(new, t, body)

    def param(self, need_type: bool):
        n = self.name().value
        self.eat(":")
        v = self.variance()
        if v is None:
            raise self.error("expected a variance mark (+, - or 0)")
        t = None
        if self.at(":"):
            self.eat(":")
            t = _default_variances(self.type_())
        elif need_type:
            raise self.error("expected ':' and a parameter type")
        return n, v, t

    def variance(self) -> Optional[Variance]:
        t = self.tok
        if t.kind == "punct" and t.value in "+-":
            self.i += 1
            return Variance.parse(t.value)
        if t.kind == "int" and t.value == "0":
            self.i += 1
            return Variance.ANY
        return None

    def type_(self):
        """Parse a type; arrows without a variance mark carry ``None`` until resolved."""
        v = self.variance()
        if self.at("("):
            self.eat("(")
            param = self.type_()
            self.eat(")")
        else:
            t = self.tok
            m = re.fullmatch(r"P(\d+)", t.value) if t.kind == "name" else None
            if not m or int(m.group(1)) < 1:
                raise self.error(f"expected a type, found {t.value or 'end of input'!r}")
            self.i += 1
            param = Prop(int(m.group(1)))
        if self.at("->"):
            self.eat("->")
            return _RawArrow(param, v, self.type_())
        if v is not None:
            raise self.error("variance mark on a result type")
        return param

    def _merge_param_types(self, t, params, tok: Token) -> LogicType:
        raw = []
        cur = t
        for _ in params:
            if not isinstance(cur, _RawArrow):
                raise self.error("fixpoint type has fewer arrows than parameters", tok)
            raw.append(cur)
            cur = cur.result
        result = _default_variances(cur)
        for r, (pname, v, pt) in reversed(list(zip(raw, params))):
            ptype = _default_variances(r.param)
            if r.variance is not None and r.variance is not v:
                raise self.error(f"variance of parameter {pname} disagrees with the type", tok)
            if pt is not None and pt != ptype:
                raise self.error(f"type of parameter {pname} disagrees with the type", tok)
            result = Arrow(ptype, v, result)
        return result


@dataclass(frozen=True)
class _RawArrow:
    param: object
    variance: Optional[Variance]
    result: object


def _default_variances(t) -> LogicType:
    """Unmarked arrows are monotone."""
    if isinstance(t, _RawArrow):
        return Arrow(_default_variances(t.param), t.variance or Variance.MONO,
                     _default_variances(t.result))
    return t


def parse_formula(text: str, free: Iterable[str] = ()) -> Formula:
    """Parse surface syntax into the desugared core AST.

    ``free`` names variables allowed to occur unbound (for open formulas).
    """
    return _Parser(text, free).parse()


def parse_type(text: str) -> LogicType:
    p = _Parser(text, ())
    t = _default_variances(p.type_())
    if p.tok.kind != "eof":
        raise p.error(f"unexpected {p.tok.value!r}")
    return t
