"""Syntax, types and utilities of the higher-order, higher-dimensional fixpoint logic."""

from .parser import FormulaSyntaxError, parse_formula, parse_type
from .printer import to_text, type_to_text
from .syntax import (TOP, And, App, Arrow, Formula, Lam, LogicType, Modal, Mu, Neg, Prop, Top,
                     Var, Variance, actions, alpha_equivalent, apply, arity, arrow, bottom, box,
                     compose, conj, diamond, disj, free_vars, implies, lambdas, max_modal_index,
                     normal_form, nu, or_, size, spine, subformulas, substitute, swap, type_order,
                     xor)
from .typecheck import (FormulaTypeError, TypingContext, VarianceError, binder_types, order_of,
                        type_check)

__all__ = [
    "TOP", "And", "App", "Arrow", "Formula", "FormulaSyntaxError", "FormulaTypeError", "Lam",
    "LogicType", "Modal", "Mu", "Neg", "Prop", "Top", "TypingContext", "Var", "Variance",
    "VarianceError", "actions", "alpha_equivalent", "apply", "arity", "arrow", "binder_types",
    "bottom", "box", "compose", "conj", "diamond", "disj", "free_vars", "implies", "lambdas",
    "max_modal_index", "normal_form", "nu", "or_", "order_of", "parse_formula", "parse_type",
    "size", "spine", "subformulas", "substitute", "swap", "to_text", "type_check", "type_order",
    "type_to_text", "xor",
]
