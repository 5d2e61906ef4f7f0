"""Process equivalence checking by model checking a higher-order fixpoint logic
on pairs of labelled transition systems."""

from .equivalences import (EquivalenceId, Verdict, check_equivalence, defining_formula,
                           equivalence_relation, template_sim, template_trace, tester_formula)
from .lts import Lts, format_aut, parse_aut, random_lts
from .logic import parse_formula, to_text, type_check
from .naive import FuncTable, NaiveEngine, check_pair, mc
from .needdriven import NeedDrivenEngine, analyze_fixpoint_call, explore, solve
from .relations import Rel2
from .treq import trace_equivalent, treq

__all__ = [
    "EquivalenceId", "FuncTable", "Lts", "NaiveEngine", "NeedDrivenEngine", "Rel2", "Verdict",
    "analyze_fixpoint_call", "check_equivalence", "check_pair", "defining_formula",
    "equivalence_relation", "explore", "format_aut", "mc", "parse_aut", "parse_formula",
    "random_lts", "solve", "template_sim", "template_trace", "tester_formula", "to_text",
    "trace_equivalent", "treq", "type_check",
]
