"""Intuitionistic propositional logic: syntax, Kripke semantics, decision."""

from .formula import (BOTTOM, TRUE, And, Formula, Iff, Imp, Not, Or, Var, formula_pool,
                      formulas_by_size, size, subformulas, substitute, variables)
from .kripke import KripkeModel, all_models, force, search_countermodel, truth_mask, truth_set
from .parser import parse, to_text
from .prover import Countermodel, Decision, Prover, canonical_countermodel, decide, equiv, provable

__all__ = [
    "BOTTOM", "TRUE", "And", "Formula", "Iff", "Imp", "Not", "Or", "Var", "formula_pool",
    "formulas_by_size", "size", "subformulas", "substitute", "variables", "KripkeModel",
    "all_models", "force", "search_countermodel", "truth_mask", "truth_set", "parse",
    "to_text", "Countermodel", "Decision", "Prover", "canonical_countermodel", "decide",
    "equiv", "provable",
]
