"""Restricted Extended Calculus of Constructions with denotations in finite
topological spaces."""

from .checker import PTClass, TypingError, check, classify_pt, infer, is_proof_term, is_propositional, wf_context
from .interp import check_soundness, enumerate_context, interpret, interpret_strict, is_valid, value_eq, value_in
from .parser import parse_context, parse_term, pretty
from .term import Context, alpha_eq, beta_eq, normalize, substitute
from .topology import builtin, enumerate_topologies, validate

__all__ = [
    "Context", "PTClass", "TypingError", "alpha_eq", "beta_eq", "builtin", "check", "check_soundness",
    "classify_pt", "enumerate_context", "enumerate_topologies", "infer", "interpret", "interpret_strict",
    "is_proof_term", "is_propositional", "is_valid", "normalize", "parse_context", "parse_term", "pretty",
    "substitute", "validate", "value_eq", "value_in", "wf_context",
]
