"""Decide path Maltsev conditions in finite idempotent algebras.

The local decider :func:`decide` scans the small testing digraphs of a path;
:func:`oracle_decide` answers the same question by brute force in the free
algebra on two generators and can also produce witness terms.
"""

from __future__ import annotations

from .algebra import Algebra, OperationTable, is_idempotent, load, size_measure, validate
from .closure import Subpower, generate
from .local import DecisionReport, TestingInstance, check_instance, decide
from .oracle import Witness, extract_witness_terms, oracle_decide, verify_witness
from .pattern import PatternPath, emit_maltsev_condition, gallery, parse_condition, parse_path

__version__ = "0.1.0"

__all__ = [
    "Algebra",
    "DecisionReport",
    "OperationTable",
    "PatternPath",
    "Subpower",
    "TestingInstance",
    "Witness",
    "check_instance",
    "decide",
    "emit_maltsev_condition",
    "extract_witness_terms",
    "gallery",
    "generate",
    "is_idempotent",
    "load",
    "oracle_decide",
    "parse_condition",
    "parse_path",
    "size_measure",
    "validate",
    "verify_witness",
]
