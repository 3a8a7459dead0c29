"""
CoSM 엔진 - 단일 측도 단순성, 상대 단순성, 표현식 비용, 멀티셋 단순성
"""

from .engine import CosmEngine
from .expression import Expression, evaluate, expression_cost, parse_expression, random_expression
from .fixpoint import FREE, LITERAL, MODES, SEQUENCE
from .multiset import EXACT, GREEDY, PlanResult, multiset_simplicity, multiset_union, parse_multiset
from .oracle import oracle_plan_cost, oracle_simplicity, oracle_vectors

__all__ = [
    "CosmEngine",
    "EXACT",
    "Expression",
    "FREE",
    "GREEDY",
    "LITERAL",
    "MODES",
    "PlanResult",
    "SEQUENCE",
    "evaluate",
    "expression_cost",
    "multiset_simplicity",
    "multiset_union",
    "oracle_plan_cost",
    "oracle_simplicity",
    "oracle_vectors",
    "parse_expression",
    "parse_multiset",
    "random_expression",
]
