"""
구조 엔진 - 서브패턴 계층, 근사 부분순서 진단, 비용 결합성, Γ 경로, 패턴 추이 합성
"""

from .associativity import AssociativityReport, HierarchyBound, cost_associativity, hierarchy_bound
from .gamma import GammaReport, GammaTriple, gamma_check
from .hierarchy import (
    BOTH,
    LEFT,
    SUBMULTIPATTERN,
    SUBPATTERN,
    OrderDiagnostics,
    SubpatternEdge,
    SubpatternGraph,
    build_subpattern_graph,
    order_diagnostics,
    to_dot,
)
from .transitivity import CompositionTrace, TransitivityReport, transitivity_composition_check

__all__ = [
    "BOTH",
    "LEFT",
    "SUBMULTIPATTERN",
    "SUBPATTERN",
    "AssociativityReport",
    "CompositionTrace",
    "GammaReport",
    "GammaTriple",
    "HierarchyBound",
    "OrderDiagnostics",
    "SubpatternEdge",
    "SubpatternGraph",
    "TransitivityReport",
    "build_subpattern_graph",
    "cost_associativity",
    "gamma_check",
    "hierarchy_bound",
    "order_diagnostics",
    "to_dot",
    "transitivity_composition_check",
]
