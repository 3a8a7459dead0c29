"""
비용 결합성 - 반응표의 결합성 검사 후 C₁, C₂ 차이의 최댓값

C₁(x,y,z) = min_{i,j} σ*(*_i, y, z) + σ*(*_j, x, y *_i z)
C₂(x,y,z) = min_{i,j} σ*(*_i, x *_j y, z) + σ*(*_j, x, y)
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Set, Tuple

from ..core.errors import AssociativityViolationError
from ..core.rational import INF, Cost, format_cost, is_finite
from ..system.model import CombinationalSystem, MeasureRef, MeasureSpec, Reaction
from .hierarchy import OrderDiagnostics

Triple = Tuple[str, str, str]


@dataclass
class TripleCost:
    x: str
    y: str
    z: str
    right_nested: Tuple[Cost, ...]
    left_nested: Tuple[Cost, ...]
    defect: Cost

    def to_dict(self) -> Dict[str, object]:
        return {
            "triple": [self.x, self.y, self.z],
            "c1": [format_cost(c) for c in self.right_nested],
            "c2": [format_cost(c) for c in self.left_nested],
            "defect": format_cost(self.defect),
        }


@dataclass
class AssociativityReport:
    measures: Tuple[str, ...]
    is_associative: bool
    defect: Cost
    per_measure: Dict[str, Cost] = field(default_factory=dict)
    triples: List[TripleCost] = field(default_factory=list)

    def to_dict(self) -> Dict[str, object]:
        return {
            "measures": list(self.measures),
            "isAssociative": self.is_associative,
            "costAssocDefect": format_cost(self.defect),
            "perMeasure": {m: format_cost(c) for m, c in self.per_measure.items()},
            "perTripleTable": [t.to_dict() for t in self.triples],
        }


@dataclass
class _Side:
    products: Set[str] = field(default_factory=set)
    routes: List[Tuple[Reaction, Reaction]] = field(default_factory=list)


def _route_cost(spec: MeasureSpec, route: Tuple[Reaction, Reaction]) -> Cost:
    first, second = route
    return (spec.reaction_cost(first.op, first.left, first.right)
            + spec.reaction_cost(second.op, second.left, second.right))


def _defect(a: Cost, b: Cost) -> Cost:
    if not is_finite(a) and not is_finite(b):
        return Fraction(0)
    if not is_finite(a) or not is_finite(b):
        return INF
    return abs(a - b)


def _composable(system: CombinationalSystem, ops: Set[str]) -> Dict[Triple, Tuple[_Side, _Side]]:
    """양쪽 괄호 묶음 중 하나라도 정의된 세 쌍과 각 묶음의 경로"""
    triples: Dict[Triple, Tuple[_Side, _Side]] = {}

    def side(t: Triple, index: int) -> _Side:
        if t not in triples:
            triples[t] = (_Side(), _Side())
        return triples[t][index]

    for inner in system.reactions:
        if inner.op not in ops:
            continue
        for q in inner.products:
            for outer in system.consumers(q):
                if outer.op not in ops:
                    continue
                # x * (y * z)
                if outer.right == q:
                    s = side((outer.left, inner.left, inner.right), 0)
                    s.products.update(outer.products)
                    s.routes.append((inner, outer))
                # (x * y) * z
                if outer.left == q:
                    s = side((inner.left, inner.right, outer.right), 1)
                    s.products.update(outer.products)
                    s.routes.append((outer, inner))
    return triples


def cost_associativity(system: CombinationalSystem, measures: Optional[Sequence[MeasureRef]] = None,
                       logger: Optional[logging.Logger] = None) -> AssociativityReport:
    """결합성을 먼저 확인하고 측도별 |C₁ − C₂| 의 최댓값을 정확히 계산"""
    logger = logger or logging.getLogger(__name__)
    if measures is None:
        measures = (1, 2) if system.measure_count >= 2 else (1,)
    specs = [system.measure(m) for m in measures]
    ops = set().union(*(spec.operators for spec in specs))

    triples = _composable(system, ops)
    order = sorted(triples, key=lambda t: tuple(system.position(x) for x in t))

    for t in order:
        right, left = triples[t]
        if right.products != left.products:
            x, y, z = t
            raise AssociativityViolationError(
                f"({x}*{y})*{z} 와 {x}*({y}*{z}) 의 결과가 다릅니다: "
                f"{sorted(left.products)} ≠ {sorted(right.products)}",
                path=f"triple:({x},{y},{z})",
            )

    per_measure: Dict[str, Cost] = {spec.id: Fraction(0) for spec in specs}
    table: List[TripleCost] = []
    for t in order:
        right, left = triples[t]
        c1 = tuple(min((_route_cost(spec, r) for r in right.routes), default=INF) for spec in specs)
        c2 = tuple(min((_route_cost(spec, r) for r in left.routes), default=INF) for spec in specs)
        defects = [_defect(a, b) for a, b in zip(c1, c2)]
        for spec, d in zip(specs, defects):
            per_measure[spec.id] = max(per_measure[spec.id], d)
        table.append(TripleCost(*t, c1, c2, max(defects)))

    defect = max(per_measure.values(), default=Fraction(0))
    logger.info(f"비용 결합성: 세 쌍 {len(table)}개, c = {format_cost(defect)}")
    return AssociativityReport(tuple(spec.id for spec in specs), True, defect, per_measure, table)


@dataclass
class HierarchyBound:
    """c_obs 와 비용 결합성 결함 c 의 비교 (명제는 c, 증명은 2c 까지 보장)"""
    defect: Cost
    observed: Cost

    @property
    def within_statement(self) -> bool:
        return self.observed <= self.defect

    @property
    def within_proof(self) -> bool:
        return self.observed <= 2 * self.defect

    def to_dict(self) -> Dict[str, object]:
        return {
            "c": format_cost(self.defect),
            "cObs": format_cost(self.observed),
            "withinC": self.within_statement,
            "within2C": self.within_proof,
        }


def hierarchy_bound(report: AssociativityReport, diagnostics: OrderDiagnostics) -> HierarchyBound:
    return HierarchyBound(report.defect, diagnostics.transitivity_defect)
