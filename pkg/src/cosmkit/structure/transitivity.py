"""
패턴 추이 합성 - (x,y) 가 {a,b} 의 패턴이고 (a,b) 가 z 의 패턴이면 (x,y) 는 z 의 패턴

{a,b} 는 반응 op(x,y) 의 생성물 중 둘 (a = b 허용). 집합의 단순성은 공유 계획 멀티셋 비용이고,
합성된 (x,y) → z 의 h 는 두 단계의 확장 측도 연산 비용을 모두 더한다.
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional

from ..core.config import CosmConfig
from ..core.errors import ParameterError
from ..core.rational import Cost, format_cost, is_finite
from ..cosm.engine import CosmEngine
from ..cosm.fixpoint import FREE, LITERAL
from ..cosm.multiset import EXACT
from ..system.model import IDENTITY, CombinationalSystem, Reaction


@dataclass
class CompositionTrace:
    """한 인스턴스의 비용 추적"""
    first: Reaction
    second: Reaction
    z: str
    sigma: Dict[str, Cost]
    set_cost: Cost
    first_op_cost: Cost
    second_op_cost: Cost
    set_intensity: Fraction
    target_intensity: Fraction
    composed_intensity: Fraction

    @property
    def holds(self) -> bool:
        return self.composed_intensity > 0

    def to_dict(self) -> Dict[str, object]:
        return {
            "pair": [self.first.left, self.first.right],
            "op": self.first.op,
            "set": [self.second.left, self.second.right],
            "secondOp": self.second.op,
            "target": self.z,
            "sigma": {x: format_cost(c) for x, c in self.sigma.items()},
            "setCost": format_cost(self.set_cost),
            "firstOpCost": format_cost(self.first_op_cost),
            "secondOpCost": format_cost(self.second_op_cost),
            "setIntensity": format_cost(self.set_intensity),
            "targetIntensity": format_cost(self.target_intensity),
            "composedIntensity": format_cost(self.composed_intensity),
            "holds": self.holds,
        }


@dataclass
class TransitivityReport:
    context: str
    mode: str
    confirmations: List[CompositionTrace] = field(default_factory=list)
    counterexamples: List[CompositionTrace] = field(default_factory=list)
    undefined: int = 0

    @property
    def empty(self) -> bool:
        return not self.confirmations and not self.counterexamples

    def to_dict(self) -> Dict[str, object]:
        return {
            "context": self.context,
            "mode": self.mode,
            "confirmations": [t.to_dict() for t in self.confirmations],
            "counterexamples": [t.to_dict() for t in self.counterexamples],
            "undefined": self.undefined,
        }


def _intensity(total: Cost, h: Cost) -> Optional[Fraction]:
    if not is_finite(total) or total == 0 or not is_finite(h):
        return None
    return (total - h) / total


def transitivity_composition_check(system: CombinationalSystem, config: Optional[CosmConfig] = None,
                                   w: str = IDENTITY, mode: str = FREE, solver: str = EXACT,
                                   cosm: Optional[CosmEngine] = None,
                                   logger: Optional[logging.Logger] = None) -> TransitivityReport:
    """모든 (op(x,y) → {a,b}, op'(a,b) → z) 인스턴스를 검사"""
    config = config or CosmConfig.create_default()
    logger = logger or logging.getLogger(__name__)
    if system.measure_count < 2:
        raise ParameterError("패턴 강도에는 측도가 2개 이상 필요합니다", path="measures")
    if mode not in (FREE, LITERAL):
        raise ParameterError(f"추이 검사 모드는 free 또는 literal 입니다: {mode}", path="mode")
    system.require_entity(w, path="context")

    cosm = cosm or CosmEngine(system, config, logger)
    ext = system.measure(config.pattern.extended_measure)
    report = TransitivityReport(w, mode)

    def sigma(x: str) -> Cost:
        return cosm.relative_simplicity(1, x, w, mode)

    for first in system.reactions:
        produced = set(first.products)
        seen = set()
        for a in first.products:
            for second in system.consumers(a):
                if second.left != a or second.right not in produced or second.key in seen:
                    continue
                seen.add(second.key)
                b = second.right
                first_cost = ext.reaction_cost(first.op, first.left, first.right, w)
                second_cost = ext.reaction_cost(second.op, a, b, w)

                for z in second.products:
                    target = _intensity(sigma(z), sigma(a) + sigma(b) + second_cost)
                    if target is None:
                        report.undefined += 1
                        continue
                    if target <= 0:
                        continue

                    elements = {a: 2} if a == b else {a: 1, b: 1}
                    set_cost = cosm.multiset_simplicity(1, elements, solver, w).value
                    h_pair = sigma(first.left) + sigma(first.right) + first_cost
                    in_set = _intensity(set_cost, h_pair)
                    if in_set is None:
                        report.undefined += 1
                        continue
                    if in_set <= 0:
                        continue

                    composed = _intensity(sigma(z), h_pair + second_cost)
                    if composed is None:
                        report.undefined += 1
                        continue
                    trace = CompositionTrace(
                        first, second, z,
                        {x: sigma(x) for x in dict.fromkeys((first.left, first.right, a, b, z))},
                        set_cost, first_cost, second_cost, in_set, target, composed,
                    )
                    if trace.holds:
                        report.confirmations.append(trace)
                    else:
                        logger.warning(f"추이 합성 반례: ({first.left},{first.right}) → {{{a},{b}}} → {z}")
                        report.counterexamples.append(trace)

    logger.info(f"추이 합성 검사: 확인 {len(report.confirmations)}건, 반례 {len(report.counterexamples)}건")
    return report
