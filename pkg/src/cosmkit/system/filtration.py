"""
필터 연산자 검증: x *_f y = y (x == y), e (그 외)
"""

from dataclasses import dataclass, field
from typing import Any, Dict, List

from .model import FILTRATION_TAG, CombinationalSystem


@dataclass
class FiltrationReport:
    operators: List[str] = field(default_factory=list)
    checked_pairs: int = 0
    violations: List[Dict[str, Any]] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return bool(self.operators) and not self.violations

    def to_dict(self) -> Dict[str, Any]:
        return {
            "operators": self.operators,
            "checked": self.checked_pairs,
            "ok": self.ok,
            "violations": self.violations,
        }


def validate_filtration(system: CombinationalSystem) -> FiltrationReport:
    """filtration 태그 연산자마다, 피연산자로 등장한 엔티티 쌍 전체를 검사"""
    report = FiltrationReport(operators=list(system.operators_tagged(FILTRATION_TAG)))
    if not report.operators:
        report.violations.append({
            "code": "no_filtration_operator",
            "message": "filtration 태그가 붙은 연산자가 없습니다",
        })
        return report

    for op in report.operators:
        operands = set()
        for reaction in system.reactions:
            if reaction.op == op:
                operands.update((reaction.left, reaction.right))
        domain = sorted(operands, key=system.position)

        for x in domain:
            for y in domain:
                report.checked_pairs += 1
                expected = (y,) if x == y else (system.identity,)
                reaction = system.reaction(op, x, y)
                if reaction is None:
                    report.violations.append({
                        "code": "incomplete_filtration",
                        "op": op,
                        "pair": [x, y],
                        "expected": list(expected),
                    })
                elif reaction.products != expected:
                    report.violations.append({
                        "code": "wrong_product",
                        "op": op,
                        "pair": [x, y],
                        "expected": list(expected),
                        "actual": list(reaction.products),
                    })
    return report
