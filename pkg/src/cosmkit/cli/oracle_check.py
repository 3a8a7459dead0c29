"""
오라클 대조 - 고정점 단순성, 번들, 프런티어를 전수 열거 결과와 비교
"""

import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence

from ..core.config import CosmConfig
from ..core.rational import format_cost
from ..cosm.engine import CosmEngine
from ..cosm.expression import postorder_addresses
from ..cosm.fixpoint import FREE, LITERAL
from ..cosm.oracle import check_oracle_cap
from ..cosmos.bundle import CosmosEngine
from ..pattern.intensity import PatternEngine, oracle_frontier
from ..system.model import IDENTITY, CombinationalSystem

SIMPLICITY = "simplicity"
BUNDLE = "bundle"
FRONTIER = "frontier"


@dataclass
class Mismatch:
    kind: str
    entity: str
    context: str
    expected: object
    actual: object
    measure: Optional[str] = None
    mode: Optional[str] = None
    trace: List[str] = field(default_factory=list)

    def to_dict(self) -> Dict[str, object]:
        return {
            "kind": self.kind,
            "entity": self.entity,
            "context": self.context,
            "measure": self.measure,
            "mode": self.mode,
            "oracle": self.expected,
            "engine": self.actual,
            "trace": self.trace,
        }


@dataclass
class OracleCheckReport:
    entities: List[str] = field(default_factory=list)
    checked: int = 0
    mismatches: List[Mismatch] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.mismatches

    def to_dict(self) -> Dict[str, object]:
        return {
            "checked": self.checked,
            "mismatches": len(self.mismatches),
            "entities": self.entities,
            "details": [m.to_dict() for m in self.mismatches],
        }


def _frontier_json(records) -> List[Dict[str, object]]:
    return [
        {"op": r.op, "y": r.y, "z": r.z, "intensities": [format_cost(v) for v in r.intensities]}
        for r in records
    ]


def oracle_check(system: CombinationalSystem, config: Optional[CosmConfig] = None,
                 entities: Optional[Sequence[str]] = None, context: str = IDENTITY,
                 cosm: Optional[CosmEngine] = None, logger: Optional[logging.Logger] = None) -> OracleCheckReport:
    """범위 안 엔티티마다 측도별 σ (free, literal), 번들, 멀티패턴 프런티어를 대조"""
    config = config or CosmConfig.create_default()
    logger = logger or logging.getLogger(__name__)
    check_oracle_cap(system, config.solver.oracle_entity_cap)
    system.require_entity(context, path="context")
    scope = list(entities) if entities is not None else list(system.entities)
    for x in scope:
        system.require_entity(x)

    cosm = cosm or CosmEngine(system, config, logger)
    cosmos = CosmosEngine(system, config, logger)
    patterns = PatternEngine(system, config, cosm=cosm, logger=logger) if system.measure_count >= 2 else None
    modes = (FREE,) if context == IDENTITY else (FREE, LITERAL)

    report = OracleCheckReport(entities=scope)
    for x in scope:
        for j, spec in enumerate(system.measures, start=1):
            for mode in modes:
                actual = cosm.relative_simplicity(j, x, context, mode)
                expected = cosm.oracle_simplicity(j, x, context, mode)
                report.checked += 1
                if actual != expected:
                    witness = cosm.witness(j, x, context, mode)
                    report.mismatches.append(Mismatch(
                        SIMPLICITY, x, context, format_cost(expected), format_cost(actual),
                        measure=spec.id, mode=mode,
                        trace=postorder_addresses(witness) if witness is not None else [],
                    ))

        actual_bundle = cosmos.bundle(x, context)
        expected_bundle = cosmos.oracle_bundle(x, context)
        report.checked += 1
        if actual_bundle != expected_bundle:
            report.mismatches.append(Mismatch(BUNDLE, x, context, expected_bundle.to_json(), actual_bundle.to_json()))

        if patterns is None:
            continue
        actual_front = _frontier_json(patterns.multipattern_frontier(x, context))
        expected_front = _frontier_json(oracle_frontier(system, x, context, config))
        report.checked += 1
        if actual_front != expected_front:
            report.mismatches.append(Mismatch(FRONTIER, x, context, expected_front, actual_front))

    if report.mismatches:
        logger.warning(f"오라클 불일치 {len(report.mismatches)}건 (검사 {report.checked}건)")
    else:
        logger.info(f"오라클 대조 통과: {report.checked}건")
    return report
