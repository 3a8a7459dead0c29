"""
이중 네트워크 정합도 - 1 − ∫|d_LMI − d_I| dm / ∫ max(d_LMI, d_I) dm 과 d_I → d_LMI 고정점 반복
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Mapping, Optional, Tuple

from ..core.config import CosmConfig
from ..core.errors import ParameterError
from ..core.rational import format_cost
from ..metric.tanimoto import MetricTable, tanimoto_tables
from ..pattern.intensity import PatternEngine
from ..structure.hierarchy import build_subpattern_graph
from ..system.model import IDENTITY, CombinationalSystem
from .lossy import check_k, lmi_distance

TANIMOTO_START = "tanimoto"
LMI_START = "lmi"

Weights = Mapping[Tuple[str, str], Fraction]


def _ordered_pairs(table: MetricTable) -> List[Tuple[str, str]]:
    return [(x, y) for x in table.entities for y in table.entities if x != y]


def coherence_degree(d_lmi: MetricTable, d_i: MetricTable, weights: Optional[Weights] = None) -> Fraction:
    """m 은 기본적으로 대각선을 뺀 순서쌍 위의 균등 측도, 두 적분이 모두 0 이면 1"""
    if set(d_lmi.entities) != set(d_i.entities):
        raise ParameterError("두 거리표의 엔티티 집합이 다릅니다", path="tables")
    pairs = _ordered_pairs(d_i)
    if weights is None:
        weights = {p: Fraction(1) for p in pairs}
    for p, m in weights.items():
        if m < 0:
            raise ParameterError(f"측도 가중치는 음수일 수 없습니다: {p}", path="weights")

    gap = Fraction(0)
    total = Fraction(0)
    for (x, y), m in weights.items():
        a, b = d_lmi.get(x, y), d_i.get(x, y)
        gap += m * abs(a - b)
        total += m * max(a, b)
    if total == 0:
        return Fraction(1)
    return 1 - gap / total


def sup_change(a: MetricTable, b: MetricTable) -> Fraction:
    return max((abs(a.get(x, y) - b.get(x, y)) for x, y in a.pairs()), default=Fraction(0))


@dataclass
class CoherenceReport:
    degree: Fraction
    trajectory: List[Fraction] = field(default_factory=list)
    residuals: Dict[Tuple[str, str], Fraction] = field(default_factory=dict)
    converged: bool = False
    iterations: int = 0
    d_lmi: Optional[MetricTable] = None

    def to_dict(self) -> Dict[str, object]:
        return {
            "degree": format_cost(self.degree),
            "trajectory": [format_cost(v) for v in self.trajectory],
            "converged": self.converged,
            "iterations": self.iterations,
            "residuals": [
                {"x": x, "y": y, "residual": format_cost(r)} for (x, y), r in self.residuals.items()
            ],
        }


def fixed_point_iteration(system: CombinationalSystem, config: Optional[CosmConfig] = None,
                          k: Optional[Fraction] = None, alpha: Optional[Fraction] = None,
                          max_iter: Optional[int] = None, tolerance: Optional[Fraction] = None,
                          w: str = IDENTITY, logger: Optional[logging.Logger] = None) -> CoherenceReport:
    """Tanimoto d_I 에서 시작해 d_I ← d_LMI 를 반복 (d_E 는 고정), 단계별 정합도 기록"""
    config = config or CosmConfig.create_default()
    logger = logger or logging.getLogger(__name__)
    settings = config.dualnet
    k = settings.k if k is None else Fraction(k)
    alpha = config.metric.alpha if alpha is None else Fraction(alpha)
    max_iter = settings.max_iter if max_iter is None else max_iter
    tolerance = settings.tolerance if tolerance is None else Fraction(tolerance)
    check_k(k)
    if max_iter < 1:
        raise ParameterError("max_iter 는 1 이상이어야 합니다", path="dualnet.max_iter")
    if tolerance < 0:
        raise ParameterError("tolerance 는 음수일 수 없습니다", path="dualnet.tolerance")

    workers = config.engine.workers
    engine = PatternEngine(system, config, logger=logger)
    graph = build_subpattern_graph(system, config, w, engine=engine, logger=logger)
    d_i, d_e = tanimoto_tables(graph, workers)

    def step(current: MetricTable) -> MetricTable:
        return lmi_distance(system, current, d_e, k, alpha, w, settings.membership, engine, workers, logger)

    if settings.initial_d_i == LMI_START:
        d_i = step(d_i)

    report = CoherenceReport(Fraction(1))
    for iteration in range(1, max_iter + 1):
        d_lmi = step(d_i)
        degree = coherence_degree(d_lmi, d_i)
        change = sup_change(d_lmi, d_i)
        report.trajectory.append(degree)
        report.degree = degree
        report.iterations = iteration
        report.residuals = {(x, y): abs(d_lmi.get(x, y) - d_i.get(x, y)) for x, y in d_i.pairs()}
        report.d_lmi = d_lmi
        logger.debug(f"반복 {iteration}: 정합도 {format_cost(degree)}, 변화 {format_cost(change)}")
        if change <= tolerance:
            report.converged = True
            break
        d_i = d_lmi

    if not report.converged:
        logger.warning(f"{max_iter}회 안에 수렴하지 않았습니다 (허용 오차 {format_cost(tolerance)})")
    return report
