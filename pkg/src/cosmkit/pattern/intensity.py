"""
패턴 엔진 - 패턴 강도, 패턴 벡터, 멀티패턴 분류, 멀티패턴 프런티어

I = (σ₁(x|w) − h₁ⱼ(y,z|w)) / 분모,  h₁ⱼ = σ₁(y|w) + σ₁(z|w) + σⱼ*|(op,y,z|w)
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

from ..core.config import CosmConfig
from ..core.errors import NoSuchDecompositionError, ParameterError, UndefinedIntensityError
from ..core.rational import Cost, GeometricMean, format_cost, is_finite
from ..cosm.engine import CosmEngine
from ..cosm.fixpoint import FREE
from ..cosm.oracle import oracle_simplicity
from ..cosmos.pareto import pareto_front_max
from ..system.model import IDENTITY, CombinationalSystem, Reaction

NONE = "none"
MIXED = "mixed"
FULL = "full"
UNDEFINED = "undefined"

PER_MEASURE = "per-measure"
BASE = "base"


def classify_multipattern(intensities: Tuple[Optional[Fraction], ...]) -> Tuple[str, Optional[GeometricMean]]:
    """양수 좌표 개수로 none / mixed / full, full 이면 기하평균"""
    if any(v is None for v in intensities):
        return UNDEFINED, None
    positive = [v for v in intensities if v > 0]
    if not positive:
        return NONE, None
    if len(positive) < len(intensities):
        return MIXED, None
    product = Fraction(1)
    for v in positive:
        product *= v
    return FULL, GeometricMean(product, len(positive))


@dataclass(frozen=True)
class PatternRecord:
    """x 의 분해 (y, z, op) 와 측도별 강도 (좌표는 j = 2, 3, ...)"""
    y: str
    z: str
    op: str
    x: str
    w: str
    intensities: Tuple[Optional[Fraction], ...]
    classification: str
    geometric_mean: Optional[GeometricMean] = field(default=None, compare=False)

    @property
    def defined(self) -> bool:
        return all(v is not None for v in self.intensities)

    @property
    def pattern_in(self) -> List[int]:
        """강도가 양수인 측도 번호 (pattern(j))"""
        return [j for j, v in enumerate(self.intensities, start=2) if v is not None and v > 0]

    def to_dict(self) -> Dict[str, object]:
        return {
            "y": self.y,
            "z": self.z,
            "op": self.op,
            "target": self.x,
            "context": self.w,
            "intensities": [None if v is None else format_cost(v) for v in self.intensities],
            "classification": self.classification,
            "patternIn": self.pattern_in,
            "geometricMean": self.geometric_mean.to_dict() if self.geometric_mean else None,
        }


def submultipattern_score(record: PatternRecord) -> Optional[Fraction]:
    """min_j I_j (정의되지 않은 좌표가 있으면 None)"""
    if not record.defined or not record.intensities:
        return None
    return min(record.intensities)


class PatternEngine:
    """패턴 질의 (단순성 값은 CosmEngine 또는 전수 오라클에서)"""

    def __init__(self, system: CombinationalSystem, config: Optional[CosmConfig] = None,
                 cosm: Optional[CosmEngine] = None, use_oracle: bool = False,
                 logger: Optional[logging.Logger] = None):
        self.system = system
        self.config = config or CosmConfig.create_default()
        self.logger = logger or logging.getLogger(__name__)
        self.cosm = cosm or CosmEngine(system, self.config, self.logger)
        self.use_oracle = use_oracle
        self._oracle_memo: Dict[Tuple[int, str, str], Cost] = {}

    def require_measures(self):
        if self.system.measure_count < 2:
            raise ParameterError("패턴 강도에는 측도가 2개 이상 필요합니다", path="measures")

    def sigma(self, j: int, x: str, w: str = IDENTITY) -> Cost:
        """σ_j(x|w) (free 문맥)"""
        if not self.use_oracle:
            return self.cosm.relative_simplicity(j, x, w, FREE)
        key = (j, x, w)
        if key not in self._oracle_memo:
            self._oracle_memo[key] = oracle_simplicity(
                self.system, self.system.measure(j), x, w, FREE, self.config.solver.oracle_entity_cap)
        return self._oracle_memo[key]

    def h(self, j: int, y: str, z: str, op: str, w: str = IDENTITY) -> Cost:
        """h₁ⱼ(y,z|w): 피연산자는 기본 측도, 연산 비용은 측도 j"""
        node = self.system.measure(j).reaction_cost(op, y, z, w)
        return self.sigma(1, y, w) + self.sigma(1, z, w) + node

    def decompositions(self, x: str) -> List[Reaction]:
        """x 를 생성물로 갖는 명시적 반응 (항등 반응은 분해가 아님)"""
        self.system.require_entity(x)
        return list(self.system.producers(x))

    def _decomposition(self, y: str, z: str, op: str, x: str) -> Reaction:
        reaction = self.system.reaction(op, y, z)
        if reaction is None or x not in reaction.products:
            raise NoSuchDecompositionError(f"{x} 는 {op}({y},{z}) 의 생성물이 아닙니다", path="decomposition")
        return reaction

    def pattern_intensity(self, y: str, z: str, op: str, x: str, w: str = IDENTITY,
                          extended: Optional[int] = None) -> Fraction:
        """기본 측도와 확장 측도 하나의 강도 (분모 σ₁(x|w))"""
        self.require_measures()
        for entity in (y, z, x, w):
            self.system.require_entity(entity)
        self._decomposition(y, z, op, x)
        j = self.system.measure_index(extended or self.config.pattern.extended_measure)

        base = self.sigma(1, x, w)
        if not is_finite(base) or base == 0:
            raise UndefinedIntensityError(f"σ₁({x}|{w}) = {format_cost(base)} 이므로 강도가 정의되지 않습니다",
                                          path="target")
        h = self.h(j, y, z, op, w)
        if not is_finite(h):
            raise UndefinedIntensityError(f"h₁ⱼ({y},{z}|{w}) 가 무한대입니다", path="decomposition")
        return (base - h) / base

    def pattern_vector(self, y: str, z: str, op: str, x: str, w: str = IDENTITY,
                       denominator: Optional[str] = None) -> List[Optional[Fraction]]:
        """j = 2..m 좌표 (정의되지 않은 좌표는 None)"""
        self.require_measures()
        for entity in (y, z, x, w):
            self.system.require_entity(entity)
        self._decomposition(y, z, op, x)
        return self.toward(y, z, op, x, w, denominator)

    def toward(self, y: str, z: str, op: str, x: str, w: str = IDENTITY,
               denominator: Optional[str] = None) -> List[Optional[Fraction]]:
        """분해 여부와 무관하게 (y, z, op) 를 x 에 대한 강도로 평가 (손실 프런티어용)"""
        denominator = denominator or self.config.pattern.denominator
        if denominator not in (PER_MEASURE, BASE):
            raise ParameterError(f"알 수 없는 분모 모드: {denominator}", path="denominator")

        base = self.sigma(1, x, w)
        coordinates: List[Optional[Fraction]] = []
        for j in range(2, self.system.measure_count + 1):
            h = self.h(j, y, z, op, w)
            den = self.sigma(j, x, w) if denominator == PER_MEASURE else base
            if not (is_finite(base) and is_finite(h) and is_finite(den)) or den == 0:
                coordinates.append(None)
            else:
                coordinates.append((base - h) / den)
        return coordinates

    def record(self, reaction: Reaction, x: str, w: str = IDENTITY,
               denominator: Optional[str] = None) -> PatternRecord:
        vector = tuple(self.pattern_vector(reaction.left, reaction.right, reaction.op, x, w, denominator))
        classification, mean = classify_multipattern(vector)
        return PatternRecord(reaction.left, reaction.right, reaction.op, x, w, vector, classification, mean)

    def records(self, x: str, w: str = IDENTITY, denominator: Optional[str] = None) -> List[PatternRecord]:
        return [self.record(r, x, w, denominator) for r in self.decompositions(x)]

    def multipattern_frontier(self, x: str, w: str = IDENTITY,
                              denominator: Optional[str] = None) -> List[PatternRecord]:
        """정의된 강도 벡터의 최대화 파레토 프런티어 (반응 선언 순서)"""
        self.require_measures()
        self.system.require_entity(w, path="context")
        candidates = [r for r in self.records(x, w, denominator) if r.defined]
        front = pareto_front_max(candidates, key=lambda r: r.intensities)
        self.logger.debug(f"{x} 프런티어: 후보 {len(candidates)}개 중 {len(front)}개")
        return front


def oracle_frontier(system: CombinationalSystem, x: str, w: str = IDENTITY,
                    config: Optional[CosmConfig] = None) -> List[PatternRecord]:
    """전수 열거 단순성 값으로 만든 프런티어"""
    return PatternEngine(system, config, use_oracle=True).multipattern_frontier(x, w)
