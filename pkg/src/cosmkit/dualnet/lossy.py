"""
손실 멀티패턴 프런티어와 LMI 거리

후보는 시스템의 모든 반응 (y, z, op) 과 그 생성물 o. 목표 x 에 대한 목적은
강도 P_j(x|w) 와 근접도 D^k_j = k / (k + d_j(o, x)), 모두 최대화.
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from ..core.config import CosmConfig
from ..core.errors import ParameterError
from ..core.pool import ordered_map
from ..core.rational import INF, format_cost
from ..cosmos.pareto import pareto_front_max
from ..metric.tanimoto import MetricTable, composite
from ..pattern.intensity import PatternEngine
from ..system.model import IDENTITY, CombinationalSystem, Reaction

SIMILARITY = "similarity"
DISTANCE = "distance"
LMI = "lmi"

CandidateKey = Tuple[str, str, str, str]


@dataclass(frozen=True)
class LossyMember:
    reaction: Reaction
    output: str
    intensities: Tuple[Optional[Fraction], ...]
    proximities: Tuple[Fraction, ...]

    @property
    def key(self) -> CandidateKey:
        return (self.reaction.op, self.reaction.left, self.reaction.right, self.output)

    @property
    def objectives(self) -> Tuple:
        """정의되지 않은 강도는 −∞ 로 비교"""
        return tuple(-INF if v is None else v for v in self.intensities) + self.proximities

    def to_dict(self) -> Dict[str, object]:
        return {
            "y": self.reaction.left,
            "z": self.reaction.right,
            "op": self.reaction.op,
            "output": self.output,
            "intensities": [None if v is None else format_cost(v) for v in self.intensities],
            "proximities": [format_cost(v) for v in self.proximities],
        }


@dataclass
class LossyFrontier:
    x: str
    w: str
    k: Fraction
    members: List[LossyMember] = field(default_factory=list)
    candidates: List[LossyMember] = field(default_factory=list)

    def to_dict(self) -> Dict[str, object]:
        return {
            "target": self.x,
            "context": self.w,
            "k": format_cost(self.k),
            "candidates": len(self.candidates),
            "frontier": [m.to_dict() for m in self.members],
        }


def proximity(k: Fraction, distance: Fraction) -> Fraction:
    return k / (k + distance)


def check_k(k: Fraction):
    if k <= 0:
        raise ParameterError(f"k 는 양수여야 합니다: {format_cost(k)}", path="k")


def lossy_frontier(system: CombinationalSystem, x: str, w: str = IDENTITY, k: Fraction = Fraction(1),
                   metrics: Sequence[MetricTable] = (), engine: Optional[PatternEngine] = None,
                   config: Optional[CosmConfig] = None) -> LossyFrontier:
    """모든 후보의 목적 벡터에 대한 최대화 파레토 프런티어"""
    check_k(k)
    system.require_entity(x)
    system.require_entity(w, path="context")
    engine = engine or PatternEngine(system, config)
    engine.require_measures()

    candidates = []
    for reaction in system.reactions:
        intensities = tuple(engine.toward(reaction.left, reaction.right, reaction.op, x, w))
        for output in reaction.products:
            proximities = tuple(proximity(k, d.get(output, x)) for d in metrics)
            candidates.append(LossyMember(reaction, output, intensities, proximities))

    members = pareto_front_max(candidates, key=lambda m: m.objectives)
    return LossyFrontier(x, w, Fraction(k), members, candidates)


@dataclass
class FuzzySet:
    """후보 (op, y, z, 생성물) 의 소속도"""
    x: str
    memberships: Dict[CandidateKey, Fraction] = field(default_factory=dict)
    empty_frontier: bool = False

    def to_dict(self) -> Dict[str, object]:
        return {
            "entity": self.x,
            "emptyFrontier": self.empty_frontier,
            "memberships": [
                {"op": op, "y": y, "z": z, "output": o, "degree": format_cost(v)}
                for (op, y, z, o), v in self.memberships.items()
            ],
        }


def lmi_intension(x: str, frontier: LossyFrontier, d: MetricTable, polarity: str = SIMILARITY) -> FuzzySet:
    """소속도 = 1 − (가장 가까운 프런티어 생성물까지의 거리), 0 아래는 0"""
    if polarity not in (SIMILARITY, DISTANCE):
        raise ParameterError(f"알 수 없는 소속도 극성: {polarity}", path="membership")
    if not frontier.members:
        return FuzzySet(x, {}, empty_frontier=True)

    outputs = list(dict.fromkeys(m.output for m in frontier.members))
    memberships: Dict[CandidateKey, Fraction] = {}
    for candidate in frontier.candidates:
        nearest = min(d.get(candidate.output, o) for o in outputs)
        if polarity == SIMILARITY:
            memberships[candidate.key] = max(Fraction(0), 1 - nearest)
        else:
            memberships[candidate.key] = min(Fraction(1), nearest)
    return FuzzySet(x, memberships)


def fuzzy_tanimoto(a: FuzzySet, b: FuzzySet) -> Fraction:
    """1 − Σmin/Σmax, 0/0 은 0"""
    keys = set(a.memberships) | set(b.memberships)
    low = sum((min(a.memberships.get(c, Fraction(0)), b.memberships.get(c, Fraction(0))) for c in keys), Fraction(0))
    high = sum((max(a.memberships.get(c, Fraction(0)), b.memberships.get(c, Fraction(0))) for c in keys), Fraction(0))
    if high == 0:
        return Fraction(0)
    return 1 - low / high


def fuzzy_intensions(system: CombinationalSystem, d_i: MetricTable, d_e: MetricTable, k: Fraction,
                     alpha: Fraction, w: str = IDENTITY, polarity: str = SIMILARITY,
                     engine: Optional[PatternEngine] = None, workers: int = 1) -> Dict[str, FuzzySet]:
    """엔티티별 손실 프런티어에서 만든 퍼지 내포"""
    check_k(k)
    engine = engine or PatternEngine(system)
    base = composite(d_i, d_e, alpha)

    def intension(x: str) -> FuzzySet:
        frontier = lossy_frontier(system, x, w, k, (d_i, d_e), engine)
        return lmi_intension(x, frontier, base, polarity)

    return dict(zip(d_i.entities, ordered_map(intension, d_i.entities, workers)))


def lmi_distance(system: CombinationalSystem, d_i: MetricTable, d_e: MetricTable, k: Fraction,
                 alpha: Fraction = Fraction(1, 2), w: str = IDENTITY, polarity: str = SIMILARITY,
                 engine: Optional[PatternEngine] = None, workers: int = 1,
                 logger: Optional[logging.Logger] = None) -> MetricTable:
    """d_LMI(x, y) = 퍼지 내포 사이의 퍼지 Tanimoto 거리"""
    logger = logger or logging.getLogger(__name__)
    sets = fuzzy_intensions(system, d_i, d_e, k, alpha, w, polarity, engine, workers)
    empty = [x for x, s in sets.items() if s.empty_frontier]
    if empty:
        logger.warning(f"프런티어가 빈 엔티티 {len(empty)}개: {', '.join(empty[:5])}")
    return MetricTable.build(d_i.entities, lambda x, y: fuzzy_tanimoto(sets[x], sets[y]), LMI, alpha, workers)
