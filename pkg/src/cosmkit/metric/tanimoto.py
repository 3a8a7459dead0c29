"""
내포/외연 메트릭 - int(x) = {y : x ≤ y}, ext(x) = {y : y ≤ x} 위의 Tanimoto 거리와 Q 분포
"""

import csv
import io
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import AbstractSet, Callable, Dict, FrozenSet, List, Mapping, Optional, Sequence, Tuple

from ..core.errors import ParameterError, UnknownEntityError
from ..core.pool import ordered_map
from ..core.rational import format_cost
from ..structure.hierarchy import SubpatternGraph

TANIMOTO = "tanimoto"
HUTCHINSON = "hutchinson"
INTENSION = "intension"
EXTENSION = "extension"


@dataclass
class MetricTable:
    """엔티티 쌍의 대칭 거리표 (대각선은 0)"""
    entities: Tuple[str, ...]
    values: Dict[Tuple[str, str], Fraction]
    construction: str = TANIMOTO
    alpha: Optional[Fraction] = None

    def __post_init__(self):
        self._known = set(self.entities)

    def __contains__(self, x: str) -> bool:
        return x in self._known

    def get(self, x: str, y: str) -> Fraction:
        for entity in (x, y):
            if entity not in self._known:
                raise UnknownEntityError(f"거리표에 없는 엔티티: {entity}", path="ground")
        if x == y:
            return Fraction(0)
        value = self.values.get((x, y))
        return value if value is not None else self.values[(y, x)]

    def pairs(self) -> List[Tuple[str, str]]:
        return list(combinations(self.entities, 2))

    @classmethod
    def build(cls, entities: Sequence[str], distance: Callable[[str, str], Fraction],
              construction: str, alpha: Optional[Fraction] = None, workers: int = 1) -> "MetricTable":
        entities = tuple(entities)
        pairs = list(combinations(entities, 2))
        values = ordered_map(lambda pair: distance(*pair), pairs, workers)
        return cls(entities, dict(zip(pairs, values)), construction, alpha)

    def to_dict(self) -> Dict[str, object]:
        return {
            "construction": self.construction,
            "alpha": format_cost(self.alpha) if self.alpha is not None else None,
            "entities": list(self.entities),
            "table": [[format_cost(self.get(x, y)) for y in self.entities] for x in self.entities],
        }

    def to_csv(self) -> str:
        """전체 대칭 행렬 (첫 행/열은 엔티티)"""
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow([""] + list(self.entities))
        for x in self.entities:
            writer.writerow([x] + [format_cost(self.get(x, y)) for y in self.entities])
        return buffer.getvalue()


def tanimoto_distance(a: AbstractSet[str], b: AbstractSet[str]) -> Fraction:
    """1 − |A∩B|/|A∪B|, d(∅,∅) = 0"""
    union = len(a | b)
    if union == 0:
        return Fraction(0)
    return 1 - Fraction(len(a & b), union)


def intension_extension(graph: SubpatternGraph, x: str) -> Tuple[FrozenSet[str], FrozenSet[str]]:
    """반사적 폐포를 포함한 (int(x), ext(x))"""
    if x not in graph.nodes:
        raise UnknownEntityError(f"그래프에 없는 엔티티: {x}", path="entity")
    intension = frozenset(y for y in graph.nodes if graph.leq(x, y))
    extension = frozenset(y for y in graph.nodes if graph.leq(y, x))
    return intension, extension


def check_alpha(alpha: Fraction):
    if not 0 <= alpha <= 1:
        raise ParameterError(f"alpha 는 [0,1] 범위여야 합니다: {format_cost(alpha)}", path="alpha")


def composite(d_i: MetricTable, d_e: MetricTable, alpha: Fraction, construction: str = TANIMOTO,
              workers: int = 1) -> MetricTable:
    """α·d_I + (1−α)·d_E"""
    check_alpha(alpha)
    return MetricTable.build(
        d_i.entities, lambda x, y: alpha * d_i.get(x, y) + (1 - alpha) * d_e.get(x, y),
        construction, alpha, workers)


def tanimoto_tables(graph: SubpatternGraph, workers: int = 1) -> Tuple[MetricTable, MetricTable]:
    """(d_I, d_E)"""
    sets = {x: intension_extension(graph, x) for x in graph.nodes}
    d_i = MetricTable.build(graph.nodes, lambda x, y: tanimoto_distance(sets[x][0], sets[y][0]),
                            INTENSION, workers=workers)
    d_e = MetricTable.build(graph.nodes, lambda x, y: tanimoto_distance(sets[x][1], sets[y][1]),
                            EXTENSION, workers=workers)
    return d_i, d_e


def tanimoto_metrics(graph: SubpatternGraph, alpha: Fraction = Fraction(1, 2), workers: int = 1) -> MetricTable:
    check_alpha(alpha)
    d_i, d_e = tanimoto_tables(graph, workers)
    return composite(d_i, d_e, alpha, TANIMOTO, workers)


@dataclass
class QDistribution:
    """ext(x) 또는 int(x) 위의 정규화된 Q 값 (양의 질량만)"""
    x: str
    weights: Dict[str, Fraction] = field(default_factory=dict)
    degenerate: bool = False

    def to_dict(self) -> Dict[str, object]:
        return {
            "entity": self.x,
            "weights": {y: format_cost(p) for y, p in self.weights.items()},
            "degenerate": self.degenerate,
        }


def normalize(x: str, members: Sequence[str], scores: Mapping[str, Fraction]) -> QDistribution:
    """0 아래를 자르고 합으로 나눔, 모두 0 이면 균등 분포 (degenerate)"""
    clipped = {y: max(Fraction(0), scores.get(y, Fraction(0))) for y in members}
    total = sum(clipped.values(), Fraction(0))
    if total == 0:
        if not members:
            return QDistribution(x, {}, degenerate=True)
        share = Fraction(1, len(members))
        return QDistribution(x, {y: share for y in members}, degenerate=True)
    return QDistribution(x, {y: q / total for y, q in clipped.items() if q > 0})


def q_distribution(graph: SubpatternGraph, x: str, side: str = EXTENSION) -> QDistribution:
    """Q(y,x) = max_z I_{y,z}(x) 를 ext(x) 위에서 정규화 (side=intension 이면 Q(x,y) over int(x))"""
    intension, extension = intension_extension(graph, x)
    if side == EXTENSION:
        members = [y for y in graph.nodes if y in extension]
        scores = {y: graph.q(y, x) or Fraction(0) for y in members if y != x}
    elif side == INTENSION:
        members = [y for y in graph.nodes if y in intension]
        scores = {y: graph.q(x, y) or Fraction(0) for y in members if y != x}
    else:
        raise ParameterError(f"알 수 없는 쪽: {side}", path="side")
    return normalize(x, members, scores)


def rank_correlation(a: MetricTable, b: MetricTable) -> Fraction:
    """두 거리표의 Kendall tau-a (비대각 쌍 기준)"""
    pairs = a.pairs()
    n = len(pairs)
    if n < 2:
        return Fraction(0)
    xs = [a.get(*p) for p in pairs]
    ys = [b.get(*p) for p in pairs]
    score = 0
    for i, k in combinations(range(n), 2):
        sign = (xs[i] > xs[k]) - (xs[i] < xs[k])
        sign *= (ys[i] > ys[k]) - (ys[i] < ys[k])
        score += sign
    return Fraction(score, n * (n - 1) // 2)
