"""
파레토 유틸리티 - 지배 관계, 필터, 집합 지배, 민코프스키 합
"""

from dataclasses import dataclass
from typing import Callable, Iterable, List, Sequence, Tuple, TypeVar

from ..core.errors import ParameterError
from ..core.rational import Cost, format_cost

Vector = Tuple[Cost, ...]
T = TypeVar("T")


def weakly_dominates(a: Sequence[Cost], b: Sequence[Cost]) -> bool:
    """a ≼ b (성분별 ≤, 반사적)"""
    return all(p <= q for p, q in zip(a, b))


def dominates(a: Sequence[Cost], b: Sequence[Cost]) -> bool:
    """a 가 b 를 파레토 지배 (최소화)"""
    return weakly_dominates(a, b) and any(p < q for p, q in zip(a, b))


def _check_lengths(vectors: List[Vector]):
    lengths = {len(v) for v in vectors}
    if len(lengths) > 1:
        raise ParameterError(f"벡터 길이가 섞여 있습니다: {sorted(lengths)}", path="vectors")


def pareto_filter(vectors: Iterable[Sequence[Cost]]) -> List[Vector]:
    """비지배 벡터만 남기고 사전식 정렬 (중복 제거)"""
    unique = sorted({tuple(v) for v in vectors})
    _check_lengths(unique)
    # 사전식 정렬 후에는 앞선 벡터만 뒤의 벡터를 지배할 수 있음
    front: List[Vector] = []
    for v in unique:
        if not any(weakly_dominates(f, v) for f in front):
            front.append(v)
    return front


def pareto_front_max(items: Iterable[T], key: Callable[[T], Sequence]) -> List[T]:
    """최대화 파레토 프런트 (입력 순서 유지)"""
    items = list(items)
    keys = [tuple(key(item)) for item in items]
    front = []
    for i, item in enumerate(items):
        dominated = False
        for k, other in enumerate(keys):
            if k != i and all(p >= q for p, q in zip(other, keys[i])) and other != keys[i]:
                dominated = True
                break
        if not dominated:
            front.append(item)
    return front


def bundle_dominates(a: Iterable[Sequence[Cost]], b: Iterable[Sequence[Cost]]) -> bool:
    """S ≼ T: 모든 s ∈ S, t ∈ T 에 대해 s ≼ t"""
    a = [tuple(v) for v in a]
    b = [tuple(v) for v in b]
    _check_lengths(a + b)
    return all(weakly_dominates(s, t) for s in a for t in b)


def covers(a: Iterable[Sequence[Cost]], b: Iterable[Sequence[Cost]]) -> bool:
    """B 의 모든 벡터가 A 의 어떤 벡터에 약지배됨 (집합으로서 지배-또는-같음)"""
    a = [tuple(v) for v in a]
    return all(any(weakly_dominates(s, tuple(t)) for s in a) for t in b)


def minkowski_sum(a: Iterable[Sequence[Cost]], b: Iterable[Sequence[Cost]]) -> List[Vector]:
    """A ⊕ B 를 파레토 필터링"""
    b = [tuple(v) for v in b]
    return pareto_filter(tuple(p + q for p, q in zip(s, t)) for s in a for t in b)


@dataclass(frozen=True)
class SimplicityBundle:
    """정규 사전식 순서의 상호 비지배 비용 벡터 집합"""
    vectors: Tuple[Vector, ...]

    @classmethod
    def of(cls, vectors: Iterable[Sequence[Cost]]) -> "SimplicityBundle":
        return cls(tuple(pareto_filter(vectors)))

    def __iter__(self):
        return iter(self.vectors)

    def __len__(self) -> int:
        return len(self.vectors)

    def to_json(self) -> List[List[str]]:
        return [[format_cost(c) for c in v] for v in self.vectors]
