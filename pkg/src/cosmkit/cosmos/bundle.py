"""
단순성 번들 - 유도 하이퍼그래프 위의 다목적 레이블 수정

엔티티마다 비지배 비용 벡터 집합을 유지하고, 집합이 바뀔 때마다 소비 반응으로 전파한다.
측도 j 의 연산 집합 밖 연산자를 쓰는 유도는 j 좌표가 ∞.
"""

import logging
from collections import deque
from fractions import Fraction
from typing import Dict, List, Optional

from ..core.config import CosmConfig
from ..core.errors import CapExceededError
from ..core.rational import is_finite
from ..cosm.oracle import oracle_vectors
from ..system.model import IDENTITY, CombinationalSystem
from .pareto import SimplicityBundle, Vector, pareto_filter


def compute_bundles(system: CombinationalSystem, context: str = IDENTITY, label_cap: int = 64,
                    logger: Optional[logging.Logger] = None) -> Dict[str, List[Vector]]:
    """모든 엔티티의 번들 (w 는 비용 0 원천, 문맥 비용 재정의 적용)"""
    logger = logger or logging.getLogger(__name__)
    system.require_entity(context, path="context")
    zero = tuple(Fraction(0) for _ in system.measures)

    labels: Dict[str, List[Vector]] = {x: [] for x in system.entities}
    labels[system.identity] = [zero]
    for atom in system.atoms:
        labels[atom] = [tuple(spec.atom_cost(atom) for spec in system.measures)]
    if context != IDENTITY:
        labels[context] = [zero]

    queue = deque(x for x in system.entities if labels[x])
    queued = set(queue)
    passes = 0

    while queue:
        x = queue.popleft()
        queued.discard(x)
        passes += 1
        for reaction in system.consumers(x):
            left, right = labels[reaction.left], labels[reaction.right]
            if not left or not right:
                continue
            node = tuple(spec.reaction_cost(reaction.op, reaction.left, reaction.right, context)
                         for spec in system.measures)
            candidates = [
                tuple(p + q + r for p, q, r in zip(a, b, node))
                for a in left for b in right
            ]
            candidates = [v for v in candidates if any(is_finite(c) for c in v)]
            if not candidates:
                continue
            for product in reaction.products:
                # 원천 엔티티(e, 문맥)는 영벡터가 이미 모든 것을 지배
                merged = pareto_filter(labels[product] + candidates)
                if merged == labels[product]:
                    continue
                if len(merged) > label_cap:
                    raise CapExceededError(
                        f"번들 레이블 상한 {label_cap} 초과: {product}", path="solver.bundle_label_cap")
                labels[product] = merged
                if product not in queued:
                    queue.append(product)
                    queued.add(product)

    logger.debug(f"번들 계산 완료: 전파 {passes}회")
    return labels


class CosmosEngine:
    """다중 측도 번들 질의 (문맥별 메모)"""

    def __init__(self, system: CombinationalSystem, config: Optional[CosmConfig] = None,
                 logger: Optional[logging.Logger] = None):
        self.system = system
        self.config = config or CosmConfig.create_default()
        self.logger = logger or logging.getLogger(__name__)
        self._labels: Dict[str, Dict[str, List[Vector]]] = {}

    def labels(self, context: str = IDENTITY) -> Dict[str, List[Vector]]:
        if context not in self._labels:
            self._labels[context] = compute_bundles(
                self.system, context, self.config.solver.bundle_label_cap, self.logger)
        return self._labels[context]

    def bundle(self, x: str, w: str = IDENTITY) -> SimplicityBundle:
        """bundle(x|w)"""
        self.system.require_entity(x)
        return SimplicityBundle(tuple(self.labels(w)[x]))

    def oracle_bundle(self, x: str, w: str = IDENTITY) -> SimplicityBundle:
        """전수 열거 벡터 집합의 파레토 필터"""
        return SimplicityBundle.of(oracle_vectors(
            self.system, x, w, self.config.solver.oracle_entity_cap, self.config.solver.oracle_label_cap))


def bundle(system: CombinationalSystem, x: str, w: str = IDENTITY, label_cap: int = 64) -> SimplicityBundle:
    system.require_entity(x)
    return SimplicityBundle(tuple(compute_bundles(system, w, label_cap)[x]))


def oracle_bundle(system: CombinationalSystem, x: str, w: str = IDENTITY, cap: int = 14,
                  label_cap: int = 4096) -> SimplicityBundle:
    return SimplicityBundle.of(oracle_vectors(system, x, w, cap, label_cap))
