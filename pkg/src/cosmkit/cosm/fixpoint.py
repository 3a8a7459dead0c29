"""
CoSM 최소 고정점 - 유도 하이퍼그래프 위의 Dijkstra (Knuth 일반화)

σ_j(x) = min over (op, y, z) producing x of σ_j(y) + σ_j(z) + σ*_j(op, y, z | w)
원자는 선언 비용, e 는 0 에서 시작. 비용이 음수가 아니므로 확정 순서대로 한 번씩 전파.
"""

import heapq
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Mapping, Optional, Tuple

from ..core.rational import INF, Cost, is_finite
from ..system.model import IDENTITY, CombinationalSystem, MeasureSpec, Reaction

FREE = "free"
LITERAL = "literal"
SEQUENCE = "sequence"
MODES = (FREE, LITERAL, SEQUENCE)


@dataclass
class FixpointTable:
    """엔티티별 최소 비용과 그 비용을 만든 반응 (원천이면 None)"""
    values: Dict[str, Cost]
    via: Dict[str, Optional[Reaction]] = field(default_factory=dict)
    # literal 모드에서 w 를 직접 쓰는 항으로 확정된 엔티티
    seeded: Dict[str, Reaction] = field(default_factory=dict)

    def __getitem__(self, x: str) -> Cost:
        return self.values[x]


def source_costs(system: CombinationalSystem, spec: MeasureSpec, context: str = IDENTITY,
                 free_context: bool = True) -> Dict[str, Cost]:
    """원천 비용: 원자 = 선언 비용, e = 0, (free 모드) 문맥 w = 0"""
    sources: Dict[str, Cost] = {system.identity: Fraction(0)}
    for atom in system.atoms:
        sources[atom] = spec.atom_cost(atom)
    if free_context and context != IDENTITY:
        sources[context] = Fraction(0)
    return sources


def solve(system: CombinationalSystem, spec: MeasureSpec, sources: Mapping[str, Cost],
          context: str = IDENTITY, seeds: Optional[Mapping[str, Tuple[Cost, Reaction]]] = None) -> FixpointTable:
    """원천/시드에서 시작하는 우선순위 기반 최소 고정점"""
    best: Dict[str, Cost] = {x: INF for x in system.entities}
    via: Dict[str, Optional[Reaction]] = {}
    seeded: Dict[str, Reaction] = {}
    heap = []

    def push(x: str, cost: Cost):
        heapq.heappush(heap, (cost, system.position(x), x))

    for x, cost in sources.items():
        if cost < best[x]:
            best[x] = cost
            via[x] = None
            push(x, cost)
    for x, (cost, reaction) in (seeds or {}).items():
        if cost < best[x]:
            best[x] = cost
            via[x] = None
            seeded[x] = reaction
            push(x, cost)

    done = set()
    while heap:
        cost, _, x = heapq.heappop(heap)
        if x in done or cost > best[x]:
            continue
        done.add(x)

        for reaction in system.consumers(x):
            if not spec.allows(reaction.op):
                continue
            if reaction.left not in done or reaction.right not in done:
                continue
            value = best[reaction.left] + best[reaction.right] + spec.reaction_cost(
                reaction.op, reaction.left, reaction.right, context)
            if not is_finite(value):
                continue
            for product in reaction.products:
                if value < best[product]:
                    best[product] = value
                    via[product] = reaction
                    seeded.pop(product, None)
                    push(product, value)

    return FixpointTable(values=best, via=via, seeded=seeded)


def absolute_table(system: CombinationalSystem, spec: MeasureSpec) -> FixpointTable:
    """σ_j (문맥 없음)"""
    return solve(system, spec, source_costs(system, spec))


def free_context_table(system: CombinationalSystem, spec: MeasureSpec, context: str) -> FixpointTable:
    """σ_j(·|w): w 를 비용 0 원천으로, 문맥 비용 재정의 적용"""
    return solve(system, spec, source_costs(system, spec, context), context)


def literal_table(system: CombinationalSystem, spec: MeasureSpec, context: str,
                  absolute: Optional[FixpointTable] = None) -> FixpointTable:
    """표시된 세 갈래 최소식 그대로: 재귀 항 h(y,z|w) 와 w 를 직접 쓰는 항 h(w,y), h(y,w)"""
    if context == IDENTITY:
        return absolute if absolute is not None else absolute_table(system, spec)
    absolute = absolute if absolute is not None else absolute_table(system, spec)

    seeds: Dict[str, Tuple[Cost, Reaction]] = {}
    for reaction in system.consumers(context):
        if not spec.allows(reaction.op):
            continue
        # h(w,y) = σ(w) + σ(y) + σ*(op, w, y), 문맥 없는 비용
        value = absolute[reaction.left] + absolute[reaction.right] + spec.reaction_cost(
            reaction.op, reaction.left, reaction.right)
        if not is_finite(value):
            continue
        for product in reaction.products:
            if product not in seeds or value < seeds[product][0]:
                seeds[product] = (value, reaction)

    return solve(system, spec, source_costs(system, spec, context, free_context=False), context, seeds)
