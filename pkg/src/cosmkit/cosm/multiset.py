"""
멀티셋(분포 실현) 단순성 - 공유 유도 계획의 최소 비용

계획은 반응 적용의 집합이다. 적용마다 σ* 와 원자 피연산자 자리 비용을 한 번 낸다.
순서 모드(reuse_atoms)에서는 원자도 한 번 가져오면 상태에 남아 다시 내지 않는다.
생성된 비원자 엔티티는 다시 내지 않고 재사용하며, 원자 목표는 원자 비용을 따로 낸다.
"""

import heapq
import itertools
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, FrozenSet, Iterable, List, Mapping, Optional, Set, Tuple

from ..core.errors import CapExceededError, ParameterError
from ..core.rational import INF, Cost, format_cost, is_finite
from ..system.model import IDENTITY, CombinationalSystem, MeasureSpec, Reaction
from .fixpoint import solve, source_costs

Multiset = Dict[str, int]

EXACT = "exact"
GREEDY = "greedy"


def parse_multiset(text: str) -> Multiset:
    """"ab:1,aba:2" 형식 파싱"""
    result: Multiset = {}
    for i, item in enumerate(part for part in text.split(",") if part.strip()):
        entity, sep, count = item.strip().partition(":")
        if not sep:
            count = "1"
        if not count.isdigit() or int(count) < 1:
            raise ParameterError(f"중복도는 양의 정수여야 합니다: {item}", path=f"elements[{i}]")
        result[entity] = result.get(entity, 0) + int(count)
    if not result:
        raise ParameterError("멀티셋이 비어 있습니다", path="elements")
    return result


def multiset_union(s: Mapping[str, int], t: Mapping[str, int]) -> Multiset:
    """S ⊎ T"""
    result = dict(s)
    for x, n in t.items():
        result[x] = result.get(x, 0) + n
    return result


@dataclass
class PlanResult:
    value: Cost
    plan: List[Reaction] = field(default_factory=list)
    approximate: bool = False
    size: int = 0
    distinct: int = 0
    explored: int = 0

    @property
    def normalized(self) -> Cost:
        """σ(S)/|S|"""
        if not is_finite(self.value) or self.size == 0:
            return self.value
        return self.value / self.size

    @property
    def free_duplicates(self) -> int:
        return self.size - self.distinct

    def to_dict(self) -> Dict[str, object]:
        return {
            "value": format_cost(self.value),
            "normalized": format_cost(self.normalized),
            "approximate": self.approximate,
            "freeDuplicates": self.free_duplicates,
            "plan": [str(r) for r in self.plan],
        }


class SharedPlanSolver:
    """공유 계획 탐색 (정확: A* 분기 한정, 근사: 탐욕)"""

    def __init__(self, system: CombinationalSystem, spec: MeasureSpec, context: str = IDENTITY,
                 logger: Optional[logging.Logger] = None, reuse_atoms: bool = False):
        self.system = system
        self.spec = spec
        self.context = context
        self.logger = logger or logging.getLogger(__name__)
        self.free: FrozenSet[str] = frozenset({system.identity, context})
        self.reuse_atoms = reuse_atoms

    # --- 비용 ---

    def slot_cost(self, entity: str, state: FrozenSet[str] = frozenset()) -> Cost:
        if entity in self.free or (self.reuse_atoms and entity in state):
            return Fraction(0)
        if self.system.is_atom(entity):
            return self.spec.atom_cost(entity)
        return Fraction(0)

    def step_cost(self, reaction: Reaction, state: FrozenSet[str] = frozenset()) -> Cost:
        operands = [reaction.left, reaction.right]
        if self.reuse_atoms and reaction.left == reaction.right:
            operands = operands[:1]
        return (self.spec.reaction_cost(reaction.op, reaction.left, reaction.right, self.context)
                + sum((self.slot_cost(y, state) for y in operands), Fraction(0)))

    def _available(self, entity: str, state: FrozenSet[str]) -> bool:
        return entity in self.free or self.system.is_atom(entity) or entity in state

    def _split_targets(self, targets: Iterable[str]) -> Tuple[Cost, List[str]]:
        """원자 목표 비용과 생성해야 할 목표 목록"""
        base: Cost = Fraction(0)
        pending = []
        for x in dict.fromkeys(targets):
            self.system.require_entity(x, path=f"elements.{x}")
            if x in self.free:
                continue
            if self.system.is_atom(x):
                base += self.spec.atom_cost(x)
            else:
                pending.append(x)
        return base, pending

    def _relevant_reactions(self, pending: List[str]) -> List[Reaction]:
        """목표에서 거꾸로 닿는 반응만"""
        relevant: Set[str] = set(pending)
        stack = list(pending)
        while stack:
            x = stack.pop()
            for reaction in self.system.producers(x):
                if not self.spec.allows(reaction.op):
                    continue
                for operand in (reaction.left, reaction.right):
                    if operand not in relevant and not self._available(operand, frozenset()):
                        relevant.add(operand)
                        stack.append(operand)
        self._relevant = relevant
        return [r for r in self.system.reactions
                if self.spec.allows(r.op) and any(p in relevant for p in r.products)]

    def _produced(self, reaction: Reaction) -> FrozenSet[str]:
        produced = {p for p in reaction.products if not self.system.is_atom(p) and p not in self.free}
        if self.reuse_atoms:
            produced.update(y for y in (reaction.left, reaction.right)
                            if self.system.is_atom(y) and y not in self.free)
        return frozenset(produced)

    def _start_state(self, targets: Iterable[str]) -> FrozenSet[str]:
        """순서 모드에서 원자 목표는 이미 가져온 것으로 본다"""
        if not self.reuse_atoms:
            return frozenset()
        return frozenset(t for t in targets if self.system.is_atom(t) and t not in self.free)

    def _lower_bound(self, state: FrozenSet[str], pending: List[str], reactions: List[Reaction]) -> Cost:
        """병목 하한: b(x) = min_R [c(R) + max(b(l), b(r))], 상태 엔티티는 0

        순서 모드에서는 아직 가져오지 않은 원자가 원자 비용에서 시작하고 c(R) 은 σ* 만 센다.
        """
        missing = [t for t in pending if t not in state]
        if not missing:
            return Fraction(0)
        bound: Dict[str, Cost] = {}
        heap = []
        for x in self.system.entities:
            if not self._available(x, state):
                continue
            start = Fraction(0)
            if self.reuse_atoms and self.system.is_atom(x) and x not in state:
                start = self.slot_cost(x)
            bound[x] = start
            heap.append((start, self.system.position(x), x))
        heapq.heapify(heap)
        done = set()
        while heap:
            cost, _, x = heapq.heappop(heap)
            if x in done or cost > bound.get(x, INF):
                continue
            done.add(x)
            for reaction in self.system.consumers(x):
                if reaction.left not in done or reaction.right not in done:
                    continue
                if not self.spec.allows(reaction.op):
                    continue
                step = (self.spec.reaction_cost(reaction.op, reaction.left, reaction.right, self.context)
                        if self.reuse_atoms else self.step_cost(reaction))
                value = step + max(bound[reaction.left], bound[reaction.right])
                for p in reaction.products:
                    if value < bound.get(p, INF):
                        bound[p] = value
                        heapq.heappush(heap, (value, self.system.position(p), p))
        return max(bound.get(t, INF) for t in missing)

    # --- 탐욕 ---

    def greedy(self, targets: Iterable[str]) -> PlanResult:
        """가장 싼 목표의 최소 트리를 차례로 계획에 추가 (상한)"""
        targets = list(targets)
        base, pending = self._split_targets(targets)
        state: Set[str] = set(self._start_state(targets))
        plan: List[Reaction] = []
        total: Cost = base

        while True:
            uncovered = [t for t in pending if t not in state]
            if not uncovered:
                break
            sources = source_costs(self.system, self.spec, self.context)
            for x in state:
                sources[x] = Fraction(0)
            table = solve(self.system, self.spec, sources, self.context)
            target = min(uncovered, key=lambda t: (table[t], self.system.position(t)))
            if not is_finite(table[target]):
                return PlanResult(INF, plan, approximate=True)

            for reaction in self._tree_reactions(table, target):
                if reaction in plan:
                    continue
                plan.append(reaction)
                total += self.step_cost(reaction, frozenset(state))
                state |= self._produced(reaction)

        return PlanResult(total, plan, approximate=True)

    def _tree_reactions(self, table, target: str) -> List[Reaction]:
        order: List[Reaction] = []

        def visit(x: str):
            reaction = table.via.get(x)
            if reaction is None:
                return
            visit(reaction.left)
            visit(reaction.right)
            if reaction not in order:
                order.append(reaction)

        visit(target)
        return order

    # --- 정확 ---

    def exact(self, targets: Iterable[str], cap: int) -> PlanResult:
        """생성 엔티티 부분집합 위의 A* (재개방 허용), 탐욕 상한으로 가지치기"""
        if len(self.system.entities) > cap:
            raise CapExceededError(
                f"정확 멀티셋 솔버의 엔티티 상한 {cap} 초과 ({len(self.system.entities)})",
                path="solver.multiset_exact_cap")

        targets = list(targets)
        base, pending = self._split_targets(targets)
        if not pending:
            return PlanResult(base)

        reactions = self._relevant_reactions(pending)
        incumbent = self.greedy(targets)
        upper = incumbent.value - base if is_finite(incumbent.value) else INF

        start = self._start_state(targets)
        h0 = self._lower_bound(start, pending, reactions)
        if not is_finite(h0):
            return PlanResult(INF)

        counter = itertools.count()
        heap = [(h0, Fraction(0), next(counter), start, ())]
        best_g: Dict[FrozenSet[str], Cost] = {start: Fraction(0)}
        explored = 0

        while heap:
            f, g, _, state, plan = heapq.heappop(heap)
            if g > best_g.get(state, INF):
                continue
            explored += 1
            if all(t in state for t in pending):
                self.logger.debug(f"정확 계획 발견: 비용 {format_cost(g + base)}, 탐색 {explored}")
                return PlanResult(g + base, list(plan), explored=explored)

            for reaction in reactions:
                if not (self._available(reaction.left, state) and self._available(reaction.right, state)):
                    continue
                produced = self._produced(reaction)
                if produced <= state or not any(p in self._relevant for p in produced - state):
                    continue
                child = state | produced
                child_g = g + self.step_cost(reaction, state)
                if child_g >= best_g.get(child, INF):
                    continue
                h = self._lower_bound(child, pending, reactions)
                if not is_finite(h) or child_g + h > upper:
                    continue
                best_g[child] = child_g
                heapq.heappush(heap, (child_g + h, child_g, next(counter), child, plan + (reaction,)))

        # 최적 비용 == 상한이면 탐욕 계획이 최적
        if is_finite(upper):
            return PlanResult(incumbent.value, incumbent.plan, explored=explored)
        return PlanResult(INF, explored=explored)


def multiset_simplicity(system: CombinationalSystem, spec: MeasureSpec, elements: Mapping[str, int],
                        solver: str = EXACT, context: str = IDENTITY, cap: int = 14,
                        logger: Optional[logging.Logger] = None) -> PlanResult:
    """σ_j(S): 지지집합을 덮는 공유 계획의 최소 비용"""
    if solver not in (EXACT, GREEDY):
        raise ParameterError(f"알 수 없는 솔버: {solver}", path="solver")
    for x, n in elements.items():
        if n < 1:
            raise ParameterError(f"중복도는 양의 정수여야 합니다: {x}", path=f"elements.{x}")
    if not elements:
        raise ParameterError("멀티셋이 비어 있습니다", path="elements")

    engine = SharedPlanSolver(system, spec, context, logger)
    support = list(elements)
    result = engine.exact(support, cap) if solver == EXACT else engine.greedy(support)
    result.size = sum(elements.values())
    result.distinct = len(elements)
    return result
