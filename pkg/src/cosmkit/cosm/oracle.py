"""
전수 열거 오라클 - 고정점 지름길 없이 경로 단순 유도 트리를 모두 열거

테스트와 oracle-check 전용. 음이 아닌 비용에서는 같은 엔티티를 조상으로 다시 쓰는
트리가 더 싸질 수 없으므로 경로 단순 트리만으로 최솟값이 보존된다.
"""

from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from typing import FrozenSet, Iterable, Set, Tuple

from ..core.errors import CapExceededError
from ..core.rational import INF, Cost, is_finite
from ..system.model import IDENTITY, CombinationalSystem, MeasureSpec
from .fixpoint import FREE, LITERAL, SEQUENCE

Vector = Tuple[Cost, ...]


def check_oracle_cap(system: CombinationalSystem, cap: int):
    if len(system.entities) > cap:
        raise CapExceededError(
            f"오라클 엔티티 상한 {cap} 초과 ({len(system.entities)})", path="solver.oracle_entity_cap")


def oracle_simplicity(system: CombinationalSystem, spec: MeasureSpec, x: str, context: str = IDENTITY,
                      mode: str = FREE, cap: int = 14, reaction_cap: int = 18) -> Cost:
    """σ_j(x|w) 를 모든 유도 트리의 최솟값으로"""
    check_oracle_cap(system, cap)
    system.require_entity(x)
    system.require_entity(context, path="context")

    def enumerate_costs(relative_context: str, free_context: bool):
        @lru_cache(maxsize=None)
        def best(y: str, forbidden: FrozenSet[str]) -> Cost:
            if y == system.identity:
                return Fraction(0)
            if free_context and y == relative_context and relative_context != IDENTITY:
                return Fraction(0)
            candidates = []
            if system.is_atom(y):
                candidates.append(spec.atom_cost(y))
            inner = forbidden | {y}
            for reaction in system.producers(y):
                if not spec.allows(reaction.op):
                    continue
                if reaction.left in inner or reaction.right in inner:
                    continue
                left = best(reaction.left, inner)
                right = best(reaction.right, inner)
                node = spec.reaction_cost(reaction.op, reaction.left, reaction.right, relative_context)
                candidates.append(left + right + node)
            return min(candidates, default=INF)

        return best

    if mode == FREE:
        return enumerate_costs(context, True)(x, frozenset())

    if mode == SEQUENCE:
        return oracle_plan_cost(system, spec, [x], context, reaction_cap, reuse_atoms=True)

    absolute = enumerate_costs(IDENTITY, False)
    if mode != LITERAL or context == IDENTITY:
        return absolute(x, frozenset())

    # literal: 재귀 항은 문맥 비용, w 를 직접 쓰는 항은 문맥 없는 절대 비용

    @lru_cache(maxsize=None)
    def literal(y: str, forbidden: FrozenSet[str]) -> Cost:
        if y == system.identity:
            return Fraction(0)
        candidates = []
        if system.is_atom(y):
            candidates.append(spec.atom_cost(y))
        inner = forbidden | {y}
        for reaction in system.producers(y):
            if not spec.allows(reaction.op):
                continue
            if context in (reaction.left, reaction.right):
                candidates.append(absolute(reaction.left, frozenset()) + absolute(reaction.right, frozenset())
                                  + spec.reaction_cost(reaction.op, reaction.left, reaction.right))
            if reaction.left in inner or reaction.right in inner:
                continue
            candidates.append(literal(reaction.left, inner) + literal(reaction.right, inner)
                              + spec.reaction_cost(reaction.op, reaction.left, reaction.right, context))
        return min(candidates, default=INF)

    return literal(x, frozenset())


def oracle_vectors(system: CombinationalSystem, x: str, context: str = IDENTITY,
                   cap: int = 14, label_cap: int = 4096) -> Set[Vector]:
    """모든 경로 단순 유도 트리의 측도별 비용 벡터 (지배 여부로 거르지 않음)"""
    check_oracle_cap(system, cap)
    system.require_entity(x)
    system.require_entity(context, path="context")
    m = system.measure_count
    zero = tuple(Fraction(0) for _ in range(m))

    def node_vector(reaction) -> Vector:
        return tuple(spec.reaction_cost(reaction.op, reaction.left, reaction.right, context)
                     for spec in system.measures)

    @lru_cache(maxsize=None)
    def vectors(y: str, forbidden: FrozenSet[str]) -> FrozenSet[Vector]:
        if y == system.identity or (y == context and context != IDENTITY):
            return frozenset([zero])
        found: Set[Vector] = set()
        if system.is_atom(y):
            found.add(tuple(spec.atom_cost(y) for spec in system.measures))
        inner = forbidden | {y}
        for reaction in system.producers(y):
            if reaction.left in inner or reaction.right in inner:
                continue
            node = node_vector(reaction)
            for a in vectors(reaction.left, inner):
                for b in vectors(reaction.right, inner):
                    found.add(tuple(p + q + r for p, q, r in zip(a, b, node)))
                    if len(found) > label_cap:
                        raise CapExceededError(
                            f"오라클 벡터 상한 {label_cap} 초과: {y}", path="solver.oracle_label_cap")
        # 어떤 측도에서도 유한하지 않은 유도는 제외
        return frozenset(v for v in found if any(is_finite(c) for c in v))

    return set(vectors(x, frozenset()))


def oracle_plan_cost(system: CombinationalSystem, spec: MeasureSpec, targets: Iterable[str],
                     context: str = IDENTITY, reaction_cap: int = 18, reuse_atoms: bool = False) -> Cost:
    """공유 계획 비용: 반응 부분집합을 모두 시도해 목표를 덮는 최소 합

    reuse_atoms 이면 부분집합이 쓰는 원자마다 한 번만 낸다 (원자 목표는 base 에 이미 포함).
    """
    free = {system.identity, context}
    targets = list(dict.fromkeys(targets))
    for t in targets:
        system.require_entity(t, path=f"elements.{t}")

    base: Cost = Fraction(0)
    pending = set()
    for t in targets:
        if t in free:
            continue
        if system.is_atom(t):
            base += spec.atom_cost(t)
        else:
            pending.add(t)
    if not pending:
        return base

    def slot(y: str) -> Cost:
        if y in free:
            return Fraction(0)
        return spec.atom_cost(y) if system.is_atom(y) else Fraction(0)

    legal = [r for r in system.reactions if spec.allows(r.op)]
    if len(legal) > reaction_cap:
        raise CapExceededError(f"오라클 반응 상한 {reaction_cap} 초과 ({len(legal)})", path="solver.oracle_reaction_cap")

    best: Cost = INF
    for size in range(1, len(legal) + 1):
        for subset in combinations(legal, size):
            if reuse_atoms:
                fetched = {y for r in subset for y in (r.left, r.right)
                           if system.is_atom(y) and y not in free and y not in targets}
                cost = (sum((spec.reaction_cost(r.op, r.left, r.right, context) for r in subset), Fraction(0))
                        + sum((spec.atom_cost(y) for y in fetched), Fraction(0)))
            else:
                cost = sum((spec.reaction_cost(r.op, r.left, r.right, context) + slot(r.left) + slot(r.right)
                            for r in subset), Fraction(0))
            if cost >= best:
                continue
            available = set(free) | set(system.atoms)
            changed = True
            while changed:
                changed = False
                for r in subset:
                    if r.left in available and r.right in available and not set(r.products) <= available:
                        available.update(r.products)
                        changed = True
            if pending <= available:
                best = cost
    return base + best if is_finite(best) else INF
