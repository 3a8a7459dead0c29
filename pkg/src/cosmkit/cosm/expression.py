"""
연산자 자유 대수의 표현식 - 파싱, 평가 r(E), 구문 비용 σ!(E)
"""

from dataclasses import dataclass
from typing import Dict, Iterator, List, Mapping, Optional

import numpy as np

from ..core.errors import ExpressionError
from ..core.rational import Cost, cost_sum
from ..system.model import FORBIDDEN_ID_CHARS, CombinationalSystem, MeasureRef, auto_op_address


@dataclass(frozen=True)
class Expression:
    """잎은 엔티티, 내부 노드는 연산자와 두 자식 (select 는 1부터 시작하는 생성물 번호)"""
    entity: Optional[str] = None
    op: Optional[str] = None
    left: Optional["Expression"] = None
    right: Optional["Expression"] = None
    select: int = 1

    @classmethod
    def leaf(cls, entity: str) -> "Expression":
        return cls(entity=entity)

    @classmethod
    def node(cls, op: str, left: "Expression", right: "Expression", select: int = 1) -> "Expression":
        return cls(op=op, left=left, right=right, select=select)

    @property
    def is_leaf(self) -> bool:
        return self.op is None

    @property
    def address(self) -> str:
        if self.is_leaf:
            return self.entity
        return auto_op_address(self.op, self.left.address, self.right.address, self.select)

    def leaves(self) -> Iterator[str]:
        if self.is_leaf:
            yield self.entity
        else:
            yield from self.left.leaves()
            yield from self.right.leaves()

    def nodes(self) -> Iterator["Expression"]:
        """내부 노드 (후위 순회)"""
        if not self.is_leaf:
            yield from self.left.nodes()
            yield from self.right.nodes()
            yield self

    @property
    def size(self) -> int:
        return 1 if self.is_leaf else 1 + self.left.size + self.right.size

    def __str__(self) -> str:
        if self.is_leaf:
            return self.entity
        suffix = f"#{self.select}" if self.select != 1 else ""
        return f"{self.op}({self.left},{self.right}){suffix}"


class _Parser:
    def __init__(self, text: str):
        self.text = "".join(text.split())
        self.pos = 0

    def error(self, message: str) -> ExpressionError:
        return ExpressionError(f"{message} (위치 {self.pos})", path=f"expression:{self.pos}")

    def peek(self) -> str:
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def expect(self, ch: str):
        if self.peek() != ch:
            raise self.error(f"'{ch}' 가 필요합니다")
        self.pos += 1

    def token(self) -> str:
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos] not in FORBIDDEN_ID_CHARS:
            self.pos += 1
        if start == self.pos:
            raise self.error("id 가 필요합니다")
        return self.text[start:self.pos]

    def expression(self) -> Expression:
        name = self.token()
        if self.peek() != "(":
            return Expression.leaf(name)
        self.expect("(")
        left = self.expression()
        self.expect(",")
        right = self.expression()
        self.expect(")")
        select = 1
        if self.peek() == "#":
            self.pos += 1
            start = self.pos
            while self.peek().isdigit():
                self.pos += 1
            if start == self.pos or int(self.text[start:self.pos]) < 1:
                raise self.error("생성물 번호가 잘못되었습니다")
            select = int(self.text[start:self.pos])
        return Expression.node(name, left, right, select)

    def parse(self) -> Expression:
        expr = self.expression()
        if self.pos != len(self.text):
            raise self.error("표현식 뒤에 남은 문자가 있습니다")
        return expr


def parse_expression(text: str) -> Expression:
    """전위 표기 op(child,child)#n 파싱"""
    return _Parser(text).parse()


def evaluate(system: CombinationalSystem, expr: Expression) -> str:
    """반응 테이블을 따라 아래에서 위로 평가"""
    if expr.is_leaf:
        system.require_entity(expr.entity, path=f"expression:{expr.entity}")
        return expr.entity
    left = evaluate(system, expr.left)
    right = evaluate(system, expr.right)
    products = system.react(expr.op, left, right)
    if products is None:
        raise ExpressionError(f"반응이 없습니다: {expr.op}({left},{right})", path=expr.address)
    if expr.select > len(products):
        raise ExpressionError(f"생성물 번호 {expr.select} 가 범위를 벗어났습니다", path=expr.address)
    return products[expr.select - 1]


def expression_cost(system: CombinationalSystem, measure: MeasureRef, expr: Expression,
                    values: Mapping[str, Cost]) -> Cost:
    """σ!_j(E): 잎마다 σ_j, 노드마다 σ*_j (중복 인스턴스 모두 합산)"""
    spec = system.measure(measure)

    def walk(e: Expression):
        if e.is_leaf:
            system.require_entity(e.entity, path=f"expression:{e.entity}")
            return e.entity, values[e.entity]
        left, left_cost = walk(e.left)
        right, right_cost = walk(e.right)
        products = system.react(e.op, left, right)
        if products is None or e.select > len(products):
            raise ExpressionError(f"반응이 없습니다: {e.op}({left},{right})", path=e.address)
        node_cost = spec.reaction_cost(e.op, left, right)
        return products[e.select - 1], cost_sum([left_cost, right_cost, node_cost])

    return walk(expr)[1]


def postorder_addresses(expr: Expression) -> List[str]:
    """유도 증인 출력용 주소 목록"""
    return [node.address for node in expr.nodes()] or [expr.address]


def atom_heights(system: CombinationalSystem) -> Dict[str, int]:
    """원자에서 x 까지 가장 낮은 유도 트리의 높이 (원자에서 닿지 않으면 없음)"""
    heights = {a: 0 for a in system.atoms}
    changed = True
    while changed:
        changed = False
        for reaction in system.reactions:
            if reaction.left not in heights or reaction.right not in heights:
                continue
            h = max(heights[reaction.left], heights[reaction.right]) + 1
            for product in reaction.products:
                if h < heights.get(product, h + 1):
                    heights[product] = h
                    changed = True
    return heights


def random_expression(system: CombinationalSystem, rng: np.random.Generator, max_depth: int = 4,
                      target: Optional[str] = None, atom_leaves: bool = False) -> Expression:
    """반응 테이블을 위에서 아래로 따라가는 무작위 정형 표현식

    atom_leaves 이면 깊이 제한 없이 원자까지 전개한다. 높이가 줄어드는 반응만 고르므로
    순환 시스템에서도 끝나며, 원자에서 닿지 않는 엔티티는 잎으로 남는다.
    """
    heights = atom_heights(system) if atom_leaves else {}
    if target is None:
        candidates = [x for x in system.entities if x != system.identity]
        if atom_leaves:
            candidates = [x for x in candidates if x in heights]
        target = candidates[int(rng.integers(len(candidates)))]

    def build(x: str, depth: int) -> Expression:
        producers = system.producers(x)
        if atom_leaves:
            limit = heights.get(x, 0)
            producers = [r for r in producers
                         if heights.get(r.left, limit) < limit and heights.get(r.right, limit) < limit]
            if not producers:
                return Expression.leaf(x)
        elif depth <= 0 or not producers or rng.random() < 0.25:
            return Expression.leaf(x)
        reaction = producers[int(rng.integers(len(producers)))]
        select = reaction.products.index(x) + 1
        return Expression.node(reaction.op, build(reaction.left, depth - 1),
                               build(reaction.right, depth - 1), select)

    return build(target, max_depth)
