"""
조합 시스템 모델 - 엔티티, 연산자, 반응 테이블, 측도별 비용 테이블
"""

from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Dict, FrozenSet, Iterator, List, Mapping, Optional, Tuple, Union

from ..core.errors import UnknownEntityError, UnknownMeasureError
from ..core.rational import INF, Cost

IDENTITY = "e"
FORBIDDEN_ID_CHARS = frozenset("(),#:")

FILTRATION_TAG = "filtration"
GAMMA_ALPHA_TAG = "gamma-alpha"
GAMMA_BETA_TAG = "gamma-beta"

ReactionKey = Tuple[str, str, str]
ContextKey = Tuple[str, str, str, str]
MeasureRef = Union[int, str]


def is_valid_id(token: str) -> bool:
    """비어있지 않고, 출력 가능하며, 공백/예약 문자가 없는 토큰인지"""
    if not isinstance(token, str) or not token:
        return False
    for ch in token:
        if ch.isspace() or ch in FORBIDDEN_ID_CHARS or not ch.isprintable():
            return False
    return True


def auto_op_address(op: str, left_address: str, right_address: str, n: int = 1) -> str:
    """auto-op 출력 주소: op(left,right)#n"""
    return f"{op}({left_address},{right_address})#{n}"


@dataclass(frozen=True)
class AutoOp:
    """주소가 붙은 연산자 적용 인스턴스"""
    op: str
    left_address: str
    right_address: str
    output_addresses: Tuple[str, ...]

    @classmethod
    def apply(cls, op: str, left_address: str, right_address: str, k: int) -> "AutoOp":
        outputs = tuple(auto_op_address(op, left_address, right_address, n) for n in range(1, k + 1))
        return cls(op, left_address, right_address, outputs)


@dataclass(frozen=True)
class Reaction:
    """반응: op(left, right) -> products (k_i 개)"""
    op: str
    left: str
    right: str
    products: Tuple[str, ...]

    @property
    def key(self) -> ReactionKey:
        return (self.op, self.left, self.right)

    def to_dict(self) -> Dict[str, object]:
        return {"op": self.op, "left": self.left, "right": self.right, "products": list(self.products)}

    def __str__(self) -> str:
        return f"{self.op}({self.left},{self.right}) -> [{', '.join(self.products)}]"


@dataclass(frozen=True)
class OperatorSpec:
    """연산자 선언 (태그: filtration, gamma-alpha, gamma-beta)"""
    id: str
    tags: FrozenSet[str] = frozenset()


@dataclass(frozen=True)
class MeasureSpec:
    """측도 j 의 연산 집합과 비용 테이블"""
    id: str
    operators: FrozenSet[str]
    atom_costs: Mapping[str, Fraction]
    op_costs: Mapping[str, Fraction]
    reaction_cost_overrides: Mapping[ReactionKey, Fraction] = field(default_factory=dict)
    context_cost_overrides: Mapping[ContextKey, Fraction] = field(default_factory=dict)

    def allows(self, op: str) -> bool:
        return op in self.operators

    def atom_cost(self, atom: str) -> Fraction:
        return self.atom_costs[atom]

    def reaction_cost(self, op: str, left: str, right: str, context: str = IDENTITY) -> Cost:
        """σ*|(op, left, right | context) - 측도 밖 연산자는 ∞, 항등 반응은 0"""
        if op not in self.operators:
            return INF
        if left == IDENTITY or right == IDENTITY:
            return Fraction(0)
        if context != IDENTITY:
            override = self.context_cost_overrides.get((op, left, right, context))
            if override is not None:
                return override
        override = self.reaction_cost_overrides.get((op, left, right))
        if override is not None:
            return override
        return self.op_costs[op]

    def has_context_overrides(self) -> bool:
        return bool(self.context_cost_overrides)

    def scaled(self, factor: Fraction) -> "MeasureSpec":
        return replace(
            self,
            atom_costs={k: v * factor for k, v in self.atom_costs.items()},
            op_costs={k: v * factor for k, v in self.op_costs.items()},
            reaction_cost_overrides={k: v * factor for k, v in self.reaction_cost_overrides.items()},
            context_cost_overrides={k: v * factor for k, v in self.context_cost_overrides.items()},
        )


@dataclass(frozen=True)
class GammaSpec:
    """Γ 결합자 선언: x *_apply ((Γ *_alpha w) *_beta v) = (x *_apply w) *_apply v"""
    combinator: str
    alpha: str
    beta: str
    apply: str


@dataclass(frozen=True)
class CombinationalSystem:
    """검증이 끝난 유한 조합 시스템 (불변)"""
    entities: Tuple[str, ...]
    atoms: Tuple[str, ...]
    identity: str
    operators: Tuple[OperatorSpec, ...]
    reactions: Tuple[Reaction, ...]
    measures: Tuple[MeasureSpec, ...]
    gamma: Optional[GammaSpec] = None

    def __post_init__(self):
        # 조회용 인덱스 (필드가 아니므로 동등성 비교에 영향 없음)
        index: Dict[ReactionKey, Reaction] = {}
        producers: Dict[str, List[Reaction]] = {x: [] for x in self.entities}
        consumers: Dict[str, List[Reaction]] = {x: [] for x in self.entities}
        for reaction in self.reactions:
            index[reaction.key] = reaction
            for product in dict.fromkeys(reaction.products):
                producers.setdefault(product, []).append(reaction)
            consumers.setdefault(reaction.left, []).append(reaction)
            if reaction.right != reaction.left:
                consumers.setdefault(reaction.right, []).append(reaction)

        object.__setattr__(self, "_entity_set", frozenset(self.entities))
        object.__setattr__(self, "_atom_set", frozenset(self.atoms))
        object.__setattr__(self, "_position", {x: i for i, x in enumerate(self.entities)})
        object.__setattr__(self, "_reaction_index", index)
        object.__setattr__(self, "_producers", {k: tuple(v) for k, v in producers.items()})
        object.__setattr__(self, "_consumers", {k: tuple(v) for k, v in consumers.items()})
        object.__setattr__(self, "_operator_index", {spec.id: spec for spec in self.operators})

    # --- 엔티티 ---

    def has_entity(self, x: str) -> bool:
        return x in self._entity_set

    def require_entity(self, x: str, path: str = "entity") -> str:
        if x not in self._entity_set:
            raise UnknownEntityError(f"알 수 없는 엔티티: {x}", path=path)
        return x

    def is_atom(self, x: str) -> bool:
        return x in self._atom_set

    def position(self, x: str) -> int:
        """선언 순서 (정렬 키)"""
        return self._position[x]

    @property
    def non_identity_entities(self) -> Tuple[str, ...]:
        return tuple(x for x in self.entities if x != self.identity)

    # --- 연산자 ---

    @property
    def operator_ids(self) -> Tuple[str, ...]:
        return tuple(spec.id for spec in self.operators)

    def operator(self, op: str) -> Optional[OperatorSpec]:
        return self._operator_index.get(op)

    def operators_tagged(self, tag: str) -> Tuple[str, ...]:
        return tuple(spec.id for spec in self.operators if tag in spec.tags)

    # --- 반응 ---

    def reaction(self, op: str, left: str, right: str) -> Optional[Reaction]:
        return self._reaction_index.get((op, left, right))

    def react(self, op: str, left: str, right: str) -> Optional[Tuple[str, ...]]:
        """명시적 반응 또는 암묵적 항등 반응의 생성물"""
        if op not in self._operator_index:
            return None
        if left == self.identity:
            return (right,)
        if right == self.identity:
            return (left,)
        reaction = self._reaction_index.get((op, left, right))
        return reaction.products if reaction else None

    def producers(self, x: str) -> Tuple[Reaction, ...]:
        return self._producers.get(x, ())

    def consumers(self, x: str) -> Tuple[Reaction, ...]:
        return self._consumers.get(x, ())

    def legal_reactions(self, measure: MeasureRef) -> Iterator[Reaction]:
        spec = self.measure(measure)
        return (r for r in self.reactions if spec.allows(r.op))

    # --- 측도 ---

    def measure_index(self, measure: MeasureRef) -> int:
        """측도 참조(1부터 시작하는 번호 또는 id)를 1부터 시작하는 번호로"""
        if isinstance(measure, int) and not isinstance(measure, bool):
            if 1 <= measure <= len(self.measures):
                return measure
        elif isinstance(measure, str):
            for i, spec in enumerate(self.measures, start=1):
                if spec.id == measure:
                    return i
            if measure.isdigit() and 1 <= int(measure) <= len(self.measures):
                return int(measure)
        raise UnknownMeasureError(f"알 수 없는 측도: {measure}", path="measure")

    def measure(self, measure: MeasureRef) -> MeasureSpec:
        return self.measures[self.measure_index(measure) - 1]

    @property
    def measure_count(self) -> int:
        return len(self.measures)

    def has_context_overrides(self) -> bool:
        return any(spec.has_context_overrides() for spec in self.measures)

    # --- 파생 시스템 ---

    def scaled(self, factor: Fraction) -> "CombinationalSystem":
        """모든 측도의 모든 비용에 factor(>0)를 곱한 시스템"""
        factor = Fraction(factor)
        if factor <= 0:
            raise ValueError("배율은 양수여야 합니다")
        return replace(self, measures=tuple(spec.scaled(factor) for spec in self.measures))

    def with_measures(self, measures: List[MeasureRef]) -> "CombinationalSystem":
        """측도 일부만 남긴 뷰"""
        chosen = tuple(self.measure(m) for m in measures)
        return replace(self, measures=chosen)
