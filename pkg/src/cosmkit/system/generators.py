"""
내장 시스템 생성기 - string-concat, perturbed-concat, gamma-system, random
"""

import itertools
import logging
from fractions import Fraction
from typing import Any, Callable, Dict, List, Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, ValidationError

from ..core.config import Rational
from ..core.errors import CapExceededError, ParameterError
from .model import (
    GAMMA_ALPHA_TAG,
    GAMMA_BETA_TAG,
    IDENTITY,
    CombinationalSystem,
    GammaSpec,
    MeasureSpec,
    OperatorSpec,
    Reaction,
    is_valid_id,
)

CONCAT_OP = "cat"
APPLY_OP = "ap"
ALPHA_OP = "alpha"
BETA_OP = "beta"


class _Params(BaseModel):
    model_config = ConfigDict(extra="forbid", arbitrary_types_allowed=True)

    entity_cap: int = Field(default=500, description="생성 가능한 최대 엔티티 수")


class StringConcatParams(_Params):
    alphabet: List[str] = Field(default_factory=lambda: ["a", "b"], description="알파벳 (한 글자씩)")
    max_length: int = Field(default=4, description="최대 문자열 길이")
    atom_cost: Rational = Field(default=Fraction(1), description="원자 비용")
    op_cost: Rational = Field(default=Fraction(1), description="연결 연산 비용 (측도 1)")
    extended_op_cost: Rational = Field(default=Fraction(1, 2), description="연결 연산 비용 (측도 2)")


class PerturbedConcatParams(StringConcatParams):
    amplitude: Rational = Field(default=Fraction(1, 4), description="반응별 비용 흔들림 상한")
    seed: int = Field(default=0, description="난수 시드")
    steps: int = Field(default=16, description="흔들림 격자 (amplitude/steps 단위)")


class GammaSystemParams(_Params):
    depth: int = Field(default=3, description="항의 최대 깊이 D")
    atoms: List[str] = Field(default_factory=lambda: ["p", "q"], description="기본 원자")
    combinator: str = Field(default="G", description="Γ 엔티티 id")
    atom_cost: Rational = Field(default=Fraction(1))
    gamma_cost: Rational = Field(default=Fraction(1), description="σ(Γ)")
    apply_cost: Rational = Field(default=Fraction(1), description="적용 비용 (측도 1)")
    extended_apply_cost: Rational = Field(default=Fraction(1, 2), description="적용 비용 (측도 2)")
    alpha_cost: Rational = Field(default=Fraction(1, 4))
    beta_cost: Rational = Field(default=Fraction(1, 4))


class RandomParams(_Params):
    seed: int = Field(default=0)
    atoms: int = Field(default=2, description="원자 수")
    composites: int = Field(default=5, description="비원자 엔티티 수 (e 제외)")
    operators: int = Field(default=2)
    measures: int = Field(default=1)
    reactions: int = Field(default=8, description="시도할 반응 수 (중복 키는 버림)")
    max_products: int = Field(default=2)
    max_numerator: int = Field(default=32)
    max_denominator: int = Field(default=16)
    context_overrides: int = Field(default=0, description="문맥 비용 재정의 수")


def _check(condition: bool, message: str, path: str):
    if not condition:
        raise ParameterError(message, path=path)


def _check_cap(count: int, cap: int):
    if count > cap:
        raise CapExceededError(f"생성된 엔티티 수 {count} 가 상한 {cap} 을 초과합니다", path="params.entity_cap")


def _concat_universe(params: StringConcatParams) -> Tuple[List[str], List[Reaction]]:
    _check(len(params.alphabet) >= 1, "알파벳이 비어 있습니다", "params.alphabet")
    _check(len(set(params.alphabet)) == len(params.alphabet), "알파벳에 중복이 있습니다", "params.alphabet")
    for letter in params.alphabet:
        _check(len(letter) == 1 and is_valid_id(letter) and letter != IDENTITY,
               f"사용할 수 없는 글자: {letter!r}", "params.alphabet")
    _check(params.max_length >= 1, "max_length 는 1 이상이어야 합니다", "params.max_length")
    for name in ("atom_cost", "op_cost", "extended_op_cost"):
        _check(getattr(params, name) >= 0, f"{name} 는 음수일 수 없습니다", f"params.{name}")

    n = len(params.alphabet)
    count = 1 + sum(n ** length for length in range(1, params.max_length + 1))
    _check_cap(count, params.entity_cap)

    strings: List[str] = []
    for length in range(1, params.max_length + 1):
        strings.extend("".join(t) for t in itertools.product(params.alphabet, repeat=length))

    reactions = [
        Reaction(CONCAT_OP, x, y, (x + y,))
        for x in strings for y in strings
        if len(x) + len(y) <= params.max_length
    ]
    return [IDENTITY] + strings, reactions


def _concat_system(params: StringConcatParams,
                   overrides: Optional[Dict[Tuple[str, str, str], Fraction]] = None) -> CombinationalSystem:
    entities, reactions = _concat_universe(params)
    atoms = tuple(params.alphabet)
    ops = frozenset([CONCAT_OP])
    measures = (
        MeasureSpec("m1", ops, {a: params.atom_cost for a in atoms}, {CONCAT_OP: params.op_cost}),
        MeasureSpec("m2", ops, {a: params.atom_cost for a in atoms}, {CONCAT_OP: params.extended_op_cost},
                    reaction_cost_overrides=overrides or {}),
    )
    return CombinationalSystem(
        entities=tuple(entities),
        atoms=atoms,
        identity=IDENTITY,
        operators=(OperatorSpec(CONCAT_OP),),
        reactions=tuple(reactions),
        measures=measures,
    )


def string_concat(params: StringConcatParams) -> CombinationalSystem:
    """결합적 연결 연산 하나, 평탄한 비용 (비용 결합성 결함 0)"""
    return _concat_system(params)


def perturbed_concat(params: PerturbedConcatParams) -> CombinationalSystem:
    """확장 측도의 반응별 비용을 [0, amplitude] 안에서 흔든 연결 시스템"""
    _check(params.amplitude >= 0, "amplitude 는 음수일 수 없습니다", "params.amplitude")
    _check(params.steps >= 1, "steps 는 1 이상이어야 합니다", "params.steps")
    _, reactions = _concat_universe(params)

    overrides: Dict[Tuple[str, str, str], Fraction] = {}
    if params.amplitude > 0:
        rng = np.random.default_rng(params.seed)
        draws = rng.integers(0, params.steps + 1, size=len(reactions))
        for reaction, k in zip(reactions, draws):
            delta = params.amplitude * Fraction(int(k), params.steps)
            if delta:
                overrides[reaction.key] = params.extended_op_cost + delta
    return _concat_system(params, overrides)


def _term(x: str, y: str) -> str:
    return f"[{x}.{y}]"


def _alpha_entity(combinator: str, w: str) -> str:
    return "{" + f"{combinator}|{w}" + "}"


def _beta_entity(combinator: str, w: str, v: str) -> str:
    return "{" + f"{combinator}|{w}|{v}" + "}"


def gamma_system(params: GammaSystemParams) -> CombinationalSystem:
    """적용 항 + Γ 엔티티: x ap ((Γ alpha w) beta v) = (x ap w) ap v"""
    _check(params.depth >= 3, "depth 는 3 이상이어야 합니다", "params.depth")
    _check(len(params.atoms) >= 1, "원자가 비어 있습니다", "params.atoms")
    reserved = {IDENTITY, params.combinator}
    for atom in params.atoms:
        _check(is_valid_id(atom) and atom not in reserved and not set(atom) & set("[].{}|"),
               f"사용할 수 없는 원자: {atom!r}", "params.atoms")
    _check(is_valid_id(params.combinator) and params.combinator != IDENTITY,
           "사용할 수 없는 결합자 id", "params.combinator")
    for name in ("atom_cost", "gamma_cost", "apply_cost", "extended_apply_cost", "alpha_cost", "beta_cost"):
        _check(getattr(params, name) >= 0, f"{name} 는 음수일 수 없습니다", f"params.{name}")

    D = params.depth
    # 깊이별 항 개수로 상한 먼저 검사
    sizes = [0, len(params.atoms)]
    for d in range(2, D + 1):
        below = sum(sizes[1:d])
        sizes.append(below * below - sum(sizes[1:d - 1]) ** 2)
    shallow = sum(sizes[1:D - 1])
    mid = sum(sizes[1:D])
    _check_cap(1 + 1 + sum(sizes) + shallow + shallow * mid, params.entity_cap)

    depth: Dict[str, int] = {a: 1 for a in params.atoms}
    terms: List[str] = list(params.atoms)
    for d in range(2, D + 1):
        lower = [t for t in terms if depth[t] <= d - 1]
        for x in lower:
            for y in lower:
                if max(depth[x], depth[y]) == d - 1:
                    t = _term(x, y)
                    depth[t] = d
                    terms.append(t)

    G = params.combinator
    ws = [t for t in terms if depth[t] <= D - 2]
    vs = [t for t in terms if depth[t] <= D - 1]
    alpha_entities = [_alpha_entity(G, w) for w in ws]
    beta_entities = [_beta_entity(G, w, v) for w in ws for v in vs]

    reactions: List[Reaction] = []
    for x in vs:
        for y in vs:
            reactions.append(Reaction(APPLY_OP, x, y, (_term(x, y),)))
    for w in ws:
        reactions.append(Reaction(ALPHA_OP, G, w, (_alpha_entity(G, w),)))
    for w in ws:
        for v in vs:
            reactions.append(Reaction(BETA_OP, _alpha_entity(G, w), v, (_beta_entity(G, w, v),)))
    # 재괄호: x ap {G|w|v} = (x ap w) ap v
    for w in ws:
        for v in vs:
            for x in ws:
                reactions.append(Reaction(APPLY_OP, x, _beta_entity(G, w, v), (_term(_term(x, w), v),)))

    atoms = tuple(params.atoms) + (G,)
    atom_costs = {a: params.atom_cost for a in params.atoms}
    atom_costs[G] = params.gamma_cost
    ops = frozenset([APPLY_OP, ALPHA_OP, BETA_OP])
    measures = (
        MeasureSpec("m1", ops, dict(atom_costs),
                    {APPLY_OP: params.apply_cost, ALPHA_OP: params.alpha_cost, BETA_OP: params.beta_cost}),
        MeasureSpec("m2", ops, dict(atom_costs),
                    {APPLY_OP: params.extended_apply_cost, ALPHA_OP: params.alpha_cost, BETA_OP: params.beta_cost}),
    )
    return CombinationalSystem(
        entities=(IDENTITY,) + atoms + tuple(terms[len(params.atoms):]) + tuple(alpha_entities) + tuple(beta_entities),
        atoms=atoms,
        identity=IDENTITY,
        operators=(
            OperatorSpec(APPLY_OP),
            OperatorSpec(ALPHA_OP, frozenset([GAMMA_ALPHA_TAG])),
            OperatorSpec(BETA_OP, frozenset([GAMMA_BETA_TAG])),
        ),
        reactions=tuple(reactions),
        measures=measures,
        gamma=GammaSpec(G, ALPHA_OP, BETA_OP, APPLY_OP),
    )


def random_system(params: RandomParams) -> CombinationalSystem:
    """오라클 코퍼스용 무작위 시스템 (시드 고정)"""
    _check(params.atoms >= 1, "원자가 하나 이상 필요합니다", "params.atoms")
    _check(params.composites >= 0, "composites 는 음수일 수 없습니다", "params.composites")
    _check(params.operators >= 1, "연산자가 하나 이상 필요합니다", "params.operators")
    _check(params.measures >= 1, "측도가 하나 이상 필요합니다", "params.measures")
    _check(params.max_products >= 1, "max_products 는 1 이상이어야 합니다", "params.max_products")
    _check(params.max_denominator >= 1, "max_denominator 는 1 이상이어야 합니다", "params.max_denominator")
    _check(params.max_numerator >= 0, "max_numerator 는 음수일 수 없습니다", "params.max_numerator")
    _check_cap(1 + params.atoms + params.composites, params.entity_cap)

    rng = np.random.default_rng(params.seed)

    def cost() -> Fraction:
        return Fraction(int(rng.integers(0, params.max_numerator + 1)),
                        int(rng.integers(1, params.max_denominator + 1)))

    atoms = tuple(f"a{i}" for i in range(params.atoms))
    composites = tuple(f"n{i}" for i in range(params.composites))
    operands = atoms + composites
    ops = tuple(f"o{i}" for i in range(params.operators))

    reactions: List[Reaction] = []
    seen = set()
    if composites:
        for _ in range(params.reactions):
            op = ops[int(rng.integers(len(ops)))]
            left = operands[int(rng.integers(len(operands)))]
            right = operands[int(rng.integers(len(operands)))]
            if (op, left, right) in seen:
                continue
            seen.add((op, left, right))
            k = int(rng.integers(1, min(params.max_products, len(composites)) + 1))
            picks = rng.choice(len(composites), size=k, replace=False)
            reactions.append(Reaction(op, left, right, tuple(composites[int(i)] for i in sorted(picks))))

    # O_1 은 비어 있지 않은 무작위 부분집합, 나머지는 O_1 의 상위집합
    base_ops = [op for op in ops if rng.random() < 0.7] or [ops[0]]
    measure_ops = [frozenset(base_ops)]
    for _ in range(1, params.measures):
        extra = [op for op in ops if op not in base_ops and rng.random() < 0.5]
        measure_ops.append(frozenset(base_ops + extra))

    measures = []
    for j, op_set in enumerate(measure_ops, start=1):
        context_overrides = {}
        for _ in range(params.context_overrides if reactions else 0):
            r = reactions[int(rng.integers(len(reactions)))]
            context = operands[int(rng.integers(len(operands)))]
            context_overrides[(r.op, r.left, r.right, context)] = cost()
        measures.append(MeasureSpec(
            id=f"m{j}",
            operators=op_set,
            atom_costs={a: cost() for a in atoms},
            op_costs={op: cost() for op in ops if op in op_set},
            context_cost_overrides=context_overrides,
        ))

    return CombinationalSystem(
        entities=(IDENTITY,) + operands,
        atoms=atoms,
        identity=IDENTITY,
        operators=tuple(OperatorSpec(op) for op in ops),
        reactions=tuple(reactions),
        measures=tuple(measures),
    )


FAMILIES: Dict[str, Tuple[type, Callable[[Any], CombinationalSystem]]] = {
    "string-concat": (StringConcatParams, string_concat),
    "perturbed-concat": (PerturbedConcatParams, perturbed_concat),
    "gamma-system": (GammaSystemParams, gamma_system),
    "random": (RandomParams, random_system),
}


def generate_builtin(family: str, params: Optional[Dict[str, Any]] = None,
                     logger: Optional[logging.Logger] = None) -> CombinationalSystem:
    """이름으로 생성기를 골라 시스템 생성"""
    logger = logger or logging.getLogger(__name__)
    if family not in FAMILIES:
        raise ParameterError(f"알 수 없는 생성기: {family} (가능: {', '.join(FAMILIES)})", path="family")

    model, build = FAMILIES[family]
    try:
        parsed = model(**(params or {}))
    except ValidationError as e:
        err = e.errors()[0]
        path = "params." + ".".join(str(p) for p in err["loc"])
        raise ParameterError(err["msg"], path=path) from e

    system = build(parsed)
    logger.info(f"{family} 생성 완료: 엔티티 {len(system.entities)}개, 반응 {len(system.reactions)}개")
    return system
