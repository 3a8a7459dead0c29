"""
시스템 문서 로더 - JSON 문서 검증, 정규 직렬화, 지문
"""

import hashlib
import json
from fractions import Fraction
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple, Union

from pydantic import BaseModel, ConfigDict, Field, StrictInt, StrictStr, ValidationError

from ..core.errors import SystemValidationError
from ..core.rational import parse_rational, to_json_number
from .model import (
    FILTRATION_TAG,
    IDENTITY,
    CombinationalSystem,
    GammaSpec,
    MeasureSpec,
    OperatorSpec,
    Reaction,
    is_valid_id,
)

RationalLike = Union[StrictInt, StrictStr]


class _Document(BaseModel):
    model_config = ConfigDict(extra="forbid")


class ReactionDoc(_Document):
    op: str
    left: str
    right: str
    products: List[str]


class OperatorDoc(_Document):
    id: str
    tags: List[str] = Field(default_factory=list)


class ReactionOverrideDoc(_Document):
    op: str
    left: str
    right: str
    cost: RationalLike


class ContextOverrideDoc(_Document):
    op: str
    left: str
    right: str
    context: str
    cost: RationalLike


class MeasureDoc(_Document):
    id: str
    operators: List[str]
    atom_costs: Dict[str, RationalLike]
    op_costs: Dict[str, RationalLike]
    reaction_cost_overrides: List[ReactionOverrideDoc] = Field(default_factory=list)
    context_cost_overrides: List[ContextOverrideDoc] = Field(default_factory=list)


class GammaDoc(_Document):
    combinator: str
    alpha: str
    beta: str
    apply: str


class SystemDocument(_Document):
    """시스템 문서 스키마"""
    entities: List[str]
    atoms: List[str]
    identity: str = IDENTITY
    operators: List[Union[str, OperatorDoc]]
    reactions: List[ReactionDoc]
    measures: List[MeasureDoc]
    gamma: Optional[GammaDoc] = None


def _format_loc(loc: Tuple[Any, ...]) -> str:
    """pydantic 오류 위치를 문서 경로로 ("reactions[2].products")"""
    path = ""
    for part in loc:
        if isinstance(part, int):
            path += f"[{part}]"
        elif part in ("str", "int", "OperatorDoc", "function-after[...]"):
            # Union 분기 이름은 경로가 아님
            continue
        else:
            path += f".{part}" if path else str(part)
    return path


class _Validator:
    """의미 검증 - 위반을 모두 모은 뒤 한 번에 보고"""

    def __init__(self, doc: SystemDocument):
        self.doc = doc
        self.violations: List[Dict[str, str]] = []

    def report(self, code: str, message: str, path: str):
        self.violations.append({"code": code, "message": message, "path": path})

    def _check_ids(self, ids: List[str], path: str, kind: str):
        seen = set()
        for i, token in enumerate(ids):
            if not is_valid_id(token):
                self.report("invalid_id", f"잘못된 {kind} id: {token!r}", f"{path}[{i}]")
            if token in seen:
                self.report("duplicate_id", f"중복된 {kind} id: {token}", f"{path}[{i}]")
            seen.add(token)

    def _cost(self, value: RationalLike, path: str) -> Optional[Fraction]:
        try:
            cost = parse_rational(value)
        except ValueError as e:
            self.report("invalid_rational", str(e), path)
            return None
        if cost < 0:
            self.report("negative_cost", f"음수 비용: {value}", path)
            return None
        return cost

    def run(self) -> Optional[CombinationalSystem]:
        doc = self.doc

        # 엔티티 / 원자 / 항등원
        self._check_ids(doc.entities, "entities", "엔티티")
        entity_set = set(doc.entities)
        if doc.identity != IDENTITY:
            self.report("reserved_identity", f"항등원 id 는 {IDENTITY} 이어야 합니다", "identity")
        if doc.identity not in entity_set:
            self.report("identity_missing", "항등원이 엔티티 목록에 없습니다", "identity")
        for i, atom in enumerate(doc.atoms):
            if atom not in entity_set:
                self.report("unknown_entity", f"선언되지 않은 원자: {atom}", f"atoms[{i}]")
            if atom == doc.identity:
                self.report("identity_is_atom", "항등원은 원자가 될 수 없습니다", f"atoms[{i}]")
        if len(set(doc.atoms)) != len(doc.atoms):
            self.report("duplicate_id", "중복된 원자", "atoms")
        atom_set = set(doc.atoms)

        # 연산자
        operators: List[OperatorSpec] = []
        for entry in doc.operators:
            if isinstance(entry, str):
                operators.append(OperatorSpec(entry))
            else:
                operators.append(OperatorSpec(entry.id, frozenset(entry.tags)))
        self._check_ids([spec.id for spec in operators], "operators", "연산자")
        op_set = {spec.id for spec in operators}
        filtration_ops = {spec.id for spec in operators if FILTRATION_TAG in spec.tags}

        # 반응
        reactions: List[Reaction] = []
        seen_keys = set()
        for i, r in enumerate(doc.reactions):
            path = f"reactions[{i}]"
            if r.op not in op_set:
                self.report("unknown_operator", f"선언되지 않은 연산자: {r.op}", f"{path}.op")
            for side in ("left", "right"):
                operand = getattr(r, side)
                if operand not in entity_set:
                    self.report("unknown_entity", f"선언되지 않은 엔티티: {operand}", f"{path}.{side}")
                elif operand == doc.identity:
                    self.report("identity_operand", "항등 반응은 암묵적이므로 선언할 수 없습니다", f"{path}.{side}")
            if not r.products:
                self.report("empty_products", "생성물이 비어 있습니다", f"{path}.products")
            for n, product in enumerate(r.products):
                if product not in entity_set:
                    self.report("unknown_entity", f"선언되지 않은 엔티티: {product}", f"{path}.products[{n}]")
                elif product in atom_set and not (r.op in filtration_ops and r.left == r.right == product):
                    self.report("atom_producible", f"원자 {product} 가 생성물로 등장합니다 (atom producible)",
                                f"{path}.products[{n}]")
            key = (r.op, r.left, r.right)
            if key in seen_keys:
                self.report("duplicate_reaction", f"중복 반응: {key}", path)
            seen_keys.add(key)
            reactions.append(Reaction(r.op, r.left, r.right, tuple(r.products)))

        # 측도
        measures: List[MeasureSpec] = []
        if not doc.measures:
            self.report("no_measures", "측도가 하나 이상 필요합니다", "measures")
        self._check_ids([m.id for m in doc.measures], "measures", "측도")
        for j, m in enumerate(doc.measures):
            measures.append(self._measure(m, f"measures[{j}]", op_set, atom_set, entity_set, seen_keys))

        if measures:
            base = measures[0].operators
            for j, spec in enumerate(measures[1:], start=1):
                if not base <= spec.operators:
                    self.report("base_measure_containment",
                                f"측도 {spec.id} 의 연산 집합이 기본 측도의 연산 집합을 포함하지 않습니다",
                                f"measures[{j}].operators")

        gamma = None
        if doc.gamma is not None:
            gamma = GammaSpec(doc.gamma.combinator, doc.gamma.alpha, doc.gamma.beta, doc.gamma.apply)
            if gamma.combinator not in atom_set:
                self.report("unknown_entity", "Γ 결합자는 원자여야 합니다", "gamma.combinator")
            for field_name in ("alpha", "beta", "apply"):
                if getattr(gamma, field_name) not in op_set:
                    self.report("unknown_operator", f"선언되지 않은 연산자: {getattr(gamma, field_name)}",
                                f"gamma.{field_name}")

        if self.violations:
            return None
        return CombinationalSystem(
            entities=tuple(doc.entities),
            atoms=tuple(doc.atoms),
            identity=doc.identity,
            operators=tuple(operators),
            reactions=tuple(reactions),
            measures=tuple(measures),
            gamma=gamma,
        )

    def _measure(self, m: MeasureDoc, path: str, op_set, atom_set, entity_set, reaction_keys) -> MeasureSpec:
        for n, op in enumerate(m.operators):
            if op not in op_set:
                self.report("unknown_operator", f"선언되지 않은 연산자: {op}", f"{path}.operators[{n}]")

        atom_costs: Dict[str, Fraction] = {}
        for atom, value in m.atom_costs.items():
            if atom not in atom_set:
                self.report("unknown_atom", f"원자가 아닌 엔티티의 원자 비용: {atom}", f"{path}.atom_costs.{atom}")
                continue
            cost = self._cost(value, f"{path}.atom_costs.{atom}")
            if cost is not None:
                atom_costs[atom] = cost
        for atom in atom_set - set(m.atom_costs):
            self.report("missing_atom_cost", f"원자 비용 누락: {atom}", f"{path}.atom_costs")

        op_costs: Dict[str, Fraction] = {}
        for op, value in m.op_costs.items():
            if op not in m.operators:
                self.report("unknown_operator", f"측도에 없는 연산자의 비용: {op}", f"{path}.op_costs.{op}")
                continue
            cost = self._cost(value, f"{path}.op_costs.{op}")
            if cost is not None:
                op_costs[op] = cost
        for op in m.operators:
            if op not in m.op_costs:
                self.report("missing_op_cost", f"연산자 기본 비용 누락: {op}", f"{path}.op_costs")

        reaction_overrides: Dict[Tuple[str, str, str], Fraction] = {}
        for n, o in enumerate(m.reaction_cost_overrides):
            item = f"{path}.reaction_cost_overrides[{n}]"
            if (o.op, o.left, o.right) not in reaction_keys:
                self.report("unknown_reaction", f"선언되지 않은 반응: {(o.op, o.left, o.right)}", item)
            cost = self._cost(o.cost, f"{item}.cost")
            if cost is not None:
                reaction_overrides[(o.op, o.left, o.right)] = cost

        context_overrides: Dict[Tuple[str, str, str, str], Fraction] = {}
        for n, o in enumerate(m.context_cost_overrides):
            item = f"{path}.context_cost_overrides[{n}]"
            if (o.op, o.left, o.right) not in reaction_keys:
                self.report("unknown_reaction", f"선언되지 않은 반응: {(o.op, o.left, o.right)}", item)
            if o.context == IDENTITY:
                self.report("identity_context", "문맥 e 는 '문맥 없음'이므로 선언할 수 없습니다", f"{item}.context")
            elif o.context not in entity_set:
                self.report("unknown_entity", f"선언되지 않은 엔티티: {o.context}", f"{item}.context")
            cost = self._cost(o.cost, f"{item}.cost")
            if cost is not None:
                context_overrides[(o.op, o.left, o.right, o.context)] = cost

        return MeasureSpec(
            id=m.id,
            operators=frozenset(m.operators),
            atom_costs=atom_costs,
            op_costs=op_costs,
            reaction_cost_overrides=reaction_overrides,
            context_cost_overrides=context_overrides,
        )


def system_from_dict(data: Any) -> CombinationalSystem:
    """파싱된 JSON 객체에서 시스템 생성 (모든 불변식 검증)"""
    try:
        doc = SystemDocument.model_validate(data)
    except ValidationError as e:
        violations = [
            {"code": "schema_violation", "message": err["msg"], "path": _format_loc(err["loc"])}
            for err in e.errors()
        ]
        first = violations[0]
        raise SystemValidationError(first["message"], first["path"], "schema_violation", violations) from e

    validator = _Validator(doc)
    system = validator.run()
    if system is None:
        first = validator.violations[0]
        raise SystemValidationError(first["message"], first["path"], first["code"], validator.violations)
    return system


def load_system(document: str) -> CombinationalSystem:
    """JSON 텍스트에서 시스템 로드"""
    try:
        data = json.loads(document)
    except json.JSONDecodeError as e:
        raise SystemValidationError(f"JSON 파싱 실패: {e.msg}", f"line {e.lineno}", "malformed_json") from e
    return system_from_dict(data)


def load_system_file(filepath: Union[str, Path]) -> CombinationalSystem:
    """파일에서 시스템 로드"""
    filepath = Path(filepath)
    if not filepath.exists():
        raise FileNotFoundError(f"시스템 파일을 찾을 수 없습니다: {filepath}")
    with open(filepath, 'r', encoding='utf-8') as f:
        return load_system(f.read())


def to_document(system: CombinationalSystem) -> Dict[str, Any]:
    """시스템을 문서 객체로 (배열은 선언 순서)"""
    operators: List[Any] = []
    for spec in system.operators:
        if spec.tags:
            operators.append({"id": spec.id, "tags": sorted(spec.tags)})
        else:
            operators.append(spec.id)

    measures = []
    for spec in system.measures:
        measures.append({
            "id": spec.id,
            # 연산 집합은 연산자 선언 순서로
            "operators": [op for op in system.operator_ids if op in spec.operators],
            "atom_costs": {a: to_json_number(c) for a, c in spec.atom_costs.items()},
            "op_costs": {o: to_json_number(c) for o, c in spec.op_costs.items()},
            "reaction_cost_overrides": [
                {"op": k[0], "left": k[1], "right": k[2], "cost": to_json_number(c)}
                for k, c in spec.reaction_cost_overrides.items()
            ],
            "context_cost_overrides": [
                {"op": k[0], "left": k[1], "right": k[2], "context": k[3], "cost": to_json_number(c)}
                for k, c in spec.context_cost_overrides.items()
            ],
        })

    document: Dict[str, Any] = {
        "entities": list(system.entities),
        "atoms": list(system.atoms),
        "identity": system.identity,
        "operators": operators,
        "reactions": [r.to_dict() for r in system.reactions],
        "measures": measures,
    }
    if system.gamma is not None:
        document["gamma"] = {
            "combinator": system.gamma.combinator,
            "alpha": system.gamma.alpha,
            "beta": system.gamma.beta,
            "apply": system.gamma.apply,
        }
    return document


def serialize_system(system: CombinationalSystem) -> str:
    """정규 직렬화 (키 정렬, 배열은 선언 순서)"""
    return json.dumps(to_document(system), sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def system_fingerprint(system: CombinationalSystem) -> str:
    """정규 직렬화의 sha256 지문"""
    canonical = json.dumps(to_document(system), sort_keys=True, separators=(",", ":"), ensure_ascii=False)
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()
