"""
단일 측도 단순성 엔진 - σ, σ(x|w), σ!, 멀티셋 단순성과 메모/디스크 캐시
"""

import hashlib
import json
import logging
import threading
from pathlib import Path
from typing import Dict, Mapping, Optional, Tuple

from ..core.config import CosmConfig
from ..core.errors import ParameterError
from ..core.rational import Cost, format_cost, is_finite, parse_cost
from ..system.loader import system_fingerprint
from ..system.model import IDENTITY, CombinationalSystem, MeasureRef
from . import expression as expr_ops
from .expression import Expression
from .fixpoint import (
    FREE,
    LITERAL,
    MODES,
    SEQUENCE,
    FixpointTable,
    absolute_table,
    free_context_table,
    literal_table,
)
from .multiset import EXACT, PlanResult, SharedPlanSolver, multiset_simplicity
from .oracle import oracle_simplicity

MemoKey = Tuple[str, int, str, str]


class CosmEngine:
    """시스템 하나에 대한 CoSM 질의 (지문 기준 메모)"""

    def __init__(self, system: CombinationalSystem, config: Optional[CosmConfig] = None,
                 logger: Optional[logging.Logger] = None):
        self.system = system
        self.config = config or CosmConfig.create_default()
        self.logger = logger or logging.getLogger(__name__)
        self.fingerprint = system_fingerprint(system)

        self._memo: Dict[MemoKey, Dict[str, Cost]] = {}
        self._lock = threading.Lock()
        self.cache_dir: Optional[Path] = self.config.cache_directory()

        self.stats = {
            "fixpoint_runs": 0,
            "memo_hits": 0,
            "disk_hits": 0,
            "plan_searches": 0,
        }

    # --- 메모 ---

    def _key(self, measure: MeasureRef, context: str, mode: str) -> MemoKey:
        if mode not in MODES:
            raise ParameterError(f"알 수 없는 모드: {mode} (가능: {', '.join(MODES)})", path="mode")
        self.system.require_entity(context, path="context")
        return (self.fingerprint, self.system.measure_index(measure), context, mode)

    def _cache_file(self, key: MemoKey) -> Optional[Path]:
        if self.cache_dir is None:
            return None
        digest = hashlib.sha256(":".join(map(str, key)).encode("utf-8")).hexdigest()[:32]
        return self.cache_dir / f"{digest}.json"

    def _load_disk(self, key: MemoKey) -> Optional[Dict[str, Cost]]:
        path = self._cache_file(key)
        if path is None or not path.exists():
            return None
        try:
            with open(path, 'r', encoding='utf-8') as f:
                data = json.load(f)
            if data.get("key") != list(key):
                return None
            return {x: parse_cost(v) for x, v in data["values"].items()}
        except (OSError, ValueError, KeyError) as e:
            self.logger.warning(f"캐시 파일 무시: {path} ({e})")
            return None

    def _save_disk(self, key: MemoKey, values: Mapping[str, Cost]):
        path = self._cache_file(key)
        if path is None:
            return
        try:
            path.parent.mkdir(parents=True, exist_ok=True)
            with open(path, 'w', encoding='utf-8') as f:
                json.dump({"key": list(key), "values": {x: format_cost(c) for x, c in values.items()}},
                          f, sort_keys=True)
        except OSError as e:
            self.logger.warning(f"캐시 저장 실패: {path} ({e})")

    def clear_cache(self):
        with self._lock:
            self._memo.clear()

    def override_memo(self, measure: MeasureRef, x: str, value: Cost, context: str = IDENTITY,
                      mode: str = FREE):
        """테스트용 훅: 메모 값을 강제로 바꾼다"""
        values = dict(self.table(measure, context, mode))
        values[x] = value
        with self._lock:
            self._memo[self._key(measure, context, mode)] = values

    # --- 표 ---

    def _fixpoint(self, measure: MeasureRef, context: str, mode: str) -> FixpointTable:
        spec = self.system.measure(measure)
        if mode == LITERAL:
            return literal_table(self.system, spec, context)
        if context == IDENTITY:
            return absolute_table(self.system, spec)
        return free_context_table(self.system, spec, context)

    def _compute(self, measure: MeasureRef, context: str, mode: str) -> Dict[str, Cost]:
        if mode != SEQUENCE:
            self.stats["fixpoint_runs"] += 1
            return dict(self._fixpoint(measure, context, mode).values)

        spec = self.system.measure(measure)
        solver = SharedPlanSolver(self.system, spec, context, self.logger, reuse_atoms=True)
        values = {}
        for x in self.system.entities:
            self.stats["plan_searches"] += 1
            values[x] = solver.exact([x], self.config.solver.multiset_exact_cap).value
        return values

    def table(self, measure: MeasureRef = 1, context: str = IDENTITY, mode: str = FREE) -> Dict[str, Cost]:
        """엔티티 전체의 σ_j(·|w) 표"""
        key = self._key(measure, context, mode)
        with self._lock:
            cached = self._memo.get(key)
            if cached is not None:
                self.stats["memo_hits"] += 1
                return cached

        values = self._load_disk(key)
        if values is not None:
            self.stats["disk_hits"] += 1
        else:
            values = self._compute(measure, context, mode)
            self._save_disk(key, values)

        with self._lock:
            self._memo.setdefault(key, values)
            return self._memo[key]

    # --- 질의 ---

    def simplicity(self, measure: MeasureRef, x: str) -> Cost:
        """σ_j(x)"""
        self.system.require_entity(x)
        return self.table(measure)[x]

    def relative_simplicity(self, measure: MeasureRef, x: str, w: str = IDENTITY, mode: str = FREE) -> Cost:
        """σ_j(x|w) (free: w 무비용 원천, literal: 표시식 그대로, sequence: 공유 계획)"""
        self.system.require_entity(x)
        return self.table(measure, w, mode)[x]

    def witness(self, measure: MeasureRef, x: str, w: str = IDENTITY, mode: str = FREE) -> Optional[Expression]:
        """최소 비용 유도 트리 (sequence 모드는 계획으로 보고하므로 None)"""
        self.system.require_entity(x)
        self._key(measure, w, mode)
        if mode == SEQUENCE:
            return None
        table = self._fixpoint(measure, w, mode)
        if not is_finite(table[x]):
            return None
        absolute = absolute_table(self.system, self.system.measure(measure)) if table.seeded else None
        return _tree(table, x, w, absolute)

    def evaluate(self, expr: Expression) -> str:
        return expr_ops.evaluate(self.system, expr)

    def expression_cost(self, measure: MeasureRef, expr: Expression) -> Cost:
        """σ!_j(E)"""
        return expr_ops.expression_cost(self.system, measure, expr, self.table(measure))

    def vector_expression_cost(self, expr: Expression) -> Tuple[Cost, ...]:
        """μ⃗!(E)"""
        return tuple(self.expression_cost(j, expr) for j in range(1, self.system.measure_count + 1))

    def multiset_simplicity(self, measure: MeasureRef, elements: Mapping[str, int], solver: str = EXACT,
                            context: str = IDENTITY) -> PlanResult:
        self.system.require_entity(context, path="context")
        self.stats["plan_searches"] += 1
        return multiset_simplicity(self.system, self.system.measure(measure), elements, solver, context,
                                   self.config.solver.multiset_exact_cap, self.logger)

    def sequence_plan(self, measure: MeasureRef, x: str, w: str = IDENTITY) -> PlanResult:
        """순서 모드의 최소 계획 (원자는 한 번만 낸다)"""
        self.system.require_entity(x)
        self._key(measure, w, SEQUENCE)
        self.stats["plan_searches"] += 1
        solver = SharedPlanSolver(self.system, self.system.measure(measure), w, self.logger, reuse_atoms=True)
        return solver.exact([x], self.config.solver.multiset_exact_cap)

    def multiset_vector(self, elements: Mapping[str, int], solver: str = EXACT) -> Tuple[Cost, ...]:
        """측도별 멀티셋 비용 벡터"""
        return tuple(self.multiset_simplicity(j, elements, solver).value
                     for j in range(1, self.system.measure_count + 1))

    def oracle_simplicity(self, measure: MeasureRef, x: str, w: str = IDENTITY, mode: str = FREE) -> Cost:
        self._key(measure, w, mode)
        return oracle_simplicity(self.system, self.system.measure(measure), x, w, mode,
                                 self.config.solver.oracle_entity_cap, self.config.solver.oracle_reaction_cap)


def _tree(table: FixpointTable, x: str, context: str, absolute: Optional[FixpointTable]) -> Expression:
    if x in table.seeded:
        reaction = table.seeded[x]
        left = Expression.leaf(context) if reaction.left == context else _tree(absolute, reaction.left, context, None)
        right = Expression.leaf(context) if reaction.right == context else _tree(absolute, reaction.right, context, None)
        return Expression.node(reaction.op, left, right, reaction.products.index(x) + 1)

    reaction = table.via.get(x)
    if reaction is None:
        return Expression.leaf(x)
    return Expression.node(
        reaction.op,
        _tree(table, reaction.left, context, absolute),
        _tree(table, reaction.right, context, absolute),
        reaction.products.index(x) + 1,
    )
