"""
서브패턴 계층 - x ≤ y ⟺ max_z I_{x,z}(y|w) > 0

그래프는 모든 (x, y) 쌍의 최대 강도와 그 증인(z, op)을 보관하고, 양수인 쌍만 간선으로 본다.
≤ 는 양의 강도 관계의 반사적 폐포 (항등 증인의 강도는 정확히 0).
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

import networkx as nx
import numpy as np

from ..core.config import CosmConfig
from ..core.errors import ParameterError, UndefinedIntensityError
from ..core.pool import ordered_map
from ..core.rational import INF, Cost, format_cost
from ..pattern.intensity import PatternEngine, submultipattern_score
from ..system.model import IDENTITY, CombinationalSystem, Reaction

LEFT = "left"
BOTH = "both"
SUBPATTERN = "subpattern"
SUBMULTIPATTERN = "submultipattern"

REFLEXIVE_NOTE = "≤ 는 양의 강도 관계의 반사적 폐포 (항등 증인 e 의 강도는 0)"


@dataclass(frozen=True)
class SubpatternEdge:
    """쌍 (x, y) 의 최대 강도와 증인"""
    x: str
    y: str
    witness: str
    op: str
    intensity: Fraction

    def to_dict(self) -> Dict[str, object]:
        return {
            "x": self.x,
            "y": self.y,
            "witness": self.witness,
            "op": self.op,
            "intensity": format_cost(self.intensity),
        }


@dataclass
class SubpatternGraph:
    nodes: Tuple[str, ...]
    context: str
    positions: str
    relation: str
    scores: Dict[Tuple[str, str], SubpatternEdge] = field(default_factory=dict)

    def __post_init__(self):
        self._rank = {x: i for i, x in enumerate(self.nodes)}
        self._edges = sorted(
            (s for s in self.scores.values() if s.x != s.y and s.intensity > 0),
            key=lambda s: (self._rank[s.x], self._rank[s.y]),
        )
        self._successors: Dict[str, List[str]] = {x: [] for x in self.nodes}
        for edge in self._edges:
            self._successors[edge.x].append(edge.y)

    @property
    def edges(self) -> List[SubpatternEdge]:
        return list(self._edges)

    def q(self, x: str, y: str) -> Optional[Fraction]:
        """Q(x, y) = max_z I_{x,z}(y|w) (분해가 없으면 None)"""
        score = self.scores.get((x, y))
        return score.intensity if score else None

    def strictly_below(self, x: str, y: str) -> bool:
        return x != y and (self.q(x, y) or 0) > 0

    def leq(self, x: str, y: str) -> bool:
        return x == y or self.strictly_below(x, y)

    def successors(self, x: str) -> List[str]:
        return list(self._successors.get(x, ()))

    def without(self, entity: str) -> "SubpatternGraph":
        """entity 와 그 간선을 뺀 그래프"""
        nodes = tuple(x for x in self.nodes if x != entity)
        scores = {
            pair: s for pair, s in self.scores.items()
            if entity not in (s.x, s.y, s.witness)
        }
        return SubpatternGraph(nodes, self.context, self.positions, self.relation, scores)

    def to_dict(self) -> Dict[str, object]:
        return {
            "context": self.context,
            "positions": self.positions,
            "relation": self.relation,
            "nodes": list(self.nodes),
            "edges": [e.to_dict() for e in self._edges],
        }


def _pattern_score(engine: PatternEngine, reaction: Reaction, y: str, w: str, relation: str) -> Optional[Fraction]:
    try:
        if relation == SUBPATTERN:
            return engine.pattern_intensity(reaction.left, reaction.right, reaction.op, y, w)
        return submultipattern_score(engine.record(reaction, y, w))
    except UndefinedIntensityError:
        return None


def build_subpattern_graph(system: CombinationalSystem, config: Optional[CosmConfig] = None, w: str = IDENTITY,
                           positions: Optional[str] = None, relation: Optional[str] = None,
                           engine: Optional[PatternEngine] = None,
                           logger: Optional[logging.Logger] = None) -> SubpatternGraph:
    """모든 순서쌍에 대해 증인별 강도의 최댓값을 계산"""
    config = config or CosmConfig.create_default()
    logger = logger or logging.getLogger(__name__)
    positions = positions or config.hierarchy.positions
    relation = relation or config.hierarchy.relation
    if positions not in (LEFT, BOTH):
        raise ParameterError(f"알 수 없는 위치 정책: {positions}", path="positions")
    if relation not in (SUBPATTERN, SUBMULTIPATTERN):
        raise ParameterError(f"알 수 없는 관계: {relation}", path="relation")

    system.require_entity(w, path="context")
    engine = engine or PatternEngine(system, config, logger=logger)
    engine.require_measures()
    # 병렬 구간 전에 표를 채워 둔다
    for j in range(1, system.measure_count + 1):
        engine.sigma(j, system.identity, w)

    def target_scores(y: str) -> List[SubpatternEdge]:
        found = []
        for reaction in system.producers(y):
            score = _pattern_score(engine, reaction, y, w, relation)
            if score is None:
                continue
            found.append(SubpatternEdge(reaction.left, y, reaction.right, reaction.op, score))
            if positions == BOTH:
                found.append(SubpatternEdge(reaction.right, y, reaction.left, reaction.op, score))
        return found

    scores: Dict[Tuple[str, str], SubpatternEdge] = {}
    for found in ordered_map(target_scores, system.entities, config.engine.workers):
        for candidate in found:
            best = scores.get((candidate.x, candidate.y))
            if best is None or candidate.intensity > best.intensity:
                scores[(candidate.x, candidate.y)] = candidate

    graph = SubpatternGraph(system.entities, w, positions, relation, scores)
    logger.info(f"서브패턴 그래프: 노드 {len(graph.nodes)}개, 간선 {len(graph.edges)}개 ({relation}, {positions})")
    return graph


@dataclass
class OrderDiagnostics:
    antisymmetry_violations: List[Tuple[str, str]]
    transitivity_defect: Cost
    worst_chain: Optional[Tuple[str, str, str]]
    chains_checked: int
    exhaustive: bool
    reflexive_note: str = REFLEXIVE_NOTE

    @property
    def antisymmetric(self) -> bool:
        return not self.antisymmetry_violations

    def to_dict(self) -> Dict[str, object]:
        return {
            "antisymmetryViolations": [list(p) for p in self.antisymmetry_violations],
            "transitivityDefect": format_cost(self.transitivity_defect),
            "worstChain": list(self.worst_chain) if self.worst_chain else None,
            "chainsChecked": self.chains_checked,
            "exhaustive": self.exhaustive,
            "reflexiveNote": self.reflexive_note,
        }


def chain_defect(graph: SubpatternGraph, x: str, z: str) -> Cost:
    """max(0, −max_w I_{x,w}(z)), 분해가 없으면 ∞"""
    if x == z:
        return Fraction(0)
    q = graph.q(x, z)
    if q is None:
        return INF
    return max(Fraction(0), -q)


def order_diagnostics(graph: SubpatternGraph, system: CombinationalSystem, chain_entity_cap: int = 60,
                      sample_size: int = 2000, seed: int = 0, workers: int = 1,
                      logger: Optional[logging.Logger] = None) -> OrderDiagnostics:
    """반대칭 위반 목록과 체인 x≤y≤z 전체의 c_obs"""
    logger = logger or logging.getLogger(__name__)
    edges = graph.edges

    violations = [
        (e.x, e.y) for e in edges
        if system.position(e.x) < system.position(e.y) and graph.strictly_below(e.y, e.x)
    ]

    worst: Cost = Fraction(0)
    worst_chain: Optional[Tuple[str, str, str]] = None
    checked = 0
    exhaustive = len(system.entities) <= chain_entity_cap

    if exhaustive:
        def scan(edge: SubpatternEdge) -> Tuple[int, Cost, Optional[Tuple[str, str, str]]]:
            count, local, chain = 0, Fraction(0), None
            for z in graph.successors(edge.y):
                count += 1
                defect = chain_defect(graph, edge.x, z)
                if defect > local:
                    local, chain = defect, (edge.x, edge.y, z)
            return count, local, chain

        for count, local, chain in ordered_map(scan, edges, workers):
            checked += count
            if local > worst:
                worst, worst_chain = local, chain
    elif edges:
        if sample_size < 1:
            raise ParameterError("sample_size 는 1 이상이어야 합니다", path="hierarchy.sample_size")
        rng = np.random.default_rng(seed)
        for _ in range(sample_size):
            edge = edges[int(rng.integers(len(edges)))]
            above = graph.successors(edge.y)
            if not above:
                continue
            z = above[int(rng.integers(len(above)))]
            checked += 1
            defect = chain_defect(graph, edge.x, z)
            if defect > worst:
                worst, worst_chain = defect, (edge.x, edge.y, z)
        logger.warning(f"엔티티 {len(system.entities)}개 > 상한 {chain_entity_cap}: 체인 {checked}개 샘플링 (seed={seed})")

    if violations:
        logger.warning(f"반대칭 위반 {len(violations)}건")
    logger.debug(f"체인 {checked}개 검사, c_obs = {format_cost(worst)}")
    return OrderDiagnostics(violations, worst, worst_chain, checked, exhaustive)


def to_dot(graph: SubpatternGraph) -> str:
    """추이 축약 (순환이 있으면 모든 간선) 을 강도 라벨과 함께 DOT 로"""
    digraph = nx.DiGraph()
    digraph.add_nodes_from(graph.nodes)
    labels = {}
    for edge in graph.edges:
        digraph.add_edge(edge.x, edge.y)
        labels[(edge.x, edge.y)] = format_cost(edge.intensity)

    if nx.is_directed_acyclic_graph(digraph):
        drawn = nx.transitive_reduction(digraph)
    else:
        drawn = digraph

    def quote(x: str) -> str:
        return '"' + x.replace('"', '\\"') + '"'

    lines = ["digraph subpatterns {"]
    for x in graph.nodes:
        lines.append(f"  {quote(x)};")
    for edge in graph.edges:
        if drawn.has_edge(edge.x, edge.y):
            lines.append(f"  {quote(edge.x)} -> {quote(edge.y)} [label=\"{labels[(edge.x, edge.y)]}\"];")
    lines.append("}")
    return "\n".join(lines) + "\n"
