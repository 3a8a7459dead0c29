"""
Hutchinson (수송) 메트릭 - Q 분포 사이의 최소 비용 결합

질량과 바닥 거리를 공통 분모로 정수화한 뒤 networkx network_simplex 로 정확히 푼다.
"""

import logging
from fractions import Fraction
from typing import Optional

import networkx as nx

from ..core.errors import ParameterError
from ..core.rational import lcm_of_denominators
from ..structure.hierarchy import SubpatternGraph
from .tanimoto import (
    EXTENSION,
    HUTCHINSON,
    INTENSION,
    MetricTable,
    QDistribution,
    check_alpha,
    composite,
    q_distribution,
    tanimoto_metrics,
)


def hutchinson_distance(p: QDistribution, q: QDistribution, ground: MetricTable) -> Fraction:
    """min over couplings E[d(y, y')]"""
    for y in list(p.weights) + list(q.weights):
        ground.get(y, y)
    if not p.weights or not q.weights:
        raise ParameterError("빈 분포 사이의 수송 거리는 정의되지 않습니다", path="distribution")

    mass_scale = lcm_of_denominators(list(p.weights.values()) + list(q.weights.values()))
    distances = {(a, b): ground.get(a, b) for a in p.weights for b in q.weights}
    cost_scale = lcm_of_denominators(distances.values())

    flow = nx.DiGraph()
    for a, mass in p.weights.items():
        flow.add_node(("s", a), demand=-int(mass * mass_scale))
    for b, mass in q.weights.items():
        flow.add_node(("t", b), demand=int(mass * mass_scale))
    for (a, b), d in distances.items():
        flow.add_edge(("s", a), ("t", b), weight=int(d * cost_scale))

    total, _ = nx.network_simplex(flow)
    return Fraction(total, mass_scale * cost_scale)


def hutchinson_metrics(graph: SubpatternGraph, alpha: Fraction = Fraction(1, 2),
                       ground: Optional[MetricTable] = None, workers: int = 1,
                       logger: Optional[logging.Logger] = None) -> MetricTable:
    """α·W(Q_int) + (1−α)·W(Q_ext), 바닥 거리는 기본적으로 합성 Tanimoto"""
    logger = logger or logging.getLogger(__name__)
    check_alpha(alpha)
    ground = ground or tanimoto_metrics(graph, alpha, workers)
    intensions = {x: q_distribution(graph, x, INTENSION) for x in graph.nodes}
    extensions = {x: q_distribution(graph, x, EXTENSION) for x in graph.nodes}

    w_int = MetricTable.build(graph.nodes, lambda x, y: hutchinson_distance(intensions[x], intensions[y], ground),
                          INTENSION, workers=workers)
    w_ext = MetricTable.build(graph.nodes, lambda x, y: hutchinson_distance(extensions[x], extensions[y], ground),
                          EXTENSION, workers=workers)
    degenerate = sum(1 for dist in extensions.values() if dist.degenerate)
    logger.debug(f"수송 메트릭: 퇴화 외연 분포 {degenerate}개")
    return composite(w_int, w_ext, alpha, HUTCHINSON, workers)
