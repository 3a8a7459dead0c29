"""
메트릭 엔진 - 내포/외연, Tanimoto, Q 분포, Hutchinson 수송 메트릭
"""

from .tanimoto import (
    EXTENSION,
    HUTCHINSON,
    INTENSION,
    TANIMOTO,
    MetricTable,
    QDistribution,
    composite,
    intension_extension,
    q_distribution,
    rank_correlation,
    tanimoto_distance,
    tanimoto_metrics,
    tanimoto_tables,
)
from .transport import hutchinson_distance, hutchinson_metrics

__all__ = [
    "EXTENSION",
    "HUTCHINSON",
    "INTENSION",
    "TANIMOTO",
    "MetricTable",
    "QDistribution",
    "composite",
    "hutchinson_distance",
    "hutchinson_metrics",
    "intension_extension",
    "q_distribution",
    "rank_correlation",
    "tanimoto_distance",
    "tanimoto_metrics",
    "tanimoto_tables",
]
