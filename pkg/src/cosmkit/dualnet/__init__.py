"""
이중 네트워크 엔진 - 손실 멀티패턴 프런티어, LMI 거리, 정합도와 고정점 반복
"""

from .coherence import CoherenceReport, coherence_degree, fixed_point_iteration, sup_change
from .lossy import (
    DISTANCE,
    SIMILARITY,
    FuzzySet,
    LossyFrontier,
    LossyMember,
    fuzzy_intensions,
    fuzzy_tanimoto,
    lmi_distance,
    lmi_intension,
    lossy_frontier,
    proximity,
)

__all__ = [
    "DISTANCE",
    "SIMILARITY",
    "CoherenceReport",
    "FuzzySet",
    "LossyFrontier",
    "LossyMember",
    "coherence_degree",
    "fixed_point_iteration",
    "fuzzy_intensions",
    "fuzzy_tanimoto",
    "lmi_distance",
    "lmi_intension",
    "lossy_frontier",
    "proximity",
    "sup_change",
]
