"""
패턴 엔진 - 강도, 패턴 벡터, 멀티패턴 프런티어
"""

from .intensity import (
    BASE,
    FULL,
    MIXED,
    NONE,
    PER_MEASURE,
    UNDEFINED,
    PatternEngine,
    PatternRecord,
    classify_multipattern,
    oracle_frontier,
    submultipattern_score,
)

__all__ = [
    "BASE",
    "FULL",
    "MIXED",
    "NONE",
    "PER_MEASURE",
    "UNDEFINED",
    "PatternEngine",
    "PatternRecord",
    "classify_multipattern",
    "oracle_frontier",
    "submultipattern_score",
]
