"""
CoSMOS 엔진 - 단순성 번들과 파레토 유틸리티
"""

from .bundle import CosmosEngine, bundle, compute_bundles, oracle_bundle
from .pareto import (
    SimplicityBundle,
    bundle_dominates,
    covers,
    dominates,
    minkowski_sum,
    pareto_filter,
    pareto_front_max,
    weakly_dominates,
)

__all__ = [
    "CosmosEngine",
    "SimplicityBundle",
    "bundle",
    "bundle_dominates",
    "compute_bundles",
    "covers",
    "dominates",
    "minkowski_sum",
    "oracle_bundle",
    "pareto_filter",
    "pareto_front_max",
    "weakly_dominates",
]
