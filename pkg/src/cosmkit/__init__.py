"""
cosmkit - 유한 조합 시스템의 조합적 단순성 계산
단순성, 번들, 패턴, 서브패턴 계층, 메트릭, 이중 네트워크 정합도
"""

__version__ = "0.1.0"
__description__ = "Compositional simplicity toolkit for finite combinational systems"

from .core.config import CosmConfig
from .core.errors import CosmError
from .cosm.engine import CosmEngine
from .cosmos.bundle import CosmosEngine
from .pattern.intensity import PatternEngine
from .system.loader import load_system, load_system_file

__all__ = [
    "CosmConfig",
    "CosmEngine",
    "CosmError",
    "CosmosEngine",
    "PatternEngine",
    "load_system",
    "load_system_file",
]
