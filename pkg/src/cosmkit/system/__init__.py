"""
조합 시스템 - 정의, 로드, 검증, 생성
"""

from .filtration import FiltrationReport, validate_filtration
from .generators import generate_builtin
from .loader import load_system, load_system_file, serialize_system, system_fingerprint, system_from_dict
from .model import (
    IDENTITY,
    AutoOp,
    CombinationalSystem,
    GammaSpec,
    MeasureSpec,
    OperatorSpec,
    Reaction,
)

__all__ = [
    "IDENTITY",
    "AutoOp",
    "CombinationalSystem",
    "FiltrationReport",
    "GammaSpec",
    "MeasureSpec",
    "OperatorSpec",
    "Reaction",
    "generate_builtin",
    "load_system",
    "load_system_file",
    "serialize_system",
    "system_fingerprint",
    "system_from_dict",
    "validate_filtration",
]
