"""
cosmkit 오류 계층 - 모든 오류는 code / message / path 로 직렬화
"""

from typing import Any, Dict, List, Optional


class CosmError(Exception):
    """도메인 오류 기본 클래스"""

    code = "cosm_error"

    def __init__(self, message: str, path: str = "", code: Optional[str] = None):
        super().__init__(message)
        self.message = message
        self.path = path
        if code is not None:
            self.code = code

    def to_dict(self) -> Dict[str, Any]:
        return {"code": self.code, "message": self.message, "path": self.path}


class SystemValidationError(CosmError):
    """시스템 문서 검증 실패 (여러 위반을 묶어서 보고)"""

    code = "invalid_system"

    def __init__(self, message: str, path: str = "", code: Optional[str] = None,
                 violations: Optional[List[Dict[str, Any]]] = None):
        super().__init__(message, path, code)
        self.violations = violations or []

    def to_dict(self) -> Dict[str, Any]:
        data = super().to_dict()
        if self.violations:
            data["violations"] = self.violations
        return data


class UnknownEntityError(CosmError):
    code = "unknown_entity"


class UnknownMeasureError(CosmError):
    code = "unknown_measure"


class ExpressionError(CosmError):
    """표현식 파싱/평가 실패"""
    code = "invalid_expression"


class CapExceededError(CosmError):
    """설정된 상한(엔티티 수, 레이블 수 등) 초과"""
    code = "cap_exceeded"


class UndefinedIntensityError(CosmError):
    code = "undefined_intensity"


class NoSuchDecompositionError(CosmError):
    code = "no_such_decomposition"


class AssociativityViolationError(CosmError):
    code = "associativity_violation"


class GammaMissingError(CosmError):
    code = "gamma_missing"


class ParameterError(CosmError):
    """파라미터 범위 오류"""
    code = "parameter_out_of_range"
