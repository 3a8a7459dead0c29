"""
cosmkit 핵심 모듈 - 설정, 정확한 비용, 오류, 로깅, 워커 풀
"""

from .config import CosmConfig
from .errors import CosmError
from .rational import INF, Cost, format_cost, parse_rational

__all__ = ["CosmConfig", "CosmError", "INF", "Cost", "format_cost", "parse_rational"]
