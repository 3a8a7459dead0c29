"""
명령줄 인터페이스와 오라클 대조
"""

from .commands import build_parser, run
from .oracle_check import Mismatch, OracleCheckReport, oracle_check

__all__ = ["Mismatch", "OracleCheckReport", "build_parser", "oracle_check", "run"]
