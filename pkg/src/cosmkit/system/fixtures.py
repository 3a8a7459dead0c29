"""
저장소 고정 예제 시스템 (TOY1, TOY2, STR1, 깊이 3 gamma, 문맥 비용 이상) 생성
"""

import logging
from pathlib import Path
from typing import Callable, Dict, List, Optional, Union

from .generators import GammaSystemParams, gamma_system
from .loader import serialize_system, system_from_dict
from .model import CombinationalSystem


def toy1() -> CombinationalSystem:
    """문자 a, b 와 연결 연산 하나: σ(ab)=3, σ(aba)=5"""
    return system_from_dict({
        "entities": ["e", "a", "b", "ab", "ba", "aba"],
        "atoms": ["a", "b"],
        "identity": "e",
        "operators": ["cat"],
        "reactions": [
            {"op": "cat", "left": "a", "right": "b", "products": ["ab"]},
            {"op": "cat", "left": "b", "right": "a", "products": ["ba"]},
            {"op": "cat", "left": "ab", "right": "a", "products": ["aba"]},
            {"op": "cat", "left": "a", "right": "ba", "products": ["aba"]},
        ],
        "measures": [
            {"id": "m1", "operators": ["cat"], "atom_costs": {"a": 1, "b": 1}, "op_costs": {"cat": 1}},
        ],
    })


def toy2() -> CombinationalSystem:
    """두 측도가 cat 을 1 대 2, sq 를 3 대 1 로 가격 매기는 시스템"""
    return system_from_dict({
        "entities": ["e", "a", "b", "aa", "ab", "aaaa"],
        "atoms": ["a", "b"],
        "identity": "e",
        "operators": ["cat", "sq"],
        "reactions": [
            {"op": "cat", "left": "a", "right": "a", "products": ["aa"]},
            {"op": "cat", "left": "a", "right": "b", "products": ["ab"]},
            {"op": "cat", "left": "aa", "right": "aa", "products": ["aaaa"]},
            {"op": "sq", "left": "aa", "right": "aa", "products": ["aaaa"]},
        ],
        "measures": [
            {"id": "m1", "operators": ["cat", "sq"], "atom_costs": {"a": 1, "b": 1},
             "op_costs": {"cat": 1, "sq": 3}},
            {"id": "m2", "operators": ["cat", "sq"], "atom_costs": {"a": 1, "b": 1},
             "op_costs": {"cat": 2, "sq": 1}},
        ],
    })


def str1() -> CombinationalSystem:
    """a 의 거듭 문자열 (최대 8): 기본 측도는 한 글자씩, 확장 측도는 sq 를 1/2 에 추가"""
    powers: List[str] = ["a" * n for n in range(1, 9)]
    reactions = [
        {"op": "cat", "left": "a" * n, "right": "a", "products": ["a" * (n + 1)]}
        for n in range(1, 8)
    ]
    reactions += [
        {"op": "sq", "left": "a" * n, "right": "a" * n, "products": ["a" * (2 * n)]}
        for n in range(1, 5)
    ]
    return system_from_dict({
        "entities": ["e"] + powers,
        "atoms": ["a"],
        "identity": "e",
        "operators": ["cat", "sq"],
        "reactions": reactions,
        "measures": [
            {"id": "m1", "operators": ["cat"], "atom_costs": {"a": 1}, "op_costs": {"cat": 1}},
            {"id": "m2", "operators": ["cat", "sq"], "atom_costs": {"a": 1},
             "op_costs": {"cat": 1, "sq": "1/2"}},
        ],
    })


def gamma3() -> CombinationalSystem:
    return gamma_system(GammaSystemParams(depth=3))


def anomaly() -> CombinationalSystem:
    """문맥 c 에서만 f(c,c) 가 비싸지는 시스템: literal 단일 비용과 공유 계획 집합 비용이 어긋난다"""
    return system_from_dict({
        "entities": ["e", "c", "x", "y", "p", "q", "z"],
        "atoms": ["c", "x", "y"],
        "identity": "e",
        "operators": ["f", "g", "h"],
        "reactions": [
            {"op": "f", "left": "c", "right": "c", "products": ["p", "q"]},
            {"op": "g", "left": "x", "right": "y", "products": ["p", "q"]},
            {"op": "h", "left": "p", "right": "q", "products": ["z"]},
        ],
        "measures": [
            {"id": "m1", "operators": ["f", "g", "h"], "atom_costs": {"c": 1, "x": 1, "y": 1},
             "op_costs": {"f": 1, "g": 20, "h": 1},
             "context_cost_overrides": [{"op": "f", "left": "c", "right": "c", "context": "c", "cost": 10}]},
            {"id": "m2", "operators": ["f", "g", "h"], "atom_costs": {"c": 1, "x": 1, "y": 1},
             "op_costs": {"f": 1, "g": 6, "h": 0}},
        ],
    })


FIXTURES: Dict[str, Callable[[], CombinationalSystem]] = {
    "toy1": toy1,
    "toy2": toy2,
    "str1": str1,
    "gamma3": gamma3,
    "anomaly": anomaly,
}


def write_fixtures(directory: Union[str, Path], logger: Optional[logging.Logger] = None) -> List[Path]:
    """고정 예제를 정규 JSON 으로 기록"""
    logger = logger or logging.getLogger(__name__)
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)

    written = []
    for name, build in FIXTURES.items():
        path = directory / f"{name}.json"
        with open(path, 'w', encoding='utf-8') as f:
            f.write(serialize_system(build()))
        written.append(path)
        logger.info(f"고정 예제 기록: {path}")
    return written
