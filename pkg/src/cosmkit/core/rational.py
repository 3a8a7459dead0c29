"""
정확한 유리수 비용 - 음이 아닌 확장 유리수 (p/q 또는 무한대)
"""

import math
from fractions import Fraction
from typing import Any, Iterable, Union

# 무한대는 float inf 하나로 표현 (Fraction 과의 비교/덧셈이 정확히 동작)
INF = math.inf

Cost = Union[Fraction, float]


def parse_rational(value: Any) -> Fraction:
    """정수, "p/q" 문자열, Fraction 을 Fraction 으로 변환"""
    if isinstance(value, bool):
        raise ValueError(f"유리수가 아닙니다: {value!r}")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        text = value.strip()
        if not text or any(ch.isspace() for ch in text):
            raise ValueError(f"유리수 형식이 잘못되었습니다: {value!r}")
        if "." in text or "e" in text.lower():
            raise ValueError(f"소수 표기는 허용되지 않습니다: {value!r}")
        try:
            return Fraction(text)
        except (ValueError, ZeroDivisionError) as e:
            raise ValueError(f"유리수 형식이 잘못되었습니다: {value!r}") from e
    raise ValueError(f"유리수가 아닙니다: {value!r}")


def parse_cost(value: Any) -> Cost:
    """비용 파싱 ("inf" 허용)"""
    if isinstance(value, float) and math.isinf(value) and value > 0:
        return INF
    if isinstance(value, str) and value.strip().lower() == "inf":
        return INF
    return parse_rational(value)


def is_finite(cost: Cost) -> bool:
    return not (isinstance(cost, float) and math.isinf(cost))


def format_cost(cost: Cost) -> str:
    """비용을 "p/q", "p" 또는 "inf" 문자열로"""
    if not is_finite(cost):
        return "inf" if cost > 0 else "-inf"
    value = Fraction(cost)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def to_json_number(value: Fraction) -> Union[int, str]:
    """시스템 문서용 표기: 정수는 정수로, 나머지는 "p/q" 문자열"""
    value = Fraction(value)
    if value.denominator == 1:
        return value.numerator
    return f"{value.numerator}/{value.denominator}"


def cost_sum(costs: Iterable[Cost]) -> Cost:
    total: Cost = Fraction(0)
    for cost in costs:
        if not is_finite(cost):
            return INF
        total += cost
    return total


def lcm_of_denominators(values: Iterable[Fraction]) -> int:
    result = 1
    for value in values:
        result = math.lcm(result, Fraction(value).denominator)
    return result


class GeometricMean:
    """기하평균의 정확한 표현: radicand ** (1/root)"""

    def __init__(self, radicand: Fraction, root: int):
        self.radicand = Fraction(radicand)
        self.root = root

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, GeometricMean):
            return NotImplemented
        # a^(1/m) == b^(1/n)  <=>  a^n == b^m
        return self.radicand ** other.root == other.radicand ** self.root

    __hash__ = None

    def __repr__(self) -> str:
        return f"GeometricMean({format_cost(self.radicand)}, root={self.root})"

    def to_dict(self) -> dict:
        return {"radicand": format_cost(self.radicand), "root": self.root}
