"""
cosmkit 설정 관리
"""

import os
from fractions import Fraction
from pathlib import Path
from typing import Annotated, Any, Dict, Optional

import yaml
from pydantic import BaseModel, BeforeValidator, ConfigDict, Field, PlainSerializer, field_validator

from .rational import format_cost, parse_rational


Rational = Annotated[
    Fraction,
    BeforeValidator(parse_rational),
    PlainSerializer(format_cost, return_type=str),
]


class EngineConfig(BaseModel):
    """엔진 공통 설정"""
    workers: int = Field(default=1, description="병렬 워커 수 (1이면 순차 실행)")
    use_cache: bool = Field(default=True, description="디스크 캐시 사용 여부")
    cache_dir: Optional[str] = Field(default=None, description="캐시 디렉토리 (COSMKIT_CACHE_DIR 우선)")

    @field_validator("workers")
    @classmethod
    def _check_workers(cls, value: int) -> int:
        if value < 1:
            raise ValueError("workers 는 1 이상이어야 합니다")
        return value


class SolverConfig(BaseModel):
    """탐색 상한 설정"""
    multiset_exact_cap: int = Field(default=14, description="정확 멀티셋 솔버의 최대 엔티티 수")
    oracle_entity_cap: int = Field(default=14, description="오라클 전수 열거의 최대 엔티티 수")
    oracle_label_cap: int = Field(default=4096, description="오라클 번들 열거의 엔티티당 최대 벡터 수")
    oracle_reaction_cap: int = Field(default=18, description="공유 계획 오라클의 최대 반응 수")
    bundle_label_cap: int = Field(default=64, description="번들 레이블 상한 (초과 시 실패)")


class PatternConfig(BaseModel):
    """패턴 엔진 설정"""
    denominator: str = Field(default="per-measure", description="패턴 벡터 분모 (per-measure, base)")
    extended_measure: int = Field(default=2, description="패턴 강도의 확장 측도 번호 (1부터)")

    @field_validator("denominator")
    @classmethod
    def _check_denominator(cls, value: str) -> str:
        if value not in ("per-measure", "base"):
            raise ValueError("denominator 는 per-measure 또는 base 입니다")
        return value


class HierarchyConfig(BaseModel):
    """서브패턴 계층 설정"""
    positions: str = Field(default="left", description="x 의 피연산자 위치 (left, both)")
    relation: str = Field(default="subpattern", description="관계 종류 (subpattern, submultipattern)")
    chain_entity_cap: int = Field(default=60, description="전수 체인 검사 최대 엔티티 수")
    sample_size: int = Field(default=2000, description="샘플링 모드의 체인 수")

    @field_validator("positions")
    @classmethod
    def _check_positions(cls, value: str) -> str:
        if value not in ("left", "both"):
            raise ValueError("positions 는 left 또는 both 입니다")
        return value

    @field_validator("relation")
    @classmethod
    def _check_relation(cls, value: str) -> str:
        if value not in ("subpattern", "submultipattern"):
            raise ValueError("relation 은 subpattern 또는 submultipattern 입니다")
        return value


class MetricConfig(BaseModel):
    """메트릭 설정"""
    model_config = ConfigDict(arbitrary_types_allowed=True)

    alpha: Rational = Field(default=Fraction(1, 2), description="합성 메트릭의 내포 가중치")
    construction: str = Field(default="tanimoto", description="메트릭 구성 (tanimoto, hutchinson)")

    @field_validator("alpha")
    @classmethod
    def _check_alpha(cls, value: Fraction) -> Fraction:
        if not 0 <= value <= 1:
            raise ValueError("alpha 는 [0,1] 범위여야 합니다")
        return value


class DualNetConfig(BaseModel):
    """이중 네트워크 설정"""
    model_config = ConfigDict(arbitrary_types_allowed=True)

    k: Rational = Field(default=Fraction(1), description="성격 파라미터 k (>0)")
    membership: str = Field(default="similarity", description="소속도 극성 (similarity, distance)")
    initial_d_i: str = Field(default="tanimoto", description="고정점 반복 시작 메트릭 (tanimoto, lmi)")
    max_iter: int = Field(default=10, description="최대 반복 수")
    tolerance: Rational = Field(default=Fraction(0), description="수렴 허용 오차")

    @field_validator("k")
    @classmethod
    def _check_k(cls, value: Fraction) -> Fraction:
        if value <= 0:
            raise ValueError("k 는 양수여야 합니다")
        return value


class LoggingConfig(BaseModel):
    """로깅 설정"""
    level: str = Field(default="WARNING", description="로그 레벨")


class CosmConfig(BaseModel):
    """cosmkit 전체 설정"""
    model_config = ConfigDict(arbitrary_types_allowed=True)

    engine: EngineConfig = Field(default_factory=EngineConfig)
    solver: SolverConfig = Field(default_factory=SolverConfig)
    pattern: PatternConfig = Field(default_factory=PatternConfig)
    hierarchy: HierarchyConfig = Field(default_factory=HierarchyConfig)
    metric: MetricConfig = Field(default_factory=MetricConfig)
    dualnet: DualNetConfig = Field(default_factory=DualNetConfig)
    logging: LoggingConfig = Field(default_factory=LoggingConfig)

    @classmethod
    def load_from_file(cls, filepath: Optional[Path] = None) -> "CosmConfig":
        """파일에서 설정 로드"""
        if filepath is None:
            filepath = Path("config.yaml")
        filepath = Path(filepath)

        if not filepath.exists():
            raise FileNotFoundError(f"설정 파일을 찾을 수 없습니다: {filepath}")

        with open(filepath, 'r', encoding='utf-8') as f:
            data = yaml.safe_load(f) or {}

        return cls(**data)

    def save_to_file(self, filepath: Optional[Path] = None):
        """설정을 파일로 저장"""
        if filepath is None:
            filepath = Path("config.yaml")
        filepath = Path(filepath)

        # 디렉토리 생성
        filepath.parent.mkdir(parents=True, exist_ok=True)

        # YAML로 저장
        with open(filepath, 'w', encoding='utf-8') as f:
            yaml.dump(
                self.model_dump(),
                f,
                default_flow_style=False,
                allow_unicode=True,
                indent=2
            )

    @classmethod
    def create_default(cls) -> "CosmConfig":
        """기본 설정 생성"""
        return cls()

    @classmethod
    def from_environment(cls, filepath: Optional[Path] = None) -> "CosmConfig":
        """설정 파일 + 환경 변수 (COSMKIT_CONFIG, COSMKIT_CACHE_DIR, COSMKIT_THREADS)"""
        if filepath is None and os.environ.get("COSMKIT_CONFIG"):
            filepath = Path(os.environ["COSMKIT_CONFIG"])
        if filepath is not None:
            config = cls.load_from_file(filepath)
        elif Path("config.yaml").exists():
            config = cls.load_from_file(Path("config.yaml"))
        else:
            config = cls.create_default()

        overrides: Dict[str, Any] = {}
        if os.environ.get("COSMKIT_CACHE_DIR"):
            overrides["cache_dir"] = os.environ["COSMKIT_CACHE_DIR"]
        if os.environ.get("COSMKIT_THREADS"):
            overrides["workers"] = int(os.environ["COSMKIT_THREADS"])
        if overrides:
            config.engine = config.engine.model_copy(update=overrides)
        return config

    def cache_directory(self) -> Optional[Path]:
        """디스크 캐시 디렉토리 (비활성이면 None)"""
        if not self.engine.use_cache or not self.engine.cache_dir:
            return None
        return Path(self.engine.cache_dir)
