"""
공용 픽스처 - 고정 예제 시스템과 캐시 없는 설정
"""

from pathlib import Path

import pytest

from cosmkit.core.config import CosmConfig
from cosmkit.system import fixtures

FIXTURE_DIR = Path(__file__).resolve().parent.parent / "fixtures"


@pytest.fixture(autouse=True)
def _clean_environment(monkeypatch):
    for name in ("COSMKIT_CONFIG", "COSMKIT_CACHE_DIR", "COSMKIT_THREADS"):
        monkeypatch.delenv(name, raising=False)


@pytest.fixture
def config():
    return CosmConfig.create_default()


@pytest.fixture
def toy1():
    return fixtures.toy1()


@pytest.fixture
def toy2():
    return fixtures.toy2()


@pytest.fixture
def str1():
    return fixtures.str1()


@pytest.fixture(scope="session")
def gamma3():
    return fixtures.gamma3()


@pytest.fixture
def anomaly():
    return fixtures.anomaly()


@pytest.fixture
def fixture_dir():
    return FIXTURE_DIR
