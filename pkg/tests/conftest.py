import sys
from pathlib import Path

import pytest

PROJECT_ROOT = Path(__file__).resolve().parents[1]
if str(PROJECT_ROOT) not in sys.path:
    sys.path.insert(0, str(PROJECT_ROOT))

from src.code.config import RunConfig


@pytest.fixture
def cfg() -> RunConfig:
    return RunConfig()


@pytest.fixture(autouse=True)
def _clean_env(monkeypatch):
    for name in (
        "INSTANTON_STRICT_TRUNCATION",
        "INSTANTON_NMAX",
        "INSTANTON_DEBUG_CHECKS",
        "INSTANTON_PARALLEL",
        "INSTANTON_LOG_LEVEL",
    ):
        monkeypatch.delenv(name, raising=False)
