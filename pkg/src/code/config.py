"""运行配置：命令行参数优先，其次是 .env / 环境变量，最后是默认值。"""

from __future__ import annotations

import os
from dataclasses import dataclass, replace
from typing import Any

from src.code.invariants import DEFAULT_NMAX
from src.code.polycore import TruncationMode

MIN_NMAX = 4
OUTPUT_FORMATS = ("text", "json")


def env_flag(name: str, default: str = "false") -> bool:
    return os.getenv(name, default).strip().lower() in ("1", "true", "yes", "on")


@dataclass(frozen=True)
class RunConfig:
    """一次命令执行的全部开关。"""

    truncation: TruncationMode = TruncationMode.DEFAULT
    n_max: int = DEFAULT_NMAX
    output: str = "text"
    debug_checks: bool = False
    parallel: bool = False

    def __post_init__(self) -> None:
        object.__setattr__(self, "truncation", TruncationMode(self.truncation))
        if self.n_max < MIN_NMAX:
            raise ValueError(f"n_max must be at least {MIN_NMAX}, got {self.n_max}")
        if self.output not in OUTPUT_FORMATS:
            raise ValueError(f"unknown output format {self.output!r}")

    @classmethod
    def from_env(cls) -> "RunConfig":
        """读取 ``INSTANTON_*`` 环境变量（调用前应已 load_dotenv）。"""
        strict = env_flag("INSTANTON_STRICT_TRUNCATION")
        return cls(
            truncation=TruncationMode.STRICT if strict else TruncationMode.DEFAULT,
            n_max=int(os.getenv("INSTANTON_NMAX", str(DEFAULT_NMAX))),
            debug_checks=env_flag("INSTANTON_DEBUG_CHECKS"),
            parallel=env_flag("INSTANTON_PARALLEL"),
        )

    def with_overrides(self, **overrides: Any) -> "RunConfig":
        """用非 None 的参数覆盖当前配置。"""
        return replace(self, **{k: v for k, v in overrides.items() if v is not None})
