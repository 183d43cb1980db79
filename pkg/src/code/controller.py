"""Controller 层：compute / table / verify 三个命令的执行与报告拼装。

命令函数不直接打印，也不抛异常；一切结果都装进 ``CommandReport``，
由入口负责输出与退出码。
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from pathlib import Path

from src.code.config import RunConfig
from src.code.errors import EXIT_INTERNAL, EXIT_OK, exit_code_for
from src.code.golden import GoldenRow, load_corpus, rows_for_table
from src.code.invariants import compute_instanton
from src.code.poly_parser import parse_bipoly
from src.code.render import (
    render_record_json,
    render_record_text,
    render_result_json,
    render_result_text,
    render_summary,
)
from src.code.row_runner import STATUS_ERROR, STATUS_MISMATCH, RowRunner

logger = logging.getLogger(__name__)


@dataclass
class CommandReport:
    """命令输出：``lines`` 写到标准输出，``error`` 写到标准错误。"""

    lines: list[str] = field(default_factory=list)
    exit_code: int = EXIT_OK
    error: str | None = None

    @classmethod
    def failure(cls, exc: BaseException) -> "CommandReport":
        return cls(exit_code=exit_code_for(exc), error=f"Error: {exc}")

    @property
    def text(self) -> str:
        return "\n".join(self.lines)


def cmd_compute(poly: str, j: int, cfg: RunConfig, classical: bool = False) -> CommandReport:
    """计算单个 (p, j)。

    Args:
        poly: 多项式源文本。
        j: 分裂型。
        cfg: 运行配置。
        classical: 是否同时输出重数、Milnor 数与 Tjurina 数。

    Returns:
        文本模式一行 ``w=.. h=.. charge=..``（可另加经典不变量一行），JSON 模式一行对象。
    """
    try:
        p = parse_bipoly(poly)
        result = compute_instanton(
            p,
            j,
            cfg.truncation,
            classical=classical,
            n_max=cfg.n_max,
            debug_checks=cfg.debug_checks,
        )
    except Exception as exc:
        logger.debug(f"compute failed for poly={poly!r} j={j}: {exc}")
        return CommandReport.failure(exc)

    if cfg.output == "json":
        return CommandReport(lines=[render_result_json(poly.strip(), result)])
    return CommandReport(lines=render_result_text(result))


def _run_rows(rows: list[GoldenRow], cfg: RunConfig, title: str) -> CommandReport:
    runner = RowRunner(cfg)
    records = runner.run(rows)
    summary = runner.summary()

    if cfg.output == "json":
        lines = [render_record_json(record) for record in records]
    else:
        lines = [f"{title}: {len(records)} rows (mode={cfg.truncation.value})"]
        lines += [render_record_text(record) for record in records]
        lines.append(render_summary(summary))

    failing = [r for r in records if r.status in (STATUS_MISMATCH, STATUS_ERROR)]
    if not failing:
        return CommandReport(lines=lines)
    names = ", ".join(r.row.label for r in failing)
    return CommandReport(lines=lines, exit_code=EXIT_INTERNAL, error=f"Error: failing rows: {names}")


def cmd_table(table_id: str, cfg: RunConfig, corpus_path: Path | None = None) -> CommandReport:
    """重新计算一张表的全部行并与表中值对照；任一行不一致则退出码非零。"""
    try:
        rows = rows_for_table(table_id, load_corpus(corpus_path))
    except Exception as exc:
        return CommandReport.failure(exc)
    return _run_rows(rows, cfg, title=f"table {table_id.strip().upper()}")


def cmd_verify(cfg: RunConfig, corpus_path: Path | None = None) -> CommandReport:
    """对整个语料做回归；全部通过时退出码为 0。"""
    try:
        rows = load_corpus(corpus_path)
    except Exception as exc:
        return CommandReport.failure(exc)
    return _run_rows(rows, cfg, title="verify")
