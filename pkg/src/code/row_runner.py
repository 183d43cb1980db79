"""黄金行的执行器：顺序或每行一个线程，结果按语料顺序返回。"""

from __future__ import annotations

import logging
import threading
import time
from dataclasses import dataclass, field

from src.code.config import RunConfig
from src.code.errors import InstantonInputError
from src.code.golden import GoldenRow
from src.code.invariants import InstantonResult, compute_instanton
from src.code.polycore import TruncationMode

logger = logging.getLogger(__name__)

STATUS_OK = "ok"
STATUS_MISMATCH = "MISMATCH"
STATUS_CHANGED = "changed"
STATUS_ERROR = "error"


@dataclass
class RowRecord:
    """一行的执行状态。"""

    index: int
    row: GoldenRow
    status: str = "pending"
    result: InstantonResult | None = None
    error: str | None = None
    mismatches: list[str] = field(default_factory=list)
    started_at: float | None = None
    finished_at: float | None = None

    @property
    def passed(self) -> bool:
        return self.status == STATUS_OK

    @property
    def elapsed(self) -> float:
        if self.started_at is None or self.finished_at is None:
            return 0.0
        return self.finished_at - self.started_at


def compare_row(row: GoldenRow, result: InstantonResult) -> list[str]:
    """列出计算值与表中值不一致的列，例如 ``w=5 expected 4``。"""
    pairs: list[tuple[str, object, object]] = [
        ("w", result.w, row.w),
        ("h", result.h, row.h),
        ("charge", result.charge, row.charge),
    ]
    if result.classical is not None:
        c = result.classical
        pairs += [
            ("m", c.multiplicity, row.m),
            ("mu", c.milnor.value, row.mu),
            ("tau", c.tjurina.value, row.tau),
        ]
    return [
        f"{name}={'undefined' if got is None else got} expected {want}"
        for name, got, want in pairs
        if want is not None and got != want
    ]


@dataclass
class RowRunner:
    """执行一组黄金行。"""

    cfg: RunConfig
    _records: dict[int, RowRecord] = field(default_factory=dict)
    _lock: threading.Lock = field(default_factory=threading.Lock)

    def run(self, rows: list[GoldenRow]) -> list[RowRecord]:
        with self._lock:
            self._records = {i: RowRecord(index=i, row=row) for i, row in enumerate(rows)}

        if self.cfg.parallel:
            threads = [
                threading.Thread(target=self._execute, args=(i,), daemon=True)
                for i in range(len(rows))
            ]
            for thread in threads:
                thread.start()
            for thread in threads:
                thread.join()
        else:
            for i in range(len(rows)):
                self._execute(i)

        with self._lock:
            return [self._records[i] for i in sorted(self._records)]

    def _execute(self, index: int) -> None:
        with self._lock:
            record = self._records.get(index)
            if record is None:
                return
            record.status = "running"
            record.started_at = time.time()
            row = record.row

        result: InstantonResult | None = None
        error: str | None = None
        mismatches: list[str] = []
        try:
            result = compute_instanton(
                row.polynomial(),
                row.j,
                self.cfg.truncation,
                classical=row.has_classical,
                n_max=self.cfg.n_max,
                debug_checks=self.cfg.debug_checks,
            )
            mismatches = compare_row(row, result)
            if not mismatches:
                status = STATUS_OK
            elif self.cfg.truncation is TruncationMode.STRICT:
                status = STATUS_CHANGED
            else:
                status = STATUS_MISMATCH
        except InstantonInputError as exc:
            # 严格截断可能使 p̄ 变为零
            strict = self.cfg.truncation is TruncationMode.STRICT
            status = STATUS_CHANGED if strict else STATUS_ERROR
            error = f"Error: {exc}"
            logger.warning(f"row {row.label} rejected: {exc}")
        except Exception as exc:
            status = STATUS_ERROR
            error = f"Error: {exc}"
            logger.warning(f"row {row.label} failed: {exc}")

        with self._lock:
            record.status = status
            record.result = result
            record.error = error
            record.mismatches = mismatches
            record.finished_at = time.time()
        logger.info(f"row {row.label}: {status} in {record.elapsed:.2f}s")

    def summary(self) -> dict[str, int]:
        with self._lock:
            records = list(self._records.values())
        counts = {"count": len(records)}
        for status in (STATUS_OK, STATUS_MISMATCH, STATUS_CHANGED, STATUS_ERROR):
            counts[status] = sum(1 for r in records if r.status == status)
        return counts
