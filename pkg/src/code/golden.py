"""内置黄金语料（Tables I–VIII）的发现、解析与一致性检查。"""

from __future__ import annotations

import csv
import logging
from dataclasses import dataclass
from pathlib import Path

from src.code.errors import InstantonInputError, InstantonInternalError
from src.code.poly_parser import parse_bipoly
from src.code.polycore import BiPoly

logger = logging.getLogger(__name__)

PROJECT_ROOT = Path(__file__).resolve().parents[2]
CORPUS_PATH = PROJECT_ROOT / "src" / "data" / "golden_tables.csv"
TABLE_IDS = ("I", "II", "III", "IV", "V", "VI", "VII", "VIII")
COLUMNS = ("table", "poly", "j", "w", "h", "charge", "m", "delta", "mu", "tau")


@dataclass(frozen=True)
class GoldenRow:
    """表格中的一行；m、delta、mu、tau 在表中缺列时为 None。"""

    table: str
    poly: str
    j: int
    w: int
    h: int
    charge: int
    m: int | None = None
    delta: int | None = None
    mu: int | None = None
    tau: int | None = None
    line: int = 0

    def __post_init__(self) -> None:
        if self.table not in TABLE_IDS:
            raise ValueError(f"unknown table id {self.table!r}")
        if self.charge != self.w + self.h:
            raise ValueError(f"charge {self.charge} != w + h = {self.w + self.h}")

    @property
    def label(self) -> str:
        return f"{self.table}:{self.poly}@j={self.j}"

    @property
    def has_classical(self) -> bool:
        return self.m is not None

    def polynomial(self) -> BiPoly:
        return parse_bipoly(self.poly)


def _optional_int(value: str | None) -> int | None:
    value = (value or "").strip()
    return int(value) if value else None


def parse_corpus(text: str, source: str = "<corpus>") -> list[GoldenRow]:
    """解析 CSV 文本；'#' 开头的行为注释。

    Raises:
        InstantonInternalError: 列缺失、数值不合法或 charge != w + h。
    """
    numbered = [
        (number, line)
        for number, line in enumerate(text.splitlines(), start=1)
        if line.strip() and not line.lstrip().startswith("#")
    ]
    if not numbered:
        return []
    reader = csv.DictReader(line for _, line in numbered)
    if tuple(reader.fieldnames or ()) != COLUMNS:
        raise InstantonInternalError(f"{source}: header must be {','.join(COLUMNS)}")
    rows: list[GoldenRow] = []
    for (number, _), record in zip(numbered[1:], reader):
        try:
            rows.append(
                GoldenRow(
                    table=record["table"].strip(),
                    poly=record["poly"].strip(),
                    j=int(record["j"]),
                    w=int(record["w"]),
                    h=int(record["h"]),
                    charge=int(record["charge"]),
                    m=_optional_int(record["m"]),
                    delta=_optional_int(record["delta"]),
                    mu=_optional_int(record["mu"]),
                    tau=_optional_int(record["tau"]),
                    line=number,
                )
            )
        except (AttributeError, TypeError, ValueError) as exc:
            raise InstantonInternalError(f"{source}:{number}: invalid corpus row: {exc}") from exc
    return rows


def load_corpus(path: Path | None = None) -> list[GoldenRow]:
    path = path or CORPUS_PATH
    rows = parse_corpus(path.read_text(encoding="utf-8"), source=str(path))
    logger.debug(f"loaded {len(rows)} golden rows from {path}")
    return rows


def rows_for_table(table_id: str, rows: list[GoldenRow]) -> list[GoldenRow]:
    key = table_id.strip().upper()
    if key not in TABLE_IDS:
        raise InstantonInputError(f"unknown table id {table_id!r}; expected one of {', '.join(TABLE_IDS)}")
    return [row for row in rows if row.table == key]
