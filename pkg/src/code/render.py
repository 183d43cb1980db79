"""结果渲染：文本行与 JSON（一行一个对象，字段顺序固定）。"""

from __future__ import annotations

import json
from typing import Any

from src.code.invariants import InstantonResult
from src.code.row_runner import RowRecord


def _json(data: Any) -> str:
    return json.dumps(data, ensure_ascii=False, separators=(",", ":"))


def result_payload(poly: str, result: InstantonResult) -> dict[str, Any]:
    """compute 的 JSON 结构：poly, j, w, h, charge, [multiplicity, milnor, tjurina], mode。"""
    payload: dict[str, Any] = {
        "poly": poly,
        "j": result.j,
        "w": result.w,
        "h": result.h,
        "charge": result.charge,
    }
    if result.classical is not None:
        payload["multiplicity"] = result.classical.multiplicity
        payload["milnor"] = result.classical.milnor.to_json()
        payload["tjurina"] = result.classical.tjurina.to_json()
    payload["mode"] = result.pbar_mode.value
    return payload


def render_result_text(result: InstantonResult) -> list[str]:
    lines = [f"w={result.w} h={result.h} charge={result.charge}"]
    if result.classical is not None:
        c = result.classical
        lines.append(f"m={c.multiplicity} milnor={c.milnor} tjurina={c.tjurina}")
    return lines


def render_result_json(poly: str, result: InstantonResult) -> str:
    return _json(result_payload(poly, result))


def _cell(name: str, got: object, want: object) -> str:
    if want is None:
        return f"{name}={got}"
    return f"{name}={got} ({want})"


def render_record_text(record: RowRecord) -> str:
    row = record.row
    head = f"{row.table:<4} {row.poly:<24} j={row.j}"
    if record.result is None:
        return f"{head}  {record.status}  {record.error or ''}".rstrip()
    r = record.result
    cells = [_cell("w", r.w, row.w), _cell("h", r.h, row.h), _cell("charge", r.charge, row.charge)]
    if r.classical is not None:
        c = r.classical
        cells += [
            _cell("m", c.multiplicity, row.m),
            f"delta=({row.delta})" if row.delta is not None else "delta=-",
            _cell("mu", c.milnor, row.mu),
            _cell("tau", c.tjurina, row.tau),
        ]
    line = f"{head}  {' '.join(cells)}  {record.status}"
    if record.mismatches:
        line += "  [" + "; ".join(record.mismatches) + "]"
    return line


def render_record_json(record: RowRecord) -> str:
    payload: dict[str, Any] = {"table": record.row.table}
    if record.result is not None:
        payload.update(result_payload(record.row.poly, record.result))
    else:
        payload.update({"poly": record.row.poly, "j": record.row.j, "error": record.error})
    payload["match"] = record.passed
    return _json(payload)


def render_summary(summary: dict[str, int]) -> str:
    return (
        f"summary: {summary['count']} rows, {summary['ok']} ok, "
        f"{summary['MISMATCH']} mismatch, {summary['changed']} changed, {summary['error']} error"
    )
