import pytest

from src.code.config import RunConfig
from src.code.golden import GoldenRow, load_corpus
from src.code.invariants import compute_instanton, instanton_height
from src.code.polycore import X, TruncationMode, pbar
from src.code.render import render_record_json, render_record_text, render_summary
from src.code.row_runner import (
    STATUS_CHANGED,
    STATUS_ERROR,
    STATUS_MISMATCH,
    STATUS_OK,
    RowRunner,
    compare_row,
)


def _row(poly="x", j=2, w=1, h=1, table="I", **extra):
    return GoldenRow(table, poly, j, w, h, w + h, **extra)


def test_config_defaults_and_validation():
    cfg = RunConfig()
    assert cfg.truncation is TruncationMode.DEFAULT
    assert cfg.n_max == 64 and cfg.output == "text"
    assert RunConfig(truncation="strict").truncation is TruncationMode.STRICT
    with pytest.raises(ValueError):
        RunConfig(n_max=3)
    with pytest.raises(ValueError):
        RunConfig(output="yaml")


def test_config_from_env(monkeypatch):
    monkeypatch.setenv("INSTANTON_STRICT_TRUNCATION", "true")
    monkeypatch.setenv("INSTANTON_NMAX", "12")
    monkeypatch.setenv("INSTANTON_PARALLEL", "1")
    cfg = RunConfig.from_env()
    assert cfg.truncation is TruncationMode.STRICT
    assert cfg.n_max == 12
    assert cfg.parallel and not cfg.debug_checks


def test_overrides_ignore_none(cfg):
    updated = cfg.with_overrides(n_max=None, output="json", parallel=True)
    assert updated.n_max == cfg.n_max
    assert updated.output == "json" and updated.parallel


def test_compare_row_names_each_mismatch():
    result = compute_instanton(X, 2)
    assert compare_row(_row(), result) == []
    assert compare_row(_row(w=2, h=0), result) == ["w=1 expected 2", "h=1 expected 0"]


@pytest.mark.parametrize("parallel", [False, True])
def test_runner_keeps_corpus_order(cfg, parallel):
    rows = [_row(), _row("xy", w=2), _row("y"), _row("x^2", j=3, w=3, h=3, table="II")]
    runner = RowRunner(cfg.with_overrides(parallel=parallel))
    records = runner.run(rows)
    assert [r.row for r in records] == rows
    assert all(r.status == STATUS_OK for r in records)
    assert runner.summary() == {"count": 4, STATUS_OK: 4, STATUS_MISMATCH: 0, STATUS_CHANGED: 0, STATUS_ERROR: 0}


def test_runner_reports_mismatch_and_error(cfg):
    records = RowRunner(cfg).run([_row(w=5, h=1), _row("x^5")])
    assert records[0].status == STATUS_MISMATCH
    assert records[0].mismatches == ["w=1 expected 5", "charge=2 expected 6"]
    assert records[1].status == STATUS_ERROR
    assert "trivial extension class" in records[1].error


def test_strict_mode_reports_changes_instead_of_failures(cfg):
    strict = cfg.with_overrides(truncation=TruncationMode.STRICT)
    records = RowRunner(strict).run([_row(w=5, h=1), _row("x^5")])
    assert [r.status for r in records] == [STATUS_CHANGED, STATUS_CHANGED]


STRICT_PBAR_CHANGES = {
    "IV:x^3-x^2y+y^3@j=3",
    "IV:x^3-x^2y^2+y^3@j=3",
    "V:x^3-y^4@j=4",
    "VI:x^4-xy^5@j=4",
    "VII:x^3+x^2y^3+y^9+xy^7@j=8",
    "VIII:x^3+y^7+xy^5@j=7",
    "VIII:x^3+y^8+xy^6@j=7",
    "VIII:x^3+xy^5+y^8@j=7",
}


def test_strict_truncation_alters_only_known_rows():
    changed = {
        row.label
        for row in load_corpus()
        if pbar(row.polynomial(), row.j) != pbar(row.polynomial(), row.j, TruncationMode.STRICT)
    }
    assert changed == STRICT_PBAR_CHANGES


def test_strict_truncation_never_moves_heights():
    for row in load_corpus():
        p = row.polynomial()
        assert instanton_height(p, row.j, TruncationMode.STRICT) == row.h


def test_strict_run_leaves_untouched_rows_ok(cfg):
    rows = [r for r in load_corpus() if r.table in ("I", "II")]
    records = RowRunner(cfg.with_overrides(truncation=TruncationMode.STRICT)).run(rows)
    assert [r.status for r in records] == [STATUS_OK] * len(rows)


def test_record_rendering(cfg):
    record = RowRunner(cfg).run([_row()])[0]
    text = render_record_text(record)
    assert "w=1 (1)" in text and text.endswith("ok")
    assert render_record_json(record) == (
        '{"table":"I","poly":"x","j":2,"w":1,"h":1,"charge":2,"mode":"default","match":true}'
    )
    assert render_summary({"count": 2, "ok": 1, "MISMATCH": 1, "changed": 0, "error": 0}) == (
        "summary: 2 rows, 1 ok, 1 mismatch, 0 changed, 0 error"
    )
