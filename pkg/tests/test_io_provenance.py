from pathlib import Path

import pytest

from depth_subconvexity import io as io_mod
from depth_subconvexity.harness.reports import CSV_FIELDS, VerificationReport, emit_report
from depth_subconvexity.provenance import ProvenanceStore, payload_digest, sha256_file


def _csv(tmp_path: Path, rows: int) -> Path:
    reports = [VerificationReport("delta", {"n": i}, True) for i in range(rows)]
    return emit_report(reports, tmp_path / "rows.csv")


def test_row_limit_enforced(tmp_path: Path, monkeypatch: pytest.MonkeyPatch):
    monkeypatch.setenv("DS_MAX_CSV_ROWS", "1")
    with pytest.raises(ValueError):
        io_mod.read_report_csv(_csv(tmp_path, 2), CSV_FIELDS)


def test_file_size_limit_enforced(tmp_path: Path, monkeypatch: pytest.MonkeyPatch):
    monkeypatch.setenv("DS_MAX_CSV_BYTES", "10")
    with pytest.raises(ValueError):
        io_mod.read_report_csv(_csv(tmp_path, 1), CSV_FIELDS)


def test_missing_columns_rejected(tmp_path: Path):
    p = tmp_path / "cols.csv"
    p.write_text("verifier,passed\ndelta,true\n", encoding="utf-8")
    with pytest.raises(ValueError):
        io_mod.read_report_csv(p, CSV_FIELDS)


def test_cells_stay_text(tmp_path: Path):
    df = io_mod.read_report_csv(_csv(tmp_path, 1), CSV_FIELDS)
    assert df.loc[0, "lhs_re"] == "" and df.loc[0, "passed"] == "true"


def test_jsonl_reader(tmp_path: Path):
    p = tmp_path / "a.jsonl"
    io_mod.write_jsonl(p, [{"b": 1}, {"a": 2}])
    assert io_mod.read_jsonl(p) == [{"b": 1}, {"a": 2}]
    p.write_text('{"a": 1}\n\n[1,\n', encoding="utf-8")
    with pytest.raises(ValueError, match=":3:"):
        io_mod.read_jsonl(p)
    with pytest.raises(FileNotFoundError):
        io_mod.read_jsonl(tmp_path / "none.jsonl")


def test_provenance_ledger(tmp_path: Path):
    ledger = tmp_path / "prov/ledger.jsonl"
    store = ProvenanceStore(str(ledger))
    assert store.records() == []
    rec = store.log("verify", {"verifier": "delta"}, ["run.toml"], ["delta.jsonl"])
    assert ledger.exists() and ledger.read_text().strip() != ""
    (back,) = store.records()
    assert back.step == "verify" and back.outputs == ["delta.jsonl"]
    assert store.verify(back) and back.digest == rec.digest
    back.params["verifier"] = "charsum"
    assert not store.verify(back)


def test_digests_are_stable(tmp_path: Path):
    assert payload_digest({"a": 1, "b": 2}) == payload_digest({"b": 2, "a": 1})
    p = tmp_path / "x.txt"
    p.write_bytes(b"abc")
    assert sha256_file(p) == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad"
