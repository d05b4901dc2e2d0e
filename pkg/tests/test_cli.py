import json

import pytest

from edgespec.cli import CheckRecord, RunConfig, emit, main, run_suite
from edgespec.errors import PreconditionError


def _strip_runtime(payload):
    recs = json.loads(payload)
    for r in recs:
        r.pop("runtime_ms")
    return recs


def test_gb_suite_three_exact_records():
    records = run_suite("gb", RunConfig())
    assert len(records) == 3
    for r in records:
        assert r.passed
        assert r.measured == 0.0 and r.bound == 0.0


def test_unknown_suite_rejected():
    with pytest.raises(PreconditionError):
        run_suite("frobnicate", RunConfig())


def test_emit_empty_rejected():
    with pytest.raises(PreconditionError):
        emit([], "json")
    with pytest.raises(PreconditionError):
        emit(run_suite("gb", RunConfig()), "xml")


def test_json_round_trip():
    records = run_suite("witt", RunConfig())
    out = json.loads(emit(records, "json"))
    assert len(out) == 1
    rec = out[0]
    assert set(rec) == {"check", "params", "measured", "bound", "pass",
                        "runtime_ms"}
    assert rec["check"] == records[0].check
    assert rec["pass"] is records[0].passed
    assert rec["measured"] == records[0].measured


def test_csv_shape():
    records = run_suite("gb", RunConfig())
    text = emit(records, "csv").decode("utf-8")
    lines = text.split("\n")
    assert lines[0] == "check,param_string,measured,bound,pass,runtime_ms"
    assert len([ln for ln in lines if ln]) == len(records) + 1
    assert "\r" not in text


def test_csv_significant_digits():
    rec = CheckRecord("demo", {"nu": 2.0}, 1.0 / 3.0, 2.0 / 7.0, True, 5)
    row = emit([rec], "csv").decode().split("\n")[1]
    assert "0.333333333333" in row
    assert "0.285714285714" in row


def test_deterministic_json():
    cfg = RunConfig()
    a = _strip_runtime(emit(run_suite("scales", cfg), "json"))
    b = _strip_runtime(emit(run_suite("scales", cfg), "json"))
    assert a == b


def test_records_sorted():
    records = run_suite("all", RunConfig(grid_n=100))
    keys = [(r.check, r.param_string()) for r in records]
    assert keys == sorted(keys)


def test_main_exit_codes(capsys, tmp_path):
    assert main(["gb"]) == 0
    assert main(["witt", "--spectrum", "1.0,-1.0"]) == 1
    captured = capsys.readouterr()
    assert "FAIL" in captured.err
    with pytest.raises(SystemExit) as exc:
        main(["nosuchsuite"])
    assert exc.value.code == 2
    out = tmp_path / "report.json"
    assert main(["gb", "--out", str(out)]) == 0
    assert json.loads(out.read_text())


def test_env_seed_override(monkeypatch):
    monkeypatch.setenv("EDGESPEC_SEED", "not-an-int")
    assert main(["gb"]) == 2
    monkeypatch.setenv("EDGESPEC_SEED", "123")
    assert main(["gb"]) == 0


def test_schur_example_record():
    records = run_suite("schur", RunConfig(nu=2.0, beta=0.0))
    by_check = {r.check: r for r in records}
    norm = by_check["schur.weighted_norm"]
    assert norm.measured <= 0.6
    assert norm.bound == pytest.approx(1.05 / 1.75, rel=1e-12)
    assert norm.passed
