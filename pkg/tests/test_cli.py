import json

import jsonschema
import pytest

from koszulkt.cli import RunConfig, main
from koszulkt.ktheory import report_schema


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_describe_a2(capsys):
    code, out, _ = run(capsys, "describe", "A2", "--format", "json")
    info = json.loads(out)
    assert code == 0
    assert info["dims"] == [3, 3] and info["weyl_order"] == 6 and info["ranks"] == [1, 2, 1]
    assert info["schema_version"] == "1.0"


def test_describe_a1_text(capsys):
    code, out, _ = run(capsys, "describe", "A1")
    assert code == 0
    assert "|W|: 2" in out and "(2,)" in out and "[1, 1]" in out


def test_describe_invalid_type(capsys):
    code, _, err = run(capsys, "describe", "Z9")
    assert code == 2 and "Z9" in err


def test_usage_errors(capsys):
    assert run(capsys, "frobnicate", "A1")[0] == 2
    assert run(capsys, "verify", "A1", "--max-y-degree", "-1")[0] == 2


def test_verify_a1(capsys):
    code, out, _ = run(capsys, "verify", "A1", "--format", "json")
    report = json.loads(out)
    assert code == 0
    jsonschema.validate(report, report_schema())
    assert all(report["checks"].values())


def test_verify_g2(capsys):
    code, out, _ = run(capsys, "verify", "G2", "--max-y-degree", "4", "--format", "json")
    assert code == 0
    assert all(json.loads(out)["checks"].values())


def test_verify_rank_three_skips_window(capsys):
    code, out, _ = run(capsys, "verify", "A3", "--max-y-degree", "2", "--homotopy-degree", "2", "--injectivity-degree", "1", "--format", "json")
    checks = json.loads(out)["checks"]
    assert code == 0 and checks["window"] is None
    assert all(v for k, v in checks.items() if k != "window")


def test_fault_injection(capsys):
    code, out, err = run(capsys, "verify", "A1", "--inject-fault", "d-sign", "--format", "json")
    assert code == 1
    assert "d_squared" in err
    assert json.loads(out)["checks"]["d_squared"] is False


def test_fault_flag_is_hidden(capsys):
    assert main(["verify", "--help"]) == 0
    out, _ = capsys.readouterr()
    assert "--inject-fault" not in out and "d-sign" not in out


def test_ktheory_outputs(capsys):
    code, out, _ = run(capsys, "ktheory", "A2", "--format", "json")
    report = json.loads(out)
    jsonschema.validate(report, report_schema())
    assert code == 0 and (report["k0_rank"], report["k1_rank"]) == (2, 2)
    assert report["generators_even"] == [[], [1, 2]] and report["generators_odd"] == [[1], [2]]
    for text, ranks in [("A3", (4, 4)), ("A1xA1", (2, 2))]:
        report = json.loads(run(capsys, "ktheory", text, "--format", "json")[1])
        assert (report["k0_rank"], report["k1_rank"]) == ranks
    code, out, _ = run(capsys, "ktheory", "A3")
    assert "rank 4" in out


def test_output_is_deterministic(tmp_path, capsys):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    for path in (a, b):
        assert main(["verify", "B2", "--max-y-degree", "2", "--format", "json", "--out", str(path)]) == 0
    assert a.read_bytes() == b.read_bytes()
    assert capsys.readouterr().out == ""


def test_cap_exit_code(monkeypatch, capsys):
    monkeypatch.setenv("KOSZULKT_CAP_CELLS", "4")
    code, _, err = run(capsys, "verify", "A2")
    assert code == 3 and "cap" in err


def test_run_config_validation():
    with pytest.raises(ValueError):
        RunConfig("A2", window_cap=-1)
    with pytest.raises(ValueError):
        RunConfig("Q7")
    assert RunConfig("a1xa1").datum.N == 2
