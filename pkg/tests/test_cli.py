import json

from click.testing import CliRunner

import app
from app import cli
from src.strata import GenericDestabilizerError

TABLE_HEADER = "index,A,deltas,partitions,E,c_ss,c_st,multiplicity"


def test_series_command():
    result = CliRunner().invoke(cli, ["series", "--kind", "k1", "--order", "3"])
    assert result.exit_code == 0, result.output
    assert json.loads(result.output)["coefficients"] == ["1", "3", "9", "22"]


def test_series_csv():
    result = CliRunner().invoke(cli, ["series", "--kind", "mu", "--order", "3", "--format", "csv"])
    assert result.exit_code == 0, result.output
    assert result.output.splitlines() == ["n,coefficient", "0,0", "1,0", "2,0", "3,1"]


def test_verify_single_box_counts():
    result = CliRunner().invoke(cli, ["verify", "--single-box"])
    assert result.exit_code == 0, result.output
    assert "40, 40, 40" in result.output
    assert "20, 20, 20" in result.output


def test_table_b0_is_empty(tmp_path):
    result = CliRunner().invoke(cli, ["table", "--b", "0", "--cache-dir", str(tmp_path)])
    assert result.exit_code == 0, result.output
    payload = json.loads(result.output)
    assert payload["rows"] == [] and payload["sum_c_ss"] == 0


def test_table_b2_csv(tmp_path):
    result = CliRunner().invoke(cli, ["table", "--b", "-2", "--format", "csv", "--cache-dir", str(tmp_path)])
    assert result.exit_code == 0, result.output
    lines = result.output.splitlines()
    assert lines[0] == TABLE_HEADER, "CSV 열 순서"
    assert len(lines) == 5
    assert all(line.endswith(",1,0,3") for line in lines[1:])


def test_dt_b0(tmp_path):
    result = CliRunner().invoke(cli, ["dt", "--b", "0", "--cache-dir", str(tmp_path)])
    assert result.exit_code == 0, result.output
    report = json.loads(result.output)[0]
    assert report["dt_bar"] == "1/4" and report["dt_hat"] == "0"


def test_dt_rejects_positive_b(tmp_path):
    result = CliRunner().invoke(cli, ["dt", "--b", "3", "--cache-dir", str(tmp_path)])
    assert result.exit_code == 2, "설정 오류는 종료 코드 2"


def test_cache_commands(tmp_path):
    runner = CliRunner()
    result = runner.invoke(cli, ["cache", "warm", "--b", "0", "--cache-dir", str(tmp_path)])
    assert result.exit_code == 0, result.output
    listed = json.loads(runner.invoke(cli, ["cache", "list", "--cache-dir", str(tmp_path)]).output)
    assert [entry["b"] for entry in listed] == [0]
    assert "1개" in runner.invoke(cli, ["cache", "clear", "--cache-dir", str(tmp_path)]).output


def test_dt_order_adds_mu_stable_count(tmp_path):
    result = CliRunner().invoke(cli, ["dt", "--b", "0", "--order", "5", "--cache-dir", str(tmp_path)])
    assert result.exit_code == 0, result.output
    report = json.loads(result.output)[0]
    assert report["provenance"]["mu_stable_count"] == "0"


def test_dt_sigma_failure_exits_with_message(tmp_path, monkeypatch):
    def fail(*args, **kwargs):
        raise GenericDestabilizerError("표본 점에서 모두 소멸")

    monkeypatch.setattr(app, "compute_report", fail)
    result = CliRunner().invoke(cli, ["dt", "--b", "0", "--cache-dir", str(tmp_path)])
    assert result.exit_code == 1
    assert "오류" in result.output and "소멸" in result.output
    assert "Traceback" not in result.output


def test_verify_passes_n_through(tmp_path, monkeypatch):
    seen = {}

    def fake_run(order, b_values, rows_for, n=None):
        seen.update(order=order, b_values=b_values, n=n)
        return []

    monkeypatch.setattr(app, "run_verification", fake_run)
    result = CliRunner().invoke(cli, ["verify", "--b", "0", "--n", "6", "--a-floor", "-4",
                                      "--order", "4", "--cache-dir", str(tmp_path)])
    assert result.exit_code == 0, result.output
    assert seen == {"order": 4, "b_values": (0,), "n": 6}
