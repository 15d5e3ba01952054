"""Tests for the command line entry point and report replay"""
import json

import pytest

from src.main import build_parser, main
from src.models import SCHEMA_VERSION
from src.report import ReportFormatError, load_report, render_text


def _run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_construct_prints_json(capsys):
    code, out, _ = _run(capsys, "construct", "--s", "2", "--n", "3", "--f", "0,-1,0,1")
    assert code == 0
    payload = json.loads(out)
    assert payload["schema_version"] == SCHEMA_VERSION
    assert payload["construction"]["twist_equation"] == "(x_1^3 - x_1)*z^2 = x^3 - x"
    assert len(payload["construction"]["points"]) == 3
    assert all(v["witness"] == "0" for v in payload["verification"])


def test_construct_text_format(capsys):
    code, out, _ = _run(capsys, "construct", "--s", "3", "--n", "4", "--f", "1,0,0,0,1", "--format", "text")
    assert code == 0
    assert "genus 3, Prym dimension 12" in out
    assert "outcome        verified (exit 0)" in out


def test_construct_s_exceeds_degree(capsys):
    code, out, err = _run(capsys, "construct", "--s", "4", "--n", "4", "--f", "1,1,1")
    assert code == 2
    assert out == ""
    assert "s exceeds deg f" in err


def test_construct_rejects_float_coefficients(capsys):
    code, _, err = _run(capsys, "construct", "--f", "0,-1.5,0,1")
    assert code == 2
    assert "twistrank: error:" in err


def test_no_command_prints_help(capsys):
    code, out, _ = _run(capsys)
    assert code == 2
    assert "construct" in out


def test_certify_fp_writes_report(tmp_path, capsys):
    out_path = tmp_path / "certify.json"
    code, out, _ = _run(
        capsys, "certify", "--n", "2", "--M", "5", "--primes", "11,13,17", "--seed", "0", "--out", str(out_path)
    )
    assert code == 0
    assert out == ""
    payload = json.loads(out_path.read_text(encoding="utf-8"))
    certificate = payload["certificates"][0]["certificate"]
    assert certificate["kind"] == "Fp-refutation"
    assert certificate["certified_bound"] == 2

    code, out, _ = _run(capsys, "report", str(out_path))
    assert code == 0
    assert "replay fp: ok" in out
    assert "claims hold: yes" in out


def test_certify_heights(capsys):
    code, out, _ = _run(capsys, "certify", "--n", "1", "--certifier", "heights", "--t1", "2", "--tol", "1e-8")
    assert code == 0
    evidence = json.loads(out)["certificates"][0]["certificate"]["q_evidence"]
    assert evidence["curve"] == ["-36", "0"]
    assert [evidence["points"][0]["X"], evidence["points"][0]["Y"]] == ["12", "36"]


def test_certify_dependent_points_exit_one(capsys):
    code, out, _ = _run(
        capsys, "certify", "--n", "2", "--certifier", "heights", "--point", "25/4,-35/8"
    )
    assert code == 1
    assert json.loads(out)["outcome"] == "indeterminate"


def test_certify_dependent_pair_exit_one(capsys):
    code, out, _ = _run(capsys, "certify", "--n", "2", "--dependent-pair", "1,2")
    assert code == 1
    assert json.loads(out)["certificates"][0]["certificate"]["kind"] == "indeterminate"


def test_certify_rejects_higher_degree(capsys):
    code, _, err = _run(capsys, "certify", "--s", "3", "--n", "3", "--f", "1,0,0,1")
    assert code == 2
    assert "deg f = 3" in err


def test_certify_rejects_unknown_prime(capsys):
    code, _, err = _run(capsys, "certify", "--n", "2", "--primes", "11,15")
    assert code == 2
    assert "15" in err


def test_certify_rejects_bad_certifier():
    with pytest.raises(SystemExit):
        build_parser().parse_args(["certify", "--certifier", "descent"])


def test_certify_help_lists_registered_certifiers(capsys):
    with pytest.raises(SystemExit):
        build_parser().parse_args(["certify", "--help"])
    out = capsys.readouterr().out
    assert "  fp: Refute every nonzero relation" in out
    assert "  heights: Specialize x_1" in out


def test_grid_text(capsys):
    code, out, _ = _run(
        capsys, "grid", "--grid-s", "2,3", "--grid-r", "3", "--grid-n", "3", "--format", "text"
    )
    assert code == 0
    assert "s=2 r=3 n=3  passed" in out
    assert "s=3 r=3 n=3  passed" in out


def test_grid_empty_exit_two(capsys):
    code, _, err = _run(capsys, "grid", "--grid-s", "4", "--grid-r", "3", "--grid-n", "3")
    assert code == 2
    assert "no admissible" in err


def test_config_file_with_flag_override(tmp_path, capsys):
    config = tmp_path / "run.toml"
    config.write_text(
        '[construction]\ns = 2\nn = 3\nf = ["0", "-1", "0", "1"]\n\n[output]\nformat = "text"\n',
        encoding="utf-8",
    )
    code, out, _ = _run(capsys, "construct", "--config", str(config), "--n", "4")
    assert code == 0
    assert "(s = 2, r = 3, n = 4)" in out


def test_threads_env(monkeypatch, capsys):
    monkeypatch.setenv("TWISTRANK_THREADS", "0")
    code, _, err = _run(capsys, "construct")
    assert code == 2
    assert "TWISTRANK_THREADS" in err


def test_reports_are_byte_identical(tmp_path, capsys):
    paths = [tmp_path / "a.json", tmp_path / "b.json"]
    for path in paths:
        assert _run(capsys, "certify", "--n", "2", "--out", str(path))[0] == 0
    assert paths[0].read_bytes() == paths[1].read_bytes()


def test_report_replay_detects_tampering(tmp_path, capsys):
    path = tmp_path / "construct.json"
    assert _run(capsys, "construct", "--out", str(path))[0] == 0
    payload = json.loads(path.read_text(encoding="utf-8"))
    payload["verification"][1]["witness"] = "x_1 - x_2"
    path.write_text(json.dumps(payload), encoding="utf-8")

    code, out, _ = _run(capsys, "report", str(path))
    assert code == 1
    assert "claims hold: no" in out


def test_report_rejects_other_schema(tmp_path, capsys):
    path = tmp_path / "other.json"
    path.write_text(json.dumps({"schema_version": "something/2"}), encoding="utf-8")
    code, _, err = _run(capsys, "report", str(path))
    assert code == 2
    with pytest.raises(ReportFormatError):
        load_report(str(path))


def test_report_round_trip_renders_text(tmp_path, capsys):
    path = tmp_path / "grid.json"
    assert _run(capsys, "grid", "--grid-s", "2", "--grid-r", "3", "--grid-n", "3", "--out", str(path))[0] == 0
    report = load_report(str(path))
    assert report.command == "grid"
    assert "s=2 r=3 n=3  passed" in render_text(report)
    code, out, _ = _run(capsys, "report", str(path), "--format", "json")
    assert code == 0
    assert json.loads(out)["command"] == "grid"
