import csv
import io
import json

import pytest

from flowcutter.cli import main


def run_cli(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, out


def test_certify_json(capsys):
    code, out = run_cli(capsys, "certify", "--grid", "1024")
    assert code == 0
    doc = json.loads(out)
    assert doc["ok"] is True
    assert doc["T"] == 1.0
    assert 0.07 < doc["B1"] < 0.08
    assert doc["M"] > 0.0


def test_certify_csv(capsys):
    code, out = run_cli(capsys, "--format", "csv", "certify", "--grid", "1024")
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert len(rows) == 1 and rows[0]["ok"] == "True"


def test_certify_bad_grid_is_usage_error(capsys):
    code, _ = run_cli(capsys, "certify", "--grid", "0")
    assert code == 64


def test_certify_deterministic(capsys):
    _, first = run_cli(capsys, "certify", "--grid", "1024")
    _, second = run_cli(capsys, "certify", "--grid", "1024")
    assert first == second


def test_usage_errors(capsys):
    assert main(["no-such-command"]) == 64
    assert main([]) == 64
    assert main(["dimension", "--method", "fancy"]) == 64
    assert main(["dimension", "--depth", "99"]) == 64
    assert main(["--tol", "0.5", "certify"]) == 64


def test_verify_lemmas(capsys):
    code, out = run_cli(capsys, "verify-lemmas", "--depth", "6")
    assert code == 0
    doc = json.loads(out)
    assert doc["pass"] is True
    checks = {row["check"] for row in doc["rows"]}
    assert {"junction-smoothness", "window-addresses",
            "slope-factorization", "size-bound"} <= checks


def test_distortion_csv(capsys):
    code, out = run_cli(capsys, "--format", "csv", "distortion",
                        "--depth", "4", "--grid", "65")
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert [r["k"] for r in rows] == ["1", "2", "3", "4"]
    cs = [float(r["C_k"]) for r in rows]
    assert all(b >= a for a, b in zip(cs, cs[1:]))
    assert all(float(r["C_theory"]) >= c for r, c in zip(rows, cs))


def test_distortion_threads_deterministic(capsys):
    _, a = run_cli(capsys, "distortion", "--depth", "4", "--grid", "65",
                   "--threads", "1")
    _, b = run_cli(capsys, "distortion", "--depth", "4", "--grid", "65",
                   "--threads", "3")
    assert a == b


def test_sbd_witness_record(capsys):
    code, out = run_cli(capsys, "sbd", "--k", "2")
    assert code == 0
    doc = json.loads(out)
    assert doc["ratio"] > 1.1
    assert doc["image_log_size"] == pytest.approx(-4.394449154672439)
    assert doc["limit_ratio"] == pytest.approx(doc["ratio"], rel=1e-8)


def test_sbd_odd_order_is_usage_error(capsys):
    code, _ = run_cli(capsys, "sbd", "--k", "3")
    assert code == 64


def test_sbd_profile(capsys):
    code, out = run_cli(capsys, "sbd-profile", "--depth", "4", "--grid", "65")
    assert code == 0
    doc = json.loads(out)
    assert [row["r"] for row in doc["rows"]] == [1.0, 3.0, 9.0, 27.0, 81.0]
    assert all(row["beta_hat"] > 1.05 for row in doc["rows"])


def test_dimension_json(capsys):
    code, out = run_cli(capsys, "dimension", "--depth", "8")
    assert code == 0
    doc = json.loads(out)
    assert doc["s_lower"] < doc["s"] < doc["s_upper"]
    assert doc["method"] == "bowen"


def test_dimension_box_method(capsys):
    code, out = run_cli(capsys, "dimension", "--depth", "8", "--method", "box")
    assert code == 0
    assert 0.5 < json.loads(out)["s"] < 0.75


def test_intervals_dump(capsys):
    code, out = run_cli(capsys, "--format", "csv", "intervals", "--depth", "3")
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert len(rows) == 8
    assert rows[0]["word"] == "000"
    assert float(rows[-1]["right"]) == 1.0


def test_out_file(tmp_path, capsys):
    target = tmp_path / "report.json"
    code, out = run_cli(capsys, "--out", str(target), "dimension",
                        "--depth", "6")
    assert code == 0 and out == ""
    doc = json.loads(target.read_text())
    assert "s" in doc
