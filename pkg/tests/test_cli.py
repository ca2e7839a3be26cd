import json
from pathlib import Path

import pytest

from prolong.cli import main

DATA = Path(__file__).parent / "data"
MODEL_Q = str(DATA / "model_q.json")
MODEL_QT = str(DATA / "model_qt.json")


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    report = json.loads(captured.out)
    return code, report, captured.err


def test_report_shape(capsys):
    code, report, err = run(capsys, "parse", "-i", MODEL_Q, "--expr", "1/2 + 1/3")
    assert code == 0
    assert sorted(report) == ["command", "details", "status", "timing_ms"]
    assert report["command"] == f"prolong parse -i {MODEL_Q} --expr 1/2 + 1/3"
    assert report["status"] == "pass"
    assert isinstance(report["timing_ms"], int) and report["timing_ms"] >= 0
    assert err == ""


def test_reports_are_deterministic_modulo_timing(capsys):
    argv = ("gb", "-i", MODEL_Q, "-v", "Twisted")
    _, first, _ = run(capsys, *argv)
    _, second, _ = run(capsys, *argv)
    first.pop("timing_ms")
    second.pop("timing_ms")
    assert first == second


def test_parse_canonicalizes(capsys):
    code, report, _ = run(capsys, "parse", "-i", MODEL_Q, "--expr", "1/2 + 1/3")
    assert report["details"]["canonical"] == "5/6"
    assert report["details"]["is_polynomial"] is True
    code, report, _ = run(
        capsys, "parse", "-i", MODEL_QT, "--expr", "(x + t)/(x - t)", "--vars", "x"
    )
    assert code == 0
    assert report["details"]["canonical"] == "(x + t)/(x - t)"
    assert report["details"]["is_polynomial"] is False
    code, report, _ = run(
        capsys, "parse", "-i", MODEL_Q, "--expr", "x*w - 1", "-v", "GmV"
    )
    assert report["details"]["variables"] == ["x", "w"]


def test_parse_variety_and_vars_exclusive(capsys):
    code, report, err = run(
        capsys, "parse", "-i", MODEL_Q, "--expr", "x", "-v", "GmV", "--vars", "x"
    )
    assert code == 2
    assert report["status"] == "error"
    assert "not allowed with" in err


def test_gb_twisted_cubic(capsys):
    code, report, _ = run(capsys, "gb", "-i", MODEL_Q, "-v", "Twisted")
    assert code == 0
    assert report["details"]["basis"] == ["y^2 - x*z", "x*y - z", "x^2 - y"]
    assert report["details"]["size"] == 3
    assert report["details"]["term_order"] == "grevlex"


def test_gb_variety_without_generators(capsys):
    code, report, _ = run(capsys, "gb", "-i", MODEL_Q, "-v", "GaV")
    assert code == 0
    assert report["details"]["basis"] == []


def test_nf_membership(capsys):
    code, report, _ = run(
        capsys, "nf", "-i", MODEL_Q, "-v", "Twisted", "--expr", "z^2 - y^3"
    )
    assert code == 0
    assert report["details"]["is_zero"] is True
    assert report["details"]["normal_form"] == "0"
    code, report, _ = run(
        capsys, "nf", "-i", MODEL_Q, "-v", "Twisted", "--expr", "z^2 - y^2"
    )
    assert report["details"]["is_zero"] is False


def test_fdel_map(capsys):
    code, report, _ = run(capsys, "fdel", "-i", MODEL_QT, "-m", "tw")
    assert code == 0
    assert report["details"]["components"] == ["x", "-2*t"]


def test_tau_map(capsys):
    code, report, _ = run(capsys, "tau-map", "-i", MODEL_QT, "-m", "sq")
    assert code == 0
    assert report["details"]["components"] == ["x^2", "2*x*u_x"]
    assert report["details"]["variables"] == ["x", "u_x"]


def test_prolonged_variety_generators(capsys):
    code, report, _ = run(capsys, "tau-variety", "-i", MODEL_QT, "-v", "Circle")
    assert code == 0
    assert report["details"]["generators"] == [
        "x^2 + y^2 - t",
        "2*x*u_x + 2*y*u_y - 1",
    ]
    code, report, _ = run(capsys, "t-variety", "-i", MODEL_QT, "-v", "Circle")
    assert report["details"]["generators"] == [
        "x^2 + y^2 - t",
        "2*x*u_x + 2*y*u_y",
    ]


def test_nabla_sequence(capsys):
    code, report, _ = run(
        capsys, "nabla", "-i", MODEL_QT, "-v", "Hyp", "--init", "t,1", "--order", "2"
    )
    assert code == 0
    assert report["details"]["sequence"] == [["t", "1"], ["1", "0"], ["0", "0"]]


def test_nabla_rejects_off_variety_point(capsys):
    code, report, _ = run(
        capsys, "nabla", "-i", MODEL_QT, "-v", "Hyp", "--init", "1,1"
    )
    assert code == 1
    assert report["status"] == "fail"
    assert report["details"]["error"] == "PointNotOnVariety"


def test_check_nabla(capsys):
    code, report, _ = run(
        capsys, "check-nabla", "-i", MODEL_QT, "-v", "Hyp", "--init", "t^2,1/t"
    )
    assert code == 0
    assert report["details"]["holds"] is True


def test_fiber_description(capsys):
    code, report, _ = run(
        capsys, "fiber", "-i", MODEL_QT, "-v", "Hyp", "--init", "t,1"
    )
    assert code == 0
    assert report["details"]["particular"] == ["1", "0"]
    assert report["details"]["basis"] == [["-t", "1"]]
    assert report["details"]["dimension"] == 1
    code, report, _ = run(
        capsys, "fiber", "-i", MODEL_QT, "-v", "Hyp", "--init", "t,1",
        "--kind", "tangent",
    )
    assert report["details"]["particular"] == ["0", "0"]


def test_transfer_invertible(capsys):
    code, report, _ = run(
        capsys, "transfer", "-i", MODEL_QT, "-c", "parabola", "--init", "t,t^2"
    )
    assert code == 0
    d = report["details"]
    assert d["matrix"] == [["2*t"]]
    assert d["offset"] == ["0"]
    assert d["invertible"] is True
    assert d["inverse_matrix"] == [["(1/2)/t"]]


def test_transfer_critical_point_not_invertible(capsys):
    code, report, _ = run(
        capsys, "transfer", "-i", MODEL_Q, "-c", "parab0", "--init", "0,0"
    )
    assert code == 0
    d = report["details"]
    assert d["matrix"] == [["0"]]
    assert d["invertible"] is False
    assert "inverse_matrix" not in d


def test_check_cocycle(capsys):
    code, report, _ = run(capsys, "check-cocycle", "-i", MODEL_QT, "-a", "P1")
    assert code == 0
    assert report["details"]["ok"] is True
    assert report["details"]["checks"][0]["name"] == "inverse (1,2)"


def test_check_cocycle_failure(capsys, tmp_path):
    doc = {
        "basefield": "Q",
        "atlases": {
            "M": {
                "dim": 1,
                "charts": 2,
                "transitions": {"1,2": ["1/x"], "2,1": ["2/x"]},
            }
        },
    }
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(doc))
    code, report, _ = run(capsys, "check-cocycle", "-i", str(path), "-a", "M")
    assert code == 1
    assert report["status"] == "fail"
    entry = report["details"]["checks"][0]
    assert entry["ok"] is False
    assert entry["witness"] == "(2*x)"


def test_tau_atlas(capsys):
    code, report, _ = run(
        capsys, "tau-atlas", "-i", MODEL_QT, "-a", "P1", "--samples", "5", "--seed", "3"
    )
    assert code == 0
    d = report["details"]
    assert d["variables"] == ["x", "u_x"]
    assert d["transitions"]["1,2"] == ["1/x", "-u_x/x^2"]
    assert all(entry["ok"] for entry in d["sigma_compatibility"])
    assert all(entry["samples"] == 5 for entry in d["sigma_compatibility"])


def test_check_group(capsys):
    code, report, _ = run(capsys, "check-group", "-i", MODEL_Q, "-g", "B")
    assert code == 0
    assert report["details"]["ok"] is True


def test_check_group_failure(capsys, tmp_path):
    doc = {
        "basefield": "Q",
        "varieties": {"V": {"vars": ["x"]}},
        "groups": {
            "Bad": {
                "variety": "V",
                "mult": ["x1 + 2*x2"],
                "inv": ["-x"],
                "identity": ["0"],
            }
        },
    }
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(doc))
    code, report, _ = run(capsys, "check-group", "-i", str(path), "-g", "Bad")
    assert code == 1
    assert report["status"] == "fail"
    assert any(not c["ok"] for c in report["details"]["checks"])


def test_tau_group(capsys):
    code, report, _ = run(capsys, "tau-group", "-i", MODEL_Q, "-g", "Gm")
    assert code == 0
    d = report["details"]
    assert d["identity"] == ["1", "1", "0", "0"]
    assert d["variables"] == ["x", "w", "u_x", "u_w"]
    assert d["mult"] == [
        "x1*x2",
        "w1*w2",
        "u_x1*x2 + x1*u_x2",
        "u_w1*w2 + w1*u_w2",
    ]
    assert d["variety_generators"] == ["x*w - 1", "w*u_x + x*u_w"]


def test_check_dgroup_pass(capsys):
    for group, sect in (("Ga", "ga_cm2"), ("B", "b_s01"), ("B", "b_s2m3")):
        code, report, _ = run(
            capsys, "check-dgroup", "-i", MODEL_Q, "-g", group, "-s", sect
        )
        assert code == 0, (group, sect)
        assert report["details"]["ok"] is True


def test_check_dgroup_over_function_field(capsys):
    code, report, _ = run(
        capsys, "check-dgroup", "-i", MODEL_QT, "-g", "Ga", "-s", "ga_ct"
    )
    assert code == 0
    assert report["details"]["ok"] is True


def test_check_dgroup_twist_fails(capsys):
    code, report, _ = run(
        capsys, "check-dgroup", "-i", MODEL_Q, "-g", "Gm", "-s", "gm_twist1"
    )
    assert code == 1
    checks = {c["name"]: c for c in report["details"]["checks"]}
    assert checks["section: generator 0"]["ok"] is True
    assert checks["homomorphism: component 0"]["witness"] == "x1*x2"
    assert checks["homomorphism: component 1"]["witness"] == "-w1*w2"


def test_check_dgroup_section_group_mismatch(capsys):
    code, report, err = run(
        capsys, "check-dgroup", "-i", MODEL_Q, "-g", "Ga", "-s", "b_s01"
    )
    assert code == 2
    assert report["status"] == "error"
    assert "belongs to group" in err


def test_check_dpoint(capsys):
    code, report, _ = run(
        capsys, "check-dpoint", "-i", MODEL_QT, "-g", "Ga", "-s", "ga_ct",
        "--init", "0",
    )
    assert code == 0
    assert report["details"]["holds"] is True
    code, report, _ = run(
        capsys, "check-dpoint", "-i", MODEL_QT, "-g", "Ga", "-s", "ga_ct",
        "--init", "t",
    )
    assert code == 1


def test_solve_series_triangular(capsys):
    code, report, _ = run(
        capsys, "solve-series", "-i", MODEL_Q, "-g", "B", "-s", "b_s01",
        "--init", "2,0,1/2", "--order", "5",
    )
    assert code == 0
    d = report["details"]
    assert d["coefficients"]["y"] == ["0", "-1", "0", "0", "0", "0"]
    assert d["coefficients"]["x"] == ["2", "0", "0", "0", "0", "0"]
    assert d["coefficients"]["w"] == ["1/2", "0", "0", "0", "0", "0"]
    assert d["residuals_zero"] is True
    assert d["order"] == 5


def test_solve_series_exponential(capsys):
    code, report, _ = run(
        capsys, "solve-series", "-i", MODEL_Q, "-g", "Ga", "-s", "ga_c1",
        "--init", "1", "--order", "6",
    )
    assert code == 0
    assert report["details"]["coefficients"]["x"] == [
        "1", "1", "1/2", "1/6", "1/24", "1/120", "1/720",
    ]


def test_solve_series_off_variety(capsys):
    code, report, _ = run(
        capsys, "solve-series", "-i", MODEL_Q, "-g", "Gm", "-s", "gm_twist0",
        "--init", "2,1", "--order", "4",
    )
    assert code == 1
    assert report["details"]["error"] == "PointNotOnVariety"


def test_verify_series_round_trip(capsys, tmp_path):
    code, report, _ = run(
        capsys, "solve-series", "-i", MODEL_Q, "-g", "B", "-s", "b_s01",
        "--init", "2,0,1/2", "--order", "5",
    )
    assert code == 0
    stored = tmp_path / "series.json"
    stored.write_text(json.dumps(report))
    code, verify, _ = run(
        capsys, "verify-series", "-i", MODEL_Q, "-v", "BV", "--series", str(stored)
    )
    assert code == 0
    assert verify["details"]["residuals_zero"] is True


def test_verify_series_detects_tampering(capsys, tmp_path):
    doc = {"coefficients": {"x": ["2", "1"], "y": ["0", "0"], "w": ["1/2", "0"]}}
    stored = tmp_path / "series.json"
    stored.write_text(json.dumps(doc))
    code, report, _ = run(
        capsys, "verify-series", "-i", MODEL_Q, "-v", "BV", "--series", str(stored)
    )
    assert code == 1
    assert report["details"]["residuals_zero"] is False


def test_verify_series_validates_file(capsys, tmp_path):
    stored = tmp_path / "series.json"
    stored.write_text(json.dumps({"coefficients": {"x": ["1"]}}))
    code, report, _ = run(
        capsys, "verify-series", "-i", MODEL_Q, "-v", "BV", "--series", str(stored)
    )
    assert code == 2
    assert "coefficients must cover exactly" in report["details"]["message"]
    stored.write_text("not json")
    code, report, _ = run(
        capsys, "verify-series", "-i", MODEL_Q, "-v", "BV", "--series", str(stored)
    )
    assert code == 2


def test_unknown_subcommand(capsys):
    code, report, err = run(capsys, "frobnicate")
    assert code == 2
    assert report["status"] == "error"
    assert "invalid choice" in err


def test_unknown_model_object(capsys):
    code, report, _ = run(capsys, "gb", "-i", MODEL_Q, "-v", "Nope")
    assert code == 2
    assert report["details"]["error"] == "ModelError"


def test_bad_expression_is_usage_error(capsys):
    code, report, _ = run(
        capsys, "nf", "-i", MODEL_Q, "-v", "Twisted", "--expr", "x +"
    )
    assert code == 2
    assert report["details"]["error"] == "ExprSyntaxError"


def test_bad_point_length(capsys):
    code, report, _ = run(
        capsys, "fiber", "-i", MODEL_QT, "-v", "Hyp", "--init", "t"
    )
    assert code == 2
    assert report["status"] == "error"


def test_missing_model_file(capsys):
    code, report, _ = run(capsys, "gb", "-i", "/nonexistent.json", "-v", "V")
    assert code == 2
    assert report["status"] == "error"
