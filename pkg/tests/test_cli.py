import json

from stabwall.api_models import CommandName, CommandRequest
from stabwall.cli import execute, exit_code, main

P1_CHARGE_JSON = {"real_part": ["0", "-1"], "imag_part": ["1", "0"]}


def _run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, out


def _report(capsys, *argv):
    code, out = _run(capsys, *argv)
    return code, json.loads(out)


def test_largest_wall(capsys):
    code, report = _report(capsys, "largest-wall", "--surface", "p2", "--n", "4")
    assert code == 0
    assert report["status"] == "ok"
    assert report["payload"]["center"] == "-9/2"
    assert report["payload"]["radius_sq"] == "49/4"
    assert report["payload"]["destabilizer"] == ["1", "-1", "1/2"]


def test_walls(capsys):
    code, report = _report(capsys, "walls", "--n", "4", "--beta=-1")
    assert code == 0
    payload = report["payload"]
    assert payload["max_rank"] == 2
    assert [w["radius_sq"] for w in payload["walls"]] == ["49/4", "17/4", "1"]


def test_hn_p1(capsys):
    code, report = _report(capsys, "hn", "--p1-degrees=2,0,-1")
    assert code == 0
    assert report["payload"]["factors"] == [[2, 1], [0, 1], [-1, 1]]


def test_hn_model(capsys):
    model = json.dumps({
        "target": [2, 1],
        "sub_classes": [[1, 1]],
        "charge": {"real_part": ["0", "-1"], "imag_part": ["1", "0"]},
    })
    code, report = _report(capsys, "hn", "--model", model)
    assert code == 0
    assert [f["class"] for f in report["payload"]["factors"]] == [[1, 1], [1, 0]]


def test_p3_castelnuovo(capsys):
    code, report = _report(capsys, "p3", "castelnuovo", "--d", "3", "--g", "1")
    assert code == 0
    assert report["payload"]["excluded"] is True
    code, report = _report(capsys, "p3", "castelnuovo", "--d", "3", "--g", "0")
    assert report["payload"]["excluded"] is False


def test_p3_q_request():
    report = execute(CommandRequest(command=CommandName.P3_Q,
                                    parameters={"chern": "1,0,-3,5", "alpha": "1", "beta": "-1"}))
    assert report.status == "ok"
    assert report.payload["q"] == "18"
    assert report.payload["q_circle"] == {"kind": "circle", "center": "-5/2", "radius_sq": "1/4"}


def test_plot_writes_svg(capsys, tmp_path):
    target = tmp_path / "hilb4.svg"
    code, out = _run(capsys, "plot", "--n", "4", "--beta=-1", "--svg-out", str(target))
    assert code == 0
    assert out == ""
    svg = target.read_text(encoding="utf-8")
    assert svg.count("<path") == 3
    assert svg.count('class="vertical"') == 1


def test_unknown_preset(capsys):
    code, report = _report(capsys, "largest-wall", "--surface", "no_such_surface", "--n", "4")
    assert code == 2
    assert report["status"] == "error"
    assert report["payload"]["error"] == "UnknownPreset"


def test_parse_error(capsys):
    code, report = _report(capsys, "largest-wall", "--n", "1/0")
    assert code == 2
    assert report["payload"]["error"] == "ParseError"
    code, report = _report(capsys, "walls", "--n", "0.5")
    assert code == 2
    assert report["payload"]["error"] == "ParseError"


def test_computation_error(capsys):
    code, report = _report(capsys, "largest-wall", "--n", "1")
    assert code == 1
    assert report["payload"]["error"] == "HypothesisViolated"
    code, report = _report(capsys, "p3", "castelnuovo", "--d", "2", "--g", "0")
    assert code == 2
    assert report["payload"]["error"] == "InvalidDegree"


def test_usage_errors(capsys):
    assert main([]) == 2
    assert main(["walls", "--log-level", "loud"]) == 2
    capsys.readouterr()


def test_exit_code_for_ok():
    report = execute(CommandRequest(command=CommandName.HN, parameters={"p1_degrees": "1,1"}))
    assert exit_code(report) == 0
    assert report.payload["factors"] == [[1, 2]]


def test_deterministic(capsys):
    first = _run(capsys, "walls", "--n", "5", "--beta=-1")
    second = _run(capsys, "walls", "--n", "5", "--beta=-1")
    assert first == second


def test_hn_long_inline_model(capsys):
    model = json.dumps({
        "target": [2, 1],
        "sub_classes": [[1, k] for k in range(-60, 2)],
        "charge": P1_CHARGE_JSON,
    })
    assert len(model) > 255
    code, report = _report(capsys, "hn", "--model", model)
    assert code == 0
    assert [f["class"] for f in report["payload"]["factors"]] == [[1, 1], [1, 0]]


def test_hn_model_file(capsys, tmp_path):
    path = tmp_path / "model.json"
    path.write_text(json.dumps({"target": [2, 1], "sub_classes": [[1, 1]], "charge": P1_CHARGE_JSON}),
                    encoding="utf-8")
    code, report = _report(capsys, "hn", "--model", str(path))
    assert code == 0
    assert len(report["payload"]["factors"]) == 2


def test_hn_model_rejects_bad_input(capsys):
    model = json.dumps({"target": [2.9, 1], "sub_classes": [[1, 1]], "charge": P1_CHARGE_JSON})
    code, report = _report(capsys, "hn", "--model", model)
    assert code == 2
    assert report["payload"]["error"] == "ParseError"
    code, report = _report(capsys, "hn", "--model", "no-such-model.json")
    assert code == 2
    assert report["payload"]["error"] == "ParseError"
    code, report = _report(capsys, "hn", "--model", "[1, 2]")
    assert code == 2
    assert report["payload"]["error"] == "ParseError"


def test_negative_genus(capsys):
    code, report = _report(capsys, "p3", "castelnuovo", "--d", "5", "--g=-1")
    assert code == 2
    assert report["payload"]["error"] == "InvalidDegree"


def test_log_counts_in_diagnostics():
    report = execute(CommandRequest(command=CommandName.P3_CASTELNUOVO, parameters={"d": "8", "g": "0"}))
    assert report.status == "ok"
    assert "log p3: 1 warning, 0 error" in report.diagnostics
    report = execute(CommandRequest(command=CommandName.LARGEST_WALL, parameters={"n": "1"}))
    assert "log cli: 0 warning, 1 error" in report.diagnostics
