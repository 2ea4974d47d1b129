import json

import jsonschema
import pytest

from matrix_equidist.cli import run
from matrix_equidist.report import REPORT_SCHEMA, without_timing


@pytest.fixture
def files(tmp_path):
    def write(name, obj):
        path = tmp_path / name
        path.write_text(json.dumps(obj))
        return str(path)
    return write


def test_order(capsys):
    assert run(["order", "--group", "gl", "--n", "2", "--p", "3"]) == 0
    assert capsys.readouterr().out.strip() == "48"


def test_enumerate(capsys):
    assert run(["enumerate", "--group", "sl", "--n", "2", "--p", "5", "--threads", "3"]) == 0
    assert capsys.readouterr().out.strip() == "120"


def test_verify_sl2(capsys, tmp_path):
    out = tmp_path / "r.json"
    assert run(["verify", "sl2", "--p", "5", "--report", str(out)]) == 0
    rep = json.loads(out.read_text())
    jsonschema.validate(rep, REPORT_SCHEMA)
    assert rep["records"][0]["counts"][0] == 120
    assert json.loads(capsys.readouterr().out) == rep


def test_usage_errors(capsys, files):
    assert run(["count", "--region", "missing.json", "--n", "2", "--p", "3"]) == 2
    assert "missing.json" in capsys.readouterr().err
    assert run(["order", "--n", "2", "--p", "4"]) == 2
    assert run(["order", "--n", "2"]) == 2
    assert run(["bogus"]) == 2
    assert run(["verify", "sl2", "--p", "5", "--h", "1,0,0,0,0,0,0,1"]) == 2
    assert run(["charsum", "kgl", "--n", "2", "--p", "5", "--u", files("u.json", {"n": 2, "p": 5})]) == 2
    assert run(["count", "--n", "3", "--p", "23", "--region", files("r.json", {"k": 18, "boxes": []})]) == 2


def test_allow_large(files, capsys):
    region = files("r.json", {"k": 9, "boxes": [{"lo": [[0, 1]] * 9, "hi": [[1, 1]] * 9}]})
    assert run(["count", "--n", "3", "--p", "23", "--embedding", "h", "--region", region]) == 2
    assert "desk-scale" in capsys.readouterr().err


def test_count_and_embed(files, capsys):
    region = files("r.json", {"k": 8, "boxes": [{"lo": [[0, 1]] * 8, "hi": [[1, 2]] * 8}]})
    assert run(["count", "--n", "2", "--p", "3", "--region", region]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["count"] == 2 and out["error"] == [29, 768]
    m = files("m.json", {"n": 2, "p": 5, "entries": [[1, 2], [3, 4]]})
    assert run(["embed", "--matrix", m]) == 0
    assert json.loads(capsys.readouterr().out)["numerators"] == [1, 2, 3, 1, 3, 4, 4, 2]


def test_charsum(files, capsys):
    one = files("one.json", {"n": 1, "p": 5, "entries": [[1]]})
    assert run(["charsum", "kgl", "--n", "1", "--p", "5", "--u", one, "--v", one]) == 0
    out = json.loads(capsys.readouterr().out)
    assert abs(out["complex"]["re"] - 0.3819660112501049) < 1e-9
    assert out["normalized_by"] == "p^0.5"
    e11 = files("e11.json", {"n": 2, "p": 3, "entries": [[1, 0], [0, 0]]})
    assert run(["charsum", "ksl", "--n", "2", "--p", "3", "--u", e11, "--v", e11]) == 0
    assert json.loads(capsys.readouterr().out)["counts"] == [6, 9, 9]
    assert run(["charsum", "hyper", "--p", "7", "--a", "0,0,0"]) == 0
    assert json.loads(capsys.readouterr().out)["counts"][0] == 36


def test_etk_plot_data(tmp_path, capsys):
    plot = tmp_path / "etk.dat"
    assert run(["etk", "--n", "2", "--p-list", "3,5", "--embedding", "h", "--H", "1",
                "--plot-data", str(plot)]) == 0
    lines = plot.read_text().splitlines()
    assert lines[0].startswith("#") and [ln.split()[0] for ln in lines[1:]] == ["3", "5"]


def test_threads_identical_json(tmp_path, capsys):
    outs = []
    for t in ("1", "8"):
        path = tmp_path / f"r{t}.json"
        assert run(["verify", "lemma", "--lemma", "L2", "--n", "2", "--p-list", "3,5,7", "--samples", "10",
                    "--threads", t, "--report", str(path)]) == 0
        outs.append(without_timing(json.loads(path.read_text())))
    assert outs[0] == outs[1]


def test_failing_verification_exits_1(files, capsys):
    golden = files("g.json", {"series": {"S_Z": {"p": [3, 5], "max_ratio": [0.0, 0.0], "growth_factor": 0.0}}})
    assert run(["verify", "lemma", "--lemma", "L2", "--n", "2", "--p-list", "3,5", "--samples", "5",
                "--golden", golden]) == 1
    assert "FAILED" in capsys.readouterr().err
