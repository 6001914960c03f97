import json
import subprocess
import sys

import numpy as np
import pytest

from crofton3d import cli
from crofton3d.measures import VerifierReport
from crofton3d.sphere import cap_alpha


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_body_builtins(capsys):
    code, out, _ = run(capsys, "body", "--builtin", "cube")
    assert code == 0
    assert json.loads(out) == pytest.approx({"V": 1, "F": 6, "M": 9.42477796}, rel=1e-8)
    _, out, _ = run(capsys, "body", "--builtin", "ball", "--r", "1")
    assert json.loads(out) == pytest.approx({"V": 4.18879, "F": 12.56637, "M": 12.56637}, rel=1e-5)


def test_body_file(tmp_path, capsys):
    path = tmp_path / "tet.json"
    path.write_text(json.dumps({"points": [[0, 0, 0], [1, 0, 0], [0, 1, 0], [0, 0, 1], [0.1, 0.1, 0.1]]}))
    code, out, _ = run(capsys, "body", "--body", str(path))
    assert code == 0 and json.loads(out)["V"] == pytest.approx(1 / 6)


def test_malformed_json(tmp_path, capsys):
    path = tmp_path / "bad.json"
    path.write_text('{"points": [[0, 0, 0],\n   [1, 0, 0]\n   [0, 1, 0]]}')
    code, _, err = run(capsys, "body", "--body", str(path))
    assert code != 0
    assert "line 3" in err and "column" in err


def test_solid_angle(capsys):
    code, out, _ = run(capsys, "solid-angle", "--builtin", "cube", "--point", "0.5", "0.5", "2")
    rec = json.loads(out)
    assert code == 0 and rec["kind"] == "polygon" and len(rec["vertices"]) == 4
    assert rec["area"] == pytest.approx(0.80543, abs=1e-5)
    _, out, _ = run(capsys, "solid-angle", "--builtin", "ball", "--point", "0", "0", "2")
    rec = json.loads(out)
    assert rec["area"] == pytest.approx(2 * np.pi * (1 - np.sqrt(3) / 2), rel=1e-14)
    assert rec["alpha"] == pytest.approx(cap_alpha(np.pi / 6), rel=1e-14)


def test_interior_point_exit_code(capsys):
    code, out, err = run(capsys, "solid-angle", "--builtin", "cube", "--point", "0.5", "0.5", "0.5")
    assert code == 2 and out == "" and "inside" in err


def test_unknown_verifier(capsys):
    with pytest.raises(SystemExit) as e:
        cli.main(["verify", "thm9"])
    assert e.value.code == 2


@pytest.mark.parametrize("text, value", [("1000", 1000), ("1e6", 10**6), ("10**6", 10**6), ("2.5e5", 250000)])
def test_parse_count(text, value):
    assert cli.parse_count(text) == value


@pytest.mark.parametrize("text", ["1.5", "abc", "0", "-5"])
def test_parse_count_rejects(text):
    with pytest.raises(Exception):
        cli.parse_count(text)


def test_verify_constants(capsys, tmp_path):
    csv_path = tmp_path / "s.csv"
    code, out, _ = run(capsys, "verify", "constants", "--samples", "1e5", "--seed", "7", "--csv", str(csv_path))
    lines = [json.loads(x) for x in out.splitlines()]
    assert code == 0 and [x["report"]["name"] for x in lines] == ["pair_mean", "triple_mean"]
    assert lines[0]["report"]["lhs"]["value"] == pytest.approx(0.5, abs=3e-3)
    assert lines[1]["report"]["lhs"]["value"] == pytest.approx(0.3927, abs=3e-3)
    manifest = lines[0]["manifest"]
    assert manifest["seed"] == 7 and manifest["samples"] == 10**5 and "threads" not in json.dumps(manifest)
    assert csv_path.read_text().splitlines()[0].startswith("name,lhs,rhs")


def test_verify_ball_thm4(capsys):
    code, out, _ = run(capsys, "verify", "thm4", "--builtin", "ball")
    rep = json.loads(out)["report"]
    assert code == 0 and rep["passed"] and abs(rep["details"]["margin"]) < 1e-9


def test_verify_width(capsys):
    code, out, _ = run(capsys, "verify", "width")
    assert code == 0 and len(out.splitlines()) == 4


def test_exit_status_tracks_failures(monkeypatch, capsys):
    reports = [VerifierReport("ok", 1.0, 1.0, 0.0), VerifierReport("bad", 2.0, 1.0, 0.0)]
    monkeypatch.setattr(cli, "run_verifier", lambda name, args, cfg: reports)
    code, out, _ = run(capsys, "verify", "constants", "--samples", "1e4")
    assert code == 1 and len(out.splitlines()) == 2
    monkeypatch.setattr(cli, "run_verifier", lambda name, args, cfg: reports[:1])
    assert run(capsys, "verify", "constants", "--samples", "1e4")[0] == 0


@pytest.mark.parametrize("name, extra", [("thm1", ["--builtin", "cube"]), ("herglotz", ["--builtin", "tetrahedron"]),
                                         ("planar", [])])
def test_byte_identical_across_threads(tmp_path, capsys, name, extra):
    outputs = []
    for threads in ("1", "3"):
        path = tmp_path / f"{name}.jsonl"
        code, out, _ = run(capsys, "verify", name, *extra, "--samples", "5e4", "--seed", "3",
                           "--threads", threads, "--json", str(path))
        assert code == 0
        outputs.append(path.read_bytes())
        assert out.encode() == outputs[-1]
    assert outputs[0] == outputs[1]


def test_module_entry_point(tmp_path):
    res = subprocess.run([sys.executable, "-m", "crofton3d", "solid-angle", "--builtin", "ball", "--point", "0", "0", "0.5"],
                         capture_output=True, text=True)
    assert res.returncode == 2
    res = subprocess.run([sys.executable, "-m", "crofton3d", "body", "--builtin", "tetrahedron"],
                         capture_output=True, text=True)
    assert res.returncode == 0 and json.loads(res.stdout)["F"] == pytest.approx(np.sqrt(3))
