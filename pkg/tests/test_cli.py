import json
import subprocess
import sys
from pathlib import Path

import pytest

from stacky_moduli.cli import InputError, dumps, main, parse_job, run

DATA = Path(__file__).resolve().parent.parent / "data"


def call(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, json.loads(out), out


def load(name):
    return json.loads((DATA / f"{name}.json").read_text())


class TestCommands:
    def test_build_p12(self, capsys):
        code, rep, _ = call(capsys, "build", "--input", str(DATA / "p12.json"))
        assert code == 0
        assert rep["vertices"] == [[0], [1], [2]]
        assert [a["label"] for a in rep["arrows"]] == ["y1", "y2", "y1"]
        assert rep["relations"] == []
        assert rep["lambda_r"]["basis"] == [[2, -1]]

    def test_count_p12(self, capsys):
        code, rep, _ = call(capsys, "count", "--input", str(DATA / "p12.json"), "--q", "5", "--theta", "1,1")
        assert code == 0
        (r,) = rep["reports"]
        assert r["stack_mass"] == r["refined_mass"] == "6/1" and r["match"]

    def test_captures_f2(self, capsys):
        code, rep, _ = call(capsys, "captures-cox", "--input", str(DATA / "f2.json"))
        assert code == 1 and rep["verdict"] is False
        assert [u["generator"] for u in rep["unreached"]] == ["u"]

    @pytest.mark.parametrize("name", ["p12", "p1", "w23", "w222"])
    def test_captures_gl(self, capsys, name):
        code, rep, _ = call(capsys, "captures-cox", "--input", str(DATA / f"{name}.json"))
        assert code == 0 and rep["verdict"]

    def test_degree_bound(self, capsys):
        _, small, _ = call(capsys, "captures-cox", "--input", str(DATA / "p12.json"), "--degree-bound", "2")
        _, big, _ = call(capsys, "captures-cox", "--input", str(DATA / "p12.json"), "--degree-bound", "9")
        assert len(small["hilbert"]) < len(big["hilbert"]) == 10

    def test_lambda_r(self, capsys):
        code, rep, _ = call(capsys, "lambda-r", "--input", str(DATA / "w222.json"))
        assert code == 0 and rep["lambda_r"]["rank"] == 3

    def test_relations(self, capsys):
        code, rep, _ = call(capsys, "relations", "--input", str(DATA / "w222.json"))
        assert code == 0 and len(rep["relations"]) == 1 and rep["peirce"]

    def test_de_ideal(self, capsys):
        _, rep, _ = call(capsys, "de-ideal", "--input", str(DATA / "p12.json"))
        assert len(rep["generators"]) == 1

    def test_homogenize(self, capsys):
        _, rep, _ = call(capsys, "homogenize", "--input", str(DATA / "p12.json"))
        (h,) = rep["homogenized"]
        assert [t["kappa"] for t in h["terms"]] == [[0, 0], [2, -1]]
        assert [t["kappa_r"] for t in h["terms"]] == [[0], [1]]

    def test_homogenize_poly_option(self, capsys, tmp_path):
        job = {"input": load("p12"), "options": {"poly": [[[1, 0, 1], "1"]]}}
        f = tmp_path / "job.json"
        f.write_text(json.dumps(job))
        _, rep, _ = call(capsys, "homogenize", "--input", str(f))
        assert rep["homogenized"][0]["terms"][0]["kappa"] == [0, 0]

    def test_stability(self, capsys, tmp_path):
        job = {"input": load("p12"), "options": {"q": [5], "theta": [1, 1], "rep": {"m": [1, 1, 2], "g": [3]}}}
        f = tmp_path / "job.json"
        f.write_text(json.dumps(job))
        code, rep, _ = call(capsys, "stability-check", "--input", str(f))
        assert code == 0 and rep["refined"] and rep["stable"] and rep["semistable"]
        assert rep["tested_subsets"] == [[0]] and rep["theta_zero_subsets"] == []

    def test_stability_unrestricted(self, capsys):
        _, rep, _ = call(capsys, "stability-check", "--input", str(DATA / "p12.json"), "--restricted", "false")
        assert len(rep["tested_subsets"]) == 6 and rep["restricted"] is False

    def test_fiber(self, capsys):
        code, rep, _ = call(capsys, "fiber-check", "--input", str(DATA / "w222.json"))
        assert code == 0 and [r["q"] for r in rep["results"]] == [3, 5]

    def test_out_file(self, capsys, tmp_path):
        out = tmp_path / "r.json"
        assert main(["lambda-r", "--input", str(DATA / "p12.json"), "--out", str(out)]) == 0
        assert capsys.readouterr().out == ""
        assert json.loads(out.read_text())["command"] == "lambda-r"

    def test_job_command_and_run(self):
        rep, code = run("build", load("p1"), {})
        assert code == 0 and len(rep["arrows"]) == 2


class TestDeterminism:
    @pytest.mark.parametrize("cmd", ["build", "captures-cox", "count", "homogenize"])
    def test_bytes(self, capsys, cmd):
        a = call(capsys, cmd, "--input", str(DATA / "p12.json"))[2]
        b = call(capsys, cmd, "--input", str(DATA / "p12.json"))[2]
        assert a == b

    def test_workers_same_bytes(self, capsys):
        a = call(capsys, "count", "--input", str(DATA / "w222.json"), "--q", "3")[2]
        b = call(capsys, "count", "--input", str(DATA / "w222.json"), "--q", "3", "--workers", "2")[2]
        assert a == b

    @pytest.mark.parametrize("name", ["p12", "w23", "w222", "f2"])
    def test_round_trip(self, capsys, tmp_path, name):
        _, rep, _ = call(capsys, "build", "--input", str(DATA / f"{name}.json"), "--emit-cox")
        cox = rep.pop("cox")
        assert cox["kind"] == "cox"
        f = tmp_path / "cox.json"
        f.write_text(json.dumps(cox))
        _, again, _ = call(capsys, "build", "--input", str(f))
        assert dumps(again) == dumps(rep)
        for cmd in ("captures-cox", "de-ideal"):
            x = call(capsys, cmd, "--input", str(DATA / f"{name}.json"))
            y = call(capsys, cmd, "--input", str(f))
            assert x[0] == y[0] and x[2] == y[2]

    def test_stdin(self):
        p = subprocess.run([sys.executable, "-m", "stacky_moduli", "lambda-r", "--input", "-"],
                           input=(DATA / "p12.json").read_text(), capture_output=True, text=True)
        assert p.returncode == 0 and json.loads(p.stdout)["lambda_r"]["basis"] == [[2, -1]]


class TestErrors:
    def write(self, tmp_path, doc):
        f = tmp_path / "in.json"
        f.write_text(doc if isinstance(doc, str) else json.dumps(doc))
        return str(f)

    def test_schema_path(self, capsys, tmp_path):
        bad = {"kind": "gl", "d": 1, "weights": [0, 2]}
        code, rep, _ = call(capsys, "build", "--input", self.write(tmp_path, bad))
        assert code == 2 and rep["error"] == "schema" and rep["path"] == "/weights/0"

    def test_job_path(self, capsys, tmp_path):
        bad = {"input": load("p12"), "options": {"q": ["five"]}}
        code, rep, _ = call(capsys, "count", "--input", self.write(tmp_path, bad))
        assert code == 2 and rep["path"] == "/options/q/0"

    def test_nested_input_path(self, capsys, tmp_path):
        bad = {"input": {"kind": "cox", "variables": ["x"], "group": {}, "degrees": [[1]], "tilting": [[0]]}}
        code, rep, _ = call(capsys, "build", "--input", self.write(tmp_path, bad))
        assert code == 2 and rep["path"] == "/input/group"

    def test_unknown_kind(self):
        with pytest.raises(InputError):
            parse_job({"kind": "toric"})
        with pytest.raises(InputError):
            parse_job([1, 2])

    def test_degree_length(self, capsys, tmp_path):
        doc = load("f2")
        doc["degrees"] = doc["degrees"][:2]
        code, rep, _ = call(capsys, "build", "--input", self.write(tmp_path, doc))
        assert code == 2 and rep["path"] == "/degrees"

    def test_bad_json(self, capsys, tmp_path):
        code, rep, _ = call(capsys, "build", "--input", self.write(tmp_path, "{nope"))
        assert code == 2 and rep["error"] == "json"

    def test_missing_file(self, capsys, tmp_path):
        code, rep, _ = call(capsys, "build", "--input", str(tmp_path / "absent.json"))
        assert code == 2 and rep["error"] == "io"

    def test_general_position(self, capsys, tmp_path):
        doc = {"kind": "gl", "d": 1, "weights": [2, 2], "forms": [[1, 1], [2, 2]]}
        code, rep, _ = call(capsys, "build", "--input", self.write(tmp_path, doc))
        assert code == 2 and rep["error"] == "GeneralPositionViolated"

    def test_bad_residue(self, capsys):
        code, rep, _ = call(capsys, "count", "--input", str(DATA / "w222.json"), "--q", "2")
        assert code == 2 and rep["error"] == "BadResidue"

    def test_budget(self, capsys):
        code, rep, _ = call(capsys, "count", "--input", str(DATA / "p12.json"), "--budget", "5")
        assert code == 2 and rep["error"] == "BudgetExceeded"

    def test_theta_length(self, capsys):
        code, rep, _ = call(capsys, "count", "--input", str(DATA / "p12.json"), "--theta", "1")
        assert code == 2 and rep["path"] == "/options/theta"

    def test_non_generic(self, capsys):
        code, rep, _ = call(capsys, "count", "--input", str(DATA / "p12.json"), "--theta", "0,0")
        assert code == 2 and rep["error"] == "NonGenericTheta"

    def test_usage(self, capsys):
        with pytest.raises(SystemExit) as e:
            main(["frobnicate", "--input", "x"])
        assert e.value.code == 2
        assert json.loads(capsys.readouterr().out)["error"] == "usage"
