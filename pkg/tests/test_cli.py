import io
import json
from fractions import Fraction as F

import pytest

from cbd.cli import main
from cbd.fixtures import cyclic_system, perturbed_pr_box, pr_box, trivial
from cbd.jsonio import dumps_system


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = main(list(argv), out=out, err=err)
    return code, out.getvalue(), err.getvalue()


@pytest.fixture
def files(tmp_path):
    paths = {}
    for name, system in [("pr_box", pr_box()), ("trivial", trivial()),
                         ("perturbed", perturbed_pr_box(F(1, 8))), ("rank5", cyclic_system(5))]:
        path = tmp_path / f"{name}.json"
        path.write_text(dumps_system(system))
        paths[name] = str(path)
    return paths


def test_analyze_pr_box_text(files):
    code, out, _ = run("analyze", files["pr_box"])
    assert code == 0
    assert "CNTX = 1" in out
    assert "Verdict: CONTEXTUAL" in out


def test_analyze_trivial_text(files):
    code, out, _ = run("analyze", files["trivial"])
    assert code == 0
    assert "CNTX = 0" in out and "NONCONTEXTUAL" in out


def test_analyze_json_includes_chsh_only_for_consistent_rank4(files):
    _, out, _ = run("analyze", "--format", "json", files["pr_box"])
    report = json.loads(out)
    assert report["cntx"] == "1" and report["contextual"] is True
    assert report["chsh"]["s_value"] == "4"
    _, out, _ = run("analyze", "--format", "json", files["perturbed"])
    report = json.loads(out)
    assert report["cntx"] == "3/4" and "chsh" not in report and report["consistent"] is False


def test_validate(files):
    code, out, _ = run("validate", files["perturbed"])
    assert code == 0 and "VALID" in out and "Consistently connected: no" in out
    code, out, _ = run("validate", "--format", "json", files["pr_box"])
    assert json.loads(out)["consistent"] is True


def test_validation_failure_exit_code(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text('{"contexts": [{"id": "c", "contents": ["X"], "probabilities": {"+": "1/2"}}]}')
    code, _, err = run("validate", str(bad))
    assert code == 1 and "NonUnitMass" in err


def test_parse_failure_exit_code(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text('{"contexts": [{"id": "c", "contents": ["X"], "probabilities": {"x": "1"}}]}')
    assert run("analyze", str(bad))[0] == 2
    assert run("analyze", str(tmp_path / "missing.json"))[0] == 2


def test_chsh_command(files):
    code, out, _ = run("chsh", "--format", "json", files["pr_box"])
    assert code == 0 and json.loads(out)["s_value"] == "4"
    code, _, err = run("chsh", files["rank5"])
    assert code == 1 and "WrongShape" in err


def test_sample_space(files):
    code, out, _ = run("sample-space", "--format", "json", files["pr_box"])
    spaces = json.loads(out)
    assert code == 0 and len(spaces) == 4
    assert spaces[3]["mass"] == {"a": "0", "b": "1/2", "c": "1/2", "d": "0"}
    code, out, _ = run("sample-space", files["pr_box"])
    assert "mu(a) = 1/2" in out


def test_simulate(files):
    argv = ("simulate", "--format", "json", "--seed", "1", "--samples", "400", files["pr_box"])
    code, out, _ = run(*argv)
    assert code == 0
    report = json.loads(out)
    assert 0.85 <= float(F(report["cntx"])) <= 1.0
    assert report["simulation"]["seed"] == 1
    assert run(*argv)[1] == out  # byte-identical on rerun


def test_simulate_requires_seed(files):
    assert run("simulate", "--samples", "10", files["pr_box"])[0] == 2


def test_size_guard_option(files):
    code, _, err = run("analyze", "--max-vars", "4", files["pr_box"])
    assert code == 1 and "SystemTooLarge" in err


def test_fixtures_out(tmp_path):
    code, out, _ = run("fixtures", "--out", str(tmp_path / "fx"))
    assert code == 0
    assert sorted(p.name for p in (tmp_path / "fx").iterdir()) == [
        "perturbed_pr_box.json", "perturbed_trivial.json", "pr_box.json", "trivial.json"]
    code, out, _ = run("analyze", str(tmp_path / "fx" / "perturbed_pr_box.json"))
    assert "CNTX = 3/4" in out


def test_fixtures_stdout_and_bad_epsilon():
    code, out, _ = run("fixtures", "--epsilon", "1/4")
    assert code == 0 and set(json.loads(out)) == {"pr_box", "trivial", "perturbed_pr_box", "perturbed_trivial"}
    assert run("fixtures", "--epsilon", "3/4")[0] == 1
    assert run("fixtures", "--epsilon", "abc")[0] == 2
