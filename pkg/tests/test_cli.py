import json

import pytest

from jbtriple import cli
from jbtriple.schema import validate_document


def run(capsys, *argv):
    code = cli.main(list(argv))
    return code, capsys.readouterr()


def test_verify_theorem_on_sum(capsys):
    code, out = run(capsys, "verify-theorem", "--model", "sum:mat:R:2:2+mat:R:1:1", "--samples", "2000")
    assert code == 0
    rep = json.loads(out.out)
    validate_document(rep, "report")
    assert rep["status"] == "PASS"
    (entry,) = rep["models"]
    assert entry["lattice"]["lattice_size"] == 4
    assert any(c["name"].startswith("facial[") for c in entry["checks"])


def test_axioms_text_table(capsys):
    code, out = run(capsys, "axioms", "--model", "spin:3", "--format", "text")
    assert code == 0
    assert "jordan_identity" in out.out and "FAIL" not in out.out


def test_usage_errors(capsys, tmp_path):
    assert run(capsys, "peirce", "--model", "mat:R:2:2", "--element", "badfile")[0] == 2
    assert run(capsys, "axioms", "--model", "mat:Q:2:2")[0] == 2
    assert run(capsys, "axioms")[0] == 2
    assert run(capsys, "frobnicate")[0] == 2
    assert run(capsys, "verify-jb", "--model", "mat:R:2:2")[0] == 2
    assert run(capsys, "axioms", "--model", "spin:3", "--samples", "0")[0] == 2
    assert run(capsys, "axioms", "--model", "spin:3", "--out", str(tmp_path / "no" / "x.json"))[0] == 2
    wrong = tmp_path / "e.json"
    wrong.write_text('{"coords": [1, 0]}')
    assert run(capsys, "peirce", "--model", "mat:R:2:2", "--element", str(wrong))[0] == 2


def test_element_file(capsys, tmp_path):
    f = tmp_path / "e.json"
    f.write_text('{"coords": [1, 0, 0, 1]}')
    code, out = run(capsys, "peirce", "--model", "mat:R:2:2", "--tripotent", str(f), "--samples", "500")
    assert code == 0
    names = [c["name"] for c in json.loads(out.out)["models"][0]["checks"]]
    assert "peirce_rules[e0]" in names and not any("[e1]" in n for n in names)


def test_non_tripotent_element_fails(capsys, tmp_path):
    f = tmp_path / "e.json"
    f.write_text('{"coords": [2, 0, 0, 0]}')
    code, out = run(capsys, "peirce", "--model", "mat:R:2:2", "--element", str(f))
    assert code == 1 and json.loads(out.out)["status"] == "FAIL"


def test_tripotents_find_is_complete(capsys):
    code, out = run(capsys, "tripotents", "find", "--model", "mat:R:2:2", "--starts", "50")
    rep = json.loads(out.out)
    assert code == 0 and rep["status"] == "COMPLETE"
    assert len(rep["models"][0]["tripotents"]) > 5


def test_seed_and_env_override(capsys, monkeypatch, tmp_path):
    args = ("ideals", "--model", "sum:mat:R:2:2+mat:R:1:1")
    run(capsys, *args, "--seed", "5", "--out", str(tmp_path / "a.json"))
    run(capsys, *args, "--seed", "5", "--out", str(tmp_path / "b.json"))
    assert (tmp_path / "a.json").read_bytes() == (tmp_path / "b.json").read_bytes()
    monkeypatch.setenv("JB3_SEED", "9")
    code, out = run(capsys, *args, "--seed", "5")
    rep = json.loads(out.out)
    assert code == 0 and rep["seed"] == 9
    assert rep["tool_version"] and rep["models"][0]["model_hash"]
    monkeypatch.setenv("JB3_SEED", "nine")
    assert run(capsys, *args)[0] == 2


@pytest.mark.parametrize("cmd,model", [("peirce", "spin:3"), ("faces", "mat:R:2:2"),
                                       ("verify-jb", "jbmat:R:2"), ("faces", "spin:3")])
def test_commands_pass(capsys, cmd, model):
    code, out = run(capsys, cmd, "--model", model, "--samples", "1000", "--batch", "40")
    assert code == 0, [c for c in json.loads(out.out)["models"][0]["checks"] if not c["passed"]]


def test_contradiction_exit_code(monkeypatch, capsys):
    def broken(s, cfg, rng):
        return [cli._rec("forced", "test", False, 1.0, 0.0)]

    monkeypatch.setattr(cli, "cmd_axioms", broken)
    assert run(capsys, "axioms", "--model", "spin:3")[0] == 1
