import json

import pytest

from volut.cli import VolutCLI
from volut.commands.common import EXIT_ERROR, EXIT_OK, EXIT_VIOLATION


@pytest.fixture(autouse=True)
def isolated(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    for name in ("VOLUT_CAP", "VOLUT_SAMPLES", "VOLUT_SEED", "VOLUT_LOG_LEVEL"):
        monkeypatch.delenv(name, raising=False)


def run(*argv: str) -> int:
    return VolutCLI().run(list(argv))


def test_build_then_check(tmp_path):
    path = tmp_path / "vect.json"
    assert run("build", "fdvect", "--q", "2", "--max-dim", "1", "-o", str(path)) == EXIT_OK
    document = json.loads(path.read_text())
    assert document["type"] == "volutive"
    assert document["kind"] == "strict"
    assert run("check", str(path)) == EXIT_OK
    assert run("check", str(path), "--structure", "zorro") == EXIT_OK
    assert run("check", str(path), "--structure", "dagger") == EXIT_OK


def test_corrupted_duality_is_a_violation(tmp_path, capsys):
    path = tmp_path / "vect.json"
    run("build", "fdvect", "--max-dim", "1", "-o", str(path))
    document = json.loads(path.read_text())
    document["d"]["morphisms"]["1x1:1"] = "1x1:0"
    path.write_text(json.dumps(document))
    capsys.readouterr()
    assert run("check", str(path)) == EXIT_VIOLATION
    report = json.loads(capsys.readouterr().out)
    assert report["ok"] is False
    assert report["violations"]


def test_malformed_input_exits_with_error(tmp_path):
    path = tmp_path / "broken.json"
    path.write_text('{"type": "category", "objects": ["a"]}')
    assert run("check", str(path)) == EXIT_ERROR
    assert run("check", str(tmp_path / "missing.json")) == EXIT_ERROR


def test_cap_exhaustion_exits_with_error():
    assert run("build", "fdvect", "--q", "3", "--max-dim", "3", "--cap", "100") == EXIT_ERROR


def test_non_dualizing_object_exits_with_error():
    assert run("build", "quantale", "--preset", "lukasiewicz3", "--dualizing", "1") == EXIT_ERROR


def test_strict_quantale_structure(tmp_path):
    path = tmp_path / "l3.json"
    args = ["build", "quantale", "--preset", "lukasiewicz3", "--dualizing", "0", "-o", str(path)]
    assert run(*args) == EXIT_OK
    assert run("check", str(path), "--kind", "strict") == EXIT_OK


def test_lax_structure_fails_strict_check(tmp_path):
    path = tmp_path / "l3.json"
    run("build", "quantale", "--preset", "lukasiewicz3", "-o", str(path))
    assert run("check", str(path)) == EXIT_OK
    assert run("check", str(path), "--kind", "strict") == EXIT_VIOLATION


def test_finset_closed_structure_leaves_its_range():
    # 2 × 2 = 4 lies outside the sizes 0..2
    assert run("build", "finset", "--max-size", "2", "--structure", "closed") == EXIT_ERROR


def test_closed_document_checks(tmp_path):
    path = tmp_path / "u3.json"
    args = ["build", "quantale", "--preset", "unit_chain3", "--structure", "closed", "-o", str(path)]
    assert run(*args) == EXIT_OK
    assert run("check", str(path)) == EXIT_OK


def test_relation_commands(tmp_path, capsys):
    v = tmp_path / "v.json"
    w = tmp_path / "w.json"
    assert run("rel", "random", "--source", "2", "--target", "3", "--seed", "3", "-o", str(v)) == EXIT_OK
    assert run("rel", "adjoint", str(v), "-o", str(w)) == EXIT_OK
    assert json.loads(w.read_text())["source"] == 3
    assert run("rel", "compose", str(w), str(v), "-o", str(tmp_path / "wv.json")) == EXIT_OK
    capsys.readouterr()
    assert run("rel", "info", str(v)) == EXIT_OK
    info = json.loads(capsys.readouterr().out)
    assert info["type"] == "relation-info"
    assert run("check", str(v)) == EXIT_OK
    assert run("rel", "compose", str(v), str(v)) == EXIT_ERROR


def test_relation_lemmas():
    assert run("rel", "lemmas", "--max-dim", "2", "--samples", "20") == EXIT_OK


def test_prof_commands(tmp_path):
    assert run("prof", "zorro", "--category", "chain3") == EXIT_OK
    assert run("prof", "local", "--source", "terminal", "--target", "terminal") == EXIT_OK


def test_morita_commands(capsys):
    assert run("morita", "algebras", "--format", "text") == EXIT_OK
    assert capsys.readouterr().out.count("dim") == 4
    assert run("morita", "herm-search", "--max-dim", "1") == EXIT_OK


def test_suite_report(tmp_path):
    path = tmp_path / "suite.json"
    assert run("suite", "linrel", "--samples", "20", "-o", str(path)) == EXIT_OK
    document = json.loads(path.read_text())
    assert document["type"] == "suite-report"
    assert document["ok"] is True
    assert [s["suite"] for s in document["suites"]] == ["linrel"]
    statuses = {c["status"] for c in document["suites"][0]["checks"]}
    assert "fail" not in statuses


def test_unknown_suite_is_rejected():
    with pytest.raises(SystemExit):
        run("suite", "nonsense")
