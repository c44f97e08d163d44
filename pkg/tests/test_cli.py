import json
from pathlib import Path

import pytest
import yaml

from algramsey.cli import main
from algramsey.errors import EXIT_BUDGET, EXIT_OK, EXIT_USAGE, EXIT_VALIDATION

INSTANCES = Path(__file__).parent / "instances"
SAMPLE_CONFIG = Path(__file__).parent / "sample_run_config.yaml"


def instance(name: str) -> str:
    return str(INSTANCES / f"{name}.json")


def test_generate_then_build(tmp_path, capsys):
    out = tmp_path / "paley13.json"
    assert main(["generate", "paley", "--p", "13", "--out", str(out)]) == EXIT_OK
    assert "saved to" in capsys.readouterr().out
    assert json.loads(out.read_text())["kind"] == "stronglyAlgebraic"
    assert main(["build", str(out)]) == EXIT_OK
    printed = capsys.readouterr().out
    assert "N: 13" in printed
    assert "edgeCount: 42" in printed


def test_build_canonical_generator(capsys):
    assert main(["build", instance("paley13")]) == EXIT_OK
    printed = capsys.readouterr().out
    assert "Instance\n  --------" in printed
    assert "kind: stronglyAlgebraic" in printed


def test_build_rejects_duplicate_vertices(capsys):
    assert main(["build", instance("duplicate_vertex")]) == EXIT_VALIDATION
    assert "DuplicateVertex" in capsys.readouterr().err


def test_build_missing_file():
    assert main(["build", instance("missing")]) == EXIT_USAGE


def test_ramsey_writes_a_verified_report(tmp_path, capsys):
    out = tmp_path / "ramsey.json"
    assert main(["ramsey", instance("paley13"), "--seed", "0", "--out", str(out)]) == EXIT_OK
    assert "verified: True" in capsys.readouterr().out
    report = json.loads(out.read_text())
    assert report["verified"] is True
    assert report["kind"] == "monochromaticClique"
    assert report["achievedSize"] == len(report["vertices"])


def test_instance_and_output_dir_from_config(tmp_path):
    config_path = tmp_path / "run.yaml"
    config_path.write_text(
        yaml.safe_dump({"seed": 1, "instance": instance("paley13"), "output_dir": "reports"}), encoding="utf-8"
    )
    assert main(["ramsey", "--config", str(config_path)]) == EXIT_OK
    report = json.loads((tmp_path / "reports" / "ramsey.json").read_text())
    assert report["verified"] is True
    assert main(["ramsey"]) == EXIT_USAGE


def test_ramsey_modes_and_arity(capsys):
    assert main(["ramsey", instance("triples_f13"), "--mode", "graph"]) == EXIT_USAGE
    assert main(["ramsey", instance("triples_f13"), "--mode", "hypergraph"]) == EXIT_OK
    assert main(["ramsey", instance("paley13"), "--beta", "half"]) == EXIT_USAGE


def test_regularity_on_a_complete_instance(tmp_path, capsys):
    out = tmp_path / "regularity.json"
    assert main(["regularity", instance("complete_f7"), "--epsilon", "1/5", "--out", str(out)]) == EXIT_OK
    assert "K > 8/epsilon: True" in capsys.readouterr().out
    report = json.loads(out.read_text())
    assert report["partition"]["K"] == 49
    assert report["report"]["tuplesBad"] == 0
    assert report["epsilon0"] == "1/131072"
    assert report["report"]["kReference"] == 5.0**10
    assert report["report"]["kRatio"] == pytest.approx(49 / 5**10)
    assert report["notes"] and "K = N = 49" in report["notes"][0]


def test_regularity_default_epsilon(tmp_path, capsys):
    paley101 = tmp_path / "paley101.json"
    assert main(["generate", "paley", "--p", "101", "--out", str(paley101)]) == EXIT_OK
    assert main(["regularity", str(paley101)]) == EXIT_OK
    assert "epsilon: 1/4" in capsys.readouterr().out
    assert main(["regularity", str(paley101), "--epsilon", "1/4"]) == EXIT_OK
    assert main(["regularity", str(paley101), "--epsilon", "1/3"]) == EXIT_VALIDATION


def test_regularity_needs_a_strong_instance():
    assert main(["regularity", instance("petersen")]) == EXIT_USAGE


@pytest.mark.parametrize("what, size", [("clique", 2), ("independent", 4)])
def test_oracle_on_petersen(what, size, capsys):
    assert main(["oracle", instance("petersen"), "--what", what]) == EXIT_OK
    assert f"size: {size}" in capsys.readouterr().out


def test_oracle_budget(capsys):
    assert main(["oracle", instance("paley13"), "--budget", "10"]) == EXIT_BUDGET
    assert "BudgetExceeded" in capsys.readouterr().err


def test_verify_with_a_config_file(tmp_path, capsys):
    csv_path, pdf_path = tmp_path / "sweep.csv", tmp_path / "sweep.pdf"
    args = ["verify", "--config", str(SAMPLE_CONFIG), "--suite", "mixing", "--out", str(csv_path), "--pdf", str(pdf_path)]
    assert main(args) == EXIT_OK
    assert "mixing: 4 of 4 checks passed" in capsys.readouterr().out
    assert csv_path.exists()
    assert pdf_path.exists()


@pytest.mark.parametrize(
    "args, name",
    [
        (["ramsey", instance("paley13"), "--seed", "5"], "ramsey.json"),
        (["ramsey", instance("triples_f13"), "--mode", "hypergraph", "--seed", "2"], "ramsey.json"),
        (["regularity", instance("complete_f7"), "--epsilon", "1/5", "--seed", "3"], "regularity.json"),
        (["verify", "--config", str(SAMPLE_CONFIG), "--suite", "mixing"], "sweep.csv"),
    ],
    ids=["graph-ramsey", "hypergraph-ramsey", "regularity", "verify"],
)
def test_same_seed_gives_identical_output(args, name, tmp_path):
    first, second = tmp_path / "first" / name, tmp_path / "second" / name
    for out in (first, second):
        out.parent.mkdir()
        assert main([*args, "--out", str(out)]) == EXIT_OK
    assert first.read_bytes() == second.read_bytes()
