import csv
from pathlib import Path

import pytest
from pypdf import PdfReader

from algramsey import app
from algramsey.config import RunConfig, SweepConfig, load_run_config
from algramsey.errors import BadParameters
from algramsey.suites import VerificationSuite, get_suite, get_suites, register

SAMPLE_CONFIG = Path(__file__).parent / "sample_run_config.yaml"


def small_config() -> RunConfig:
    """Run configuration with sweeps small enough for the test suite."""
    return RunConfig(
        seed=3,
        sweep=SweepConfig(
            tensor_trials=5,
            semidiagonal_trials=5,
            zeropattern_families=2,
            zeropattern_primes=[3],
            m_trials=2,
            n_trials=2,
            pattern_max_vertices=6,
            mixing_qs=[2, 3],
            frankl_wilson_ns=[5],
        ),
    )


def pdf_text(path: Path) -> str:
    return "\n".join(page.extract_text() for page in PdfReader(str(path)).pages)


@pytest.fixture(scope="module")
def sweep_outputs(tmp_path_factory):
    """Run every suite once and export both the CSV and the PDF."""
    out_dir = tmp_path_factory.mktemp("sweep")
    csv_path, pdf_path = out_dir / "sweep.csv", out_dir / "sweep.pdf"
    rows_seen = []
    sweeps = app.main(
        "all",
        small_config(),
        observer=lambda kind, payload: rows_seen.append(payload),
        csv_path=csv_path,
        pdf_path=pdf_path,
    )
    return sweeps, csv_path, pdf_path, rows_seen


def test_registry_discovers_every_suite():
    assert list(get_suites()) == ["franklwilson", "mixing", "patterns", "tensor", "zeropattern"]
    assert get_suite("mixing").title == "Polarity-graph bi-cliques"
    with pytest.raises(ValueError, match="No suite named"):
        get_suite("nope")


def test_register_allows_one_suite_per_module():
    mixing = get_suite("mixing")
    assert register(mixing) is mixing

    class RivalMixingSuite(VerificationSuite):
        __module__ = mixing.__module__

        def rows(self):
            return iter(())

    with pytest.raises(ValueError, match="already registered"):
        register(RivalMixingSuite)
    assert get_suite("mixing") is mixing


def test_every_check_passes(sweep_outputs):
    sweeps, _, _, _ = sweep_outputs
    assert [name for name, _, _, _ in sweeps] == list(get_suites())
    for name, _, _, rows in sweeps:
        assert rows, name
        failed = [row for row in rows if not row.passed]
        assert not failed, failed


def test_sweep_row_counts(sweep_outputs):
    sweeps, _, _, rows_seen = sweep_outputs
    counts = {name: len(rows) for name, _, _, rows in sweeps}
    assert counts["franklwilson"] == 2
    assert counts["mixing"] == 4
    assert counts["patterns"] == 4
    assert counts["tensor"] == 10
    # 1 prime x 3 dimensions x 4 family sizes x 2 degrees
    assert counts["zeropattern"] == 24
    assert len(rows_seen) == sum(counts.values())


def test_csv_export(sweep_outputs):
    sweeps, csv_path, _, _ = sweep_outputs
    with open(csv_path, newline="", encoding="utf-8") as f:
        assert f.readline().strip() == "suite,check,params,observed,bound,passed"
        f.seek(0)
        records = list(csv.DictReader(f))
    assert len(records) == sum(len(rows) for _, _, _, rows in sweeps)
    assert {record["passed"] for record in records} == {"pass"}
    mixing = [record for record in records if record["suite"] == "mixing"]
    assert mixing[0]["params"] == "q=2 side=er N=7"


def test_pdf_export(sweep_outputs):
    sweeps, _, pdf_path, _ = sweep_outputs
    text = pdf_text(pdf_path)
    assert "Verification sweep" in text
    assert "seed 3" in text
    for _, title, _, _ in sweeps:
        assert title in text
    assert "Page 1 of" in text


def test_single_suite_without_export(tmp_path):
    sweeps = app.main("franklwilson", small_config(), export=False, csv_path=tmp_path / "unused.csv")
    assert len(sweeps) == 1
    assert not (tmp_path / "unused.csv").exists()
    with pytest.raises(BadParameters):
        app.main("nope", small_config(), export=False)


def test_sample_run_config_loads():
    config = load_run_config(SAMPLE_CONFIG)
    assert config.seed == 7
    assert str(config.epsilon) == "1/5"
    assert config.sweep.mixing_qs == [2, 3]
    assert config.budgets.search_nodes == 500000
    assert load_run_config(None) == RunConfig()
    with pytest.raises(FileNotFoundError):
        load_run_config(SAMPLE_CONFIG.with_name("missing.yaml"))
