import csv
from pathlib import Path

from algramsey.config import Budgets, InstanceFile, RunConfig
from algramsey.errors import BadParameters
from algramsey.hypergraph import AlgebraicInstance, build_instance, materialize
from algramsey.oracles import max_balanced_biclique_exact, max_clique_exact, max_independent_exact
from algramsey.pdf import generate_sweep_pdf
from algramsey.ramsey import graph_ramsey, hypergraph_ramsey, multicolor_ramsey
from algramsey.regularity import algebraic_regularity
from algramsey.suites import get_suites
from algramsey.suites._base import CSV_COLUMNS
from algramsey.utils import binomial

RAMSEY_MODES = ("graph", "hypergraph", "multicolor")
ORACLE_TARGETS = ("clique", "independent", "biclique")


def load_instance(path, budgets: Budgets | None = None) -> AlgebraicInstance:
    """Read and validate an instance file."""
    budgets = budgets or Budgets()
    return build_instance(InstanceFile.load(Path(path)), budgets.tuple_evaluations)


def instance_summary(inst: AlgebraicInstance, budgets: Budgets | None = None) -> dict:
    """Instance parameters plus the edge count when C(N, r) fits the tuple budget."""
    budgets = budgets or Budgets()
    summary = inst.summary()
    if binomial(inst.N, inst.r) <= budgets.tuple_evaluations:
        summary["edgeCount"] = materialize(inst, budgets.tuple_evaluations).edge_count()
    return summary


def run_ramsey(inst: AlgebraicInstance, mode: str, config: RunConfig, observer=None):
    """Dispatch to the graph, hypergraph or multicolor extraction.

    Args:
        inst: Instance to search.
        mode: One of RAMSEY_MODES.
        config: Seed, beta and budgets.
        observer: Optional callback receiving extraction steps.

    Returns:
        RamseyResult: The verified (or flagged) result.
    """
    budget = config.budgets.tuple_evaluations
    if mode == "hypergraph":
        return hypergraph_ramsey(inst, seed=config.seed, observer=observer, budget=budget)
    if mode not in RAMSEY_MODES:
        raise BadParameters(f"Unknown mode: {mode}")
    if inst.r != 2:
        raise BadParameters(f"{mode} mode needs a graph instance, got r = {inst.r}")
    if mode == "graph":
        return graph_ramsey(inst, config.beta, seed=config.seed, observer=observer, budget=budget)
    return multicolor_ramsey(inst, beta=config.beta, seed=config.seed, observer=observer, budget=budget)


def run_regularity(inst: AlgebraicInstance, config: RunConfig, observer=None):
    return algebraic_regularity(
        inst, config.epsilon, seed=config.seed, observer=observer, budget=config.budgets.tuple_evaluations
    )


def run_oracle(inst: AlgebraicInstance, what: str, budgets: Budgets | None = None):
    """Exact clique number, independence number or balanced bi-clique of a materialized instance."""
    budgets = budgets or Budgets()
    store = materialize(inst, budgets.tuple_evaluations)
    limit = budgets.clique_vertices_graph if inst.r == 2 else budgets.clique_vertices_hyper
    if what == "clique":
        return max_clique_exact(store, budgets.search_nodes, limit)
    if what == "independent":
        return max_independent_exact(store, budgets.search_nodes, limit)
    if what == "biclique":
        return max_balanced_biclique_exact(store, budgets.search_nodes, budgets.biclique_vertices)
    raise BadParameters(f"Unknown oracle target: {what}")


def write_report(model, path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(model.to_json() + "\n", encoding="utf-8")
    return path


def write_sweep_csv(sweeps, path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="", encoding="utf-8") as f:
        writer = csv.DictWriter(f, fieldnames=CSV_COLUMNS, lineterminator="\n")
        writer.writeheader()
        for _, _, _, rows in sweeps:
            writer.writerows(row.as_csv() for row in rows)
    return path


def main(suite, config: RunConfig, observer=None, export=True, csv_path=None, pdf_path=None):
    """Run one verification suite (or "all") and optionally export CSV/PDF.

    Args:
        suite: Suite name from the registry, or "all".
        config: Run configuration supplying seed, sweep sizes and budgets.
        observer: Optional callback for per-row progress.
        export: Whether to write the CSV/PDF outputs.
        csv_path: CSV destination; required when exporting.
        pdf_path: Optional PDF destination.

    Returns:
        list: (name, title, bound_name, rows) per suite, in registry order.
    """

    # get the suites
    available = get_suites()
    if suite == "all":
        names = list(available)
    elif suite in available:
        names = [suite]
    else:
        raise BadParameters(f"Unknown suite: {suite}")

    sweeps = []
    for name in names:
        this_suite = available[name](config.sweep, config.budgets, config.seed)  # instantiate
        if observer:
            this_suite.add_observer(observer)
        sweeps.append((name, this_suite.title, this_suite.bound_name, this_suite.run()))

    if export:
        if csv_path is not None:
            write_sweep_csv(sweeps, csv_path)
        if pdf_path is not None:
            generate_sweep_pdf(sweeps, pdf_path, seed=config.seed)
    return sweeps
