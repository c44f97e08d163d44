import json
from fractions import Fraction
from pathlib import Path
from typing import Annotated, Any

import pydantic
import yaml
from pydantic import BaseModel, BeforeValidator, ConfigDict, Field, PlainSerializer
from pydantic.alias_generators import to_camel

from algramsey.errors import BadParameters
from algramsey.utils import (
    DEFAULT_SEARCH_BUDGET,
    DEFAULT_TENSOR_BUDGET,
    DEFAULT_TUPLE_BUDGET,
    frac_str,
    parse_fraction,
)

# exact rationals travel as "num/den" strings in every JSON/YAML document
Rational = Annotated[
    Fraction,
    BeforeValidator(parse_fraction),
    PlainSerializer(frac_str, return_type=str),
]


class CamelModel(BaseModel):
    """Base for JSON documents: snake_case in Python, camelCase on the wire."""

    model_config = ConfigDict(
        alias_generator=to_camel,
        populate_by_name=True,
        arbitrary_types_allowed=True,
    )

    def to_json(self) -> str:
        return self.model_dump_json(by_alias=True, indent=2)


class VertexGenerator(CamelModel):
    """Named vertex generator of an instance file."""

    name: str = Field(
        ...,
        description='One of "all", "randomSubset", "paley", "franklWilson", "erPolarity".',
    )
    params: dict[str, Any] = Field(default_factory=dict, description="Generator parameters.")


class InstanceFile(CamelModel):
    """JSON description of an algebraic instance."""

    name: str = Field("instance", description="Label carried into reports.")
    p: int | None = Field(None, description="Field prime.")
    r: int = Field(2, description="Uniformity of the hypergraph.")
    n: int = Field(1, description="Dimension of the vertex space F_p^n.")
    d: int | None = Field(None, description="Per-block degree cap of every polynomial.")
    m: int | None = Field(None, description="Number of polynomials; defaults to len(polys).")
    kind: str = Field("general", description='"general" or "stronglyAlgebraic".')
    polys: list[list[dict[str, Any]]] = Field(
        default_factory=list,
        description='Polynomials as lists of monomial records {"c": int, "e": [int; r*n]}.',
    )
    formula: list[Any] = Field(
        default_factory=lambda: ["not", ["atom", 1]],
        description='Edge formula as nested arrays, e.g. ["not", ["atom", 1]].',
    )
    vertices: list[list[int]] | None = Field(None, description="Explicit vertex vectors.")
    vertex_generator: VertexGenerator | None = Field(None, description="Generated vertex set.")
    symmetry_mode: str = Field("auto", description='"auto", "exhaustive" or "sampled".')

    @classmethod
    def parse(cls, data: Any) -> "InstanceFile":
        """
        Validate raw instance data.

        Raises:
            BadParameters: The data does not match the instance schema.
        """
        try:
            return cls.model_validate(data)
        except pydantic.ValidationError as e:
            raise BadParameters(f"invalid instance description: {e}") from e

    @classmethod
    def load(cls, path: Path) -> "InstanceFile":
        path = Path(path)
        if not path.exists():
            raise FileNotFoundError(f"instance file does not exist: {path}")
        try:
            data = json.loads(path.read_text(encoding="utf-8"))
        except json.JSONDecodeError as e:
            raise BadParameters(f"{path} is not valid JSON: {e}") from e
        return cls.parse(data)


class Budgets(BaseModel):
    """Work caps; every exhaustive routine raises BudgetExceeded past these."""

    tuple_evaluations: int = Field(DEFAULT_TUPLE_BUDGET, description="Edge evaluations per materialization.")
    tensor_entries: int = Field(DEFAULT_TENSOR_BUDGET, description="Dense tensor entries.")
    search_nodes: int = Field(DEFAULT_SEARCH_BUDGET, description="Backtracking nodes per pattern or oracle search.")
    clique_vertices_graph: int = Field(64, description="Vertex limit of the exact graph clique oracle.")
    clique_vertices_hyper: int = Field(30, description="Vertex limit of the exact hypergraph clique oracle.")
    biclique_vertices: int = Field(36, description="Vertex limit of the exact bi-clique oracle.")


class SweepConfig(BaseModel):
    """Trial counts of the verification suites."""

    tensor_trials: int = Field(200, description="Random polynomial tensors checked against the monomial ceiling.")
    semidiagonal_trials: int = Field(100, description="Random semi-diagonal tensors checked against the rank floor.")
    zeropattern_families: int = Field(50, description="Polynomial families per (n, m, d, p) cell.")
    zeropattern_primes: list[int] = Field(default_factory=lambda: [3, 5], description="Fields of the zero-pattern sweep.")
    m_trials: int = Field(50, description="Random dihypergraphs searched for M(r,s).")
    n_trials: int = Field(30, description="Random instances searched for N_{r,s}.")
    pattern_max_vertices: int = Field(12, description="Vertex count of the M(r,s) instances.")
    mixing_qs: list[int] = Field(default_factory=lambda: [2, 3, 5], description="Primes q of the mixing sweep.")
    frankl_wilson_ns: list[int] = Field(default_factory=lambda: [5, 6, 7, 8], description="Ground sets of FW(n, 2).")


class RunConfig(BaseModel):
    """YAML run configuration shared by every subcommand."""

    seed: int = Field(0, description="Root seed of every random choice.")
    instance: Path | None = Field(None, description="Default instance file.")
    output_dir: Path | None = Field(None, description="Directory for reports.")
    epsilon: Rational = Field(Fraction(1, 4), description="Regularity parameter.")
    beta: Rational = Field(Fraction(1, 2), description="Exponent parameter of graph_ramsey and hereditary_amplify.")
    budgets: Budgets = Field(default_factory=Budgets, description="Work caps.")
    sweep: SweepConfig = Field(default_factory=SweepConfig, description="Verification sweep sizes.")

    def validate_paths(self) -> None:
        """Ensure the configured instance exists and is a file."""
        if self.instance is None:
            return
        if not self.instance.exists():
            raise FileNotFoundError(f"instance does not exist: {self.instance}")
        if not self.instance.is_file():
            raise ValueError(f"instance is not a file: {self.instance}")


def resolve_config_paths(config_data: dict, config_path: Path) -> dict:
    """Resolve relative paths against the configuration file directory.

    Args:
        config_data: Raw configuration dictionary.
        config_path: Path to the configuration file.

    Returns:
        dict: Configuration data with resolved paths.
    """
    if not config_data or not config_path:
        return config_data or {}

    resolved_data = dict(config_data)
    base_dir = config_path.parent
    for key in ["instance", "output_dir"]:
        value = resolved_data.get(key)
        if not value:
            continue
        path = Path(value)
        if not path.is_absolute():
            resolved_data[key] = str((base_dir / path).resolve())
    return resolved_data


def load_run_config(config_path: Path | None) -> RunConfig:
    """Read a YAML run configuration; a missing path yields the defaults."""
    if config_path is None:
        return RunConfig()
    config_path = Path(config_path)
    if not config_path.exists():
        raise FileNotFoundError(f"configuration file does not exist: {config_path}")
    with open(config_path, "r", encoding="utf-8") as f:
        config_data = yaml.safe_load(f) or {}
    try:
        config = RunConfig(**resolve_config_paths(config_data, config_path))
    except pydantic.ValidationError as e:
        raise BadParameters(f"invalid run configuration {config_path}: {e}") from e
    config.validate_paths()
    return config
