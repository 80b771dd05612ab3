"""Figure recipes: what to plot from which CSVs, validated strictly.

A recipe never recomputes metrics; the CSV produced by the ``fbsec`` CLI
is the single source of numerical truth.  Input files are gated on an
exact header match against the versioned column schema for the declared
study type.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

try:
    import tomllib
except ModuleNotFoundError:  # Python 3.10
    import tomli as tomllib

#: Version of the fbsec CSV schema this renderer understands.
SCHEMA_VERSION = "1"

#: Exact, ordered column schemas  (mirror of the fbsec CLI contract).
CSV_COLUMNS = {
    "rate-bounds": (
        "N",
        "achievable",
        "converse",
        "capacity_gap",
    ),
    "secrecy-throughput": (
        "N",
        "delta_bar",
        "r0",
        "avg_error_prob",
        "avg_error_prob_stderr",
        "throughput",
        "throughput_stderr",
        "n_samples",
        "seed",
    ),
    "effective-throughput": (
        "N",
        "r0",
        "outage_prob",
        "outage_prob_stderr",
        "throughput",
        "throughput_stderr",
        "feasible",
        "n_samples",
        "seed",
    ),
    "sop-study": (
        "N",
        "scheme",
        "throughput",
        "throughput_stderr",
        "sop",
        "sop_stderr",
        "sop_feasible",
        "n_samples",
        "seed",
    ),
}

#: Default series-grouping column per study (None = wide format).
DEFAULT_SERIES = {
    "rate-bounds": None,
    "secrecy-throughput": "delta_bar",
    "effective-throughput": None,
    "sop-study": "scheme",
}

DEFAULT_X_SCALE = {
    "rate-bounds": "log",
    "secrecy-throughput": "linear",
    "effective-throughput": "linear",
    "sop-study": "linear",
}


class RecipeError(ValueError):
    """Invalid recipe or schema-mismatched input CSV."""


@dataclass(frozen=True)
class FigureRecipe:
    study: str
    csv_paths: tuple[Path, ...]
    series_column: str | None
    x_scale: str
    title: str
    x_label: str
    y_label: str
    shade_infeasible: bool = True

    def __post_init__(self):
        if self.study not in CSV_COLUMNS:
            raise RecipeError(f"unsupported study type {self.study!r}")
        if not self.csv_paths:
            raise RecipeError("recipe needs at least one input CSV")
        if self.x_scale not in ("linear", "log"):
            raise RecipeError("x_scale must be 'linear' or 'log'")
        columns = CSV_COLUMNS[self.study]
        if self.series_column is not None and self.series_column not in columns:
            raise RecipeError(
                f"series column {self.series_column!r} is not in the "
                f"{self.study} schema {columns}"
            )


_ALLOWED_KEYS = {
    "study",
    "csv",
    "series_column",
    "x_scale",
    "title",
    "x_label",
    "y_label",
    "shade_infeasible",
}

_DEFAULT_Y = {
    "rate-bounds": "secrecy rate [bits/channel use]",
    "secrecy-throughput": "secrecy throughput [bits/channel use]",
    "effective-throughput": "effective throughput [bits/channel use]",
    "sop-study": "reliable throughput [bits/channel use]",
}


def load_recipe(path, csv_override=None) -> FigureRecipe:
    """Parse a recipe TOML; relative CSV paths resolve against the recipe."""
    path = Path(path)
    try:
        data = tomllib.loads(path.read_text(encoding="utf-8"))
    except tomllib.TOMLDecodeError as err:
        raise RecipeError(f"TOML parse error in {path}: {err}") from err
    recipe = data.get("recipe")
    if not isinstance(recipe, dict):
        raise RecipeError("recipe file must contain a [recipe] table")
    unknown = sorted(set(recipe) - _ALLOWED_KEYS)
    if unknown:
        raise RecipeError(f"unknown recipe keys: {', '.join(unknown)}")

    study = recipe.get("study")
    if study not in CSV_COLUMNS:
        raise RecipeError(f"recipe.study must be one of {sorted(CSV_COLUMNS)}")

    if csv_override:
        csv_paths = tuple(Path(p) for p in csv_override)
    else:
        raw = recipe.get("csv")
        if isinstance(raw, str):
            raw = [raw]
        if not isinstance(raw, list) or not raw or not all(isinstance(p, str) for p in raw):
            raise RecipeError("recipe.csv must be a path or nonempty list of paths")
        csv_paths = tuple(
            (path.parent / p) if not Path(p).is_absolute() else Path(p) for p in raw
        )

    series = recipe.get("series_column", DEFAULT_SERIES[study])
    return FigureRecipe(
        study=study,
        csv_paths=csv_paths,
        series_column=series,
        x_scale=recipe.get("x_scale", DEFAULT_X_SCALE[study]),
        title=recipe.get("title", study),
        x_label=recipe.get("x_label", "blocklength N [channel uses]"),
        y_label=recipe.get("y_label", _DEFAULT_Y[study]),
        shade_infeasible=bool(recipe.get("shade_infeasible", True)),
    )


def read_rows(recipe: FigureRecipe) -> list[dict[str, str]]:
    """Read and schema-validate every input CSV; rows concatenated in order."""
    expected = list(CSV_COLUMNS[recipe.study])
    rows: list[dict[str, str]] = []
    for path in recipe.csv_paths:
        if not path.exists():
            raise RecipeError(f"input CSV not found: {path}")
        lines = path.read_text(encoding="utf-8").strip().splitlines()
        if not lines:
            raise RecipeError(f"{path}: empty file")
        header = lines[0].split(",")
        if header != expected:
            missing = [c for c in expected if c not in header]
            extra = [c for c in header if c not in expected]
            raise RecipeError(
                f"{path}: header does not match the {recipe.study} schema "
                f"v{SCHEMA_VERSION}; missing columns {missing}, unexpected {extra}"
            )
        for line in lines[1:]:
            parts = line.split(",")
            if len(parts) != len(expected):
                raise RecipeError(f"{path}: malformed row {line!r}")
            rows.append(dict(zip(expected, parts)))
    if not rows:
        raise RecipeError("no data rows in input CSVs")
    return rows
