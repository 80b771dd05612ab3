"""fbsec-plot: render an fbsec results CSV into a publication-style figure.

    fbsec-plot <recipe.toml> --out <png> [--csv results.csv ...]

Bundled recipes (fig2..fig5) can be referenced by name; --csv overrides
the input paths declared in the recipe.  Exit codes: 0 success, 2 recipe
or schema error.
"""

from __future__ import annotations

import argparse
import json
import sys
from importlib import resources
from pathlib import Path

from .recipes import RecipeError, load_recipe
from .render import render


def bundled_recipes() -> dict[str, Path]:
    base = resources.files("fbsec_plots").joinpath("recipes")
    return {
        entry.name[: -len(".toml")]: Path(str(entry))
        for entry in sorted(base.iterdir(), key=lambda e: e.name)
        if entry.name.endswith(".toml")
    }


def _resolve(arg: str) -> Path:
    p = Path(arg)
    if p.exists():
        return p
    name = arg[: -len(".toml")] if arg.endswith(".toml") else arg
    recipes = bundled_recipes()
    if name in recipes:
        return recipes[name]
    raise RecipeError(f"recipe not found: {arg}")


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="fbsec-plot", description=__doc__.splitlines()[0])
    parser.add_argument("recipe", help="Recipe .toml path or bundled name (fig2..fig5).")
    parser.add_argument("--out", required=True, help="Output image path (.png).")
    parser.add_argument(
        "--csv",
        action="append",
        default=None,
        help="Override the recipe's input CSV path(s); repeatable.",
    )
    parser.add_argument("--list", action="store_true", help="List bundled recipes and exit.")
    args = parser.parse_args(argv)

    if args.list:
        for name, path in bundled_recipes().items():
            print(f"{name}\t{path}")
        return 0
    try:
        recipe = load_recipe(_resolve(args.recipe), csv_override=args.csv)
        meta = render(recipe, args.out)
    except RecipeError as err:
        print(json.dumps({"tool": "fbsec-plot", "code": 2, "error": str(err)}), file=sys.stderr)
        return 2
    for warning in meta["warnings"]:
        print(f"warning: {warning}", file=sys.stderr)
    print(f"wrote {meta['out_path']} ({', '.join(meta['series'])})")
    return 0
