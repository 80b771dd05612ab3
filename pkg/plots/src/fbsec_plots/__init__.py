"""Figure renderer for fbsec CSV outputs."""

from .recipes import CSV_COLUMNS, SCHEMA_VERSION, FigureRecipe, RecipeError, load_recipe, read_rows
from .render import build_figure, render

__version__ = "0.1.0"
