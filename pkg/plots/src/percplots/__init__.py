"""Figure rendering for percolation simulation artifacts (display only)."""

__version__ = "0.1.0"

from .recipes import FigureRecipe, RecipeError, load_recipe
from .figures import render

__all__ = ["FigureRecipe", "RecipeError", "load_recipe", "render", "__version__"]
