"""``render-figure <recipe.json>``: render one figure per recipe file."""

from __future__ import annotations

import argparse
import sys

from .figures import render, save
from .recipes import RecipeError, load_recipe


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="render-figure",
        description="Render a figure from a JSON recipe pointing at "
                    "simulation CSV/JSON artifacts")
    parser.add_argument("recipe", nargs="+", help="recipe JSON file(s)")
    args = parser.parse_args(argv)
    status = 0
    for path in args.recipe:
        try:
            recipe = load_recipe(path)
            fig, _ = render(recipe)
            save(fig, recipe.output)
            print(f"wrote {recipe.output}")
        except RecipeError as exc:
            print(f"error: {path}: {exc}", file=sys.stderr)
            status = 1
    return status


if __name__ == "__main__":
    sys.exit(main())
