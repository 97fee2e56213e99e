import json
from pathlib import Path

import pytest

from percplots.recipes import (FigureRecipe, RecipeError, load_recipe,
                               read_table, read_threshold_json)

SAMPLES = Path(__file__).parent.parent / "sample_data"


def _write_recipe(tmp_path, payload, name="recipe.json"):
    path = tmp_path / name
    path.write_text(json.dumps(payload))
    return path


def test_load_recipe_resolves_paths_relative_to_file(tmp_path):
    (tmp_path / "data.csv").write_text("x\n1\n")
    recipe = load_recipe(_write_recipe(tmp_path, {
        "kind": "sweep", "inputs": ["data.csv"], "output": "fig.svg"}))
    assert recipe.inputs[0] == tmp_path / "data.csv"
    assert recipe.output == tmp_path / "fig.svg"


def test_unknown_kind_rejected(tmp_path):
    with pytest.raises(RecipeError, match="unknown figure kind"):
        load_recipe(_write_recipe(tmp_path, {
            "kind": "pie", "inputs": ["a.csv"], "output": "f.svg"}))


def test_missing_fields_rejected(tmp_path):
    with pytest.raises(RecipeError, match="missing"):
        load_recipe(_write_recipe(tmp_path, {"kind": "sweep", "inputs": ["a"]}))
    with pytest.raises(RecipeError, match="unknown recipe fields"):
        load_recipe(_write_recipe(tmp_path, {
            "kind": "sweep", "inputs": ["a"], "output": "f.svg", "color": "red"}))


def test_read_table_reports_column_diff(tmp_path):
    bad = tmp_path / "bad.csv"
    bad.write_text("model,family,dim,L,param,prob\nspin,hc,3,8,0.9,0.5\n")
    with pytest.raises(RecipeError) as err:
        read_table(bad, "sweep")
    message = str(err.value)
    assert "spanning_prob" in message and "prob" in message


def test_read_table_rejects_empty_files(tmp_path):
    empty = tmp_path / "empty.csv"
    empty.write_text("")
    with pytest.raises(RecipeError, match="no header"):
        read_table(empty, "sweep")
    header_only = tmp_path / "header.csv"
    header_only.write_text("model,family,dim,L,param,spanning_prob,stderr,trials,seed\n")
    with pytest.raises(RecipeError, match="no data rows"):
        read_table(header_only, "sweep")


def test_read_table_missing_file(tmp_path):
    with pytest.raises(RecipeError, match="does not exist"):
        read_table(tmp_path / "nope.csv", "sweep")


def test_threshold_json_validation(tmp_path):
    path = tmp_path / "t.json"
    path.write_text(json.dumps({"lambda_c": 0.9}))
    with pytest.raises(RecipeError, match="lacks threshold fields"):
        read_threshold_json(path)


def test_shipped_sample_artifacts_parse():
    rows = read_table(SAMPLES / "sweep_hc3_spin" / "sweep.csv", "sweep")
    assert {int(r["L"]) for r in rows} >= {8, 12}
    rows = read_table(SAMPLES / "component_size_hc6" / "component_size.csv",
                      "component-size")
    assert len({int(r["L"]) for r in rows}) == 2
    doc = read_threshold_json(SAMPLES / "threshold_hc3_spin" / "threshold.json")
    assert 0.9 < doc["lambda_c"] < 1.0
