"""Golden tests: render CSVs produced by the fbsec CLI (the external
interface of the primary component) and check the drawn content."""

import hashlib
import subprocess
import sys
from pathlib import Path

import numpy as np
import pytest

from fbsec_plots.cli import bundled_recipes, main
from fbsec_plots.recipes import RecipeError, load_recipe, read_rows
from fbsec_plots.render import build_figure, render


@pytest.fixture(scope="session")
def fig2_csv(tmp_path_factory):
    out = tmp_path_factory.mktemp("fig2")
    res = subprocess.run(
        [sys.executable, "-m", "fbsec", "run", "fig2", "--out", str(out)],
        capture_output=True,
        text=True,
    )
    assert res.returncode == 0, res.stderr
    return out / "results.csv"


@pytest.fixture(scope="session")
def fig4_csv(tmp_path_factory):
    out = tmp_path_factory.mktemp("fig4")
    res = subprocess.run(
        [
            sys.executable, "-m", "fbsec", "run", "fig4",
            "--out", str(out), "--samples", "20000",
        ],
        capture_output=True,
        text=True,
    )
    assert res.returncode == 0, res.stderr
    return out / "results.csv"


def _recipe(name, csv_path):
    return load_recipe(bundled_recipes()[name], csv_override=[str(csv_path)])


def test_fig2_golden(fig2_csv, tmp_path):
    recipe = _recipe("fig2", fig2_csv)
    fig, meta = build_figure(recipe)
    assert meta["series"] == ["achievable", "converse"]
    lines = {line.get_label(): line for line in fig.axes[0].get_lines()}
    achievable = np.asarray(lines["achievable"].get_ydata(), dtype=float)
    converse = np.asarray(lines["converse"].get_ydata(), dtype=float)
    assert np.all(converse >= achievable)
    assert np.all(np.diff(achievable) > 0)  # monotone in N
    assert meta["asymptote"] == pytest.approx(1.402058, abs=1e-4)
    out = tmp_path / "fig2.png"
    render(recipe, out)
    assert out.exists() and out.stat().st_size > 0


def test_fig4_golden_with_shading(fig4_csv, tmp_path):
    recipe = _recipe("fig4", fig4_csv)
    fig, meta = build_figure(recipe)
    assert meta["shaded_spans"] >= 1  # infeasible region is visually distinguished
    assert meta["warnings"] == []
    out = tmp_path / "fig4.png"
    render(recipe, out)
    assert out.exists() and out.stat().st_size > 0


def test_rerender_is_byte_stable(fig2_csv, tmp_path):
    recipe = _recipe("fig2", fig2_csv)
    a, b = tmp_path / "a.png", tmp_path / "b.png"
    render(recipe, a)
    render(recipe, b)
    assert hashlib.sha256(a.read_bytes()).digest() == hashlib.sha256(b.read_bytes()).digest()


def test_schema_mismatch_names_columns(tmp_path):
    bad = tmp_path / "bad.csv"
    bad.write_text("N,achievable,upper_bound,capacity_gap\n100,0.5,0.9,0.9\n")
    recipe = load_recipe(bundled_recipes()["fig2"], csv_override=[str(bad)])
    with pytest.raises(RecipeError) as err:
        read_rows(recipe)
    assert "converse" in str(err.value)  # missing column named
    assert "upper_bound" in str(err.value)  # unexpected column named


def test_header_only_csv_writes_nothing(tmp_path):
    empty = tmp_path / "empty.csv"
    empty.write_text("N,achievable,converse,capacity_gap\n")
    recipe = load_recipe(bundled_recipes()["fig2"], csv_override=[str(empty)])
    out = tmp_path / "nothing.png"
    with pytest.raises(RecipeError):
        render(recipe, out)
    assert not out.exists()


def test_empty_feasible_set_still_renders_with_warning(tmp_path):
    csv = tmp_path / "allbad.csv"
    header = "N,r0,outage_prob,outage_prob_stderr,throughput,throughput_stderr,feasible,n_samples,seed"
    rows = [
        "100,5,0.9,0.001,0.5,0.005,false,1000,0",
        "200,2.5,0.8,0.001,0.5,0.005,false,1000,0",
    ]
    csv.write_text(header + "\n" + "\n".join(rows) + "\n")
    recipe = load_recipe(bundled_recipes()["fig4"], csv_override=[str(csv)])
    out = tmp_path / "warned.png"
    meta = render(recipe, out)
    assert out.exists()
    assert meta["warnings"] and meta["shaded_spans"] == 1


def test_unknown_recipe_key_rejected(tmp_path):
    bad = tmp_path / "r.toml"
    bad.write_text('[recipe]\nstudy = "rate-bounds"\ncsv = ["x.csv"]\nsparkle = 1\n')
    with pytest.raises(RecipeError) as err:
        load_recipe(bad)
    assert "sparkle" in str(err.value)


def test_cli_end_to_end(fig4_csv, tmp_path):
    out = tmp_path / "cli.png"
    code = main(["fig4", "--csv", str(fig4_csv), "--out", str(out)])
    assert code == 0 and out.exists()
    code_bad = main(["fig4", "--csv", str(tmp_path / "missing.csv"), "--out", str(out)])
    assert code_bad == 2


def test_bundled_recipes_listed():
    assert sorted(bundled_recipes()) == ["fig2", "fig3", "fig4", "fig5"]
