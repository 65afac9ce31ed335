"""End-to-end tests for the figures package against CLI-generated CSVs."""
import hashlib
from pathlib import Path

import pytest

from tierwave import cli
from tierwave_figures import EXPERIMENTS, FigureSpec, SchemaError, load_table, render, render_all

# smallest sweeps that still produce a valid CSV per experiment
CHEAP_SWEEPS = {
    "macro_tc_vs_alpha": [4.0],
    "macro_rr_vs_pf": [2],
    "femto_tpt": [50],
    "femto_ase": [10],
    "allocation_vs_eta": [0.5],
    "two_tier_ase": [50],
    "femto_user_tpt": [50],
    "required_spectrum": [1e5],
}


@pytest.fixture(scope="module")
def golden_dir(tmp_path_factory):
    out = tmp_path_factory.mktemp("golden_csvs")
    for experiment, sweep in CHEAP_SWEEPS.items():
        cfg = cli.ExperimentConfig(experiment=experiment, out_dir=out,
                                   seed=7, samples=2000, sweep=sweep)
        cli.run(cfg)
    return out


def _digest(path: Path) -> str:
    return hashlib.sha256(path.read_bytes()).hexdigest()


def test_render_all_one_image_per_experiment(golden_dir, tmp_path):
    written = render_all(golden_dir, tmp_path)
    assert sorted(p.stem for p in written) == sorted(EXPERIMENTS)
    for path in written:
        assert path.suffix == ".png"
        assert path.stat().st_size > 0


def test_inputs_unmodified_and_idempotent(golden_dir, tmp_path):
    before = {p.name: _digest(p) for p in golden_dir.glob("*.csv")}
    render_all(golden_dir, tmp_path / "a")
    render_all(golden_dir, tmp_path / "a")
    after = {p.name: _digest(p) for p in golden_dir.glob("*.csv")}
    assert before == after


def test_schema_error_names_missing_column(tmp_path):
    bad = tmp_path / "femto_ase.csv"
    bad.write_text("n_f,theta,ase,rho_f_star\n50,0.5,1e-4,0.3\n")
    with pytest.raises(SchemaError, match="ase_star"):
        load_table(bad, "femto_ase")
    with pytest.raises(SchemaError, match="ase_star"):
        render_all(tmp_path, tmp_path / "plots")


def test_empty_csv_rejected(tmp_path):
    empty = tmp_path / "femto_tpt.csv"
    empty.write_text("n_f,t_f_analytical,t_f_mc,t_f_mc_stderr\n")
    with pytest.raises(SchemaError, match="no data rows"):
        load_table(empty, "femto_tpt")


def test_unknown_experiment_rejected(tmp_path):
    with pytest.raises(ValueError, match="unknown experiment"):
        FigureSpec(experiment="bogus", csv_path=tmp_path / "x.csv",
                   out_path=tmp_path / "x.png")


def test_render_single_spec(golden_dir, tmp_path):
    spec = FigureSpec(experiment="femto_ase",
                      csv_path=golden_dir / "femto_ase.csv",
                      out_path=tmp_path / "nested" / "femto_ase.png")
    out = render(spec)
    assert out.exists()


def test_no_csvs_found(tmp_path):
    with pytest.raises(FileNotFoundError):
        render_all(tmp_path, tmp_path / "plots")


def test_cli_entry_point(golden_dir, tmp_path, capsys):
    from tierwave_figures.render import main
    assert main([str(golden_dir), str(tmp_path)]) == 0
    assert len(capsys.readouterr().out.splitlines()) == len(EXPERIMENTS)
    assert main([]) == 2
    assert main([str(tmp_path / "missing"), str(tmp_path)]) == 1
