"""Figure rendering for tierwave experiment CSVs.

Each experiment id maps to a fixed column schema (the CLI's CSV contract)
and a plotting routine.  Rendering validates the schema up front, never
mutates the input, and is idempotent: re-rendering overwrites the image.
"""
from __future__ import annotations

import csv
import sys
from dataclasses import dataclass, field
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

# column schema per experiment id; must match the CLI contract
EXPERIMENTS = {
    "macro_tc_vs_alpha": ["alpha_c", "t_c_analytical", "t_c_mc", "t_c_mc_stderr"],
    "macro_rr_vs_pf": ["u_c", "t_c_rr", "t_c_pf", "t_c_pf_stderr"],
    "femto_tpt": ["n_f", "t_f_analytical", "t_f_mc", "t_f_mc_stderr"],
    "femto_ase": ["n_f", "theta", "ase", "rho_f_star", "ase_star"],
    "allocation_vs_eta": ["eta", "rho", "ase_network", "t_cu", "t_fu"],
    "two_tier_ase": ["n_f", "ase_eta_high", "ase_eta_low"],
    "femto_user_tpt": ["n_f", "rho", "rho_f_star", "t_fu", "per_femtocell"],
    "required_spectrum": ["d_c", "d_f", "wf_rr_hz", "wf_pf_hz", "pf_over_rr"],
}


class SchemaError(ValueError):
    """CSV columns do not match the experiment's contract."""


@dataclass(frozen=True)
class FigureSpec:
    """One figure: experiment id, input CSV, output image and axis flags."""

    experiment: str
    csv_path: Path
    out_path: Path
    x_label: str | None = None
    y_label: str | None = None
    log_x: bool = False
    log_y: bool = False
    extra: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.experiment not in EXPERIMENTS:
            raise ValueError(f"unknown experiment {self.experiment!r}")


def load_table(path: Path, experiment: str) -> dict[str, np.ndarray]:
    """Read a CSV into column arrays, validating the schema.

    Raises SchemaError naming the first missing column.
    """
    expected = EXPERIMENTS[experiment]
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        header = reader.fieldnames or []
        for col in expected:
            if col not in header:
                raise SchemaError(
                    f"{path}: missing column '{col}' required by "
                    f"experiment '{experiment}'")
        rows = list(reader)
    if not rows:
        raise SchemaError(f"{path}: no data rows")
    return {col: np.array([float(r[col]) for r in rows]) for col in expected}


def _errorbar(ax, x, mc, err, label):
    ax.errorbar(x, mc, yerr=err, fmt="o", capsize=3, label=label)


def _plot_macro_tc_vs_alpha(ax, t):
    ax.plot(t["alpha_c"], t["t_c_analytical"], "-s", label="analytical")
    _errorbar(ax, t["alpha_c"], t["t_c_mc"], t["t_c_mc_stderr"], "Monte Carlo")
    ax.set_xlabel("path-loss exponent")
    ax.set_ylabel("macro throughput (b/s/Hz)")


def _plot_macro_rr_vs_pf(ax, t):
    ax.plot(t["u_c"], t["t_c_rr"], "-s", label="round robin")
    _errorbar(ax, t["u_c"], t["t_c_pf"], t["t_c_pf_stderr"], "proportional fair")
    ax.set_xlabel("macrocell users")
    ax.set_ylabel("macro throughput (b/s/Hz)")


def _plot_femto_tpt(ax, t):
    ax.plot(t["n_f"], t["t_f_analytical"], "-s", label="analytical")
    _errorbar(ax, t["n_f"], t["t_f_mc"], t["t_f_mc_stderr"], "Monte Carlo")
    ax.set_xlabel("femtocells per cell site")
    ax.set_ylabel("femto throughput (b/s/Hz)")


def _plot_femto_ase(ax, t):
    for n_f in np.unique(t["n_f"]):
        mask = t["n_f"] == n_f
        ax.plot(t["theta"][mask], t["ase"][mask], label=f"N_f = {int(n_f)}")
    ax.axhline(t["ase_star"].max(), linestyle="--", color="gray",
               label=f"plateau {t['ase_star'].max():.3g}")
    ax.set_xlabel("access fraction")
    ax.set_ylabel("femto ASE (b/s/Hz/m$^2$)")


def _plot_allocation_vs_eta(ax, t):
    ax.plot(t["eta"], t["rho"], "-o", label="macro share")
    ax.plot(t["eta"], 1.0 - t["rho"], "-s", label="femto share")
    ax.set_ylim(0, 1)
    ax.set_xlabel("QoS fraction")
    ax.set_ylabel("spectrum share")


def _plot_two_tier_ase(ax, t):
    ax.plot(t["n_f"], t["ase_eta_high"], "-o", label="eta = 0.5")
    ax.plot(t["n_f"], t["ase_eta_low"], "-s", label="eta = 0.01")
    ax.set_xlabel("femtocells per cell site")
    ax.set_ylabel("network ASE (b/s/Hz/m$^2$)")


def _plot_femto_user_tpt(ax, t):
    ax.plot(t["n_f"], t["per_femtocell"], "-o", label="per femtocell")
    ax.plot(t["n_f"], t["t_fu"], "-s", label="per femto user")
    ax.set_xlabel("femtocells per cell site")
    ax.set_ylabel("throughput share (b/s/Hz)")


def _plot_required_spectrum(ax, t):
    ax.plot(t["d_c"], t["wf_rr_hz"], "-o", label="round robin")
    ax.plot(t["d_c"], t["wf_pf_hz"], "-s", label="proportional fair")
    ax.set_xlabel("macro user demand (b/s)")
    ax.set_ylabel("required spectrum (Hz)")


_PLOTTERS = {
    "macro_tc_vs_alpha": _plot_macro_tc_vs_alpha,
    "macro_rr_vs_pf": _plot_macro_rr_vs_pf,
    "femto_tpt": _plot_femto_tpt,
    "femto_ase": _plot_femto_ase,
    "allocation_vs_eta": _plot_allocation_vs_eta,
    "two_tier_ase": _plot_two_tier_ase,
    "femto_user_tpt": _plot_femto_user_tpt,
    "required_spectrum": _plot_required_spectrum,
}


def render(spec: FigureSpec) -> Path:
    """Render one figure; returns the written image path."""
    table = load_table(Path(spec.csv_path), spec.experiment)
    fig, ax = plt.subplots(figsize=(6, 4))
    try:
        _PLOTTERS[spec.experiment](ax, table)
        if spec.x_label:
            ax.set_xlabel(spec.x_label)
        if spec.y_label:
            ax.set_ylabel(spec.y_label)
        if spec.log_x:
            ax.set_xscale("log")
        if spec.log_y:
            ax.set_yscale("log")
        ax.legend()
        ax.grid(True, alpha=0.3)
        fig.tight_layout()
        out = Path(spec.out_path)
        out.parent.mkdir(parents=True, exist_ok=True)
        fig.savefig(out, dpi=120)
    finally:
        plt.close(fig)
    return out


_LOG_AXES = {"required_spectrum": {"log_x": True, "log_y": True}}


def render_all(csv_dir, out_dir) -> list[Path]:
    """Render every recognized <experiment>.csv in csv_dir into out_dir."""
    csv_dir, out_dir = Path(csv_dir), Path(out_dir)
    written = []
    for experiment in sorted(EXPERIMENTS):
        src = csv_dir / f"{experiment}.csv"
        if not src.exists():
            continue
        spec = FigureSpec(experiment=experiment, csv_path=src,
                          out_path=out_dir / f"{experiment}.png",
                          **_LOG_AXES.get(experiment, {}))
        written.append(render(spec))
    if not written:
        raise FileNotFoundError(f"no experiment CSVs found in {csv_dir}")
    return written


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    if len(argv) != 2:
        print("usage: tierwave-figures <csv_dir> <out_dir>", file=sys.stderr)
        return 2
    try:
        written = render_all(argv[0], argv[1])
    except (SchemaError, FileNotFoundError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    for path in written:
        print(f"wrote {path}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
