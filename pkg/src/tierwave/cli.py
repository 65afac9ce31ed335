"""Experiment runner: config ingestion, deterministic seeding, sweep
orchestration and CSV emission.

Each experiment writes one CSV with a fixed column schema.  Identical
config and seed produce byte-identical output.  Sweep points run on a
thread pool (capped by TIERWAVE_THREADS) and rows are emitted in sweep
order regardless of completion order.
"""
from __future__ import annotations

import argparse
import csv
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

try:
    import tomllib
except ModuleNotFoundError:
    import tomli as tomllib

from . import allocation, femtocell, macrocell, schedsim
from .config import ModulationConfig, QoSConfig, SystemParams, table_params


@dataclass
class ExperimentConfig:
    experiment: str
    scenario: str = "LA"
    seed: int = 0
    out_dir: Path = Path(".")
    samples: int = 200_000
    sweep: list[float] = field(default_factory=list)
    eta: float = 0.5
    scheduler: str = "rr"
    demand_c: float = 1e5     # b/s per macro user
    demand_f: float = 1e7     # b/s per femto user
    overrides: dict = field(default_factory=dict)

    def params(self, **extra) -> SystemParams:
        return table_params(self.scenario, **{**self.overrides, **extra})


_DEFAULT_SWEEPS = {
    "macro_tc_vs_alpha": [3.5, 4.0, 4.5],
    "macro_rr_vs_pf": [1, 2, 4, 8, 16, 32],
    "femto_tpt": [10, 50, 100, 150],
    "femto_ase": [10, 50, 100],
    "allocation_vs_eta": [0.01, 0.05, 0.1, 0.2, 0.3, 0.4, 0.5],
    "two_tier_ase": [10, 30, 50, 70, 90, 110, 130],
    "femto_user_tpt": [10, 30, 50, 70, 90, 110, 130],
    "required_spectrum": [1e4, 3e4, 1e5, 3e5, 1e6],
}


def _mod() -> ModulationConfig:
    return ModulationConfig.default()


def _rr_t_c(params: SystemParams) -> float:
    env = macrocell.build_macro_env(params, _mod())
    return macrocell.macro_throughput_rr(env)


def _pf_t_c(cfg: ExperimentConfig, params: SystemParams, u_c: int,
            seed: int) -> tuple[float, float]:
    """PF macro throughput and its across-drop standard error."""
    # long drops: PF needs thousands of slots per drop to wash out the
    # rate-window transient before the estimate is unbiased
    drops = max(5, min(40, cfg.samples // 16000))
    trials = max(2000, cfg.samples // drops)
    sim_cfg = schedsim.PFSimConfig(u_c=u_c, drops=drops,
                                   trials_per_drop=trials, seed=seed)
    res = schedsim.simulate_pf(sim_cfg, params, _mod())
    stderr = float(np.std(res.per_drop, ddof=1) / np.sqrt(len(res.per_drop)))
    return res.t_c, stderr


def _femto_mc_t_f(env: femtocell.FemtoEnv, n: int, seed: int) -> tuple[float, float]:
    res = femtocell.simulate_femto_sir(env, n, seed=seed)
    rates = np.minimum(np.searchsorted(env.modulation.thresholds,
                                       np.where(np.isfinite(res.sir_samples),
                                                res.sir_samples, np.inf),
                                       side="right"),
                       env.modulation.levels)
    return res.t_f, float(np.std(rates) / np.sqrt(n))


def _child_seeds(master: int, n: int) -> list[int]:
    return [int(ss.generate_state(1)[0])
            for ss in np.random.SeedSequence(master).spawn(n)]


def run_macro_tc_vs_alpha(cfg: ExperimentConfig):
    header = ["alpha_c", "t_c_analytical", "t_c_mc", "t_c_mc_stderr"]
    seeds = _child_seeds(cfg.seed, len(cfg.sweep))

    def point(alpha, seed):
        params = cfg.params(alpha_c=float(alpha))
        t_ana = _rr_t_c(params)
        n = max(1000, cfg.samples)
        res = schedsim.simulate_rr(params, _mod(), n, seed=seed)
        rates = np.minimum(np.searchsorted(_mod().thresholds, res.sir_samples,
                                           side="right"), _mod().levels)
        return [alpha, t_ana, res.t_c, float(np.std(rates) / np.sqrt(n))]

    return header, _map(cfg, point, seeds)


def run_macro_rr_vs_pf(cfg: ExperimentConfig):
    header = ["u_c", "t_c_rr", "t_c_pf", "t_c_pf_stderr"]
    params = cfg.params()
    t_rr = _rr_t_c(params)
    seeds = _child_seeds(cfg.seed, len(cfg.sweep))

    def point(u_c, seed):
        t_pf, err = _pf_t_c(cfg, params, int(u_c), seed)
        return [int(u_c), t_rr, t_pf, err]

    return header, _map(cfg, point, seeds)


def run_femto_tpt(cfg: ExperimentConfig):
    header = ["n_f", "t_f_analytical", "t_f_mc", "t_f_mc_stderr"]
    seeds = _child_seeds(cfg.seed, len(cfg.sweep))

    def point(n_f, seed):
        params = cfg.params(n_f=int(n_f))
        env = femtocell.femto_env(params, _mod())
        t_mc, err = _femto_mc_t_f(env, max(1000, cfg.samples), seed)
        return [int(n_f), femtocell.femto_throughput(env), t_mc, err]

    return header, _map(cfg, point, seeds)


def run_femto_ase(cfg: ExperimentConfig):
    header = ["n_f", "theta", "ase", "rho_f_star", "ase_star"]
    thetas = np.linspace(0.05, 1.0, 20)
    rows = []
    for n_f in cfg.sweep:
        params = cfg.params(n_f=int(n_f))
        env = femtocell.femto_env(params, _mod())
        opt = femtocell.optimize_faloha(params.lambda_f, env)
        for theta in thetas:
            scaled = replace(env, lambda_f=theta * params.lambda_f)
            ase = theta * params.lambda_f * femtocell.femto_throughput(scaled)
            rows.append([int(n_f), float(theta), ase,
                         opt.rho_f_star, opt.ase_star])
    return header, rows


def run_allocation_vs_eta(cfg: ExperimentConfig):
    header = ["eta", "rho", "ase_network", "t_cu", "t_fu"]
    params = cfg.params()
    t_c = _rr_t_c(params)
    env = femtocell.femto_env(params, _mod())
    opt = femtocell.optimize_faloha(params.lambda_f, env)
    rows = []
    for eta in cfg.sweep:
        res = allocation.optimal_rho_closed_form(
            t_c, opt.t_f_star, opt.rho_f_star, params, QoSConfig(eta=float(eta)))
        rows.append([float(eta), res.rho, res.ase_network, res.t_cu, res.t_fu])
    return header, rows


def run_two_tier_ase(cfg: ExperimentConfig):
    header = ["n_f", "ase_eta_high", "ase_eta_low"]
    seeds = _child_seeds(cfg.seed, len(cfg.sweep))

    def point(n_f, seed):
        params = cfg.params(n_f=int(n_f))
        if cfg.scheduler == "pf":
            t_c, _ = _pf_t_c(cfg, params, int(params.u_c), seed)
        else:
            t_c = _rr_t_c(params)
        env = femtocell.femto_env(params, _mod())
        opt = femtocell.optimize_faloha(params.lambda_f, env)
        out = [int(n_f)]
        for eta in (0.5, 0.01):
            res = allocation.optimal_rho_closed_form(
                t_c, opt.t_f_star, opt.rho_f_star, params, QoSConfig(eta=eta))
            out.append(res.ase_network)
        return out

    return header, _map(cfg, point, seeds)


def run_femto_user_tpt(cfg: ExperimentConfig):
    header = ["n_f", "rho", "rho_f_star", "t_fu", "per_femtocell"]
    params0 = cfg.params()
    t_c = _rr_t_c(params0)
    rows = []
    for n_f in cfg.sweep:
        params = cfg.params(n_f=int(n_f))
        env = femtocell.femto_env(params, _mod())
        opt = femtocell.optimize_faloha(params.lambda_f, env)
        res = allocation.optimal_rho_closed_form(
            t_c, opt.t_f_star, opt.rho_f_star, params, QoSConfig(eta=cfg.eta))
        per_cell = (1.0 - res.rho) * opt.rho_f_star * opt.t_f_star
        rows.append([int(n_f), res.rho, opt.rho_f_star, res.t_fu, per_cell])
    return header, rows


def run_required_spectrum(cfg: ExperimentConfig):
    header = ["d_c", "d_f", "wf_rr_hz", "wf_pf_hz", "pf_over_rr"]
    params = cfg.params()
    qos = QoSConfig(eta=cfg.eta)
    t_c_rr = _rr_t_c(params)
    t_c_pf, _ = _pf_t_c(cfg, params, int(params.u_c), cfg.seed)
    env = femtocell.femto_env(params, _mod())
    opt = femtocell.optimize_faloha(params.lambda_f, env)
    rows = []
    for d_c in cfg.sweep:
        d_f = float(d_c) * (1.0 - qos.eta) / qos.eta
        wf_rr = allocation.required_spectrum(
            float(d_c), d_f, t_c_rr, opt.t_f_star, opt.rho_f_star, params, qos)
        wf_pf = allocation.required_spectrum(
            float(d_c), d_f, t_c_pf, opt.t_f_star, opt.rho_f_star, params, qos)
        rows.append([float(d_c), d_f, wf_rr.w_total, wf_pf.w_total,
                     wf_pf.w_total / wf_rr.w_total])
    return header, rows


EXPERIMENTS = {
    "macro_tc_vs_alpha": run_macro_tc_vs_alpha,
    "macro_rr_vs_pf": run_macro_rr_vs_pf,
    "femto_tpt": run_femto_tpt,
    "femto_ase": run_femto_ase,
    "allocation_vs_eta": run_allocation_vs_eta,
    "two_tier_ase": run_two_tier_ase,
    "femto_user_tpt": run_femto_user_tpt,
    "required_spectrum": run_required_spectrum,
}


def _map(cfg: ExperimentConfig, fn, seeds):
    """Run fn over sweep points on a thread pool, preserving sweep order."""
    workers = int(os.environ.get("TIERWAVE_THREADS", "4"))
    workers = max(1, min(workers, len(cfg.sweep)))
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, cfg.sweep, seeds))


def _format(value) -> str:
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return repr(float(value))


def write_csv(path: Path, header: list[str], rows) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, delimiter=",", lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([_format(v) for v in row])


def load_config(path: Path) -> dict:
    with open(path, "rb") as fh:
        return tomllib.load(fh)


def build_config(args) -> ExperimentConfig:
    raw = load_config(Path(args.config)) if args.config else {}
    experiment = args.experiment or raw.get("experiment")
    if experiment is None:
        raise SystemExit("error: no experiment given (use --experiment or config)")
    cfg = ExperimentConfig(
        experiment=experiment,
        scenario=raw.get("scenario", "LA"),
        seed=args.seed if args.seed is not None else int(raw.get("seed", 0)),
        out_dir=Path(args.out) if args.out else Path(raw.get("out", ".")),
        samples=args.samples if args.samples is not None
        else int(raw.get("samples", 200_000)),
        sweep=list(raw.get("sweep", _DEFAULT_SWEEPS.get(experiment, []))),
        eta=float(raw.get("eta", 0.5)),
        scheduler=raw.get("scheduler", "rr"),
        demand_c=float(raw.get("demand_c", 1e5)),
        demand_f=float(raw.get("demand_f", 1e7)),
        overrides={k.lower(): v for k, v in raw.get("overrides", {}).items()},
    )
    return cfg


def run(cfg: ExperimentConfig) -> Path:
    if cfg.experiment not in EXPERIMENTS:
        print(f"error: unknown experiment '{cfg.experiment}'", file=sys.stderr)
        raise SystemExit(2)
    if not cfg.sweep:
        print("error: empty sweep", file=sys.stderr)
        raise SystemExit(2)
    if sorted(cfg.sweep) != list(cfg.sweep):
        print("error: sweep values must be sorted ascending", file=sys.stderr)
        raise SystemExit(2)
    header, rows = EXPERIMENTS[cfg.experiment](cfg)
    cfg.out_dir.mkdir(parents=True, exist_ok=True)
    path = cfg.out_dir / f"{cfg.experiment}.csv"
    write_csv(path, header, rows)
    print(f"{cfg.experiment}: wrote {len(rows)} rows to {path}")
    return path


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="tierwave",
        description="Two-tier spectrum allocation experiments")
    parser.add_argument("--config", help="TOML config file")
    parser.add_argument("--experiment", choices=sorted(EXPERIMENTS),
                        help="experiment id (overrides config)")
    parser.add_argument("--seed", type=int, default=None, help="master seed")
    parser.add_argument("--out", help="output directory")
    parser.add_argument("--samples", type=int, default=None,
                        help="Monte Carlo sample budget per sweep point")
    args = parser.parse_args(argv)
    try:
        cfg = build_config(args)
        run(cfg)
    except SystemExit:
        raise
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
