"""Monte Carlo macrocell throughput: round-robin validation and the
proportional-fair scheduler estimate of T_c(U_c)."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .config import ModulationConfig, SystemParams, ZETA, rate_map
from .geometry import interferer_positions, sample_hex_uniform

LIGHT_SPEED = 3e8


@dataclass(frozen=True)
class PFSimConfig:
    u_c: int = 32
    window: int = 500            # PF averaging window N (symbols)
    f_c: int = 1                 # subchannels simulated
    w: float = 15e3              # subchannel bandwidth (Hz)
    drops: int = 500             # user-placement redraws
    trials_per_drop: int = 8000  # scheduling intervals per drop
    speed: float = 13.34         # m/s
    f_carrier: float = 2e9       # Hz
    seed: int = 0

    def __post_init__(self):
        if self.u_c < 1:
            raise ValueError("u_c must be >= 1")
        if self.window < 1 or self.drops < 1 or self.trials_per_drop < 1:
            raise ValueError("window, drops and trials must be >= 1")
        if self.doppler <= 0:
            raise ValueError("doppler frequency must be > 0")

    @property
    def doppler(self) -> float:
        return self.speed * self.f_carrier / LIGHT_SPEED

    @property
    def coherence_symbols(self) -> int:
        """Symbols per fading block: hold time 0.4/f_d at symbol time 1/w."""
        return max(1, int(round(0.4 / self.doppler * self.w)))


@dataclass(frozen=True)
class RRResult:
    t_c: float
    sir_samples: np.ndarray


@dataclass(frozen=True)
class PFResult:
    t_c: float
    per_drop: np.ndarray          # T_c estimate per drop
    schedule_share: np.ndarray    # fraction of intervals each user index won


def _draw_links(rng, params: SystemParams, n: int, tx_power: float):
    """Per-user slow-fading link state: desired and 18 interferer gains
    excluding fast fading."""
    pos = sample_hex_uniform(rng, params.r_c, n)
    r = np.linalg.norm(pos, axis=1) / params.r_c
    g0 = tx_power * rng.lognormal(ZETA * params.mu_c_db, ZETA * params.sigma_c_db, n) \
        * r ** (-params.alpha_c)
    b = interferer_positions(params.r_c)
    d = np.linalg.norm(pos[:, None, :] - b[None, :, :], axis=2) / params.r_c
    gi = tx_power * rng.lognormal(ZETA * params.mu_c_db, ZETA * params.sigma_c_db, (n, 18)) \
        * d ** (-params.alpha_c)
    return pos, g0, gi


def simulate_rr(params: SystemParams, modulation: ModulationConfig,
                n_samples: int, seed: int = 0, tx_power: float = 1.0) -> RRResult:
    """Round-robin subchannel throughput by direct SIR sampling.

    Serving a uniformly random user is distributionally the same as RR, so
    one position/shadowing/fading draw per sample suffices.
    """
    if n_samples < 1:
        raise ValueError("n_samples must be >= 1")
    rng = np.random.default_rng(seed)
    _, g0, gi = _draw_links(rng, params, n_samples, tx_power)
    sir = g0 * rng.exponential(1.0, n_samples) / \
        np.sum(gi * rng.exponential(1.0, (n_samples, 18)), axis=1)
    t_c = float(np.mean(rate_map(sir, modulation)))
    return RRResult(t_c=t_c, sir_samples=sir)


def simulate_pf(cfg: PFSimConfig, params: SystemParams,
                modulation: ModulationConfig,
                fixed_positions: np.ndarray | None = None) -> PFResult:
    """Proportional-fair subchannel throughput T_c(U_c).

    Per drop: place users, hold shadowing for the drop, redraw Rayleigh
    fading every coherence block, and at every interval serve the user with
    the largest rate/windowed-mean-rate ratio (ties to the lowest index).

    ``fixed_positions`` pins user positions across drops (used by fairness
    checks with homogeneous users).
    """
    rng = np.random.default_rng(cfg.seed)
    block = cfg.coherence_symbols
    n_users = int(cfg.u_c)
    per_drop = np.empty(cfg.drops)
    wins = np.zeros(n_users)
    inv_n = 1.0 / cfg.window
    for d in range(cfg.drops):
        if fixed_positions is not None:
            pos = np.asarray(fixed_positions, dtype=float)
            r = np.linalg.norm(pos, axis=1) / params.r_c
            g0 = rng.lognormal(ZETA * params.mu_c_db, ZETA * params.sigma_c_db, n_users) \
                * r ** (-params.alpha_c)
            b = interferer_positions(params.r_c)
            dist = np.linalg.norm(pos[:, None, :] - b[None, :, :], axis=2) / params.r_c
            gi = rng.lognormal(ZETA * params.mu_c_db, ZETA * params.sigma_c_db,
                               (n_users, 18)) * dist ** (-params.alpha_c)
        else:
            _, g0, gi = _draw_links(rng, params, n_users, 1.0)
        served = 0.0
        rbar = None
        n = 0
        while n < cfg.trials_per_drop:
            # one fading block: rates constant, PF state still evolves
            h0 = rng.exponential(1.0, (n_users, cfg.f_c))
            hi = rng.exponential(1.0, (n_users, 18, cfg.f_c))
            sir = g0[:, None] * h0 / np.einsum("uk,ukf->uf", gi, hi)
            rates = rate_map(sir, modulation).astype(float)   # (users, f_c)
            if rbar is None:
                rbar = np.maximum(rates.sum(axis=1), 1e-9)
            steps = min(block, cfg.trials_per_drop - n)
            for _ in range(steps):
                metric = rates / rbar[:, None]
                chosen = np.argmax(metric, axis=0)            # per subchannel
                gained = np.zeros(n_users)
                for f, k in enumerate(chosen):
                    gained[k] += rates[k, f]
                    served += rates[k, f]
                wins[chosen[0]] += 1.0
                rbar = np.maximum((1.0 - inv_n) * rbar + inv_n * gained, 1e-12)
            n += steps
        per_drop[d] = served / (cfg.trials_per_drop * cfg.f_c)
    total = cfg.drops * cfg.trials_per_drop
    return PFResult(t_c=float(per_drop.mean()), per_drop=per_drop,
                    schedule_share=wins / total)


def pf_throughput_table(params: SystemParams, modulation: ModulationConfig,
                        u_c_values, drops: int, trials: int, seed: int = 0) -> dict[int, float]:
    """T_c(U_c) estimates for a set of user counts, independently seeded."""
    u_c_values = [int(u) for u in u_c_values]
    seeds = np.random.SeedSequence(seed).spawn(len(u_c_values))
    out = {}
    for u_c, ss in zip(u_c_values, seeds):
        cfg = PFSimConfig(u_c=u_c, drops=drops, trials_per_drop=trials,
                          seed=int(ss.generate_state(1)[0]))
        out[u_c] = simulate_pf(cfg, params, modulation).t_c
    return out
