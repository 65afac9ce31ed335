"""Femtocell tier: interference tail bounds, SIR distribution, subchannel
throughput, F-ALOHA access optimization and utilization classification.

Interfering femtocells form a thinned SPPP; their aggregate power at the
probe user is Poisson shot noise.  The desired in-home link sees no wall,
interfering links cross two walls and are attenuated by p_f**2 (the paper's
A_f/B_f ratio acts as a loss on interference: higher wall loss means less
interference and higher throughput).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np
from scipy.special import erfc

from .config import ModulationConfig, SystemParams, ZETA, rate_map
from .geometry import Disc, sample_sppp
from .propagation import (composite_ln_exp, gauss_hermite_lognormal,
                          lognormal_fractional_moment)
from .config import LognormalParams


@dataclass(frozen=True)
class FemtoEnv:
    """Parameters of the femtocell interference field and the probe link."""

    lambda_f: float          # femtocells per m^2
    rho_f: float             # F-ALOHA access fraction
    alpha_f: float
    beta_f: float
    p_f: float               # wall penetration loss (linear, one wall)
    r_f: float
    psi_0: LognormalParams   # composite desired channel
    psi_i: LognormalParams   # composite interferer channel
    modulation: ModulationConfig
    gh_order: int = 64

    def __post_init__(self):
        if self.alpha_f <= 2.0:
            raise ValueError("alpha_f must exceed 2 or the SPPP interference diverges")
        if not 0.0 <= self.rho_f <= 1.0:
            raise ValueError("rho_f must lie in [0, 1]")
        if self.lambda_f < 0:
            raise ValueError("lambda_f must be >= 0")

    @property
    def delta_f(self) -> float:
        return 2.0 / self.alpha_f

    @property
    def interferer_moment(self) -> float:
        """E[Psi_I^delta_f] of the composite interferer channel."""
        return lognormal_fractional_moment(self.psi_i, self.delta_f)

    @property
    def kappa_f(self) -> float:
        """pi * lambda_f * E[Psi_I^delta] * (r_f^beta / p_f^2)^delta."""
        return math.pi * self.lambda_f * self.interferer_moment \
            * (self.r_f**self.beta_f / self.p_f**2) ** self.delta_f


def femto_env(params: SystemParams, modulation: ModulationConfig,
              rho_f: float = 1.0, lambda_f: float | None = None) -> FemtoEnv:
    """Build a FemtoEnv from system parameters."""
    return FemtoEnv(
        lambda_f=params.lambda_f if lambda_f is None else lambda_f,
        rho_f=rho_f,
        alpha_f=params.alpha_f,
        beta_f=params.beta_f,
        p_f=params.p_f,
        r_f=params.r_f,
        psi_0=composite_ln_exp(params.mu_fi_db, params.sigma_fi_db),
        psi_i=composite_ln_exp(params.mu_fo_db, params.sigma_fo_db),
        modulation=modulation,
    )


def interference_tail_lb(env: FemtoEnv, y) -> np.ndarray:
    """Lower bound on Pr[I > y] for the cross-femtocell interference I at
    the probe user (wall attenuation included), from the dominant-interferer
    argument."""
    y = np.asarray(y, dtype=float)
    if np.any(y <= 0):
        raise ValueError("y must be > 0")
    d = env.delta_f
    c = math.pi * env.lambda_f * env.rho_f * env.interferer_moment * env.p_f ** (-2.0 * d)
    return -np.expm1(-c * y ** (-d))


def interference_tail_exact4(env: FemtoEnv, y) -> np.ndarray:
    """Exact Pr[I > y] when alpha_f = 4 (Levy-stable shot noise)."""
    if env.alpha_f != 4.0:
        raise ValueError("closed form requires alpha_f = 4")
    y = np.asarray(y, dtype=float)
    if np.any(y <= 0):
        raise ValueError("y must be > 0")
    half_moment = lognormal_fractional_moment(env.psi_i, 0.5)
    arg = math.pi**1.5 * env.lambda_f * env.rho_f * half_moment / (2.0 * np.sqrt(env.p_f**2 * y))
    return 1.0 - erfc(arg)


def femto_sir_cdf_lb(env: FemtoEnv, gamma) -> np.ndarray:
    """Pr[SIR <= gamma] at the femtocell edge user, from the interference
    tail bound; expectation over the desired channel by Gauss-Hermite."""
    gamma = np.asarray(gamma, dtype=float)
    if np.any(gamma <= 0):
        raise ValueError("gamma must be > 0")
    psi0, w = gauss_hermite_lognormal(env.psi_0, env.gh_order)
    d = env.delta_f
    expo = np.exp(-env.rho_f * env.kappa_f
                  * np.atleast_1d(gamma)[:, None] ** d * psi0[None, :] ** (-d))
    cdf = 1.0 - expo @ w
    cdf = np.clip(cdf, 0.0, 1.0)
    return cdf.reshape(np.shape(gamma))


def femto_throughput(env: FemtoEnv) -> float:
    """Mean femtocell subchannel throughput T_f (b/s/Hz)."""
    cdf = femto_sir_cdf_lb(env, np.asarray(env.modulation.thresholds))
    return float(np.sum(1.0 - cdf))


@dataclass(frozen=True)
class FemtoSimResult:
    t_f: float
    sir_samples: np.ndarray
    interference_samples: np.ndarray


def simulate_femto_sir(env: FemtoEnv, n_samples: int, seed: int = 0,
                       sim_radius: float | None = None,
                       batch: int = 2000) -> FemtoSimResult:
    """Monte Carlo femtocell SIR at a probe user on the home-cell edge.

    Interferers are an SPPP of intensity lambda_f * rho_f over a disc
    centered on the user; each link has lognormal shadowing, exponential
    fading and double wall penetration."""
    if n_samples < 1:
        raise ValueError("n_samples must be >= 1")
    rng = np.random.default_rng(seed)
    radius = sim_radius if sim_radius is not None else 10.0 * 288.0
    intensity = env.lambda_f * env.rho_f
    region = Disc(radius)
    # recover the underlying shadowing std from the composite fit
    sigma_fo = math.sqrt(max((env.psi_i.sigma / ZETA) ** 2 - 5.57**2, 0.0)) * ZETA
    mu_fo = env.psi_i.mu - ZETA * (-2.5)
    sigma_fi = math.sqrt(max((env.psi_0.sigma / ZETA) ** 2 - 5.57**2, 0.0)) * ZETA
    mu_fi = env.psi_0.mu - ZETA * (-2.5)

    interference = np.empty(n_samples)
    done = 0
    mean_count = intensity * region.area
    while done < n_samples:
        m = min(batch, n_samples - done)
        counts = rng.poisson(mean_count, m)
        total = int(counts.sum())
        r = radius * np.sqrt(rng.random(total))
        gains = rng.lognormal(mu_fo, sigma_fo, total) * rng.exponential(1.0, total) \
            * r ** (-env.alpha_f) / env.p_f**2
        starts = np.concatenate([[0], np.cumsum(counts)[:-1]]).astype(int)
        sums = np.add.reduceat(gains, starts) if total else np.zeros(m)
        sums[counts == 0] = 0.0
        interference[done:done + m] = sums
        done += m
    signal = rng.lognormal(mu_fi, sigma_fi, n_samples) * rng.exponential(1.0, n_samples) \
        * env.r_f ** (-env.beta_f)
    with np.errstate(divide="ignore"):
        sir = signal / interference
    t_f = float(np.mean(np.where(np.isinf(sir), env.modulation.levels,
                                 rate_map(np.where(np.isinf(sir), 1.0, sir),
                                          env.modulation))))
    return FemtoSimResult(t_f=t_f, sir_samples=sir, interference_samples=interference)


@dataclass(frozen=True)
class FalohaOptimum:
    rho_f_star: float
    ase_star: float       # b/s/Hz/m^2, per subchannel
    t_f_star: float       # T_f at the optimal thinned intensity
    unimodal: bool


def optimize_faloha(lambda_f: float, env_template: FemtoEnv,
                    grid_points: int = 64, tol: float = 1e-4) -> FalohaOptimum:
    """Maximize theta * T_f(theta * lambda_f) over theta in (0, 1].

    A coarse grid verifies unimodality, then golden-section refines the
    bracket; on a unimodality violation the grid argmax is returned.
    """
    if lambda_f <= 0:
        raise ValueError("lambda_f must be > 0")

    def objective(theta: float) -> float:
        env = replace(env_template, lambda_f=theta * lambda_f, rho_f=1.0)
        return theta * femto_throughput(env)

    thetas = np.linspace(1.0 / grid_points, 1.0, grid_points)
    values = np.array([objective(t) for t in thetas])
    diffs = np.diff(values)
    rises = diffs > 1e-12
    # unimodal: nonincreasing after the last rise
    last_rise = int(np.nonzero(rises)[0][-1]) + 1 if rises.any() else 0
    unimodal = not rises[last_rise:].any() if last_rise < len(rises) else True
    i = int(np.argmax(values))
    if not unimodal:
        theta_star = float(thetas[i])
    elif i == len(thetas) - 1:
        theta_star = 1.0
    else:
        lo = thetas[max(i - 1, 0)]
        hi = thetas[min(i + 1, len(thetas) - 1)]
        inv_phi = (math.sqrt(5.0) - 1.0) / 2.0
        a, b = lo, hi
        c = b - inv_phi * (b - a)
        d = a + inv_phi * (b - a)
        fc, fd = objective(c), objective(d)
        while b - a > tol:
            if fc > fd:
                b, d, fd = d, c, fc
                c = b - inv_phi * (b - a)
                fc = objective(c)
            else:
                a, c, fc = c, d, fd
                d = a + inv_phi * (b - a)
                fd = objective(d)
        theta_star = 0.5 * (a + b)
    t_f_star = femto_throughput(replace(env_template, lambda_f=theta_star * lambda_f,
                                        rho_f=1.0))
    return FalohaOptimum(rho_f_star=float(theta_star),
                         ase_star=float(lambda_f * theta_star * t_f_star),
                         t_f_star=float(t_f_star), unimodal=bool(unimodal))


@dataclass(frozen=True)
class UtilizationResult:
    label: str       # "fully-utilized" or "sub-utilized"
    tie: bool


def classify_utilization(state_low: tuple[float, float, float],
                         state_high: tuple[float, float, float],
                         rel_tol: float = 1e-12) -> UtilizationResult:
    """Classify the femtocell network from two operating points at densities
    lambda_f and lambda_f + delta.

    Each state is (rho, rho_f, t_f).  Fully-utilized means the marginal
    density increment reduces the mean per-femtocell throughput
    (1 - rho) * rho_f * t_f; ties report sub-utilized with a flag.
    """
    low = (1.0 - state_low[0]) * state_low[1] * state_low[2]
    high = (1.0 - state_high[0]) * state_high[1] * state_high[2]
    scale = max(abs(low), abs(high), 1e-300)
    if abs(low - high) <= rel_tol * scale:
        return UtilizationResult("sub-utilized", tie=True)
    return UtilizationResult("fully-utilized" if low > high else "sub-utilized", tie=False)
