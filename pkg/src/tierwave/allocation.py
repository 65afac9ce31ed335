"""Spectrum split between the macrocell and femtocell tiers.

The network ASE (b/s/Hz/m^2 averaged over the whole frequency band) is

    S(rho) = (rho * U_c * T_c + (1 - rho) * rho_f * N_f * T_f) / |H|

maximized over the macro share rho subject to a QoS floor: each tier's
per-user share of the band throughput must be at least eta of the total.
The objective is linear in rho, so the optimum sits at an endpoint of the
feasible interval defined by the two QoS constraints.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .config import QoSConfig, SystemParams


@dataclass(frozen=True)
class AllocationResult:
    rho: float
    rho_f: float
    t_c: float
    t_f: float
    u_c: int
    u_f: int
    n_f: int
    ase_network: float      # b/s/Hz/m^2 over the shared band
    t_cu: float             # per macro user throughput share, b/s/Hz
    t_fu: float             # per femto user throughput share, b/s/Hz
    binding: str            # which QoS constraint is active at the optimum


def network_ase(rho: float, t_c: float, t_f: float, rho_f: float,
                params: SystemParams) -> float:
    """Network area spectral efficiency for a given macro share rho."""
    num = rho * params.u_c * t_c + (1.0 - rho) * rho_f * params.n_f * t_f
    return num / params.area


def per_user_shares(rho: float, t_c: float, t_f: float, rho_f: float,
                    params: SystemParams) -> tuple[float, float]:
    """(macro per-user, femto per-user) throughput shares of the band."""
    return rho * t_c / params.u_c, (1.0 - rho) * rho_f * t_f / params.u_f


def qos_endpoints(t_c: float, t_f: float, rho_f: float,
                  params: SystemParams, qos: QoSConfig) -> tuple[float, float]:
    """Feasible interval [rho_lo, rho_hi] for the macro share under the QoS
    floor eta on both tiers' normalized per-user throughputs.

    With B = (T_c / U_c) * (U_f / (rho_f * T_f)), the macro-floor binds at
    rho = 1 / (1 + B (1 - eta) / eta) and the femto floor at
    rho = 1 / (1 + B eta / (1 - eta)).
    """
    if t_c <= 0 or t_f <= 0 or rho_f <= 0:
        raise ValueError("throughputs and rho_f must be > 0")
    if params.u_c <= 0:
        raise ValueError("no macrocell users: u_c must be > 0")
    eta = qos.eta
    b = (t_c / params.u_c) * (params.u_f / (rho_f * t_f))
    rho_lo = 1.0 / (1.0 + b * (1.0 - eta) / eta)
    rho_hi = 1.0 / (1.0 + b * eta / (1.0 - eta))
    return min(rho_lo, rho_hi), max(rho_lo, rho_hi)


def optimal_rho_closed_form(t_c: float, t_f: float, rho_f: float,
                            params: SystemParams, qos: QoSConfig) -> AllocationResult:
    """QoS-binding macro spectrum share.

    The QoS floor is taken with equality for the disadvantaged macro tier,
    splitting per-user throughputs exactly eta : (1 - eta) between macro
    and femto users.  That pins

        rho = [1 + ((1 - eta) / eta) (T_c / U_c) (U_f / (rho_f T_f))]^{-1}

    which is the unique constraint-boundary point consistent with the
    required-spectrum identity and reduces to the even split when the
    tiers are symmetric at eta = 0.5.
    """
    if t_c <= 0 or t_f <= 0 or rho_f <= 0:
        raise ValueError("throughputs and rho_f must be > 0")
    if params.u_c <= 0:
        raise ValueError("no macrocell users: u_c must be > 0")
    eta = qos.eta
    b = (t_c / params.u_c) * (params.u_f / (rho_f * t_f))
    rho = 1.0 / (1.0 + b * (1.0 - eta) / eta)
    rho = float(np.clip(rho, 0.0, 1.0))
    t_cu, t_fu = per_user_shares(rho, t_c, t_f, rho_f, params)
    return AllocationResult(
        rho=rho, rho_f=rho_f, t_c=t_c, t_f=t_f,
        u_c=params.u_c, u_f=params.u_f, n_f=params.n_f,
        ase_network=network_ase(rho, t_c, t_f, rho_f, params),
        t_cu=t_cu, t_fu=t_fu, binding="macro-qos",
    )


def optimal_rho_numeric(t_c: float | Callable[[np.ndarray], np.ndarray],
                        t_f: float, rho_f: float,
                        params: SystemParams, qos: QoSConfig,
                        grid: int = 10001) -> AllocationResult:
    """Numeric counterpart of the closed form for omega-dependent T_c.

    Solves T_cu(omega) = eta (T_cu + T_fu) on a grid with linear
    refinement at the sign change; t_c may be a callable of omega for
    empirically tabulated macro throughputs (e.g. PF).  A constant t_c
    reproduces the closed form within one grid cell.
    """
    rhos = np.linspace(0.0, 1.0, grid)
    t_c_vals = np.asarray(t_c(rhos) if callable(t_c) else np.full_like(rhos, t_c))
    if np.any(t_c_vals <= 0) or t_f <= 0 or rho_f <= 0:
        raise ValueError("throughputs and rho_f must be > 0")
    t_cu = rhos * t_c_vals / params.u_c
    t_fu = (1.0 - rhos) * rho_f * t_f / params.u_f
    g = t_cu - qos.eta * (t_cu + t_fu)
    # g runs from -eta*T_fu(0) < 0 to (1-eta)*T_cu(1) > 0
    sign_change = np.nonzero((g[:-1] <= 0) & (g[1:] > 0))[0]
    if sign_change.size == 0:
        raise ValueError("no feasible rho under the QoS floor")
    i = int(sign_change[0])
    frac = -g[i] / (g[i + 1] - g[i])
    rho = float(rhos[i] + frac * (rhos[i + 1] - rhos[i]))
    t_c_here = float(np.interp(rho, rhos, t_c_vals))
    t_cu_r, t_fu_r = per_user_shares(rho, t_c_here, t_f, rho_f, params)
    return AllocationResult(
        rho=rho, rho_f=rho_f, t_c=t_c_here, t_f=t_f,
        u_c=params.u_c, u_f=params.u_f, n_f=params.n_f,
        ase_network=network_ase(rho, t_c_here, t_f, rho_f, params),
        t_cu=t_cu_r, t_fu=t_fu_r, binding="macro-qos",
    )


@dataclass(frozen=True)
class SpectrumRequirement:
    w_total: float          # Hz
    w_macro: float
    w_femto: float
    rho: float


def required_spectrum(demand_c: float, demand_f: float, t_c: float,
                      t_f: float, rho_f: float, params: SystemParams,
                      qos: QoSConfig) -> SpectrumRequirement:
    """Minimum band W meeting per-user rate demands (b/s) on both tiers.

    Splitting so both demands are met with equality gives
    W = U_c D_c / (rho T_c) with rho chosen so the same W also satisfies
    U_f D_f / ((1 - rho) rho_f T_f).
    """
    if min(demand_c, demand_f, t_c, t_f, rho_f) <= 0:
        raise ValueError("demands, throughputs and rho_f must be > 0")
    expected_f = demand_c * (1.0 - qos.eta) / qos.eta
    if not math.isclose(demand_f, expected_f, rel_tol=1e-9):
        warnings.warn(
            f"demand ratio D_f/D_c = {demand_f / demand_c:.4g} does not match "
            f"(1 - eta)/eta = {expected_f / demand_c:.4g}", stacklevel=2)
    a = params.u_c * demand_c / t_c
    b = params.u_f * demand_f / (rho_f * t_f)
    rho = a / (a + b)
    w = a / rho
    # identity check: both tiers consume exactly their share
    assert abs(w * (1.0 - rho) - b) <= 1e-6 * max(b, 1.0)
    return SpectrumRequirement(w_total=float(w), w_macro=float(rho * w),
                               w_femto=float((1.0 - rho) * w), rho=float(rho))
