"""Two-tier cellular spectrum allocation engine.

Analytical per-tier throughputs, F-ALOHA femtocell access optimization,
QoS-constrained macro/femto spectrum split, and Monte Carlo validation.
"""
from .allocation import (AllocationResult, SpectrumRequirement, network_ase,
                         optimal_rho_closed_form, optimal_rho_numeric,
                         per_user_shares, qos_endpoints, required_spectrum)
from .config import (LognormalParams, ModulationConfig, QoSConfig,
                     SystemParams, rate_map, table_params)
from .femtocell import (FalohaOptimum, FemtoEnv, classify_utilization,
                        femto_env, femto_sir_cdf_lb, femto_throughput,
                        interference_tail_exact4, interference_tail_lb,
                        optimize_faloha, simulate_femto_sir)
from .macrocell import (MacroEnv, annulus_avg_sir_cdf, build_macro_env,
                        c_function, cell_avg_sir_cdf, macro_throughput_rr)
from .propagation import (composite_ln_exp, gauss_hermite_lognormal,
                          lognormal_fractional_moment, lognormal_sum,
                          q_function)
from .schedsim import PFSimConfig, pf_throughput_table, simulate_pf, simulate_rr

__all__ = [
    "AllocationResult", "FalohaOptimum", "FemtoEnv", "LognormalParams",
    "MacroEnv", "ModulationConfig", "PFSimConfig", "QoSConfig",
    "SpectrumRequirement", "SystemParams", "annulus_avg_sir_cdf",
    "build_macro_env", "c_function", "cell_avg_sir_cdf",
    "classify_utilization", "composite_ln_exp", "femto_env",
    "femto_sir_cdf_lb", "femto_throughput", "gauss_hermite_lognormal",
    "interference_tail_exact4", "interference_tail_lb",
    "lognormal_fractional_moment", "lognormal_sum", "macro_throughput_rr",
    "network_ase", "optimal_rho_closed_form", "optimal_rho_numeric",
    "optimize_faloha", "per_user_shares", "pf_throughput_table",
    "q_function", "qos_endpoints", "rate_map", "required_spectrum",
    "simulate_femto_sir", "simulate_pf", "simulate_rr", "table_params",
]

__version__ = "0.1.0"
