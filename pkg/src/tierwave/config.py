"""Shared parameter types and the adaptive-modulation rate map."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

# dB <-> natural-log scaling for lognormal shadowing
ZETA = 0.1 * math.log(10.0)


def db_to_natural(x_db: float) -> float:
    """Convert a dB mean/std to the natural-log domain."""
    return ZETA * x_db


def hex_area(r_c: float) -> float:
    """Area of a hexagonal cell site with circumradius r_c."""
    return 1.5 * math.sqrt(3.0) * r_c**2


@dataclass(frozen=True)
class LognormalParams:
    """Natural-log mean/std pair of a lognormal random variable."""

    mu: float
    sigma: float

    def __post_init__(self):
        if self.sigma < 0:
            raise ValueError("sigma must be >= 0")

    @classmethod
    def from_db(cls, mu_db: float, sigma_db: float) -> "LognormalParams":
        return cls(ZETA * mu_db, ZETA * sigma_db)

    @property
    def mean(self) -> float:
        """Linear-domain mean exp(mu + sigma^2/2)."""
        return math.exp(self.mu + 0.5 * self.sigma**2)

    @property
    def variance(self) -> float:
        """Linear-domain variance."""
        s2 = self.sigma**2
        return (math.exp(s2) - 1.0) * math.exp(2.0 * self.mu + s2)


@dataclass(frozen=True)
class ModulationConfig:
    """Discrete-rate adaptive modulation: Shannon gap and SIR thresholds.

    Level l carries l b/s/Hz.  Default thresholds are G*(2^l - 1) so that
    log2(1 + threshold/G) = l exactly.
    """

    gap: float
    thresholds: tuple[float, ...]

    def __post_init__(self):
        if self.gap < 1.0:
            raise ValueError("Shannon gap must be >= 1 (linear)")
        if len(self.thresholds) < 1:
            raise ValueError("need at least one rate level")
        t = np.asarray(self.thresholds)
        if not np.all(np.diff(t) > 0) or t[0] <= 0:
            raise ValueError("thresholds must be positive and strictly increasing")

    @classmethod
    def default(cls, gap_db: float = 3.0, levels: int = 8) -> "ModulationConfig":
        g = 10.0 ** (gap_db / 10.0)
        return cls(gap=g, thresholds=tuple(g * (2.0**l - 1.0) for l in range(1, levels + 1)))

    @property
    def levels(self) -> int:
        return len(self.thresholds)

    def rates(self) -> np.ndarray:
        """Spectral efficiency log2(1 + threshold/gap) per level."""
        return np.log2(1.0 + np.asarray(self.thresholds) / self.gap)


def rate_map(sir, mod: ModulationConfig):
    """Map linear SIR to the discrete rate level in {0, 1, ..., L}.

    Returns the largest l with threshold[l] <= sir, or 0 below the lowest
    threshold.  Accepts scalars or arrays.
    """
    t = np.asarray(mod.thresholds)
    out = np.searchsorted(t, np.asarray(sir), side="right")
    return int(out) if np.isscalar(sir) else out


@dataclass(frozen=True)
class QoSConfig:
    """QoS fraction: each tier's per-user throughput is at least
    eta/(1-eta) times the other tier's."""

    eta: float

    def __post_init__(self):
        if not 0.0 < self.eta <= 0.5:
            raise ValueError("eta must lie in (0, 0.5]; larger values are "
                             "symmetric relabelings")


@dataclass(frozen=True)
class SystemParams:
    """All system-level scalars: geometry, user counts, propagation."""

    r_c: float = 288.0           # macrocell radius (m)
    r_f: float = 40.0            # femtocell radius (m)
    u: int = 300                 # total users per cell site
    u_f: int = 2                 # users per femtocell
    n_f: float = 50.0            # mean femtocells per cell site
    f_subchannels: int = 64      # subchannel count F
    w: float = 15e3              # subchannel bandwidth (Hz)
    alpha_c: float = 4.0         # outdoor path-loss exponent
    alpha_f: float = 3.5         # femtocell-to-femtocell path-loss exponent
    beta_f: float = 3.0          # in-home path-loss exponent
    p_f_db: float = 2.0          # wall penetration loss (dB)
    sigma_c_db: float = 8.0      # macro shadowing std (dB)
    sigma_fi_db: float = 4.0     # indoor (desired) shadowing std (dB)
    sigma_fo_db: float = 12.0    # femto-to-femto shadowing std (dB)
    mu_c_db: float = 0.0
    mu_fi_db: float = 0.0
    mu_fo_db: float = 0.0

    def __post_init__(self):
        for name in ("r_c", "r_f", "w"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be > 0")
        for name in ("alpha_c", "alpha_f", "beta_f"):
            v = getattr(self, name)
            if not 2.0 <= v <= 6.0:
                raise ValueError(f"{name} must lie in [2, 6]")
        if self.n_f < 0:
            raise ValueError("n_f must be >= 0")
        if self.u_c < 0:
            raise ValueError("u must cover n_f * u_f femtocell users")

    @property
    def u_c(self) -> float:
        """Macrocell users: u = u_c + n_f * u_f."""
        return self.u - self.n_f * self.u_f

    @property
    def area(self) -> float:
        return hex_area(self.r_c)

    @property
    def lambda_f(self) -> float:
        """Femtocell intensity (per m^2)."""
        return self.n_f / self.area

    @property
    def p_f(self) -> float:
        """Wall penetration loss, linear.  The interference path crosses two
        walls, a combined 2*p_f_db attenuation, i.e. a factor p_f**2."""
        return 10.0 ** (self.p_f_db / 10.0)


# propagation scenarios for neighboring-femtocell attenuation
SCENARIOS = {
    "HA": {"alpha_f": 4.0, "p_f_db": 10.0},   # high attenuation
    "LA": {"alpha_f": 3.5, "p_f_db": 2.0},    # low attenuation
}


def table_params(scenario: str = "LA", **overrides) -> SystemParams:
    """SystemParams with the default parameter set for a named scenario."""
    if scenario not in SCENARIOS:
        raise ValueError(f"unknown scenario {scenario!r}; expected one of {sorted(SCENARIOS)}")
    kw = dict(SCENARIOS[scenario])
    kw.update(overrides)
    return SystemParams(**kw)
