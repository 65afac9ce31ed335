"""Lognormal channel algebra.

Composite lognormal-exponential approximation, lognormal-sum reduction,
fractional moments and the standard normal tail.
"""
from __future__ import annotations

import math

import numpy as np
from scipy.special import erfc, log_ndtr, roots_hermite

from .config import ZETA, LognormalParams

# spread (in dB) added by a unit-mean exponential factor, and the matching
# mean shift, per the composite lognormal-exponential fit
_EXP_MEAN_SHIFT_DB = -2.5
_EXP_STD_DB = 5.57

_GH_ORDER = 64
_gh_nodes, _gh_weights = roots_hermite(_GH_ORDER)


def q_function(x):
    """Standard normal tail probability Q(x) = Pr[N(0,1) > x]."""
    return 0.5 * erfc(np.asarray(x, dtype=float) / math.sqrt(2.0))


def log_q_function(x):
    """log Q(x), stable far into the tail."""
    return log_ndtr(-np.asarray(x, dtype=float))


def composite_ln_exp(mu_db: float, sigma_db: float) -> LognormalParams:
    """Lognormal fit of a product of lognormal shadowing (given dB moments)
    and a unit-mean exponential fading power."""
    if sigma_db < 0:
        raise ValueError("sigma_db must be >= 0")
    mu = ZETA * (mu_db + _EXP_MEAN_SHIFT_DB)
    sigma = ZETA * math.hypot(sigma_db, _EXP_STD_DB)
    return LognormalParams(mu, sigma)


def lognormal_fractional_moment(params: LognormalParams, delta: float) -> float:
    """E[X^delta] for X ~ LN(mu, sigma^2)."""
    if delta <= 0:
        raise ValueError("delta must be > 0")
    return math.exp(delta * params.mu + 0.5 * (delta * params.sigma) ** 2)


def _fenton_wilkinson(weights, mus, sigmas) -> LognormalParams:
    # match the exact linear-domain mean and variance of the weighted sum
    m = np.sum(weights * np.exp(mus + 0.5 * sigmas**2))
    v = np.sum(weights**2 * np.expm1(sigmas**2) * np.exp(2.0 * mus + sigmas**2))
    s2 = math.log1p(v / m**2)
    return LognormalParams(math.log(m) - 0.5 * s2, math.sqrt(s2))


def _sy_pair(mu1, s1, mu2, s2):
    # log-domain moments of ln(X1 + X2) for independent lognormals,
    # via ln(X1+X2) = Y1 + f(Y2-Y1), f(w) = ln(1+e^w), and Stein's lemma
    # for the Cov(Y1, f(W)) term; all reduced to 1-D Gauss-Hermite.
    sw = math.hypot(s1, s2)
    w = math.sqrt(2.0) * sw * _gh_nodes + (mu2 - mu1)
    f = np.logaddexp(0.0, w)
    g1 = (_gh_weights @ f) / math.sqrt(math.pi)
    g2 = (_gh_weights @ (f * f)) / math.sqrt(math.pi)
    ed = (_gh_weights @ (1.0 / (1.0 + np.exp(-w)))) / math.sqrt(math.pi)
    var = s1**2 + (g2 - g1**2) - 2.0 * s1**2 * ed
    return mu1 + g1, math.sqrt(max(var, 0.0))


def _schwartz_yeh(weights, mus, sigmas) -> LognormalParams:
    terms = sorted(zip(mus + np.log(weights), sigmas), key=lambda t: -t[0])
    mu, sig = terms[0]
    for mu2, s2 in terms[1:]:
        mu, sig = _sy_pair(mu, sig, mu2, s2)
    return LognormalParams(mu, sig)


def lognormal_sum(terms, method: str = "schwartz_yeh") -> LognormalParams:
    """Single-lognormal approximation of sum_k w_k * X_k, X_k ~ LN(mu_k, sigma_k^2).

    ``schwartz_yeh`` (default) matches log-domain moments pairwise and fits
    the distribution body well even for wide per-term spreads; it is the
    backend used by the macrocell interference pipeline.
    ``fenton_wilkinson`` matches the exact linear-domain mean and variance.
    A single term is exact under either method.
    """
    if not terms:
        raise ValueError("terms must be nonempty")
    if method not in ("schwartz_yeh", "fenton_wilkinson"):
        raise ValueError(f"unknown method {method!r}")
    weights = np.array([w for w, _ in terms], dtype=float)
    if np.any(weights <= 0):
        raise ValueError("weights must be > 0")
    mus = np.array([p.mu for _, p in terms], dtype=float)
    sigmas = np.array([p.sigma for _, p in terms], dtype=float)
    if len(terms) == 1:
        return LognormalParams(mus[0] + math.log(weights[0]), sigmas[0])
    if method == "schwartz_yeh":
        return _schwartz_yeh(weights, mus, sigmas)
    return _fenton_wilkinson(weights, mus, sigmas)


def gauss_hermite_lognormal(params: LognormalParams, order: int = _GH_ORDER):
    """Nodes (lognormal samples) and probability weights for E[g(X)]."""
    if order == _GH_ORDER:
        nodes, weights = _gh_nodes, _gh_weights
    else:
        nodes, weights = roots_hermite(order)
    x = np.exp(params.mu + math.sqrt(2.0) * params.sigma * nodes)
    return x, weights / math.sqrt(math.pi)
