"""Closed-form probability bounds and reference discrepancy curves.

Everything here is a pure double-precision evaluator: central-limit interval
bounds for +/-1-weighted Bernoulli sums, parity probabilities of random edge
sizes, hypergeometric tail bounds, column-history failure bounds, log
first-moment counts, and the lower/upper reference curves for how discrepancy
scales with the model parameters.

Conventions: all logarithms are natural; base-2 logs appear only in round
schedules (see `iterated`).  The Berry-Esseen constant is pinned to
C_UNI = 1.120 (twice the best published bound on the half-constant) and can
be overridden per call via BoundParams.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

__all__ = [
    "C_UNI",
    "BoundParams",
    "interval_bound_rough",
    "interval_bound_tight",
    "parity_even_probability",
    "dependent_parity_pair_probability",
    "hypergeometric_tail_bound",
    "history_failure_bound",
    "first_moment_log_expected_count",
    "lower_bound_curve",
    "upper_bound_curve",
]

C_UNI = 1.120

_SQRT_2PI = math.sqrt(2.0 * math.pi)


@dataclass(frozen=True)
class BoundParams:
    """Inputs shared by the interval-probability bounds.

    eps discounts the average success probability (sum p_i >= (1-eps)*p*n) and
    zeta caps every p_i from above; zeta=None means zeta=p, the homogeneous
    case.
    """

    n: int
    p: float
    m: int = 0
    eps: float = 0.0
    zeta: float | None = None
    kappa: float = 1.0
    c_uni: float = C_UNI

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValueError("n must be positive")
        if not 0.0 < self.p < 1.0:
            raise ValueError("p must lie in (0, 1)")
        if not 0.0 <= self.eps < 1.0:
            raise ValueError("eps must lie in [0, 1)")
        z = self.p if self.zeta is None else self.zeta
        if not 0.0 < z < 1.0:
            raise ValueError("zeta must lie in (0, 1)")
        if self.kappa <= 0.0:
            raise ValueError("kappa must be positive")

    @property
    def zeta_eff(self) -> float:
        return self.p if self.zeta is None else self.zeta

    @property
    def variance_floor(self) -> float:
        """(1-zeta)(1-eps)np, the guaranteed variance of the weighted sum."""
        return (1.0 - self.zeta_eff) * (1.0 - self.eps) * self.n * self.p


def interval_bound_rough(params: BoundParams, L: float, R: float) -> float:
    """Width-linear upper bound on P[S in [L, R]]:
    (c_uni + (R-L)/sqrt(2*pi)) / sqrt((1-zeta)(1-eps)*n*p).
    """
    if L > R:
        raise ValueError("interval must satisfy L <= R")
    floor = params.variance_floor
    if floor <= 0.0:
        raise ValueError("variance floor is zero; bound undefined")
    return (params.c_uni + (R - L) / _SQRT_2PI) / math.sqrt(floor)


def interval_bound_tight(params: BoundParams, L: float, R: float) -> float:
    """Gaussian-window upper bound on P[S in [L, R]]:
    c_uni/sqrt(v) + sqrt(1 - exp(-(R-L)^2 / (2*pi*v))) with v the variance
    floor.  Dominated by the rough bound for every width.
    """
    if L > R:
        raise ValueError("interval must satisfy L <= R")
    floor = params.variance_floor
    if floor <= 0.0:
        raise ValueError("variance floor is zero; bound undefined")
    width = R - L
    return params.c_uni / math.sqrt(floor) + math.sqrt(
        1.0 - math.exp(-(width * width) / (2.0 * math.pi * floor))
    )


def parity_even_probability(n: int, p: float) -> float:
    """Probability that a Binomial(n, p) edge size is even: (1 + (1-2p)^n)/2."""
    if n < 0:
        raise ValueError("n must be non-negative")
    if not 0.0 <= p <= 1.0:
        raise ValueError("p must lie in [0, 1]")
    return 0.5 * (1.0 + (1.0 - 2.0 * p) ** n)


def dependent_parity_pair_probability(n: int, m: int, d: int) -> float:
    """Probability that two fixed edges of the d-regular-column model both
    have odd size: (1 - 2(1-2d/m)^n + (1 - 4d(m-d)/(m(m-1)))^n) / 4.
    """
    if m < 2:
        raise ValueError("pair probability needs m >= 2")
    if not 1 <= d <= m:
        raise ValueError("d must satisfy 1 <= d <= m")
    if n < 0:
        raise ValueError("n must be non-negative")
    a = (1.0 - 2.0 * d / m) ** n
    b = (1.0 - 4.0 * d * (m - d) / (m * (m - 1.0))) ** n
    return (1.0 - 2.0 * a + b) / 4.0


def hypergeometric_tail_bound(m: int, d: int, j: int, lam: float) -> float:
    """Two-sided relative-deviation tail bound 2*exp(-lam^2 * mu / 3) for a
    hypergeometric count with mean mu = d*j/m.
    """
    if not 0.0 < lam < 1.0:
        raise ValueError("lambda must lie in (0, 1)")
    if not 1 <= d <= m or not 1 <= j <= m:
        raise ValueError("need 1 <= d, j <= m")
    mu = d * j / m
    return 2.0 * math.exp(-lam * lam * mu / 3.0)


def history_failure_bound(m: int, d: int, alpha: float, lam: float, xi: float) -> float:
    """Upper bound 8/xi * exp(-d*lam^2*(1-alpha-xi)^2/3) on the probability
    that one column's conditional one-probabilities escape the
    (1 +/- lam)(1 + xi/(1-alpha-xi))^{+/-1} * p envelope somewhere in the
    first alpha*m revealed rows.
    """
    if not 0.0 < alpha < 1.0:
        raise ValueError("alpha must lie in (0, 1)")
    if not 0.0 < lam < 1.0:
        raise ValueError("lambda must lie in (0, 1)")
    if not 0.0 < xi < 1.0:
        raise ValueError("xi must lie in (0, 1)")
    if xi < 1.0 / m:
        raise ValueError("xi must be at least 1/m")
    if alpha + xi >= 1.0:
        raise ValueError("alpha + xi must be below 1")
    margin = 1.0 - alpha - xi
    return 8.0 / xi * math.exp(-d * lam * lam * margin * margin / 3.0)


def first_moment_log_expected_count(
    n: int, m: int, p: float, kappa: float, regime: str, c_uni: float = C_UNI
) -> float:
    """log of the first-moment bound on the expected number of colourings
    with discrepancy at most kappa * f, where f is the regime's target scale.

    regime="sparse" (m comparable to n): f = 2^(-n/m) * sqrt(p(1-p)n);
    regime="dense" (m well above n):     f = sqrt(p(1-p)n * log(gamma)) with
    gamma = min(pn, m/n).  Both use the width-linear (sparse) or
    Gaussian-window (dense) interval bound on the per-edge probability
    P[|S| <= kappa*f], raised to the m-th power against the 2^n colourings;
    the interval bounds are valid for every kappa > 0, with no requirement
    that kappa*f exceed one.
    """
    if regime not in ("sparse", "dense"):
        raise ValueError(f"regime must be 'sparse' or 'dense', got {regime!r}")
    if kappa <= 0.0:
        raise ValueError("kappa must be positive")
    if not 0.0 < p < 1.0:
        raise ValueError("p must lie in (0, 1)")
    sigma = math.sqrt(p * (1.0 - p) * n)
    if regime == "sparse":
        f = 2.0 ** (-n / m) * sigma
        width = 2.0 * kappa * f
        per_edge = (c_uni + width / _SQRT_2PI) / sigma
        return n * math.log(2.0) + m * math.log(per_edge)
    gamma = min(p * n, m / n)
    if gamma <= 1.0:
        raise ValueError("dense regime needs min(pn, m/n) > 1")
    f = math.sqrt(p * (1.0 - p) * n * math.log(gamma))
    width = 2.0 * kappa * f
    per_edge = c_uni / sigma + math.sqrt(
        1.0 - math.exp(-(width * width) / (2.0 * math.pi * sigma * sigma))
    )
    return n * math.log(2.0) + m * math.log(per_edge)


def lower_bound_curve(n: int, m: int, p_or_d: float, model: str) -> float:
    """Reference lower-bound curve with implied constant one.

    m <= n: max(2^(-n/m) * sqrt(mu), 1); m > n: sqrt(mu * log(gamma)) with
    gamma = min(mu, m/n) (clamped at one so the radicand stays non-negative).
    mu is the average edge size: p*n, or d*n/m for the edge-dependent model.
    Fitted constants belong to experiments, not to this function.
    """
    if model not in ("ind", "dep"):
        raise ValueError(f"model must be 'ind' or 'dep', got {model!r}")
    mu = p_or_d * n if model == "ind" else p_or_d * n / m
    if m <= n:
        return max(2.0 ** (-n / m) * math.sqrt(mu), 1.0)
    gamma = max(min(mu, m / n), 1.0)
    return math.sqrt(mu * math.log(gamma))


def upper_bound_curve(n: int, m: int, d: float) -> float:
    """Dense-regime achievable scale sqrt(mu * log(m/n) * beta) with the
    smallest admissible beta; identical to the round schedule's target.
    """
    from .iterated import compute_beta

    if m <= n:
        raise ValueError("upper bound curve is defined for m > n only")
    mu = d * n / m
    beta = compute_beta(n, m, d)
    return math.sqrt(mu * math.log(m / n) * beta)
