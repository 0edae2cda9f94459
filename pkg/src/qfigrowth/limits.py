"""Light-cone models, the QFI growth bound, and precision-limit exponents.

Regimes of the effective light cone R_L(t) for power-law couplings
1/d**alpha on a D-dimensional lattice:

    alpha > 2D + 1        linear        R_L = v_lr * t
    2D < alpha <= 2D + 1  polynomial    R_L = c * t**(1/xi),  xi = alpha - 2D
    D < alpha <= 2D       logarithmic   R_L = a * exp(b t)
    0 <= alpha <= D       nonlocal      step: diameter once t >= c0 * ln N

The growth bound reads

    F_Q(t) <= C * kappa * c_wy * (1 + gamma 2**D R_L(t)**D) * N

with kappa the per-site spectrum width, c_wy in [1, 2] the
skew-information constant, gamma the lattice ball-volume constant and C
an explicit order-one prefactor (every hidden constant is surfaced).
Inverting the bound gives the minimal preparation time for a target
QFI; combining with the Cramer-Rao bound and the repetition budget
T / t_p yields the enhancing exponent

    Delta = log_N(F_Q / t_p * tau / N)

whose regime-dependent maximum is ``delta_max``: 1 - 1/D above the
linear threshold, 3 - alpha/D in the polynomial window, and
asymptotically 1 (flagged) below it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

__all__ = [
    "REGIMES",
    "LightConeModel",
    "linear_cone",
    "polynomial_cone",
    "logarithmic_cone",
    "nonlocal_cone",
    "regime_for",
    "light_cone_radius",
    "qfi_growth_bound",
    "min_preparation_time",
    "enhancing_exponent",
    "cramer_rao",
    "MetrologyReport",
    "DeltaMax",
    "delta_max",
    "delta_max_logarithmic",
    "EnhancementFit",
    "fit_scaling",
    "k_partite_min_time",
]

REGIMES = ("linear", "polynomial", "logarithmic", "nonlocal")


@dataclass(frozen=True)
class LightConeModel:
    """Effective light cone R_L(t) with regime-specific parameters."""

    regime: str
    v_lr: float | None = None
    c: float | None = None
    xi: float | None = None
    a: float | None = None
    b: float | None = None
    c0: float = 1.0
    n_sites: int | None = None
    diameter: float | None = None

    def __post_init__(self):
        if self.regime not in REGIMES:
            raise ValueError(f"regime must be one of {REGIMES}")
        if self.regime == "linear" and not (self.v_lr and self.v_lr > 0):
            raise ValueError("linear cone needs a positive velocity")
        if self.regime == "polynomial":
            if not (self.c and self.c > 0):
                raise ValueError("polynomial cone needs a positive coefficient")
            if not (self.xi and 0 < self.xi <= 1):
                raise ValueError("polynomial cone needs xi in (0, 1]")
        if self.regime == "logarithmic":
            if not (self.a and self.a > 0 and self.b and self.b > 0):
                raise ValueError("logarithmic cone needs positive a, b")
        if self.regime == "nonlocal":
            if self.c0 <= 0:
                raise ValueError("nonlocal cone needs a positive signal-time coefficient")
            if not (self.n_sites and self.n_sites >= 1):
                raise ValueError("nonlocal cone needs the system size")
            if self.diameter is None or self.diameter < 0:
                raise ValueError("nonlocal cone needs the system diameter")


def linear_cone(v_lr):
    return LightConeModel(regime="linear", v_lr=float(v_lr))


def polynomial_cone(c, xi):
    return LightConeModel(regime="polynomial", c=float(c), xi=float(xi))


def logarithmic_cone(a, b):
    return LightConeModel(regime="logarithmic", a=float(a), b=float(b))


def nonlocal_cone(n_sites, diameter, c0=1.0):
    return LightConeModel(
        regime="nonlocal", c0=float(c0), n_sites=int(n_sites), diameter=float(diameter)
    )


def regime_for(alpha, D):
    """Light-cone regime of a power-law exponent alpha in dimension D."""
    if alpha < 0:
        raise ValueError("alpha must be non-negative")
    if D < 1:
        raise ValueError("dimension must be a positive integer")
    if alpha > 2 * D + 1:
        return "linear"
    if alpha > 2 * D:
        return "polynomial"
    if alpha > D:
        return "logarithmic"
    return "nonlocal"


def light_cone_radius(model, t):
    """Evaluate R_L(t); the nonlocal regime is a step at t = c0 ln N."""
    if t < 0:
        raise ValueError("time must be non-negative")
    if model.regime == "linear":
        return model.v_lr * t
    if model.regime == "polynomial":
        return model.c * t ** (1.0 / model.xi)
    if model.regime == "logarithmic":
        return 0.0 if t == 0 else model.a * math.exp(model.b * t)
    signal_time = model.c0 * math.log(model.n_sites) if model.n_sites > 1 else 0.0
    return model.diameter if t >= signal_time and t > 0 else 0.0


def qfi_growth_bound(kappa, c_wy, gamma, D, model, t, N, cap=False, prefactor=1.0):
    """C * kappa * c_wy * (1 + gamma 2**D R_L(t)**D) * N, optionally clamped.

    With ``cap`` set the result is clamped at kappa**2 N**2, the
    conventional ceiling of the QFI for width-kappa generators.
    """
    if min(kappa, c_wy, gamma, prefactor) <= 0 or N < 1 or D < 1:
        raise ValueError("bound parameters must be positive")
    if not (1.0 <= c_wy <= 2.0):
        raise ValueError("c_wy must lie in [1, 2]")
    radius = light_cone_radius(model, t)
    value = prefactor * kappa * c_wy * (1.0 + gamma * 2.0**D * radius**D) * N
    if cap:
        value = min(value, kappa**2 * N**2)
    return float(value)


def min_preparation_time(fq_target, N, model, D, kappa=1.0, c_wy=1.0, gamma=1.0, prefactor=1.0):
    """Smallest t whose (unclamped) growth bound reaches ``fq_target``.

    Closed-form inversion per regime.  Targets above kappa**2 N**2 are
    unreachable for any preparation time and raise.
    """
    if fq_target > kappa**2 * N**2 * (1 + 1e-12):
        raise ValueError("target exceeds the kappa^2 N^2 ceiling")
    base = prefactor * kappa * c_wy * N
    needed = (fq_target / base - 1.0) / (gamma * 2.0**D)
    if needed <= 0:
        return 0.0
    radius = needed ** (1.0 / D)
    if model.regime == "linear":
        return radius / model.v_lr
    if model.regime == "polynomial":
        return (radius / model.c) ** model.xi
    if model.regime == "logarithmic":
        if radius <= model.a:
            return 0.0
        return math.log(radius / model.a) / model.b
    if radius > model.diameter:
        raise ValueError("target QFI unreachable within the system diameter")
    return model.c0 * math.log(model.n_sites) if model.n_sites > 1 else 0.0


def enhancing_exponent(fq, t_p, tau, N):
    """Delta = log_N(F_Q / t_p * tau / N)."""
    if N < 2:
        raise ValueError("the log base degenerates for N < 2")
    if min(fq, t_p, tau) <= 0:
        raise ValueError("F_Q, t_p and tau must be positive")
    return float(math.log(fq * tau / (t_p * N)) / math.log(N))


@dataclass(frozen=True)
class MetrologyReport:
    """Cramer-Rao evaluation of one operating point."""

    F_Q: float
    t_p: float
    tau: float
    T: float
    N: int
    delta_lambda: float
    delta_lambda_SQL: float
    delta: float

    def __post_init__(self):
        expected = enhancing_exponent(self.F_Q, self.t_p, self.tau, self.N)
        if abs(self.delta - expected) > 1e-12:
            raise ValueError("stored exponent is inconsistent with its definition")


def cramer_rao(fq, T, t_p, tau, N):
    """Precision floor for phase accumulation tau per shot, T/t_p repetitions.

    delta_lambda = 1 / sqrt(F_Q tau^2 (T / t_p)) and
    delta_lambda_SQL = 1 / sqrt(N T tau); their ratio is N**(-Delta/2).
    """
    if not (T >= t_p > 0) or tau <= 0:
        raise ValueError("need T >= t_p > 0 and tau > 0")
    if fq <= 0 or N < 2:
        raise ValueError("need positive QFI and N >= 2")
    dl = 1.0 / math.sqrt(fq * tau * tau * (T / t_p))
    dl_sql = 1.0 / math.sqrt(N * T * tau)
    return MetrologyReport(
        F_Q=float(fq),
        t_p=float(t_p),
        tau=float(tau),
        T=float(T),
        N=int(N),
        delta_lambda=dl,
        delta_lambda_SQL=dl_sql,
        delta=enhancing_exponent(fq, t_p, tau, N),
    )


class DeltaMax(NamedTuple):
    """Regime-dependent ceiling of the enhancing exponent."""

    value: float
    asymptotic: bool


def delta_max(alpha, D):
    """Ceiling of Delta versus alpha: (D-1)/D above the linear threshold,
    (3D - alpha)/D in the polynomial window, asymptotically 1 below.

    Both branch expressions divide by D the same way, so they agree
    bit-exactly at the boundary alpha = 2D + 1.
    """
    regime = regime_for(alpha, D)
    if regime == "linear":
        return DeltaMax(value=(D - 1.0) / D, asymptotic=False)
    if regime == "polynomial":
        return DeltaMax(value=(3.0 * D - alpha) / D, asymptotic=False)
    return DeltaMax(value=1.0, asymptotic=True)


def delta_max_logarithmic(N, polylog_power=1.0):
    """Finite-size evaluator 1 - log_N((ln N)**p) for the logarithmic regime."""
    if N < 3:
        raise ValueError("need N >= 3 for a meaningful polylog correction")
    return float(1.0 - polylog_power * math.log(math.log(N)) / math.log(N))


@dataclass(frozen=True)
class EnhancementFit:
    """Power-law fits of the enhancing factor and of the QFI versus N."""

    alpha: float
    n_values: tuple
    delta: float
    delta_f: float
    r_squared: tuple
    residuals: tuple = field(repr=False)

    def __post_init__(self):
        if len(self.n_values) < 3:
            raise ValueError("fits need at least three system sizes")
        if any(b <= a for a, b in zip(self.n_values, self.n_values[1:])):
            raise ValueError("system sizes must be strictly increasing")


def _ols_loglog(x, y):
    lx, ly = np.log(x), np.log(y)
    slope, intercept = np.polyfit(lx, ly, 1)
    fitted = slope * lx + intercept
    resid = ly - fitted
    ss_res = float((resid**2).sum())
    ss_tot = float(((ly - ly.mean()) ** 2).sum())
    r2 = 1.0 if ss_tot == 0 else 1.0 - ss_res / ss_tot
    return float(slope), r2, resid


def fit_scaling(points, tau, alpha=float("nan")):
    """Unweighted log-log fits over (N, F_Q, t_p) triples.

    Delta is fit from log(F_Q tau / t_p) versus log N (slope minus one);
    Delta_f from log F_Q versus log N (slope minus one).  Residuals of
    the Delta fit are kept for diagnostics.
    """
    pts = sorted((int(n), float(f), float(t)) for n, f, t in points)
    ns = [p[0] for p in pts]
    if len(set(ns)) < 3:
        raise ValueError("need at least three distinct system sizes")
    if tau <= 0:
        raise ValueError("tau must be positive")
    n_arr = np.array(ns, dtype=float)
    rate = np.array([f * tau / t for _, f, t in pts])
    fq = np.array([f for _, f, _ in pts])
    slope_rate, r2_rate, resid = _ols_loglog(n_arr, rate)
    slope_fq, r2_fq, _ = _ols_loglog(n_arr, fq)
    return EnhancementFit(
        alpha=float(alpha),
        n_values=tuple(ns),
        delta=slope_rate - 1.0,
        delta_f=slope_fq - 1.0,
        r_squared=(r2_rate, r2_fq),
        residuals=tuple(float(r) for r in resid),
    )


def k_partite_min_time(k, v_lr):
    """Minimal time k / v_lr to reach k-partite useful entanglement (F_Q/N >= k)."""
    if k < 1:
        raise ValueError("k must be a positive integer")
    if v_lr <= 0:
        raise ValueError("velocity must be positive")
    return float(k) / float(v_lr)
