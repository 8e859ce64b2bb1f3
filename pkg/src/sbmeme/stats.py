"""Corpus-level statistics over accepted profiles and fitted models."""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, fields
from typing import Optional, Sequence

import numpy as np
from scipy.optimize import curve_fit, minimize

from .core import TwoBeautyProfile, as_series
from .errors import FitFailed, InsufficientSample, InvalidValue, ZeroVariance

log = logging.getLogger(__name__)

MIN_GAPS = 10
MIN_PAIRS = 10
MIN_GAUSS = 30


def wake_gap(profile: TwoBeautyProfile) -> int:
    return profile.ta2 - profile.tf1


def _pearson(a, b) -> float:
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    da = a - a.mean()
    db = b - b.mean()
    denom = math.sqrt(float(np.dot(da, da)) * float(np.dot(db, db)))
    if denom == 0:
        return float("nan")
    return float(np.dot(da, db) / denom)


def gap_histogram(gaps: Sequence[int]):
    """Unit-width density histogram: ``(bin_centers, densities)``."""
    g = np.asarray(gaps, dtype=int)
    edges = np.arange(g.min(), g.max() + 2)
    counts, _ = np.histogram(g, bins=edges)
    return edges[:-1] + 0.5, counts / g.size


def fit_exponential(gaps: Sequence[int]) -> tuple:
    """Maximum-likelihood rate ``1/mean`` and the correlation of the fitted
    density with the unit-bin histogram. R is NaN when the histogram is flat."""
    g = np.asarray(gaps, dtype=float)
    if g.size < MIN_GAPS:
        raise InsufficientSample(f"need at least {MIN_GAPS} gaps, got {g.size}")
    if np.any(g <= 0):
        raise InvalidValue("wake gaps must be positive")
    lam = 1.0 / g.mean()
    centers, dens = gap_histogram(g.astype(int))
    R = _pearson(dens, lam * np.exp(-lam * centers)) if centers.size > 1 else float("nan")
    return float(lam), R


def fit_power_law(m1s: Sequence[float], m2s: Sequence[float]) -> tuple:
    """Exponent of ``m2 ~ m1**alpha`` from a log-log least-squares line (with intercept)."""
    a = np.asarray(m1s, dtype=float)
    b = np.asarray(m2s, dtype=float)
    if a.shape != b.shape:
        raise InvalidValue("m1 and m2 samples must be paired")
    ok = (a > 0) & (b > 0)
    if not ok.all():
        log.warning("skipping %d pairs with non-positive mass", int((~ok).sum()))
    x, y = np.log(a[ok]), np.log(b[ok])
    if x.size < MIN_PAIRS:
        raise InsufficientSample(f"need at least {MIN_PAIRS} positive pairs, got {x.size}")
    dx = x - x.mean()
    sxx = float(np.dot(dx, dx))
    if sxx == 0:
        raise ZeroVariance("all first-wave masses are equal")
    slope = float(np.dot(dx, y - y.mean()) / sxx)
    return slope, _pearson(x, y)


def rising_velocity(series, profile: TwoBeautyProfile, generation: int) -> float:
    s = as_series(series)
    if generation == 1:
        ta, t = profile.ta1, profile.t1
    elif generation == 2:
        ta, t = profile.ta2, profile.t2
    else:
        raise ValueError("generation must be 1 or 2")
    return float((s.values[t] - s.values[ta]) / (t - ta))


def _gauss(x, a, mu, sigma):
    return a * np.exp(-(x - mu) ** 2 / (2.0 * sigma ** 2))


def _gauss_fallback(x, y, mu0, sd0):
    """Minimise the squared error over (mu, log sigma) with the amplitude solved in closed form."""
    def amp(mu, sigma):
        g = np.exp(-(x - mu) ** 2 / (2.0 * sigma ** 2))
        gg = float(np.dot(g, g))
        return (float(np.dot(g, y)) / gg if gg > 0 else 0.0), g

    def sse(theta):
        mu, sigma = theta[0], math.exp(theta[1])
        a, g = amp(mu, sigma)
        return float(np.sum((y - a * g) ** 2))

    res = minimize(sse, (mu0, math.log(sd0)), method="Nelder-Mead",
                   options={"xatol": 1e-12 * max(1.0, abs(mu0)), "fatol": 1e-14, "maxiter": 5000})
    mu, sigma = float(res.x[0]), math.exp(float(res.x[1]))
    return amp(mu, sigma)[0], mu, sigma


def value_histogram(values):
    v = np.asarray(values, dtype=float)
    nbins = int(math.ceil(math.sqrt(v.size)))
    dens, edges = np.histogram(v, bins=nbins, density=True)
    return 0.5 * (edges[:-1] + edges[1:]), dens


def fit_gaussian(values: Sequence[float]) -> tuple:
    """Least-squares fit of ``a*exp(-(x-mu)^2/(2 sigma^2))`` to a sqrt(N)-bin density histogram.

    Returns ``(a, mu, sigma, R2)``. When the histogram has no peak to fit the
    sample mean and standard deviation are returned.
    """
    v = np.asarray(values, dtype=float)
    if v.size < MIN_GAUSS:
        raise InsufficientSample(f"need at least {MIN_GAUSS} values, got {v.size}")
    sd = float(v.std())
    if sd == 0:
        raise ZeroVariance("all values are equal")
    x, y = value_histogram(v)
    mu0 = float(v.mean())
    a0 = 1.0 / (sd * math.sqrt(2 * math.pi))
    try:
        popt, _ = curve_fit(_gauss, x, y, p0=(a0, mu0, sd), method="lm", maxfev=10000)
        a, mu, sigma = (float(c) for c in popt)
        sigma = abs(sigma)
    except RuntimeError:
        a, mu, sigma = _gauss_fallback(x, y, mu0, sd)
    if not (math.isfinite(a) and math.isfinite(mu) and math.isfinite(sigma)):
        raise FitFailed("Gaussian fit did not converge")
    if not 0 < sigma <= 10.0 * float(np.ptp(v)):
        # a flat or hollow histogram: least squares runs off to an unbounded
        # width, so report the moment estimates instead
        log.warning("histogram has no Gaussian shape; using sample moments")
        a, mu, sigma = a0, mu0, sd
    resid = y - _gauss(x, a, mu, sigma)
    ss_tot = float(np.sum((y - y.mean()) ** 2))
    R2 = 1.0 - float(np.sum(resid ** 2)) / ss_tot if ss_tot > 0 else float("nan")
    return a, mu, sigma, R2


def imitation_pressure(series, profile: TwoBeautyProfile, q: float, m: float,
                       t_n: int, generation: int = 1) -> float:
    """Internal-network pressure ``(q/m) * sum(S[ta_i..t_n])`` for one generation."""
    s = as_series(series)
    ta, tf = (profile.ta1, profile.tf1) if generation == 1 else (profile.ta2, profile.tf2)
    if not ta <= t_n <= tf:
        raise InvalidValue(f"t_n={t_n} outside the wake window [{ta}, {tf}]")
    if not m > 0:
        raise InvalidValue("m must be positive")
    return float(q / m * np.sum(s.values[ta:t_n + 1]))


@dataclass(frozen=True)
class GaussFit:
    a: float
    mu: float
    sigma: float
    R2: float

    def __post_init__(self):
        if not self.sigma > 0:
            raise InvalidValue("Gaussian width must be positive")


@dataclass(frozen=True)
class CorpusReport:
    """Aggregated fits for one corpus. Optional entries are None when the
    sample was too small for the estimator."""

    lambda_: float
    lambda_fit_R: float
    alpha_m: Optional[float]
    alpha_fit_R: Optional[float]
    velocity_ratio_mean: float
    p_gauss: tuple
    q_mean: tuple
    n_profiles: int

    def __post_init__(self):
        if not self.lambda_ > 0:
            raise InvalidValue("lambda must be positive")
        if self.n_profiles < 0:
            raise InvalidValue("n_profiles must be non-negative")

    def to_dict(self) -> dict:
        d = {}
        for f in fields(self):
            val = getattr(self, f.name)
            key = "lambda" if f.name == "lambda_" else f.name
            if f.name == "p_gauss":
                val = [None if g is None else {k: getattr(g, k) for k in ("a", "mu", "sigma", "R2")}
                       for g in val]
            elif isinstance(val, tuple):
                val = list(val)
            d[key] = val
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "CorpusReport":
        return cls(
            lambda_=d["lambda"], lambda_fit_R=d["lambda_fit_R"],
            alpha_m=d["alpha_m"], alpha_fit_R=d["alpha_fit_R"],
            velocity_ratio_mean=d["velocity_ratio_mean"],
            p_gauss=tuple(None if g is None else GaussFit(**g) for g in d["p_gauss"]),
            q_mean=tuple(d["q_mean"]), n_profiles=int(d["n_profiles"]),
        )


def build_report(profiles: Sequence[TwoBeautyProfile], p_values=((), ()),
                 q_values=((), ())) -> CorpusReport:
    """Reduce accepted profiles and per-generation coefficient samples to a report.

    The result depends only on the multisets of inputs.
    """
    profiles = sorted(profiles, key=lambda pr: pr.meme_id)
    lam, lam_R = fit_exponential([wake_gap(pr) for pr in profiles])
    try:
        alpha_m, alpha_R = fit_power_law([pr.m1 for pr in profiles], [pr.m2 for pr in profiles])
    except (InsufficientSample, ZeroVariance) as exc:
        log.warning("power-law fit skipped: %s", exc)
        alpha_m = alpha_R = None
    ratios = [pr.v2 / pr.v1 for pr in profiles if pr.v1 > 0]
    gauss = []
    for sample in p_values:
        try:
            gauss.append(GaussFit(*fit_gaussian(sorted(sample))))
        except (InsufficientSample, ZeroVariance, FitFailed) as exc:
            log.warning("Gaussian fit of p skipped: %s", exc)
            gauss.append(None)
    q_mean = tuple(float(np.mean(sorted(s))) if len(s) else None for s in q_values)
    return CorpusReport(
        lambda_=lam, lambda_fit_R=lam_R, alpha_m=alpha_m, alpha_fit_R=alpha_R,
        velocity_ratio_mean=float(np.mean(sorted(ratios))) if ratios else float("nan"),
        p_gauss=tuple(gauss), q_mean=q_mean, n_profiles=len(profiles),
    )
