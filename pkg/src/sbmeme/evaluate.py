"""Simulation quality: per-meme correlation, second-peak timing precision and
averaged curves."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .bass import simulate
from .core import TwoBeautyProfile, TwoStageBassModel, as_series
from .errors import DegenerateSeries, InvalidValue


def pearson(a, b) -> float:
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.shape != b.shape or a.ndim != 1 or a.size < 2:
        raise InvalidValue("pearson needs two equal-length series of at least 2 values")
    da = a - a.mean()
    db = b - b.mean()
    saa = float(np.dot(da, da))
    sbb = float(np.dot(db, db))
    if saa == 0 or sbb == 0:
        raise DegenerateSeries("correlation undefined for a constant series")
    r = float(np.dot(da, db)) / math.sqrt(saa * sbb)
    return max(-1.0, min(1.0, r))


@dataclass(frozen=True)
class FitReport:
    meme_id: str
    pearson_r: Optional[float]
    peak_error_k: int

    def __post_init__(self):
        if self.pearson_r is not None and not -1.0 <= self.pearson_r <= 1.0:
            raise InvalidValue("pearson_r must lie in [-1, 1]")
        if self.peak_error_k < 0:
            raise InvalidValue("peak_error_k must be non-negative")

    def to_dict(self) -> dict:
        return {"meme_id": self.meme_id, "pearson_r": self.pearson_r,
                "peak_error_k": self.peak_error_k}


def simulated_peak(sim: np.ndarray, onset: int) -> int:
    """Tick of the largest simulated value at or after ``onset`` (earliest on ties)."""
    return onset + int(np.argmax(sim[onset:]))


def aligned_curves(series, profile: TwoBeautyProfile, model: TwoStageBassModel):
    """Observed and simulated curves on the axis re-based at ``ta1``."""
    obs = as_series(series).values[profile.ta1:]
    sim = simulate(model).values
    n = min(obs.size, sim.size)
    return obs[:n], sim[:n]


def evaluate_meme(series, profile: TwoBeautyProfile, model: TwoStageBassModel) -> FitReport:
    obs, sim = aligned_curves(series, profile, model)
    try:
        r = pearson(obs, sim)
    except DegenerateSeries:
        r = None
    observed_t2 = profile.t2 - profile.ta1
    k = abs(simulated_peak(sim, model.g2.onset) - observed_t2)
    return FitReport(profile.meme_id, r, k)


def precision_at_k(reports: Sequence[FitReport], k: int) -> tuple:
    """Count and fraction of memes whose second-peak error is at most ``k``."""
    if not reports:
        raise InvalidValue("precision_at_k needs at least one report")
    count = sum(1 for r in reports if r.peak_error_k <= k)
    return count, count / len(reports)


def averaged_curve(curves: Sequence) -> np.ndarray:
    """Tick-wise mean over the curves that are non-zero at that tick.

    Curves may differ in length; missing ticks count as zero.
    """
    if not curves:
        raise InvalidValue("averaged_curve needs at least one curve")
    arrays = [np.asarray(c.values if hasattr(c, "values") else c, dtype=float) for c in curves]
    n = max(a.size for a in arrays)
    total = np.zeros(n)
    count = np.zeros(n)
    for a in arrays:
        total[:a.size] += a
        count[:a.size] += a != 0
    out = np.zeros(n)
    np.divide(total, count, out=out, where=count > 0)
    return out


def summarize(reports: Sequence[FitReport], ks=(0, 1, 2, 3)) -> dict:
    """Evaluation table: per-meme rows, p@k, mean r and the share of r > 0.4."""
    reports = sorted(reports, key=lambda r: r.meme_id)
    rs = [r.pearson_r for r in reports if r.pearson_r is not None]
    out = {
        "per_meme": [r.to_dict() for r in reports],
        "p_at_k": {str(k): precision_at_k(reports, k)[1] for k in ks} if reports else {},
        "mean_r": float(np.mean(rs)) if rs else None,
        "frac_r_gt_0.4": float(np.mean([r > 0.4 for r in rs])) if rs else None,
        "n": len(reports),
    }
    return out
