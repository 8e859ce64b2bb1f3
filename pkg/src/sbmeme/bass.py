"""Two-generation Bass model: curves, simulation and per-meme estimation.

The model's generation components are cumulative adoption curves. Observed
popularity is a per-tick volume, so :func:`simulate` returns the rate of the
combined curve, ``m1*f1(t) + m2*f2(t - onset)``, sampled at integer ticks.
"""
from __future__ import annotations

import enum
import logging
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .core import BassGeneration, TimeSeries, TwoBeautyProfile, TwoStageBassModel, as_series
from .errors import (EmptyWakeWindow, InvalidValue, NoImitationSolution,
                     NoInnovationSignal)

log = logging.getLogger(__name__)

Q_TOL = 1e-10


class PMode(str, enum.Enum):
    observed = "observed"
    corpus_mean = "corpus_mean"


def bass_cdf(t, p: float, q: float):
    """Cumulative adoption fraction F(t); zero for negative t."""
    t = np.asarray(t, dtype=float)
    e = np.exp(-(p + q) * np.maximum(t, 0.0))
    out = np.where(t < 0, 0.0, (1.0 - e) / ((q / p) * e + 1.0))
    return out if out.ndim else float(out)


def bass_rate(t, p: float, q: float):
    """Adoption density dF/dt; zero for negative t."""
    t = np.asarray(t, dtype=float)
    e = np.exp(-(p + q) * np.maximum(t, 0.0))
    out = np.where(t < 0, 0.0, ((p + q) ** 2 / p) * e / (1.0 + (q / p) * e) ** 2)
    return out if out.ndim else float(out)


def generation_components(model: TwoStageBassModel, t=None):
    """Cumulative popularity of each generation, ``(S1, S2)``.

    The second generation absorbs the share ``F2`` of the first generation's
    adopters once it starts.
    """
    if t is None:
        t = np.arange(model.horizon + 1)
    t = np.asarray(t, dtype=float)
    g1, g2 = model.g1, model.g2
    F1 = bass_cdf(t, g1.p, g1.q)
    F2 = bass_cdf(t - g2.onset, g2.p, g2.q)
    S1 = g1.m * F1 * (1.0 - F2)
    S2 = F2 * (g2.m + g1.m * F1)
    return S1, S2


def cumulative(model: TwoStageBassModel, t=None) -> np.ndarray:
    S1, S2 = generation_components(model, t)
    return S1 + S2


def simulate(model: TwoStageBassModel, meme_id: str = "simulated") -> TimeSeries:
    """Per-tick popularity at ticks ``0..horizon`` (tick 0 is the first awakening)."""
    t = np.arange(model.horizon + 1, dtype=float)
    g1, g2 = model.g1, model.g2
    values = g1.m * bass_rate(t, g1.p, g1.q) + g2.m * bass_rate(t - g2.onset, g2.p, g2.q)
    return TimeSeries(meme_id, values)


def estimate_p(series, ta: int, m: float) -> float:
    s = as_series(series)
    if ta + 1 > s.T:
        raise InvalidValue("estimate_p needs the tick after the awakening")
    if not m > 0:
        raise InvalidValue("diffusion potential must be positive")
    p = (s.values[ta] + s.values[ta + 1]) / (2.0 * m)
    if p <= 0:
        raise NoInnovationSignal(f"{s.meme_id}: zero popularity at ticks {ta} and {ta + 1}")
    return float(p)


def _imitation_gap(q, p, delay):
    return math.log(q / p) - delay * (p + q)


def _bisect(f, lo, hi, max_iter=400):
    """Root of ``f`` on ``[lo, hi]`` where ``f(lo)`` and ``f(hi)`` differ in sign.

    Halves until the bracket can no longer shrink in floating point.
    """
    flo = f(lo)
    for _ in range(max_iter):
        mid = 0.5 * (lo + hi)
        fm = f(mid)
        if fm == 0 or mid in (lo, hi):
            return mid
        if (fm < 0) == (flo < 0):
            lo, flo = mid, fm
        else:
            hi = mid
    return 0.5 * (lo + hi)


def imitation_roots(p: float, peak_delay: float) -> tuple:
    """All roots ``q > p`` of ln(q/p) = peak_delay * (p + q), ascending.

    The left side minus the right is concave in q with its maximum at
    ``q = 1/peak_delay``, so there are zero, one or two roots.
    """
    if not p > 0:
        raise InvalidValue("innovation coefficient must be positive")
    if not peak_delay >= 1:
        raise InvalidValue("peak delay must be at least one tick")
    f = lambda q: _imitation_gap(q, p, peak_delay)  # noqa: E731
    q_top = 1.0 / peak_delay
    if q_top <= p or f(q_top) < 0:
        raise NoImitationSolution(f"no q solves the peak delay {peak_delay} for p={p}")
    if f(q_top) < Q_TOL:
        return (q_top,)
    small = _bisect(f, p * (1 + 1e-9), q_top)
    hi = 2.0 * q_top
    while f(hi) >= 0:
        hi *= 2.0
    large = _bisect(f, q_top, hi)
    return (small, large)


def estimate_q(p: float, peak_delay: float, root: str = "larger") -> float:
    """Imitation coefficient reproducing the observed peak delay.

    ``root`` picks between the two solutions when both exist.
    """
    roots = imitation_roots(p, peak_delay)
    if root == "larger":
        return roots[-1]
    if root == "smaller":
        return roots[0]
    raise ValueError(f"root must be 'larger' or 'smaller', got {root!r}")


def estimate_m(series, ta: int, tf: int) -> float:
    s = as_series(series)
    if not ta < tf:
        raise InvalidValue("wake window must satisfy ta < tf")
    m = float(np.sum(s.values[ta:tf + 1]))
    if m <= 0:
        raise EmptyWakeWindow(f"{s.meme_id}: no popularity in ticks {ta}..{tf}")
    return m


@dataclass(frozen=True)
class FitResult:
    """A fitted model plus the root chosen per generation (``larger``/``smaller``/``single``)."""

    meme_id: str
    model: TwoStageBassModel
    root_choice: tuple

    def to_dict(self) -> dict:
        d = {"meme_id": self.meme_id, **self.model.to_dict()}
        d["root_choice"] = list(self.root_choice)
        return d


def _choose_root(roots, p, m, observed_peak):
    if len(roots) == 1:
        return roots[0], "single"
    small, large = roots
    err_small = abs(m * (p + small) ** 2 / (4 * small) - observed_peak)
    err_large = abs(m * (p + large) ** 2 / (4 * large) - observed_peak)
    if err_small < err_large:
        return small, "smaller"
    return large, "larger"


def fit(series, profile: TwoBeautyProfile, p_mode: PMode | str = PMode.observed,
        corpus_p: Optional[tuple] = None) -> FitResult:
    """Estimate a two-generation model from an accepted profile.

    Time is re-based so tick 0 of the model is the first awakening ``ta1``.
    """
    s = as_series(series)
    p_mode = PMode(p_mode)
    if p_mode is PMode.corpus_mean and corpus_p is None:
        raise InvalidValue("corpus_mean mode needs the corpus mean p for both generations")
    windows = ((profile.ta1, profile.t1, profile.tf1), (profile.ta2, profile.t2, profile.tf2))
    gens, choices = [], []
    for i, (ta, t, tf) in enumerate(windows):
        m = estimate_m(s, ta, tf)
        if p_mode is PMode.observed:
            p = estimate_p(s, ta, m)
        else:
            p = float(corpus_p[i])
        q, choice = _choose_root(imitation_roots(p, t - ta), p, m, s.values[t])
        gens.append(BassGeneration(p, q, m, ta - profile.ta1))
        choices.append(choice)
        log.debug("%s: generation %d uses the %s root q=%.6g", s.meme_id, i + 1, choice, q)
    model = TwoStageBassModel(gens[0], gens[1], profile.T - profile.ta1)
    return FitResult(s.meme_id, model, tuple(choices))
