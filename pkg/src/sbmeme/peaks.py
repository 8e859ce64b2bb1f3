"""Spike-function peak detection.

Each tick is scored by the average of its largest rise over the ``k`` ticks
to the left and its largest drop over the ``k`` ticks to the right. Ticks whose
score stands out from the score distribution by more than ``h`` standard
deviations are candidates, and candidates closer than ``k`` ticks to a higher
one are suppressed.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from . import kernels
from .core import Peak, PeakSet, as_series
from .errors import InvalidValue

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class PeakParams:
    k: int = 5
    h: float = 0.5

    def __post_init__(self):
        if int(self.k) != self.k or self.k < 1:
            raise InvalidValue(f"k must be a positive integer, got {self.k}")
        if not self.h > 0:
            raise InvalidValue(f"h must be positive, got {self.h}")


def spike_score(series, i: int, k: int) -> float:
    """Score of a single tick; out-of-range neighbours are ignored."""
    s = as_series(series)
    if not 0 <= i <= s.T:
        raise IndexError(f"tick {i} outside [0, {s.T}]")
    v = s.values
    left = [v[i] - v[i - j] for j in range(1, k + 1) if i - j >= 0]
    right = [v[i] - v[i + j] for j in range(1, k + 1) if i + j <= s.T]
    return ((max(left) if left else 0.0) + (max(right) if right else 0.0)) / 2.0


def spike_scores(series, k: int) -> np.ndarray:
    return kernels.spike_scores(as_series(series).values, k)


def _suppress(values: np.ndarray, candidates: np.ndarray, k: int) -> list[int]:
    # highest value first, earlier tick first among equal values
    order = sorted(candidates.tolist(), key=lambda t: (-values[t], t))
    kept: list[int] = []
    for t in order:
        if all(abs(t - u) >= k for u in kept):
            kept.append(t)
    return sorted(kept)


def detect_peaks(series, params: PeakParams = PeakParams()) -> PeakSet:
    s = as_series(series)
    v = s.values
    if v.size < 2 * params.k + 1:
        log.warning("%s: series of length %d is shorter than 2k+1=%d; no peaks",
                    s.meme_id, v.size, 2 * params.k + 1)
        return PeakSet()
    scores = spike_scores(s, params.k)
    threshold = params.h * scores.std()
    mask = (scores > 0) & (scores - scores.mean() > threshold)
    # a candidate must also be a local maximum of its immediate neighbours
    mask[1:] &= v[1:] >= v[:-1]
    mask[:-1] &= v[:-1] >= v[1:]
    kept = _suppress(v, np.flatnonzero(mask), params.k)
    return PeakSet(tuple(Peak(int(t), float(v[t]), float(scores[t])) for t in kept))
