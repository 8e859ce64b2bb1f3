"""Two-sleeping-beauty identification.

Awakening and falling-asleep times are located as the ticks farthest from the
chord joining a peak to the start (or end) of the series. Beauty coefficients
average the normalised gap between the chord and the trajectory over each sleep.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import NamedTuple, Optional

import numpy as np

from . import kernels
from .core import ALPHA, TwoBeautyProfile, as_series
from .errors import InvalidValue
from .peaks import PeakParams, detect_peaks

log = logging.getLogger(__name__)

TOO_FEW_PEAKS = "too-few-peaks"
ORDERING = "ordering"
THRESHOLD = "threshold"
DEGENERATE = "degenerate"
REJECTION_REASONS = (TOO_FEW_PEAKS, ORDERING, THRESHOLD, DEGENERATE)


class Stamp(NamedTuple):
    tick: int
    degenerate: bool = False


def awakening_time(series, anchor_start: int, peak: int, search_lo: int) -> Stamp:
    """Tick in ``[search_lo, peak)`` farthest from the chord anchor_start -> peak.

    Ties go to the latest tick. A window of fewer than two ticks is flagged
    degenerate and yields ``peak - 1``.
    """
    s = as_series(series)
    if not anchor_start < peak:
        raise InvalidValue("anchor_start must precede the peak")
    if search_lo >= peak - 1:
        return Stamp(peak - 1, True)
    return Stamp(kernels.chord_argmax(s.values, anchor_start, peak, search_lo, peak - 1, True))


def falling_asleep_time(series, peak: int, anchor_end: int, search_hi: int) -> Stamp:
    """Tick in ``(peak, search_hi]`` farthest from the chord peak -> anchor_end.

    Ties go to the earliest tick; windows of fewer than two ticks yield
    ``peak + 1`` flagged degenerate.
    """
    s = as_series(series)
    if not peak < anchor_end:
        raise InvalidValue("peak must precede anchor_end")
    if search_hi <= peak + 1:
        return Stamp(peak + 1, True)
    return Stamp(kernels.chord_argmax(s.values, anchor_end, peak, peak + 1, search_hi, False))


def beauty_coefficient(series, window_start: int, window_end: int, line_end: int) -> float:
    s = as_series(series)
    if window_end <= window_start:
        raise InvalidValue("beauty window must have positive width")
    if line_end < window_end:
        raise InvalidValue("chord must end at or after the window")
    return kernels.beauty_sum(s.values, window_start, window_end, line_end) / (window_end - window_start)


@dataclass(frozen=True)
class Detection:
    """Outcome of :func:`identify_two_beauties` for one meme."""

    meme_id: str
    profile: Optional[TwoBeautyProfile] = None
    reason: Optional[str] = None
    stamps: tuple = ()

    @property
    def accepted(self) -> bool:
        return self.profile is not None


def identify_two_beauties(series, params: PeakParams = PeakParams(),
                          alpha: float = ALPHA) -> Detection:
    s = as_series(series)
    v = s.values
    T = s.T
    t0 = 0

    def reject(reason, stamps=()):
        return Detection(s.meme_id, None, reason, tuple(stamps))

    peaks = detect_peaks(s, params)
    top = v.max()
    at_top = [p.index for p in peaks if v[p.index] == top]
    if not at_top:
        return reject(TOO_FEW_PEAKS)
    t2 = at_top[-1]
    before = [p.index for p in peaks if p.index < t2]
    if not before:
        return reject(TOO_FEW_PEAKS)
    # highest earlier peak, later tick on ties
    t1 = max(before, key=lambda t: (v[t], t))
    if t1 == t0 or t2 == T:
        return reject(DEGENERATE)

    ta2, d1 = awakening_time(s, t0, t2, t1 + 1)
    tf2, d2 = falling_asleep_time(s, t2, T, T)
    ta1, d3 = awakening_time(s, t0, t1, t0)
    if ta2 <= t1 + 1:
        return reject(ORDERING, (t0, ta1, t1, None, ta2, t2, tf2, T))
    tf1, d4 = falling_asleep_time(s, t1, T, ta2)
    stamps = (t0, ta1, t1, tf1, ta2, t2, tf2, T)
    if d1 or d2 or d3 or d4:
        return reject(DEGENERATE, stamps)
    if not (all(a < b for a, b in zip(stamps[:6], stamps[1:7])) and tf2 <= T):
        return reject(ORDERING, stamps)

    if log.isEnabledFor(logging.DEBUG):
        free = kernels.chord_argmax(v, t0, t2, t0, t2 - 1, True)
        if free != ta2:
            log.debug("%s: restricted awakening search moved ta2 from %d to %d",
                      s.meme_id, free, ta2)

    B1 = beauty_coefficient(s, t0, ta1, t1)
    B2 = beauty_coefficient(s, tf1, ta2, t2)
    if not (B1 > alpha * v[t1] and B2 > alpha * v[t2]):
        return reject(THRESHOLD, stamps)

    v1 = (v[t1] - v[ta1]) / (t1 - ta1)
    v2 = (v[t2] - v[ta2]) / (t2 - ta2)
    if not (v1 > 0 and v2 > 0):
        return reject(DEGENERATE, stamps)

    profile = TwoBeautyProfile(
        meme_id=s.meme_id,
        t0=t0, ta1=ta1, t1=t1, tf1=tf1, ta2=ta2, t2=t2, tf2=tf2, T=T,
        B1=float(B1), B2=float(B2),
        m1=float(np.sum(v[ta1:tf1 + 1])), m2=float(np.sum(v[ta2:tf2 + 1])),
        v1=float(v1), v2=float(v2),
        gap=ta2 - tf1,
        s1=float(v[t1]), s2=float(v[t2]),
        alpha=float(alpha),
    )
    return Detection(s.meme_id, profile, None, stamps)
