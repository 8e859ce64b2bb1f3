"""Corpus-level stages: detection, fitting and evaluation over a worker pool.

Per-meme work is independent; results are always returned sorted by meme id
so the worker count never changes the output.
"""
from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from functools import partial
from typing import Optional, Sequence

import numpy as np

from .bass import FitResult, PMode, estimate_m, estimate_p, fit
from .beauty import Detection, identify_two_beauties
from .core import ALPHA, Corpus, TwoBeautyProfile
from .errors import UnfittableMeme
from .evaluate import FitReport, evaluate_meme
from .peaks import PeakParams

# below this many items a pool costs more than it saves
MIN_PARALLEL = 64


def worker_count() -> int:
    env = os.environ.get("SB_MEME_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            pass
    return os.cpu_count() or 1


def parallel_map(func, items: Sequence, workers: Optional[int] = None) -> list:
    workers = worker_count() if workers is None else workers
    if workers <= 1 or len(items) < MIN_PARALLEL:
        return [func(x) for x in items]
    chunk = max(1, len(items) // (workers * 4))
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(func, items, chunksize=chunk))


def detect_corpus(corpus: Corpus, params: PeakParams = PeakParams(), alpha: float = ALPHA,
                  workers: Optional[int] = None) -> list[Detection]:
    series = sorted(corpus, key=lambda s: s.meme_id)
    return parallel_map(partial(identify_two_beauties, params=params, alpha=alpha), series, workers)


def observed_p(series, profile: TwoBeautyProfile) -> tuple:
    """Per-generation innovation estimates; raises UnfittableMeme when unavailable."""
    p1 = estimate_p(series, profile.ta1, estimate_m(series, profile.ta1, profile.tf1))
    p2 = estimate_p(series, profile.ta2, estimate_m(series, profile.ta2, profile.tf2))
    return p1, p2


def corpus_mean_p(corpus: Corpus, profiles: Sequence[TwoBeautyProfile]) -> Optional[tuple]:
    """Mean observed p per generation over the memes where it is estimable."""
    p1s, p2s = [], []
    for pr in sorted(profiles, key=lambda pr: pr.meme_id):
        try:
            p1, p2 = observed_p(corpus[pr.meme_id], pr)
        except UnfittableMeme:
            continue
        p1s.append(p1)
        p2s.append(p2)
    if not p1s:
        return None
    return float(np.mean(p1s)), float(np.mean(p2s))


def _fit_one(item, p_mode, corpus_p):
    series, profile = item
    try:
        return fit(series, profile, p_mode, corpus_p)
    except UnfittableMeme as exc:
        return {"meme_id": profile.meme_id, "reason": exc.reason}


def fit_corpus(corpus: Corpus, profiles: Sequence[TwoBeautyProfile],
               p_mode: PMode | str = PMode.corpus_mean, corpus_p: Optional[tuple] = None,
               workers: Optional[int] = None) -> tuple:
    """Fit every profile; returns ``(fits, unfittable, corpus_p)``.

    In corpus_mean mode the mean innovation coefficients are computed first
    unless supplied.
    """
    p_mode = PMode(p_mode)
    profiles = sorted(profiles, key=lambda pr: pr.meme_id)
    if p_mode is PMode.corpus_mean and corpus_p is None:
        corpus_p = corpus_mean_p(corpus, profiles)
        if corpus_p is None:
            return [], [{"meme_id": pr.meme_id, "reason": "no-innovation-signal"} for pr in profiles], None
    items = [(corpus[pr.meme_id], pr) for pr in profiles]
    results = parallel_map(partial(_fit_one, p_mode=p_mode, corpus_p=corpus_p), items, workers)
    fits = [r for r in results if isinstance(r, FitResult)]
    failed = [r for r in results if not isinstance(r, FitResult)]
    return fits, failed, corpus_p


def evaluate_corpus(corpus: Corpus, profiles: Sequence[TwoBeautyProfile],
                    fits: Sequence[FitResult]) -> list[FitReport]:
    by_id = {pr.meme_id: pr for pr in profiles}
    return [evaluate_meme(corpus[f.meme_id], by_id[f.meme_id], f.model)
            for f in sorted(fits, key=lambda f: f.meme_id)]
