"""Synthetic two-generation Bass memes with known ground truth.

A generated series is a run of zeros (the first sleep) followed by the
simulated popularity of a two-generation model. The awake window of a
generation runs from its onset until its rate falls back to the onset level,
``2 * peak_delay`` ticks later by symmetry of the Bass density. The second
generation starts ``quiet`` ticks after the first window closes.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .bass import simulate
from .core import BassGeneration, Corpus, Granularity, TimeSeries, TwoStageBassModel

GRID_P = (0.005, 0.01, 0.02)
GRID_Q = (0.1, 0.2, 0.3)
GRID_GAP = (20, 40, 60)


@dataclass(frozen=True)
class SynthMeme:
    """Ground truth for one generated meme; ticks are in series coordinates."""

    meme_id: str
    p1: float
    q1: float
    m1: float
    p2: float
    q2: float
    m2: float
    onset1: int
    end1: int
    onset2: int
    end2: int
    t1: int
    t2: int
    T: int
    quiet: int

    @property
    def model(self) -> TwoStageBassModel:
        return TwoStageBassModel(
            BassGeneration(self.p1, self.q1, self.m1, 0),
            BassGeneration(self.p2, self.q2, self.m2, self.onset2 - self.onset1),
            self.T - self.onset1,
        )

    def to_dict(self) -> dict:
        return {f: getattr(self, f) for f in self.__dataclass_fields__}


def _awake_length(p, q):
    return int(math.ceil(2.0 * math.log(q / p) / (p + q)))


def make_meme(meme_id: str, g1: tuple, g2: tuple, quiet: int,
              lead: int | None = None, tail: int | None = None) -> tuple:
    """Build one noiseless series from ``(p, q, m)`` triples.

    Returns ``(values, truth)``.
    """
    p1, q1, m1 = g1
    p2, q2, m2 = g2
    w1 = _awake_length(p1, q1)
    w2 = _awake_length(p2, q2)
    if lead is None:
        # a sleep long enough for the first beauty coefficient to clear S(t1)/3
        lead = int(math.ceil(1.5 * w1)) + 5
    if tail is None:
        tail = max(10, w2 // 2)
    onset1 = lead
    end1 = onset1 + w1
    onset2 = end1 + quiet + 1
    end2 = onset2 + w2
    T = end2 + tail
    model = TwoStageBassModel(
        BassGeneration(p1, q1, m1, 0),
        BassGeneration(p2, q2, m2, onset2 - onset1),
        T - onset1,
    )
    values = np.zeros(T + 1)
    values[onset1:] = simulate(model).values
    t1 = onset1 + int(np.argmax(values[onset1:end1 + 1]))
    t2 = onset2 + int(np.argmax(values[onset2:end2 + 1]))
    truth = SynthMeme(meme_id, p1, q1, m1, p2, q2, m2, onset1, end1, onset2, end2,
                      t1, t2, T, quiet)
    return values, truth


@dataclass
class SynthConfig:
    p_grid: tuple = GRID_P
    q_grid: tuple = GRID_Q
    gap_grid: tuple = GRID_GAP
    per_cell: int = 4
    m1_range: tuple = (100.0, 1000.0)
    # second-wave potential grows as m1 ** exponent
    exponent_range: tuple = (1.093, 1.22)
    noise: str = "none"
    seed: int = 0
    granularity: Granularity = Granularity.week


def generate(config: SynthConfig = SynthConfig()) -> tuple:
    """Generate a corpus over the parameter grid; returns ``(corpus, truths)``."""
    rng = np.random.default_rng(config.seed)
    series, truths = [], []
    cells = itertools.product(config.p_grid, config.q_grid, config.gap_grid)
    n = 0
    for p, q, gap in cells:
        for _ in range(config.per_cell):
            m1 = float(rng.uniform(*config.m1_range))
            m2 = float(m1 ** rng.uniform(*config.exponent_range))
            meme_id = f"synth-{n:04d}"
            values, truth = make_meme(meme_id, (p, q, m1), (p, q, m2), gap)
            if config.noise == "poisson":
                values = rng.poisson(values).astype(float)
            elif config.noise != "none":
                raise ValueError(f"unknown noise model {config.noise!r}")
            series.append(TimeSeries(meme_id, values, config.granularity))
            truths.append(truth)
            n += 1
    return Corpus(tuple(series), source_label=f"synthetic-seed{config.seed}"), truths
