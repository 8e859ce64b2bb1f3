"""Shared data model: popularity series, peaks, two-beauty profiles, Bass parameters.

All objects are immutable after construction. Constructors validate their
invariants and raise :class:`~sbmeme.errors.InvalidValue` on violation.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field, fields
from typing import Iterator, Optional, Sequence

import numpy as np

from .errors import InvalidValue

ALPHA = 1.0 / 3.0


class Granularity(str, enum.Enum):
    day = "day"
    week = "week"
    month = "month"
    year = "year"


@dataclass(frozen=True, eq=False)
class TimeSeries:
    """Popularity of one meme at integer age ticks ``0..T``.

    The granularity tag is metadata only; every computation works on ticks.
    """

    meme_id: str
    values: np.ndarray
    granularity: Granularity = Granularity.day

    def __post_init__(self):
        arr = np.array(self.values, dtype=float)
        if arr.ndim != 1:
            raise InvalidValue(f"{self.meme_id}: values must be one-dimensional")
        if arr.size < 2:
            raise InvalidValue(f"{self.meme_id}: a series needs at least 2 ticks")
        if not np.all(np.isfinite(arr)):
            raise InvalidValue(f"{self.meme_id}: values must be finite")
        if np.any(arr < 0):
            raise InvalidValue(f"{self.meme_id}: values must be non-negative")
        arr.setflags(write=False)
        object.__setattr__(self, "values", arr)
        object.__setattr__(self, "granularity", Granularity(self.granularity))

    @property
    def T(self) -> int:
        return self.values.size - 1

    def __len__(self) -> int:
        return self.values.size

    def __getitem__(self, t):
        return self.values[t]

    def __eq__(self, other):
        if not isinstance(other, TimeSeries):
            return NotImplemented
        return (
            self.meme_id == other.meme_id
            and self.granularity == other.granularity
            and np.array_equal(self.values, other.values)
        )

    def __hash__(self):
        return hash((self.meme_id, self.granularity, self.values.tobytes()))

    def scaled(self, c: float) -> "TimeSeries":
        return TimeSeries(self.meme_id, self.values * c, self.granularity)


@dataclass(frozen=True)
class Peak:
    index: int
    value: float
    spike_score: float


@dataclass(frozen=True)
class PeakSet:
    """Meaningful peaks of one series, sorted by tick."""

    peaks: tuple = ()

    def __post_init__(self):
        ticks = [p.index for p in self.peaks]
        if ticks != sorted(ticks) or len(set(ticks)) != len(ticks):
            raise InvalidValue("peaks must be sorted by tick without duplicates")

    def __iter__(self) -> Iterator[Peak]:
        return iter(self.peaks)

    def __len__(self) -> int:
        return len(self.peaks)

    @property
    def ticks(self) -> list[int]:
        return [p.index for p in self.peaks]

    def __contains__(self, tick) -> bool:
        return any(p.index == tick for p in self.peaks)


STAMP_NAMES = ("t0", "ta1", "t1", "tf1", "ta2", "t2", "tf2", "T")


@dataclass(frozen=True)
class TwoBeautyProfile:
    """Timestamps and measurements of a meme with two sleeping beauties.

    ``s1`` and ``s2`` are the peak popularities S(t1) and S(t2); they are kept
    so the beauty thresholds can be re-checked without the series.
    """

    meme_id: str
    t0: int
    ta1: int
    t1: int
    tf1: int
    ta2: int
    t2: int
    tf2: int
    T: int
    B1: float
    B2: float
    m1: float
    m2: float
    v1: float
    v2: float
    gap: int
    s1: float
    s2: float
    alpha: float = ALPHA

    def __post_init__(self):
        stamps = self.stamps()
        if not all(a < b for a, b in zip(stamps[:6], stamps[1:7])) or not stamps[6] <= stamps[7]:
            raise InvalidValue(
                f"{self.meme_id}: timestamps must satisfy "
                f"t0 < ta1 < t1 < tf1 < ta2 < t2 < tf2 <= T, got {stamps}"
            )
        if self.t0 < 0:
            raise InvalidValue(f"{self.meme_id}: t0 must be non-negative")
        if not self.B1 > self.alpha * self.s1:
            raise InvalidValue(f"{self.meme_id}: B1={self.B1} does not exceed alpha*S(t1)")
        if not self.B2 > self.alpha * self.s2:
            raise InvalidValue(f"{self.meme_id}: B2={self.B2} does not exceed alpha*S(t2)")
        if self.gap != self.ta2 - self.tf1:
            raise InvalidValue(f"{self.meme_id}: gap must equal ta2 - tf1")
        for name in ("m1", "m2", "v1", "v2", "s1", "s2"):
            if not getattr(self, name) >= 0:
                raise InvalidValue(f"{self.meme_id}: {name} must be non-negative")

    def stamps(self) -> tuple:
        return tuple(getattr(self, name) for name in STAMP_NAMES)

    def to_dict(self) -> dict:
        return {f.name: getattr(self, f.name) for f in fields(self)}

    @classmethod
    def from_dict(cls, d: dict) -> "TwoBeautyProfile":
        kwargs = {}
        for f in fields(cls):
            if f.name not in d:
                if f.name == "alpha":
                    continue
                raise InvalidValue(f"profile record is missing field {f.name!r}")
            kwargs[f.name] = d[f.name]
        for name in STAMP_NAMES + ("gap",):
            kwargs[name] = int(kwargs[name])
        return cls(**kwargs)


@dataclass(frozen=True)
class BassGeneration:
    """One Bass diffusion generation; ``onset`` is measured from the first awakening."""

    p: float
    q: float
    m: float
    onset: int = 0

    def __post_init__(self):
        for name in ("p", "q", "m"):
            v = getattr(self, name)
            if not (math.isfinite(v) and v > 0):
                raise InvalidValue(f"Bass parameter {name} must be positive, got {v}")
        if self.onset < 0:
            raise InvalidValue("generation onset must be non-negative")

    @property
    def peak_delay(self) -> float:
        """Time from onset to the peak adoption rate; positive only when q > p."""
        return math.log(self.q / self.p) / (self.p + self.q)

    @property
    def peak_rate(self) -> float:
        return self.m * (self.p + self.q) ** 2 / (4.0 * self.q)


@dataclass(frozen=True)
class TwoStageBassModel:
    g1: BassGeneration
    g2: BassGeneration
    horizon: int

    def __post_init__(self):
        if self.g1.onset != 0:
            raise InvalidValue("first generation must start at tick 0")
        if self.g2.onset <= 0:
            raise InvalidValue("second generation onset must be positive")
        if self.horizon < 1:
            raise InvalidValue("horizon must be at least one tick")

    def to_dict(self) -> dict:
        return {
            "p1": self.g1.p, "q1": self.g1.q, "m1": self.g1.m,
            "p2": self.g2.p, "q2": self.g2.q, "m2": self.g2.m,
            "onset": self.g2.onset, "horizon": self.horizon,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "TwoStageBassModel":
        try:
            return cls(
                BassGeneration(d["p1"], d["q1"], d["m1"], 0),
                BassGeneration(d["p2"], d["q2"], d["m2"], int(d["onset"])),
                int(d["horizon"]),
            )
        except KeyError as exc:
            raise InvalidValue(f"model record is missing field {exc.args[0]!r}") from None


def as_series(values: Sequence[float] | np.ndarray, meme_id: str = "series",
              granularity: Granularity = Granularity.day) -> TimeSeries:
    """Wrap a plain sequence; accepts an existing TimeSeries unchanged."""
    if isinstance(values, TimeSeries):
        return values
    return TimeSeries(meme_id, np.asarray(values, dtype=float), granularity)


@dataclass(frozen=True)
class Corpus:
    """A collection of series with unique meme ids."""

    series: tuple = ()
    source_label: str = ""
    _index: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        index = {}
        for s in self.series:
            if s.meme_id in index:
                raise InvalidValue(f"duplicate meme_id {s.meme_id!r} in corpus")
            index[s.meme_id] = s
        object.__setattr__(self, "series", tuple(self.series))
        object.__setattr__(self, "_index", index)

    def __len__(self) -> int:
        return len(self.series)

    def __iter__(self) -> Iterator[TimeSeries]:
        return iter(self.series)

    def __getitem__(self, meme_id: str) -> TimeSeries:
        return self._index[meme_id]

    def get(self, meme_id: str) -> Optional[TimeSeries]:
        return self._index.get(meme_id)

    def ids(self) -> list[str]:
        return [s.meme_id for s in self.series]
