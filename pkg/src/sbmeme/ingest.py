"""Corpus loading and stable report serialisation.

Input corpora are either CSV with header ``meme_id,t,value`` or JSON arrays of
``{"meme_id": ..., "values": [...]}``. Reports are written with sorted keys
and floats rounded to 6 significant digits so repeated runs are byte-identical.
"""
from __future__ import annotations

import csv
import dataclasses
import io
import json
import logging
import math
from collections import defaultdict
from pathlib import Path
from typing import Iterable

import numpy as np

from .core import Corpus, Granularity, TimeSeries, TwoBeautyProfile
from .errors import CorpusFormatError, InvalidValue

log = logging.getLogger(__name__)

MIN_TICKS = 12
CORPUS_HEADER = ("meme_id", "t", "value")


def _parse_number(text, line, what):
    try:
        x = float(text)
    except (TypeError, ValueError):
        raise CorpusFormatError(f"line {line}: cannot parse {what} {text!r}") from None
    if not math.isfinite(x):
        raise CorpusFormatError(f"line {line}: {what} must be finite")
    return x


def _read_csv(text: str) -> dict:
    rows = csv.reader(io.StringIO(text, newline=""))
    header = next(rows, None)
    if header is None:
        return {}
    if tuple(h.strip() for h in header) != CORPUS_HEADER:
        raise CorpusFormatError(f"line 1: expected header {','.join(CORPUS_HEADER)}, got {header}")
    points: dict = defaultdict(dict)
    for lineno, row in enumerate(rows, start=2):
        if not row or all(not c.strip() for c in row):
            continue
        if len(row) != 3:
            raise CorpusFormatError(f"line {lineno}: expected 3 fields, got {len(row)}")
        meme_id = row[0].strip()
        if not meme_id:
            raise CorpusFormatError(f"line {lineno}: empty meme_id")
        t = _parse_number(row[1], lineno, "tick")
        if t != int(t) or t < 0:
            raise CorpusFormatError(f"line {lineno}: tick must be a non-negative integer, got {row[1]!r}")
        value = _parse_number(row[2], lineno, "value")
        if value < 0:
            raise CorpusFormatError(f"line {lineno}: negative value {value} for {meme_id!r}")
        t = int(t)
        if t in points[meme_id]:
            raise CorpusFormatError(f"line {lineno}: duplicate tick {t} for {meme_id!r}")
        points[meme_id][t] = value
    out = {}
    for meme_id, by_tick in points.items():
        start = min(by_tick)
        values = np.zeros(max(by_tick) - start + 1)
        for t, x in by_tick.items():
            values[t - start] = x
        out[meme_id] = values
    return out


def _read_json(text: str) -> dict:
    try:
        records = json.loads(text)
    except json.JSONDecodeError as exc:
        raise CorpusFormatError(f"line {exc.lineno}: invalid JSON ({exc.msg})") from None
    if isinstance(records, dict) and "series" in records:
        records = records["series"]
    if not isinstance(records, list):
        raise CorpusFormatError("JSON corpus must be an array of {meme_id, values} records")
    out = {}
    for i, rec in enumerate(records):
        try:
            meme_id = str(rec["meme_id"])
            values = np.asarray(rec["values"], dtype=float)
        except (KeyError, TypeError, ValueError):
            raise CorpusFormatError(f"record {i}: expected {{meme_id, values}}") from None
        if values.ndim != 1 or not np.all(np.isfinite(values)):
            raise CorpusFormatError(f"record {i}: values must be a flat list of finite numbers")
        if np.any(values < 0):
            raise CorpusFormatError(f"record {i}: negative value for {meme_id!r}")
        if meme_id in out:
            raise CorpusFormatError(f"record {i}: duplicate meme_id {meme_id!r}")
        out[meme_id] = values
    return out


def load_corpus(path, granularity: Granularity | str = Granularity.day,
                source_label: str | None = None) -> Corpus:
    path = Path(path)
    text = path.read_text(encoding="utf-8")
    stripped = text.lstrip()
    if not stripped:
        log.warning("%s is empty; returning an empty corpus", path)
        return Corpus((), source_label or path.stem)
    raw = _read_json(text) if stripped[0] in "[{" else _read_csv(text)
    if not raw:
        log.warning("%s contains no series", path)
    series = []
    for meme_id in sorted(raw):
        values = raw[meme_id]
        if values.size < MIN_TICKS:
            log.warning("skipping %r: %d ticks is fewer than %d", meme_id, values.size, MIN_TICKS)
            continue
        series.append(TimeSeries(meme_id, values, granularity))
    return Corpus(tuple(series), source_label or path.stem)


def _round6(x: float):
    if x is None or not math.isfinite(x):
        return None
    return float(f"{x:.6g}")


def normalize(obj):
    """Convert report objects to JSON-ready data with 6-significant-digit floats."""
    if hasattr(obj, "to_dict"):
        return normalize(obj.to_dict())
    if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        return normalize(dataclasses.asdict(obj))
    if isinstance(obj, dict):
        return {str(k): normalize(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [normalize(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [normalize(v) for v in obj.tolist()]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        return _round6(float(obj))
    if isinstance(obj, Granularity):
        return obj.value
    return obj


def dumps_json(obj) -> str:
    return json.dumps(normalize(obj), sort_keys=True, indent=2) + "\n"


def _corpus_rows(corpus: Corpus):
    for s in sorted(corpus, key=lambda s: s.meme_id):
        for t, x in enumerate(s.values):
            yield [s.meme_id, t, _round6(float(x))]


def _csv_text(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow(["" if c is None else c for c in row])
    return buf.getvalue()


def _records_csv(records: list) -> str:
    records = [normalize(r) for r in records]
    keys = sorted({k for r in records for k in r})
    return _csv_text(keys, ([r.get(k) for k in keys] for r in records))


def write_report(report, path, format: str = "json") -> None:
    """Write a corpus, a profile collection or any report mapping.

    CSV output is supported for corpora, record lists and flat mappings.
    """
    path = Path(path)
    if format == "json":
        if isinstance(report, Corpus):
            text = dumps_json([{"meme_id": s.meme_id, "values": s.values}
                               for s in sorted(report, key=lambda s: s.meme_id)])
        else:
            text = dumps_json(report)
    elif format == "csv":
        if isinstance(report, Corpus):
            text = _csv_text(CORPUS_HEADER, _corpus_rows(report))
        elif isinstance(report, (list, tuple)):
            text = _records_csv(list(report))
        else:
            flat = normalize(report)
            text = _csv_text(("key", "value"),
                             ([k, json.dumps(flat[k], sort_keys=True) if isinstance(flat[k], (list, dict))
                               else flat[k]] for k in sorted(flat)))
    else:
        raise ValueError(f"unknown report format {format!r}")
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        raise OSError(f"cannot write report to {path}: {exc.strerror or exc}") from exc


def write_table(path, header: Iterable[str], rows: Iterable) -> None:
    """Write a plot-data CSV with rounded floats."""
    def cell(c):
        if isinstance(c, (float, np.floating)):
            return _round6(float(c))
        return c
    write_report_text(path, _csv_text(tuple(header), ([cell(c) for c in row] for row in rows)))


def write_report_text(path, text: str) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)


def load_report(path) -> dict:
    path = Path(path)
    try:
        return json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise CorpusFormatError(f"{path}: invalid JSON at line {exc.lineno}") from None


def load_profiles(path) -> list[TwoBeautyProfile]:
    """Profiles from a JSON report (``{"profiles": [...]}``) or a profile CSV."""
    path = Path(path)
    if path.suffix == ".csv":
        with open(path, encoding="utf-8", newline="") as fh:
            records = list(csv.DictReader(fh))
        for r in records:
            for k, v in r.items():
                if k != "meme_id":
                    r[k] = float(v)
    else:
        data = load_report(path)
        if not isinstance(data, dict) or "profiles" not in data:
            raise CorpusFormatError(f"{path}: missing field 'profiles'")
        records = data["profiles"]
    try:
        return [TwoBeautyProfile.from_dict(r) for r in records]
    except InvalidValue as exc:
        raise CorpusFormatError(f"{path}: {exc}") from None
