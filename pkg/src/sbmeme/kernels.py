"""Backend selection for the hot loops.

The compiled extension is used when importable. Setting ``SB_MEME_PURE=1``
forces the NumPy fallback.
"""
import os

import numpy as np

from . import _pykernels

BACKEND = "python"
_impl = _pykernels

if os.environ.get("SB_MEME_PURE", "") not in ("1", "true", "yes"):
    try:
        from . import _ckernels as _impl  # noqa: F811
        BACKEND = "cython"
    except ImportError:  # extension not built
        _impl = _pykernels


def _contig(values):
    return np.ascontiguousarray(values, dtype=np.float64)


def spike_scores(values, k):
    return _impl.spike_scores(_contig(values), int(k))


def chord_argmax(values, x0, x1, lo, hi, latest):
    """Tick in ``[lo, hi]`` farthest from the line through ticks ``x0`` and ``x1``."""
    return int(_impl.chord_argmax(_contig(values), int(x0), int(x1), int(lo), int(hi), bool(latest)))


def beauty_sum(values, ws, we, le):
    return float(_impl.beauty_sum(_contig(values), int(ws), int(we), int(le)))
