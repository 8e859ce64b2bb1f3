"""Independent reference computations used to freeze expected test values.

Written as plain loops (and mpmath for the Bass curves) so they share no code
path with the package.
"""
import math

import mpmath


def spike_score(v, i, k):
    n = len(v)
    left = None
    right = None
    for j in range(1, k + 1):
        if i - j >= 0:
            d = v[i] - v[i - j]
            left = d if left is None else max(left, d)
        if i + j < n:
            d = v[i] - v[i + j]
            right = d if right is None else max(right, d)
    return ((left or 0.0) + (right or 0.0)) / 2.0


def detect_peaks(v, k=5, h=0.5, local_max=False):
    n = len(v)
    if n < 2 * k + 1:
        return []
    scores = [spike_score(v, i, k) for i in range(n)]
    mean = sum(scores) / n
    std = math.sqrt(sum((s - mean) ** 2 for s in scores) / n)
    cand = [i for i in range(n) if scores[i] > 0 and scores[i] - mean > h * std]
    if local_max:
        cand = [i for i in cand
                if (i == 0 or v[i] >= v[i - 1]) and (i == n - 1 or v[i] >= v[i + 1])]
    # visit candidates from the highest value down (earliest first on ties);
    # keep one unless an already kept candidate lies closer than k
    kept = []
    for i in sorted(cand, key=lambda i: (-v[i], i)):
        if not any(abs(i - j) < k for j in kept):
            kept.append(i)
    cand = kept
    return sorted(cand)


def chord_distance(v, x0, x1, t):
    y0, y1 = v[x0], v[x1]
    num = abs((y1 - y0) * (t - x0) + (x1 - x0) * (y0 - v[t]))
    return num / math.hypot(y1 - y0, x1 - x0)


def beauty(v, ws, we, le):
    total = 0.0
    for t in range(ws, we + 1):
        line = (v[le] - v[ws]) / (le - ws) * (t - ws) + v[ws]
        total += (line - v[t]) / max(1.0, v[t])
    return total / (we - ws)


def bass_F(t, p, q):
    if t < 0:
        return mpmath.mpf(0)
    t, p, q = mpmath.mpf(t), mpmath.mpf(p), mpmath.mpf(q)
    e = mpmath.exp(-(p + q) * t)
    return (1 - e) / ((q / p) * e + 1)


def bass_f(t, p, q):
    if t < 0:
        return mpmath.mpf(0)
    # forward difference: F has a kink at the origin
    return mpmath.diff(lambda x: bass_F(x, p, q), t, direction=1)


def q_root_near(p, delay, guess):
    """High-precision root of ln(q/p) - delay*(p+q) near ``guess``."""
    with mpmath.workdps(30):
        p = mpmath.mpf(p)
        return mpmath.findroot(lambda q: mpmath.log(q / p) - delay * (p + q), guess)


def two_stage(t, p1, q1, m1, p2, q2, m2, onset):
    F1 = bass_F(t, p1, q1)
    F2 = bass_F(t - onset, p2, q2)
    S1 = m1 * F1 * (1 - F2)
    S2 = F2 * (m2 + m1 * F1)
    return S1, S2


def q_roots_grid(p, delay, qmax=5.0, n=2_000_000):
    """Sign changes of ln(q/p) - delay*(p+q) on a dense grid above p."""
    roots = []
    step = (qmax - p) / n
    prev_q = p * (1 + 1e-9)
    prev = math.log(prev_q / p) - delay * (p + prev_q)
    for i in range(1, n + 1):
        q = p + i * step
        f = math.log(q / p) - delay * (p + q)
        if (f >= 0) != (prev >= 0):
            roots.append(0.5 * (q + prev_q))
        prev_q, prev = q, f
    return roots


def pearson(a, b):
    n = len(a)
    ma = sum(a) / n
    mb = sum(b) / n
    cov = sum((x - ma) * (y - mb) for x, y in zip(a, b))
    va = sum((x - ma) ** 2 for x in a)
    vb = sum((y - mb) ** 2 for y in b)
    return cov / math.sqrt(va * vb)
