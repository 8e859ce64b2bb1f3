import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from sbmeme.bass import fit
from sbmeme.beauty import identify_two_beauties
from sbmeme.core import TimeSeries
from sbmeme.errors import DegenerateSeries, InvalidValue
from sbmeme.evaluate import (FitReport, averaged_curve, evaluate_meme, pearson, precision_at_k,
                             summarize)
from sbmeme.synth import make_meme

finite = st.floats(-1e3, 1e3, allow_nan=False)


class TestPearson:
    def test_identity(self):
        a = np.array([1.0, 3.0, 2.0, 7.0])
        assert pearson(a, a) == pytest.approx(1.0)
        assert pearson(a, -a) == pytest.approx(-1.0)

    def test_hand_vectors(self):
        a, b = [1.0, 2.0, 4.0, 7.0, 3.0], [2.0, 1.0, 5.0, 9.0, 2.0]
        assert pearson(a, b) == pytest.approx(oracles.pearson(a, b), rel=1e-12)

    def test_constant(self):
        with pytest.raises(DegenerateSeries):
            pearson([1, 1, 1], [1, 2, 3])

    def test_length_mismatch(self):
        with pytest.raises(InvalidValue):
            pearson([1, 2, 3], [1, 2])

    @settings(max_examples=200, deadline=None)
    @given(st.lists(st.tuples(finite, finite), min_size=3, max_size=30),
           st.floats(0.1, 100), st.floats(-100, 100))
    def test_affine_invariant(self, pairs, scale, shift):
        a, b = (np.array(x) for x in zip(*pairs))
        if np.ptp(a) < 1e-3 or np.ptp(b) < 1e-3:
            return
        assert pearson(scale * a + shift, b) == pytest.approx(pearson(a, b), abs=1e-9)


def reports(errors):
    return [FitReport(f"m{i}", 0.9, e) for i, e in enumerate(errors)]


class TestPrecision:
    def test_all_exact(self):
        assert precision_at_k(reports([0, 0, 0]), 0) == (3, 1.0)

    def test_counts(self):
        assert precision_at_k(reports([0, 1, 2, 5]), 1) == (2, 0.5)

    def test_empty(self):
        with pytest.raises(InvalidValue):
            precision_at_k([], 1)

    @given(st.lists(st.integers(0, 50), min_size=1, max_size=40))
    def test_monotone_and_complete(self, errors):
        rs = reports(errors)
        fracs = [precision_at_k(rs, k)[1] for k in range(52)]
        assert all(b >= a for a, b in zip(fracs, fracs[1:]))
        assert fracs[50] == 1.0

    def test_noiseless_synthetic_p_at_1(self):
        out = []
        for i, (q, quiet) in enumerate([(0.2, 80), (0.3, 40), (0.3, 60), (0.4, 80)]):
            v, _ = make_meme(f"s{i}", (0.02, q, 300.0), (0.02, 0.3, 300 ** 1.15), quiet)
            s = TimeSeries(f"s{i}", v)
            pr = identify_two_beauties(s).profile
            out.append(evaluate_meme(s, pr, fit(s, pr).model))
        assert precision_at_k(out, 1) == (4, 1.0)
        assert all(r.pearson_r > 0.95 for r in out)


class TestAveragedCurve:
    def test_single(self):
        assert np.array_equal(averaged_curve([[1.0, 0.0, 3.0]]), [1.0, 0.0, 3.0])

    def test_zero_excluded(self):
        assert averaged_curve([[4.0], [0.0]])[0] == 4.0

    def test_mean(self):
        assert averaged_curve([[2.0], [4.0], [6.0]])[0] == pytest.approx(4.0)

    def test_ragged(self):
        assert np.allclose(averaged_curve([[2.0, 2.0], [4.0]]), [3.0, 2.0])

    @given(st.lists(st.lists(st.floats(0, 100), min_size=1, max_size=10), min_size=1, max_size=6),
           st.randoms(use_true_random=False))
    def test_permutation(self, curves, rnd):
        other = list(curves)
        rnd.shuffle(other)
        assert np.allclose(averaged_curve(curves), averaged_curve(other))


def test_summary_table():
    rs = [FitReport("b", 0.3, 2), FitReport("a", 0.9, 0), FitReport("c", None, 1)]
    out = summarize(rs)
    assert [r["meme_id"] for r in out["per_meme"]] == ["a", "b", "c"]
    assert out["p_at_k"] == {"0": 1 / 3, "1": 2 / 3, "2": 1.0, "3": 1.0}
    assert out["mean_r"] == pytest.approx(0.6)
    assert out["frac_r_gt_0.4"] == 0.5
    assert out["n"] == 3
