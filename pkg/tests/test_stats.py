import dataclasses
from types import SimpleNamespace

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sbmeme.beauty import identify_two_beauties
from sbmeme.core import TimeSeries
from sbmeme.errors import InsufficientSample, InvalidValue, ZeroVariance
from sbmeme.stats import (CorpusReport, GaussFit, build_report, fit_exponential, fit_gaussian,
                          fit_power_law, imitation_pressure, rising_velocity, wake_gap)
from sbmeme.synth import make_meme


def pulse(g1=(0.02, 0.2, 200.0), g2=(0.02, 0.3, 400.0), quiet=40):
    v, _ = make_meme("pulse", g1, g2, quiet)
    s = TimeSeries("pulse", v)
    return s, identify_two_beauties(s).profile


class TestWakeGap:
    def test_difference(self):
        assert wake_gap(SimpleNamespace(tf1=10, ta2=25)) == 15

    def test_minimal_profile(self):
        _, pr = pulse()
        assert wake_gap(dataclasses.replace(pr, ta2=pr.tf1 + 1, gap=1)) == 1

    @pytest.mark.parametrize("g1,g2", [((0.02, 0.2, 200.0), (0.02, 0.3, 400.0)),
                                       ((0.02, 0.3, 300.0), (0.02, 0.3, 300 ** 1.15)),
                                       ((0.01, 0.3, 500.0), (0.01, 0.3, 1200.0))])
    def test_forty_tick_quiet_span(self, g1, g2):
        # band frozen from the noiseless generator runs (31, 34, 36): the
        # elbow of the first decay comes a few ticks before the pulse ends
        assert 28 <= wake_gap(pulse(g1, g2, 40)[1]) <= 42


class TestExponential:
    def test_recovers_rate(self):
        g = np.random.default_rng(7).exponential(1 / 0.05, 10_000)
        lam, R = fit_exponential(g)
        assert 0.0475 <= lam <= 0.0525
        assert lam == pytest.approx(1 / g.mean())

    def test_constant_gaps(self):
        lam, R = fit_exponential([8] * 12)
        assert lam == pytest.approx(1 / 8)
        assert np.isnan(R)

    def test_too_few(self):
        with pytest.raises(InsufficientSample):
            fit_exponential([3] * 9)

    def test_non_positive(self):
        with pytest.raises(InvalidValue):
            fit_exponential([0] + [3] * 10)

    @settings(max_examples=100, deadline=None)
    @given(st.lists(st.integers(1, 200), min_size=10, max_size=60), st.integers(2, 9))
    def test_scale_equivariant(self, gaps, c):
        lam, _ = fit_exponential(gaps)
        lam_c, _ = fit_exponential([c * g for g in gaps])
        assert lam_c == pytest.approx(lam / c, rel=1e-12)


class TestPowerLaw:
    def test_exact(self):
        m1 = np.geomspace(10, 5000, 20)
        alpha, R = fit_power_law(m1, m1 ** 1.1)
        assert alpha == pytest.approx(1.1, abs=1e-12)
        assert R == pytest.approx(1.0, abs=1e-12)

    def test_linear(self):
        m1 = np.geomspace(10, 5000, 20)
        assert fit_power_law(m1, 3.5 * m1)[0] == pytest.approx(1.0, abs=1e-12)

    def test_skips_zero_mass(self, caplog):
        m1 = list(np.geomspace(10, 5000, 12)) + [0.0]
        m2 = [x ** 1.2 for x in m1[:-1]] + [5.0]
        assert fit_power_law(m1, m2)[0] == pytest.approx(1.2)
        assert "non-positive" in caplog.text

    def test_too_few(self):
        with pytest.raises(InsufficientSample):
            fit_power_law([1, 2, 3], [1, 2, 3])

    def test_zero_variance(self):
        with pytest.raises(ZeroVariance):
            fit_power_law([5.0] * 12, np.arange(1, 13.0))

    @settings(max_examples=60, deadline=None)
    @given(st.lists(st.tuples(st.floats(1, 1e4), st.floats(1, 1e4)), min_size=10, max_size=30),
           st.randoms(use_true_random=False))
    def test_order_free(self, pairs, rnd):
        a, b = zip(*pairs)
        if np.ptp(np.log(a)) < 1e-6:
            return
        shuffled = list(pairs)
        rnd.shuffle(shuffled)
        c, d = zip(*shuffled)
        assert fit_power_law(c, d)[0] == pytest.approx(fit_power_law(a, b)[0], rel=1e-9, abs=1e-12)


class TestGaussian:
    def test_recovers_normal(self):
        x = np.random.default_rng(11).normal(0.05, 0.01, 10_000)
        a, mu, sigma, R2 = fit_gaussian(x)
        assert 0.049 <= mu <= 0.051
        assert 0.009 <= sigma <= 0.011
        assert R2 > 0.95

    def test_two_point_symmetry(self):
        mu, d = 0.3, 0.05
        _, mu_hat, _, _ = fit_gaussian([mu - d, mu + d] * 20)
        assert mu_hat == pytest.approx(mu, abs=1e-9)

    def test_too_few(self):
        with pytest.raises(InsufficientSample):
            fit_gaussian(np.arange(29.0))

    def test_constant(self):
        with pytest.raises(ZeroVariance):
            fit_gaussian([1.0] * 40)

    def test_flat_histogram_uses_moments(self):
        x = np.array([0.005, 0.01, 0.02] * 20)
        _, mu, sigma, _ = fit_gaussian(x)
        assert mu == pytest.approx(x.mean()) and sigma == pytest.approx(x.std())

    def test_width_must_be_positive(self):
        with pytest.raises(InvalidValue):
            GaussFit(1.0, 0.0, 0.0, 1.0)


class TestVelocity:
    def test_direct(self):
        _, pr = pulse()
        v = np.zeros(pr.T + 1)
        v[pr.t1] = 30.0
        pr3 = dataclasses.replace(pr, ta1=pr.t1 - 3)
        assert rising_velocity(v, pr3, 1) == pytest.approx(10.0)

    def test_linear_rise(self):
        _, pr = pulse()
        v = np.zeros(pr.T + 1)
        v[pr.ta2:pr.t2 + 1] = 2.5 * np.arange(pr.t2 - pr.ta2 + 1)
        assert rising_velocity(v, pr, 2) == pytest.approx(2.5)

    def test_positive_on_accepted(self):
        s, pr = pulse()
        assert rising_velocity(s, pr, 1) > 0 and rising_velocity(s, pr, 2) > 0

    def test_bad_generation(self):
        s, pr = pulse()
        with pytest.raises(ValueError):
            rising_velocity(s, pr, 3)


class TestImitationPressure:
    def test_start_of_window(self):
        s, pr = pulse()
        assert s.values[pr.ta1] == 0
        assert imitation_pressure(s, pr, 0.2, pr.m1, pr.ta1) == 0.0

    def test_end_of_window_is_q(self):
        s, pr = pulse()
        assert imitation_pressure(s, pr, 0.3, pr.m2, pr.tf2, generation=2) == pytest.approx(0.3)

    def test_mid_window_direct_sum(self):
        s, pr = pulse()
        t_n = (pr.ta1 + pr.tf1) // 2
        expected = 0.2 / pr.m1 * sum(float(x) for x in s.values[pr.ta1:t_n + 1])
        assert imitation_pressure(s, pr, 0.2, pr.m1, t_n) == pytest.approx(expected, rel=1e-12)

    def test_non_decreasing(self):
        s, pr = pulse()
        vals = [imitation_pressure(s, pr, 0.2, pr.m1, t) for t in range(pr.ta1, pr.tf1 + 1)]
        assert all(b >= a for a, b in zip(vals, vals[1:]))

    def test_outside_window(self):
        s, pr = pulse()
        with pytest.raises(InvalidValue):
            imitation_pressure(s, pr, 0.2, pr.m1, pr.tf1 + 1)


class TestReport:
    def profiles(self):
        out = []
        for i, quiet in enumerate([20, 25, 30, 35, 40, 45, 50, 55, 60, 65, 70]):
            m1 = 150.0 + 40 * i
            v, _ = make_meme(f"m{i:02d}", (0.02, 0.3, m1), (0.02, 0.3, m1 ** 1.15), quiet)
            d = identify_two_beauties(TimeSeries(f"m{i:02d}", v))
            assert d.accepted, d.reason
            out.append(d.profile)
        return out

    def test_order_free_and_round_trip(self):
        prs = self.profiles()
        rep = build_report(prs, q_values=([0.2, 0.4], [0.1, 0.2]))
        assert build_report(prs[::-1], q_values=([0.4, 0.2], [0.2, 0.1])) == rep
        assert CorpusReport.from_dict(rep.to_dict()) == rep
        assert rep.n_profiles == 11
        assert rep.alpha_m == pytest.approx(1.15, abs=0.05)
        assert rep.q_mean == (pytest.approx(0.3), pytest.approx(0.15))
        assert rep.p_gauss == (None, None)

    def test_needs_ten_profiles(self):
        with pytest.raises(InsufficientSample):
            build_report(self.profiles()[:9])
