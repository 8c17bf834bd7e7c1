"""Tests for the composed extended distribution."""

import math

import numpy as np
import pytest

from moq import (
    DomainError,
    Exponential,
    ExtendedDistribution,
    LogLogistic,
    SurvivalUnderflow,
    Weibull,
    integrate_semiinfinite,
    validate_params,
)

CASES = [
    ExtendedDistribution(Exponential(1.0), validate_params(1, [1.0])),
    ExtendedDistribution(Exponential(1.0), validate_params(2, [1.5, 0.5])),
    ExtendedDistribution(Weibull(2.0, 2.0), validate_params(2, [1e-6, 0.15])),
    ExtendedDistribution(Weibull(1.0, 0.5), validate_params(3, [2.0, 0.6, 0.7])),
    ExtendedDistribution(LogLogistic(), validate_params(2, [0.5, 1.5])),
    ExtendedDistribution(LogLogistic(2.0, 3.0), validate_params(1, [0.3])),
]


class TestCdf:
    def test_identity_parameters_give_baseline(self):
        ed = ExtendedDistribution(LogLogistic(), validate_params(1, [1.0]))
        x = np.linspace(0.1, 10, 30)
        np.testing.assert_allclose(ed.cdf(x), LogLogistic().cdf(x), rtol=1e-14)

    def test_spec_values(self):
        ed = ExtendedDistribution(Exponential(1.0), validate_params(2, [0.5, 0.5]))
        assert ed.cdf(math.log(2.0)) == pytest.approx(2.0 / 3.0, abs=1e-12)
        ed2 = ExtendedDistribution(LogLogistic(), validate_params(2, [2.0, 0.5]))
        assert ed2.cdf(1.0) == pytest.approx(4.0 * 0.5 * 0.75 / 2.25**2, abs=1e-12)

    @pytest.mark.parametrize("ed", CASES, ids=lambda e: f"{e.baseline.name}-{e.pv.a}")
    def test_monotone_with_unit_range(self, ed):
        x = np.linspace(0.0, 30.0, 400)
        v = ed.cdf(x)
        # where the true increment is below one ulp of 1.0 the evaluation
        # noise dominates; a couple of ulp of slack is the attainable bound
        assert np.all(np.diff(v) >= -4e-16)
        assert np.all((v >= 0) & (v <= 1))


class TestSurvival:
    def test_equal_parameter_closed_form(self):
        a = 0.4
        ed = ExtendedDistribution(Exponential(1.0), validate_params(3, [a, a, a]))
        x = np.linspace(0.01, 12, 60)
        s0 = Exponential(1.0).sf(x)
        np.testing.assert_allclose(ed.sf(x), a * s0 / (1 - (1 - a) * s0), atol=1e-12)

    def test_below_support(self):
        for ed in CASES:
            assert ed.sf(-3.0) == 1.0
            assert ed.cdf(-3.0) == 0.0

    def test_identity_parameters_give_baseline_survival(self):
        # mid-range goes through 1 - T(u) (absolute accuracy); past the
        # switch the complement form keeps relative accuracy
        ed = ExtendedDistribution(Exponential(1.0), validate_params(1, [1.0]))
        x = np.linspace(0.1, 20, 40)
        np.testing.assert_allclose(ed.sf(x), Exponential(1.0).sf(x), rtol=1e-10, atol=2e-16)

    @pytest.mark.parametrize("ed", CASES, ids=lambda e: f"{e.baseline.name}-{e.pv.a}")
    def test_complement_identity(self, ed):
        x = ed.baseline.quantile(np.linspace(0.02, 0.98, 25))
        np.testing.assert_allclose(ed.sf(x) + ed.cdf(x), 1.0, atol=1e-14)

    def test_far_tail_matches_dominant_term(self):
        """Deep in the tail the survival is a_1 * S0 to first order; the
        switched evaluation path must keep full relative accuracy there."""
        pv = validate_params(2, [1.5, 0.5])
        ed = ExtendedDistribution(Exponential(1.0), pv)
        x = 200.0
        s0 = math.exp(-200.0)
        assert ed.sf(x) == pytest.approx(1.5 * s0, rel=1e-10)


class TestPdf:
    def test_identity_parameters(self):
        ed = ExtendedDistribution(Weibull(2.0, 2.0), validate_params(1, [1.0]))
        x = np.linspace(0.1, 6, 25)
        np.testing.assert_allclose(ed.pdf(x), Weibull(2.0, 2.0).pdf(x), rtol=1e-13)

    @pytest.mark.parametrize("ed", CASES, ids=lambda e: f"{e.baseline.name}-{e.pv.a}")
    def test_integrates_to_one(self, ed):
        res = integrate_semiinfinite(lambda x: ed.pdf(x), tol=1e-9)
        assert res.value == pytest.approx(1.0, abs=1e-8)

    def test_matches_cdf_slope(self):
        ed = ExtendedDistribution(Exponential(1.0), validate_params(2, [1.5, 0.5]))
        x = 1.0
        h = 1e-6
        fd = (ed.cdf(x + h) - ed.cdf(x - h)) / (2 * h)
        assert ed.pdf(x) == pytest.approx(fd, rel=1e-6)


class TestHazard:
    def test_weibull_identity_hazard(self):
        ed = ExtendedDistribution(Weibull(2.0, 2.0), validate_params(1, [1.0]))
        assert ed.hazard(1.0) == pytest.approx(0.5, rel=1e-12)

    def test_exponential_constant_hazard(self):
        ed = ExtendedDistribution(Exponential(1.0), validate_params(1, [1.0]))
        for x in (0.1, 1.0, 5.0, 40.0):
            assert ed.hazard(x) == pytest.approx(1.0, rel=1e-10)

    def test_two_parameter_extension_is_multimodal(self):
        ed = ExtendedDistribution(Weibull(2.0, 2.0), validate_params(2, [1e-6, 0.15]))
        x = 0.01 + 0.01 * np.arange(600)
        h = ed.hazard(x)
        d = np.sign(np.diff(h))
        d = d[d != 0]
        assert int(np.sum(d[1:] != d[:-1])) >= 2

    def test_underflow_raises(self):
        ed = ExtendedDistribution(Exponential(1.0), validate_params(1, [1.0]))
        with pytest.raises(SurvivalUnderflow):
            ed.hazard(800.0)


class TestQuantile:
    def test_identity_parameters(self):
        ed = ExtendedDistribution(LogLogistic(), validate_params(1, [1.0]))
        p = np.linspace(0.05, 0.95, 19)
        np.testing.assert_allclose(ed.quantile(p), LogLogistic().quantile(p), rtol=1e-10)

    @pytest.mark.parametrize("ed", CASES, ids=lambda e: f"{e.baseline.name}-{e.pv.a}")
    def test_round_trip(self, ed):
        p = np.linspace(0.01, 0.99, 21)
        np.testing.assert_allclose(ed.cdf(ed.quantile(p)), p, atol=1e-10)

    def test_median_of_halved_loglogistic(self):
        # equal parameters 0.5 send level 2/3 to baseline level 1/2
        ed = ExtendedDistribution(LogLogistic(), validate_params(2, [0.5, 0.5]))
        assert ed.quantile(2.0 / 3.0) == pytest.approx(1.0, rel=1e-10)

    def test_rejects_closed_levels(self):
        ed = CASES[1]
        for p in (0.0, 1.0):
            with pytest.raises(DomainError):
                ed.quantile(p)
