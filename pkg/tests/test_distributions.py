import math

import numpy as np
import pytest

from fmoment import distributions as dists
from fmoment.mc import SeedSpec


RNG = SeedSpec(417).generator


class TestSampling:
    def test_constant(self):
        x = dists.constant(2.5).sample(RNG("c"), 100)
        assert np.all(x == 2.5)

    def test_uniform_range_and_mean(self):
        d = dists.uniform(-1.0, 3.0)
        x = d.sample(RNG("u"), 10**5)
        assert x.min() >= -1.0 and x.max() <= 3.0
        assert abs(x.mean() - d.mean()) < 0.02

    def test_discrete_support(self):
        d = dists.discrete([1.0, 4.0], [0.25, 0.75])
        x = d.sample(RNG("d"), 10**5)
        assert set(np.unique(x)) == {1.0, 4.0}
        assert abs(x.mean() - 3.25) < 0.02

    def test_exponential_mean(self):
        x = dists.exponential(2.0).sample(RNG("e"), 10**5)
        assert abs(x.mean() - 2.0) < 0.03

    def test_cauchy_has_no_mean(self):
        with pytest.raises(ValueError):
            dists.cauchy().mean()

    def test_unknown_kind_rejected(self):
        with pytest.raises(ValueError):
            dists.Dist("triangular", {})

    def test_discrete_probs_validated(self):
        with pytest.raises(ValueError):
            dists.discrete([1.0, 2.0], [0.5, 0.6])


class TestTruncatedSecondMoment:
    def test_constant_in_or_out(self):
        d = dists.constant(2.0)
        assert d.truncated_second_moment(1.0) == 0.0
        assert d.truncated_second_moment(2.0) == pytest.approx(4.0)

    def test_uniform_closed_form(self):
        # int_0^{1/2} x^2 dx = 1/24 on U(0, 1)
        d = dists.uniform(0.0, 1.0)
        assert d.truncated_second_moment(0.5) == pytest.approx(1.0 / 24.0)
        assert d.truncated_second_moment(1.0) == pytest.approx(1.0 / 3.0)

    def test_normal_full_mass_is_variance(self):
        d = dists.normal(0.0, 1.5)
        assert d.truncated_second_moment(100.0) == pytest.approx(2.25, rel=1e-9)

    def test_discrete_partial(self):
        d = dists.discrete([0.5, 3.0], [0.5, 0.5])
        assert d.truncated_second_moment(1.0) == pytest.approx(0.125)

    def test_exponential_full_mass(self):
        # E xi^2 = 2 scale^2
        d = dists.exponential(1.0)
        assert d.truncated_second_moment(200.0) == pytest.approx(2.0, rel=1e-6)

    def test_negative_threshold_rejected(self):
        with pytest.raises(ValueError):
            dists.constant(1.0).truncated_second_moment(-0.1)

    def test_monotone_in_threshold(self):
        d = dists.normal(0.0, 1.0)
        vals = [d.truncated_second_moment(a) for a in (0.5, 1.0, 2.0, math.inf)]
        assert all(b >= a for a, b in zip(vals, vals[1:]))


class TestSerialization:
    def test_roundtrip_all_kinds(self):
        kinds = [
            dists.constant(1.0),
            dists.uniform(0.0, 2.0),
            dists.normal(0.5, 2.0),
            dists.discrete([1.0, -1.0], [0.5, 0.5]),
            dists.cauchy(3.0),
            dists.exponential(0.5),
        ]
        for d in kinds:
            assert dists.Dist.from_json(d.to_json()) == d
