import math

import numpy as np
import pytest
from scipy import stats

from fmoment import distributions as dists
from fmoment import levy
from fmoment.charfunc import CharFn
from fmoment.mc import SeedSpec


SEED = SeedSpec(90210)


class TestConstructors:
    def test_brownian_increment_distribution(self):
        spec = levy.brownian(1.0)
        x = levy.increments(spec, 0.0, 0.25, SEED.generator("b"), 10**5)
        assert abs(x.var() - 0.25) < 0.25 * 0.03
        assert abs(x.mean()) < 0.01

    def test_brownian_scaled_variance(self):
        spec = levy.brownian(2.0)
        x = levy.increments(spec, 0.0, 1.0, SEED.generator("b2"), 10**5)
        assert abs(x.var() - 4.0) < 4.0 * 0.03

    def test_brownian_drift_mean(self):
        spec = levy.brownian(1.0, drift_slope=3.0)
        x = levy.increments(spec, 0.0, 1.0, SEED.generator("b3"), 10**5)
        assert abs(x.mean() - 3.0) < 0.02

    def test_compound_poisson_unit_jumps(self):
        spec = levy.compound_poisson(1.0, dists.constant(1.0))
        x = levy.increments(spec, 0.0, 1.0, SEED.generator("p"), 10**5)
        assert abs(x.mean() - 1.0) < 0.02
        # X(1) ~ Poisson(1): values are integers
        assert np.all(x == np.round(x))

    def test_compound_poisson_partial_interval(self):
        spec = levy.compound_poisson(2.0, dists.constant(1.0))
        x = levy.increments(spec, 0.3, 0.5, SEED.generator("p2"), 10**5)
        assert abs(x.mean() - 1.0) < 0.02

    def test_negative_sigma_rejected(self):
        with pytest.raises(ValueError):
            levy.brownian(-1.0)

    def test_zero_rate_rejected(self):
        with pytest.raises(ValueError):
            levy.compound_poisson(0.0, dists.constant(1.0))


class TestSampling:
    def test_interval_outside_unit_rejected(self):
        spec = levy.brownian(1.0)
        with pytest.raises(ValueError):
            levy.increments(spec, 0.5, 0.8, SEED.generator(), 10)

    def test_fixed_jump_included_only_when_covered(self):
        spec = levy.ProcessSpec(fixed_jumps=((0.5, dists.constant(5.0)),))
        a = levy.increments(spec, 0.4, 0.2, SEED.generator("fj"), 10**4)
        b = levy.increments(spec, 0.6, 0.2, SEED.generator("fj2"), 10**4)
        assert abs((a - b).mean() - 5.0) < 1e-12

    def test_increment_additivity(self):
        spec = levy.ProcessSpec(
            variance_fn=levy.linear_fn(1.0),
            jump_rate=1.0,
            jump_dist=dists.uniform(0.0, 1.0),
        )
        rng = SEED.generator("add")
        split = levy.increments(spec, 0.0, 0.3, rng, 10**5) + levy.increments(
            spec, 0.3, 0.7, rng, 10**5
        )
        whole = levy.increments(spec, 0.0, 1.0, SEED.generator("add2"), 10**5)
        stat = stats.ks_2samp(split, whole).statistic
        assert stat < 0.01

    def test_disjoint_increments_uncorrelated(self):
        spec = levy.brownian(1.0)
        rng = SEED.generator("corr")
        n = 10**5
        a = levy.increments(spec, 0.0, 0.5, rng, n)
        b = levy.increments(spec, 0.5, 0.5, rng, n)
        corr = np.corrcoef(a, b)[0, 1]
        assert abs(corr) < 3.0 / math.sqrt(n)

    def test_sample_increment_scalar(self):
        v = levy.sample_increment(levy.brownian(1.0), 0.0, 1.0, SEED)
        assert isinstance(v, float)
        assert v == levy.sample_increment(levy.brownian(1.0), 0.0, 1.0, SEED)


class TestPath:
    def test_deterministic_drift_path(self):
        spec = levy.ProcessSpec(drift_fn=levy.linear_fn(1.0))
        grid = np.linspace(0.1, 1.0, 10)
        path = levy.sample_path(spec, grid, SEED)
        assert np.allclose(path.values, grid)

    def test_single_point_grid(self):
        path = levy.sample_path(levy.brownian(1.0), [1.0], SEED)
        assert path.values.shape == (1,)
        assert math.isfinite(path.values[0])

    def test_poisson_path_non_decreasing(self):
        spec = levy.compound_poisson(1.0, dists.constant(1.0))
        path = levy.sample_path(spec, np.linspace(0.01, 1.0, 100), SEED)
        assert np.all(np.diff(path.values) >= 0)

    def test_unsorted_grid_rejected(self):
        with pytest.raises(ValueError):
            levy.sample_path(levy.brownian(1.0), [0.5, 0.2], SEED)


class TestSmallJumpVariance:
    def test_no_jump_below_threshold(self):
        spec = levy.compound_poisson(1.0, dists.constant(1.0))
        assert levy.small_jump_variance(spec, 1.0, 0.5) == 0.0

    def test_unit_jump_above_threshold(self):
        spec = levy.compound_poisson(1.0, dists.constant(1.0))
        assert levy.small_jump_variance(spec, 1.0, 2.0) == pytest.approx(1.0)

    def test_uniform_jump_integral(self):
        spec = levy.compound_poisson(1.0, dists.uniform(0.0, 1.0))
        # direct integral: int_0^{1/2} x^2 dx = 1/24
        assert levy.small_jump_variance(spec, 1.0, 0.5) == pytest.approx(1.0 / 24.0)

    def test_monotone_in_threshold_and_time(self):
        spec = levy.compound_poisson(2.0, dists.uniform(0.0, 1.0))
        vals_a = [levy.small_jump_variance(spec, 1.0, a) for a in (0.1, 0.3, 0.6, 1.0)]
        assert all(b >= a for a, b in zip(vals_a, vals_a[1:]))
        vals_t = [levy.small_jump_variance(spec, t, 0.5) for t in (0.1, 0.5, 1.0)]
        assert all(b >= a for a, b in zip(vals_t, vals_t[1:]))

    def test_vanishes_below_minimum_jump(self):
        spec = levy.compound_poisson(3.0, dists.uniform(0.5, 1.0))
        assert levy.small_jump_variance(spec, 1.0, 0.4) == 0.0


class TestCounterexample:
    T_SEQ = tuple(4.0**-n for n in range(1, 11))

    def test_calibration_for_absolute_value(self):
        demo = levy.counterexample(CharFn(p=1), self.T_SEQ)
        # E|b Y(1)| = b for Y Poisson(1), so b = 1
        assert demo.b == pytest.approx(1.0, abs=1e-10)

    def test_additive_values(self):
        demo = levy.counterexample(CharFn(p=1), self.T_SEQ)
        for t, k in zip(demo.t_seq, demo.k_values):
            assert k == pytest.approx(math.sqrt(t))

    def test_poisson_moment_series(self):
        # E|Y| = E Y = 1 for Poisson(1)
        assert levy.poisson_f_moment(CharFn(p=1), 1.0) == pytest.approx(1.0, abs=1e-12)

    def test_closed_form_normalized_moment(self):
        # E f(t^{-1/2} X(t)) = 1 + sqrt(t) for f = |x| since X(t) >= 0
        demo = levy.counterexample(CharFn(p=1), self.T_SEQ)
        rng = SEED.generator("ce")
        i = 2
        t = demo.t_seq[i]
        vals = demo.sample_at(i, rng, 10**6) / math.sqrt(t)
        se = vals.std(ddof=1) / math.sqrt(len(vals))
        assert abs(vals.mean() - (1.0 + math.sqrt(t))) < 4 * se

    def test_increasing_sequence_rejected(self):
        with pytest.raises(ValueError):
            levy.counterexample(CharFn(p=1), [0.1, 0.2])

    def test_marginal_at_one_is_poisson(self):
        demo = levy.counterexample(CharFn(p=1), self.T_SEQ)
        x = demo.sample_at_one(SEED.generator("m1"), 10**5)
        assert abs(x.mean() - 1.0) < 0.02


class TestSerialization:
    def test_roundtrip(self):
        spec = levy.ProcessSpec(
            variance_fn=levy.linear_fn(2.0),
            drift_fn=levy.linear_fn(0.5),
            fixed_jumps=((0.25, dists.constant(1.0)), (0.5, dists.normal(0, 1))),
            jump_rate=1.5,
            jump_dist=dists.uniform(0.0, 1.0),
        )
        again = levy.ProcessSpec.from_json(spec.to_json())
        assert again == spec

    def test_named_variance_preset(self):
        doc = {"variance_fn": {"kind": "linear", "coef": 1.0}}
        spec = levy.ProcessSpec.from_json(doc)
        assert spec.variance_fn(0.5) == pytest.approx(0.5)

    def test_invalid_variance_rejected(self):
        with pytest.raises(ValueError):
            levy.ProcessSpec(variance_fn=levy.linear_fn(-1.0))

    def test_homogeneity_flag(self):
        assert levy.brownian(1.0, 2.0).is_homogeneous
        assert not levy.ProcessSpec(
            variance_fn=levy.power_fn(1.0, 2.0)
        ).is_homogeneous
        assert not levy.ProcessSpec(
            fixed_jumps=((0.5, dists.constant(1.0)),)
        ).is_homogeneous
