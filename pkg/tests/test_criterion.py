import math

import numpy as np
import pytest

from fmoment import charfunc as cf
from fmoment import criterion, distributions as dists, levy
from fmoment.mc import SeedSpec


SEED = SeedSpec(1789)
ABS_W = math.sqrt(2.0 / math.pi)

F1 = cf.CharFn(p=1)


def small_config(f, replicates=10_000, n_s=8, depth=5):
    return criterion.default_config(f, replicates=replicates, n_s=n_s,
                                    ladder_depth=depth)


class TestIncrementMoment:
    def test_standard_brownian_constant(self):
        est = criterion.increment_moment(
            levy.brownian(1.0), F1, 0.3, 0.05, 50_000, SEED
        )
        assert abs(est.mean - ABS_W) < 4 * est.std_error

    def test_poisson_closed_form(self):
        # E|X(h)|/sqrt(h) = lambda sqrt(h) since X(h) >= 0
        spec = levy.compound_poisson(1.0, dists.constant(1.0))
        est = criterion.increment_moment(spec, F1, 0.0, 1e-2, 50_000, SEED)
        assert abs(est.mean - 0.1) < 4 * max(est.std_error, 1e-12)

    def test_deterministic_drift_exact(self):
        spec = levy.ProcessSpec(drift_fn=levy.linear_fn(1.0))
        est = criterion.increment_moment(spec, F1, 0.0, 1e-4, 1000, SEED)
        assert est.mean == pytest.approx(1e-2)
        assert est.std_error == 0.0


class TestRunCriterion:
    def test_gaussian_sigma_recovery(self):
        f = cf.CharFn(p=1.3)
        rep = criterion.run_criterion(
            levy.brownian(1.5), small_config(f, replicates=40_000), SEED
        )
        assert rep.verdict == "BrownianCompatible"
        assert abs(rep.sigma_hat - 1.5) < 1.5 * 0.02

    def test_poisson_rejected(self):
        spec = levy.compound_poisson(1.0, dists.constant(1.0))
        rep = criterion.run_criterion(spec, small_config(F1), SEED)
        assert rep.verdict == "NotCompatible"
        assert rep.ef_x1.mean == pytest.approx(1.0, abs=0.05)
        assert max(rep.liminf_proxy) < 0.2

    def test_degenerate_process(self):
        rep = criterion.run_criterion(levy.brownian(0.0), small_config(F1), SEED)
        assert rep.verdict == "BrownianCompatible"
        assert rep.sigma_hat == 0.0
        assert all(v == 0.0 for v in rep.liminf_proxy)

    def test_flat_matrix_for_linear_gaussian(self):
        rep = criterion.run_criterion(
            levy.brownian(1.0, drift_slope=0.0), small_config(F1, 20_000), SEED
        )
        means = [e.mean for row in rep.m_hat for e in row]
        max_se = max(e.std_error for row in rep.m_hat for e in row)
        assert max(means) - min(means) <= 6 * max_se

    def test_scaling_covariance_pure_power(self):
        f = cf.CharFn(p=1.5)
        c = 2.0
        cfg = small_config(f, 20_000, n_s=4, depth=4)
        base = criterion.run_criterion(levy.brownian(1.0), cfg, SEED)
        scaled = criterion.run_criterion(levy.brownian(c), cfg, SEED)
        for row_b, row_s in zip(base.m_hat, scaled.m_hat):
            for eb, es in zip(row_b, row_s):
                tol = 6 * (c**f.p) * max(eb.std_error, es.std_error)
                assert abs(es.mean - c**f.p * eb.mean) < tol

    def test_verdict_monotonicity_numbers(self):
        # adding an independent jump component raises E f(X(1)) while the
        # ladder minimum stays put, so the pass margin can only shrink
        cfg = small_config(F1, 20_000, n_s=4, depth=4)
        pure = levy.compound_poisson(1.0, dists.constant(1.0))
        mixed = levy.ProcessSpec(
            variance_fn=levy.linear_fn(0.01),
            jump_rate=1.0,
            jump_dist=dists.constant(1.0),
        )
        rep_pure = criterion.run_criterion(pure, cfg, SEED)
        rep_mixed = criterion.run_criterion(mixed, cfg, SEED)
        assert rep_pure.verdict == "NotCompatible"
        assert rep_mixed.ef_x1.mean > rep_pure.ef_x1.mean - 3 * (
            rep_mixed.ef_x1.std_error + rep_pure.ef_x1.std_error
        )
        assert rep_mixed.verdict == "NotCompatible"

    def test_deterministic_given_seed(self):
        cfg = small_config(F1, 5_000, n_s=4, depth=4)
        a = criterion.run_criterion(levy.brownian(1.0), cfg, SEED)
        b = criterion.run_criterion(levy.brownian(1.0), cfg, SEED, n_jobs=4)
        assert criterion.report_to_json_bytes(a) == criterion.report_to_json_bytes(b)

    def test_csv_export_shape(self):
        cfg = small_config(F1, 2_000, n_s=4, depth=4)
        rep = criterion.run_criterion(levy.brownian(1.0), cfg, SEED)
        lines = rep.to_csv().strip().splitlines()
        assert lines[0] == "s,h,mean,std_error"
        assert len(lines) == 1 + 4 * 5


class TestSubsequence:
    def test_brownian_constant_along_sequence(self):
        t_seq = [2.0**-n for n in range(1, 9)]
        rep = criterion.subsequence_criterion(
            levy.brownian(1.0), F1, t_seq, 30_000, SEED
        )
        for est in rep.moments:
            assert abs(est.mean - ABS_W) < 4 * est.std_error
        assert rep.satisfied

    def test_counterexample_approaches_limit(self):
        t_seq = tuple(4.0**-n for n in range(1, 7))
        demo = levy.counterexample(F1, t_seq)
        rep = criterion.subsequence_criterion(demo, F1, t_seq, 200_000, SEED)
        for t, est in zip(t_seq, rep.moments):
            assert abs(est.mean - (1.0 + math.sqrt(t))) < 5 * est.std_error
        assert abs(rep.ef_x1.mean - 1.0) < 4 * rep.ef_x1.std_error

    def test_poisson_vanishes_along_sequence(self):
        spec = levy.compound_poisson(1.0, dists.constant(1.0))
        t_seq = [4.0**-n for n in range(1, 7)]
        rep = criterion.subsequence_criterion(spec, F1, t_seq, 50_000, SEED)
        for t, est in zip(t_seq, rep.moments):
            assert abs(est.mean - math.sqrt(t)) < 4 * max(est.std_error, 1e-3)
        assert not rep.satisfied

    def test_non_homogeneous_rejected(self):
        spec = levy.ProcessSpec(variance_fn=levy.power_fn(1.0, 2.0))
        with pytest.raises(ValueError):
            criterion.subsequence_criterion(spec, F1, [0.5, 0.25], 1000, SEED)


class TestNegligibility:
    def test_poisson_profile_closed_form(self):
        spec = levy.compound_poisson(1.0, dists.constant(1.0))
        cfg = small_config(F1, 50_000, n_s=4, depth=6)
        prof = criterion.negligibility_profile(spec, F1, cfg, SEED)
        for h, sup in zip(prof.h_ladder, prof.sup_moment):
            assert abs(sup - math.sqrt(h) * 0.1 / 0.1 * 1.0 * math.sqrt(1)) < 5e-2 or \
                abs(sup - 1.0 * math.sqrt(h)) < 6 * math.sqrt(1.0 / 50_000)
        # halves every two ladder steps
        for j in range(len(prof.sup_moment) - 2):
            ratio = prof.sup_moment[j + 2] / prof.sup_moment[j]
            assert abs(ratio - 0.5) < 0.2
        assert prof.decreasing_fraction == 1.0

    def test_fixed_jump_cells_zero_when_missed(self):
        spec = levy.ProcessSpec(fixed_jumps=((0.5, dists.constant(1.0)),))
        cfg = criterion.CriterionConfig(
            s_grid=(0.0, 0.2, 0.7), h0=0.1, ladder_depth=4,
            replicates=2_000, f=F1,
        )
        prof = criterion.negligibility_profile(spec, F1, cfg, SEED)
        # no interval (s, s + 0.1] with s in {0, 0.2, 0.7} contains 0.5
        assert all(v == 0.0 for v in prof.sup_moment)

    def test_uniform_jump_power_decay(self):
        spec = levy.compound_poisson(2.0, dists.uniform(0.0, 1.0))
        f = cf.CharFn(p=1.5)
        cfg = small_config(f, 200_000, n_s=2, depth=8)
        prof = criterion.negligibility_profile(spec, f, cfg, SEED)
        # E f(increment) ~ lambda h E f(xi), so the profile scales like h^{1-p/2}
        logs = np.log(prof.sup_moment)
        slopes = np.diff(logs) / np.diff(np.log(cfg.h_ladder))
        assert abs(np.median(slopes) - 0.25) < 0.1

    def test_gaussian_component_rejected(self):
        with pytest.raises(ValueError):
            criterion.negligibility_profile(
                levy.brownian(1.0), F1, small_config(F1, 2_000), SEED
            )


class TestGaussianVarianceCheck:
    GRID = np.linspace(0.0, 1.0, 101)

    def test_equality_branch(self):
        spec = levy.ProcessSpec(variance_fn=levy.linear_fn(2.0))
        rep = criterion.gaussian_variance_check(spec, math.sqrt(2.0), self.GRID)
        assert rep.lower_bound_holds
        assert rep.equality_branch_applies
        assert rep.equality_holds

    def test_quadratic_violates_lower_bound(self):
        spec = levy.ProcessSpec(variance_fn=levy.power_fn(1.0, 2.0))
        rep = criterion.gaussian_variance_check(spec, 1.0, self.GRID)
        assert not rep.lower_bound_holds
        assert rep.worst_gap < 0

    def test_superlinear_passes_bound_fails_equality(self):
        spec = levy.ProcessSpec(
            variance_fn=levy.TimeFn("power", {"coef": 1.0, "exponent": 1.0})
        )
        # sigma^2(t) = t + 0.1 t^2 is not a named preset; build from parts
        class Mixed:
            kind = "mixed"
            is_linear = False

            def __call__(self, t):
                t = np.asarray(t, dtype=float)
                out = t + 0.1 * t * t
                return float(out) if out.ndim == 0 else out

        spec = levy.ProcessSpec.__new__(levy.ProcessSpec)
        object.__setattr__(spec, "variance_fn", Mixed())
        object.__setattr__(spec, "drift_fn", levy.zero_fn())
        object.__setattr__(spec, "fixed_jumps", ())
        object.__setattr__(spec, "jump_rate", 0.0)
        object.__setattr__(spec, "jump_dist", None)
        object.__setattr__(spec, "truncation", 0.0)
        rep = criterion.gaussian_variance_check(spec, 1.0, self.GRID)
        assert rep.lower_bound_holds
        assert not rep.equality_branch_applies or not rep.equality_holds

    def test_jumps_rejected(self):
        spec = levy.compound_poisson(1.0, dists.constant(1.0))
        with pytest.raises(ValueError):
            criterion.gaussian_variance_check(spec, 1.0, self.GRID)
