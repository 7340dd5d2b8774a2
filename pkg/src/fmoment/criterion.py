"""The increment-moment test for Brownian structure.

Estimates m(s, h) = E f(h^{-1/2} [X(s+h) - X(s)]) over a grid of left
endpoints s and a dyadic ladder of widths h, forms the per-s ladder minimum
as a liminf proxy, and compares it against E f(X(1)).  A process whose
liminf proxy clears E f(X(1)) (up to Monte Carlo slack) on most of the s
grid is compatible with being Gaussian with sigma = psi_inverse(E f(X(1))).
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field

import numpy as np

from . import charfunc, mc
from .levy import ProcessSpec, RestrictedCounterexample, increment_sampler
from .mc import EstimateWithError, SeedSpec


@dataclass(frozen=True)
class CriterionConfig:
    s_grid: tuple
    h0: float
    ladder_depth: int  # h_j = h0 * 2**-j for j = 0..ladder_depth
    replicates: int
    f: charfunc.CharFn
    pass_fraction: float = 0.1
    slack: float = 3.0

    def __post_init__(self):
        if self.ladder_depth < 4:
            raise ValueError("ladder needs depth at least 4")
        if not (0.0 < self.pass_fraction < 1.0):
            raise ValueError("pass_fraction must lie in (0, 1)")
        s = tuple(float(x) for x in self.s_grid)
        if any(not (0.0 <= x < 1.0) for x in s) or list(s) != sorted(s):
            raise ValueError("s grid must be sorted inside [0, 1)")
        if any(x + self.h0 > 1.0 + 1e-12 for x in s):
            raise ValueError("s + h0 must stay inside [0, 1]")
        object.__setattr__(self, "s_grid", s)

    @property
    def h_ladder(self) -> tuple:
        return tuple(self.h0 * 2.0**-j for j in range(self.ladder_depth + 1))


def default_config(f, replicates: int = 20_000, n_s: int = 32,
                   h0: float = 0.1, ladder_depth: int = 8) -> CriterionConfig:
    s = tuple(np.linspace(0.0, 1.0 - h0, n_s))
    return CriterionConfig(s, h0, ladder_depth, replicates, f)


@dataclass(frozen=True)
class CriterionReport:
    s_grid: tuple
    h_ladder: tuple
    m_hat: tuple  # m_hat[i][j] is the EstimateWithError for (s_i, h_j)
    liminf_proxy: tuple  # per-s ladder minimum of the means
    ef_x1: EstimateWithError
    sigma_hat: float
    verdict: str  # BrownianCompatible | NotCompatible | Inconclusive
    pass_fraction_observed: float
    diagnostics: tuple = ()

    def to_json(self) -> dict:
        return {
            "s_grid": list(self.s_grid),
            "h_ladder": list(self.h_ladder),
            "m_hat": [
                [
                    {"mean": e.mean, "std_error": e.std_error,
                     "n_replicates": e.n_replicates}
                    for e in row
                ]
                for row in self.m_hat
            ],
            "liminf_proxy": list(self.liminf_proxy),
            "ef_x1": {
                "mean": self.ef_x1.mean,
                "std_error": self.ef_x1.std_error,
                "n_replicates": self.ef_x1.n_replicates,
            },
            "sigma_hat": self.sigma_hat,
            "verdict": self.verdict,
            "pass_fraction_observed": self.pass_fraction_observed,
            "diagnostics": list(self.diagnostics),
        }

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["s", "h", "mean", "std_error"])
        for i, s in enumerate(self.s_grid):
            for j, h in enumerate(self.h_ladder):
                e = self.m_hat[i][j]
                w.writerow([repr(s), repr(h), repr(e.mean), repr(e.std_error)])
        return buf.getvalue()


def increment_moment(
    spec: ProcessSpec, f, s: float, h: float, n: int, seed: SeedSpec,
    n_jobs: int = 1,
) -> EstimateWithError:
    """Monte Carlo estimate of E f(h^{-1/2} [X(s+h) - X(s)])."""
    if n < 2:
        raise ValueError("need at least 2 replicates")
    base = increment_sampler(spec, s, h)
    scale = 1.0 / math.sqrt(h)
    return mc.estimate_expectation(
        lambda rng, size: f(scale * base(rng, size)), n, seed, n_jobs=n_jobs
    )


def ef_at_one(spec: ProcessSpec, f, n: int, seed: SeedSpec,
              n_jobs: int = 1) -> EstimateWithError:
    """E f(X(1)) estimated from the spec treated as a black box."""
    base = increment_sampler(spec, 0.0, 1.0)
    return mc.estimate_expectation(
        lambda rng, size: f(base(rng, size)), n, seed, n_jobs=n_jobs
    )


def run_criterion(
    spec: ProcessSpec, config: CriterionConfig, seed: SeedSpec, n_jobs: int = 1
) -> CriterionReport:
    f = config.f
    diagnostics = []
    matrix = []
    failed = False
    for i, s in enumerate(config.s_grid):
        row = []
        for j, h in enumerate(config.h_ladder):
            cell_seed = seed.substream("cell", i, j)
            try:
                est = increment_moment(
                    spec, f, s, h, config.replicates, cell_seed, n_jobs=n_jobs
                )
            except mc.EstimationError as exc:
                diagnostics.append(f"cell ({i},{j}): {exc}")
                est = EstimateWithError(float("nan"), 0.0, config.replicates)
                failed = True
            row.append(est)
        matrix.append(tuple(row))
    matrix = tuple(matrix)

    try:
        ef1 = ef_at_one(spec, f, config.replicates, seed.substream("ef_x1"),
                        n_jobs=n_jobs)
    except mc.EstimationError as exc:
        diagnostics.append(f"ef_x1: {exc}")
        ef1 = EstimateWithError(float("nan"), 0.0, config.replicates)
        failed = True

    if failed:
        return CriterionReport(
            config.s_grid, config.h_ladder, matrix,
            tuple(float("nan") for _ in config.s_grid),
            ef1, float("nan"), "Inconclusive", 0.0, tuple(diagnostics),
        )

    liminf = []
    passes = 0
    for row in matrix:
        jmin = int(np.argmin([e.mean for e in row]))
        lim = row[jmin].mean
        liminf.append(lim)
        combined = math.hypot(row[jmin].std_error, ef1.std_error)
        if lim >= ef1.mean - config.slack * combined:
            passes += 1
    frac_pass = passes / len(matrix)

    sigma_hat = charfunc.psi_inverse(f, max(ef1.mean, 0.0))
    if frac_pass >= 1.0 - config.pass_fraction:
        verdict = "BrownianCompatible"
    elif 1.0 - frac_pass >= config.pass_fraction:
        verdict = "NotCompatible"
    else:
        verdict = "Inconclusive"
    return CriterionReport(
        config.s_grid, config.h_ladder, matrix, tuple(liminf),
        ef1, sigma_hat, verdict, frac_pass, tuple(diagnostics),
    )


@dataclass(frozen=True)
class SubsequenceReport:
    t_seq: tuple
    moments: tuple  # EstimateWithError of E f(t_n^{-1/2} X(t_n)) per t_n
    ef_x1: EstimateWithError
    liminf_proxy: float
    satisfied: bool  # liminf proxy >= E f(X(1)) - slack

    def to_json(self) -> dict:
        return {
            "t_seq": list(self.t_seq),
            "moments": [
                {"mean": e.mean, "std_error": e.std_error,
                 "n_replicates": e.n_replicates}
                for e in self.moments
            ],
            "ef_x1": {"mean": self.ef_x1.mean, "std_error": self.ef_x1.std_error,
                      "n_replicates": self.ef_x1.n_replicates},
            "liminf_proxy": self.liminf_proxy,
            "satisfied": self.satisfied,
        }


def subsequence_criterion(
    spec, f, t_seq, n: int, seed: SeedSpec, slack: float = 3.0,
    n_jobs: int = 1,
) -> SubsequenceReport:
    """Homogeneous-process variant: E f(t_n^{-1/2} X(t_n)) along t_seq.

    Accepts either a homogeneous ProcessSpec or a RestrictedCounterexample.
    """
    t = tuple(float(x) for x in t_seq)
    if any(not (0.0 < x <= 1.0) for x in t):
        raise ValueError("t_seq must lie in (0, 1]")

    if isinstance(spec, RestrictedCounterexample):
        def moment_at(i, sub):
            scale = 1.0 / math.sqrt(spec.t_seq[i])
            return mc.estimate_expectation(
                lambda rng, size: f(scale * spec.sample_at(i, rng, size)),
                n, sub, n_jobs=n_jobs,
            )

        if t != spec.t_seq:
            raise ValueError("t_seq must match the counterexample's sequence")
        moments = tuple(
            moment_at(i, seed.substream("tseq", i)) for i in range(len(t))
        )
        ef1 = mc.estimate_expectation(
            lambda rng, size: f(spec.sample_at_one(rng, size)),
            n, seed.substream("ef_x1"), n_jobs=n_jobs,
        )
    else:
        if not spec.is_homogeneous:
            raise ValueError("subsequence criterion requires a homogeneous spec")
        moments = tuple(
            increment_moment(spec, f, 0.0, x, n, seed.substream("tseq", i),
                             n_jobs=n_jobs)
            for i, x in enumerate(t)
        )
        ef1 = ef_at_one(spec, f, n, seed.substream("ef_x1"), n_jobs=n_jobs)

    lim = min(e.mean for e in moments)
    worst = max(e.std_error for e in moments)
    satisfied = lim >= ef1.mean - slack * math.hypot(worst, ef1.std_error)
    return SubsequenceReport(t, moments, ef1, lim, satisfied)


@dataclass(frozen=True)
class NegligibilityProfile:
    h_ladder: tuple
    sup_moment: tuple  # sup over s of m_hat(s, h_j).mean, one per ladder step
    decreasing_fraction: float  # fraction of consecutive ladder steps that decrease

    def to_json(self) -> dict:
        return {
            "h_ladder": list(self.h_ladder),
            "sup_moment": list(self.sup_moment),
            "decreasing_fraction": self.decreasing_fraction,
        }


def negligibility_profile(
    spec: ProcessSpec, f, config: CriterionConfig, seed: SeedSpec,
    n_jobs: int = 1,
) -> NegligibilityProfile:
    """Decay profile of sup_s E f(h^{-1/2} dZ) for a pure jump/drift spec."""
    if spec.has_gaussian_part:
        raise ValueError("negligibility profile requires no Gaussian component")
    f = f if f is not None else config.f
    sups = []
    for j, h in enumerate(config.h_ladder):
        vals = []
        for i, s in enumerate(config.s_grid):
            est = increment_moment(
                spec, f, s, h, config.replicates,
                seed.substream("cell", i, j), n_jobs=n_jobs,
            )
            vals.append(est.mean)
        sups.append(max(vals))
    diffs = np.diff(sups)
    frac = float(np.mean(diffs < 0)) if len(diffs) else 0.0
    return NegligibilityProfile(config.h_ladder, tuple(sups), frac)


@dataclass(frozen=True)
class VarianceCheckReport:
    lower_bound_holds: bool
    worst_gap: float  # min over the grid of sigma^2(t) - sigma_target^2 t
    equality_branch_applies: bool
    equality_holds: bool

    def to_json(self) -> dict:
        return {
            "lower_bound_holds": self.lower_bound_holds,
            "worst_gap": self.worst_gap,
            "equality_branch_applies": self.equality_branch_applies,
            "equality_holds": self.equality_holds,
        }


def gaussian_variance_check(
    spec: ProcessSpec, sigma_target: float, grid, tol: float = 1e-12
) -> VarianceCheckReport:
    """Analytic check of Var(V(t)) >= sigma^2 t, with the equality branch.

    Operates on the spec's variance function directly, not on samples.
    """
    if spec.jump_rate > 0 or spec.fixed_jumps:
        raise ValueError("variance check requires a pure Gaussian spec")
    t = np.asarray(grid, dtype=float)
    v = np.asarray(spec.variance_fn(t), dtype=float)
    target = sigma_target * sigma_target
    gaps = v - target * t
    worst = float(np.min(gaps)) if len(t) else 0.0
    lower_ok = worst >= -tol
    v1 = float(spec.variance_fn(1.0))
    eq_applies = abs(v1 - target) <= tol * max(1.0, target)
    eq_holds = eq_applies and bool(
        np.all(np.abs(gaps) <= tol * np.maximum(1.0, target * t))
    )
    return VarianceCheckReport(lower_ok, worst, eq_applies, eq_holds)


def report_to_json_bytes(report) -> bytes:
    """Canonical JSON encoding (sorted keys, no whitespace variation)."""
    return json.dumps(report.to_json(), sort_keys=True,
                      separators=(",", ":")).encode()
