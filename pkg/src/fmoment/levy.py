"""Independent-increment processes on [0, 1].

A process is described by its continuous-Gaussian variance function, a
deterministic drift, a finite list of fixed-time jumps, and a constant-rate
compound-Poisson jump component.  Only finite-activity jumps are sampled;
the small-jump regime is covered diagnostically by
:func:`small_jump_variance`.

The module also builds the restricted homogeneous counterexample: a scaled
unit-rate Poisson process plus an additive drift defined only on a given
sequence t_n decreasing to zero, whose normalized f-moments along t_n tend
to E f(X(1)) even though X(1) is not Gaussian.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import brentq
from scipy.stats import poisson

from .charfunc import fn_inverse
from .distributions import Dist
from .mc import SeedSpec


@dataclass(frozen=True)
class TimeFn:
    """Named time function presets so specs stay JSON-serializable.

    kinds: "zero"; "linear" (coef * t); "power" (coef * t**exponent).
    """

    kind: str
    params: dict = field(default_factory=dict)

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        if self.kind == "zero":
            out = np.zeros_like(t)
        elif self.kind == "linear":
            out = self.params["coef"] * t
        elif self.kind == "power":
            out = self.params["coef"] * t ** self.params["exponent"]
        else:
            raise ValueError(f"unknown time-function kind {self.kind!r}")
        if out.ndim == 0:
            return float(out)
        return out

    @property
    def is_linear(self) -> bool:
        return self.kind == "zero" or (
            self.kind == "linear"
        ) or (self.kind == "power" and self.params.get("exponent") == 1.0)

    def to_json(self) -> dict:
        return {"kind": self.kind, **self.params}

    @staticmethod
    def from_json(doc: dict) -> "TimeFn":
        doc = dict(doc)
        return TimeFn(doc.pop("kind"), doc)


def linear_fn(coef: float) -> TimeFn:
    return TimeFn("linear", {"coef": float(coef)})


def zero_fn() -> TimeFn:
    return TimeFn("zero")


def power_fn(coef: float, exponent: float) -> TimeFn:
    return TimeFn("power", {"coef": float(coef), "exponent": float(exponent)})


@dataclass(frozen=True)
class ProcessSpec:
    """Decomposition: Gaussian part + drift + fixed jumps + compound Poisson."""

    variance_fn: TimeFn = field(default_factory=zero_fn)
    drift_fn: TimeFn = field(default_factory=zero_fn)
    fixed_jumps: tuple = ()  # ((t_k, Dist), ...), t_k in (0, 1], sorted
    jump_rate: float = 0.0
    jump_dist: Dist | None = None
    truncation: float = 0.0

    def __post_init__(self):
        if self.jump_rate < 0:
            raise ValueError("jump rate must be non-negative")
        if self.jump_rate > 0 and self.jump_dist is None:
            raise ValueError("jump rate set but no jump distribution")
        times = [t for t, _ in self.fixed_jumps]
        if any(not (0.0 < t <= 1.0) for t in times):
            raise ValueError("fixed jump times must lie in (0, 1]")
        if sorted(set(times)) != times:
            raise ValueError("fixed jump times must be distinct and sorted")
        # Validate sigma^2 monotone non-decreasing with sigma^2(0) = 0.
        grid = np.linspace(0.0, 1.0, 1025)
        v = np.asarray(self.variance_fn(grid), dtype=float)
        if abs(v[0]) > 1e-12 or np.any(np.diff(v) < -1e-12):
            raise ValueError("variance function must be non-decreasing with value 0 at 0")

    @property
    def is_homogeneous(self) -> bool:
        return (
            self.variance_fn.is_linear
            and self.drift_fn.is_linear
            and not self.fixed_jumps
        )

    @property
    def has_gaussian_part(self) -> bool:
        return float(self.variance_fn(1.0)) > 0.0

    def to_json(self) -> dict:
        doc = {
            "variance_fn": self.variance_fn.to_json(),
            "drift_fn": self.drift_fn.to_json(),
            "fixed_jumps": [
                {"time": t, "dist": d.to_json()} for t, d in self.fixed_jumps
            ],
            "jump_rate": self.jump_rate,
            "truncation": self.truncation,
        }
        if self.jump_dist is not None:
            doc["jump_dist"] = self.jump_dist.to_json()
        return doc

    @staticmethod
    def from_json(doc: dict) -> "ProcessSpec":
        return ProcessSpec(
            variance_fn=TimeFn.from_json(doc.get("variance_fn", {"kind": "zero"})),
            drift_fn=TimeFn.from_json(doc.get("drift_fn", {"kind": "zero"})),
            fixed_jumps=tuple(
                (fj["time"], Dist.from_json(fj["dist"]))
                for fj in doc.get("fixed_jumps", [])
            ),
            jump_rate=float(doc.get("jump_rate", 0.0)),
            jump_dist=(
                Dist.from_json(doc["jump_dist"]) if "jump_dist" in doc else None
            ),
            truncation=float(doc.get("truncation", 0.0)),
        )


def brownian(sigma: float, drift_slope: float = 0.0) -> ProcessSpec:
    """sigma^2(t) = sigma^2 t, c(t) = q t, no jumps."""
    if sigma < 0:
        raise ValueError("sigma must be non-negative")
    var = linear_fn(sigma * sigma) if sigma > 0 else zero_fn()
    dr = linear_fn(drift_slope) if drift_slope != 0 else zero_fn()
    return ProcessSpec(variance_fn=var, drift_fn=dr)


def compound_poisson(rate: float, jump_dist: Dist) -> ProcessSpec:
    if rate <= 0:
        raise ValueError("rate must be positive")
    return ProcessSpec(jump_rate=rate, jump_dist=jump_dist)


def _poisson_component(spec, h, rng, size):
    counts = rng.poisson(spec.jump_rate * h, size)
    total = int(counts.sum())
    if total == 0:
        return np.zeros(size)
    flat = spec.jump_dist.sample(rng, total)
    out = np.zeros(size)
    ends = np.cumsum(counts)
    starts = ends - counts
    nz = counts > 0
    sums = np.add.reduceat(flat, starts[nz])
    out[nz] = sums
    return out


def increments(spec: ProcessSpec, s: float, h: float, rng, size: int) -> np.ndarray:
    """size iid copies of X(s+h) - X(s)."""
    if not (0.0 <= s < s + h <= 1.0 + 1e-12):
        raise ValueError("interval must lie inside [0, 1]")
    var = float(spec.variance_fn(s + h)) - float(spec.variance_fn(s))
    var = max(var, 0.0)
    out = np.zeros(size)
    if var > 0:
        out += rng.normal(0.0, math.sqrt(var), size)
    out += float(spec.drift_fn(s + h)) - float(spec.drift_fn(s))
    for t_k, dist in spec.fixed_jumps:
        if s < t_k <= s + h:
            out += dist.sample(rng, size)
    if spec.jump_rate > 0:
        out += _poisson_component(spec, h, rng, size)
    return out


def sample_increment(spec: ProcessSpec, s: float, h: float, seed: SeedSpec) -> float:
    """One increment draw with the given seed."""
    return float(increments(spec, s, h, seed.generator(), 1)[0])


def increment_sampler(spec: ProcessSpec, s: float, h: float):
    """Closure suitable for mc.estimate_expectation / mc.draw_sample."""
    return lambda rng, size: increments(spec, s, h, rng, size)


@dataclass(frozen=True)
class PathGrid:
    times: np.ndarray
    values: np.ndarray
    seed: SeedSpec


def sample_path(spec: ProcessSpec, grid, seed: SeedSpec) -> PathGrid:
    """Cumulative sums of per-interval increments on a sorted grid in (0, 1]."""
    times = np.asarray(grid, dtype=float)
    if len(times) == 0 or np.any(np.diff(times) <= 0):
        raise ValueError("grid must be sorted strictly increasing")
    if times[0] <= 0.0 or times[-1] > 1.0:
        raise ValueError("grid must lie in (0, 1]")
    rng = seed.generator()
    prev = 0.0
    vals = np.empty(len(times))
    acc = 0.0
    for i, t in enumerate(times):
        acc += float(increments(spec, prev, t - prev, rng, 1)[0])
        vals[i] = acc
        prev = t
    return PathGrid(times, vals, seed)


def small_jump_variance(spec: ProcessSpec, t: float, a: float) -> float:
    """lambda * t * E[xi^2 1{|xi| <= a}] for the compound component."""
    if not (0.0 <= t <= 1.0):
        raise ValueError("t must lie in [0, 1]")
    if a <= 0:
        raise ValueError("threshold must be positive")
    if spec.jump_rate == 0 or spec.jump_dist is None:
        return 0.0
    return spec.jump_rate * t * spec.jump_dist.truncated_second_moment(a)


def poisson_f_moment(f, b: float, rate: float = 1.0, tail: float = 1e-14) -> float:
    """E f(b Y) for Y Poisson(rate), series truncated when the tail mass < tail."""
    total = 0.0
    j = 0
    while True:
        w = poisson.pmf(j, rate)
        total += w * float(f(b * j))
        j += 1
        if j > rate + 5 and poisson.sf(j - 1, rate) * float(f(b * j)) < tail:
            break
        if j > 10_000:
            raise RuntimeError("Poisson series did not truncate")
    return total


@dataclass(frozen=True)
class RestrictedCounterexample:
    """Poisson-plus-additive-drift process defined only along t_seq.

    X(t_n) = b Y(t_n) + k(t_n) with Y unit-rate Poisson,
    k(t_n) = f^{-1}(1) sqrt(t_n), and b calibrated so E f(b Y(1)) = 1.
    The additive function is taken to vanish at 1 (k(1) = 0), so
    X(1) = b Y(1).
    """

    t_seq: tuple
    b: float
    k_values: tuple
    base_rate: float = 1.0

    def sample_at(self, index: int, rng, size: int) -> np.ndarray:
        t = self.t_seq[index]
        return self.b * rng.poisson(self.base_rate * t, size) + self.k_values[index]

    def sample_at_one(self, rng, size: int) -> np.ndarray:
        return self.b * rng.poisson(self.base_rate, size)


def counterexample(f, t_seq) -> RestrictedCounterexample:
    """Calibrate the non-Gaussian homogeneous demo restricted to t_seq."""
    t = tuple(float(x) for x in t_seq)
    if len(t) == 0 or any(x <= 0 for x in t) or any(
        t[i + 1] >= t[i] for i in range(len(t) - 1)
    ):
        raise ValueError("t_seq must be strictly decreasing and positive")

    def g(b):
        return poisson_f_moment(f, b) - 1.0

    lo, hi = 1e-12, 1.0
    while g(hi) < 0:
        lo = hi
        hi *= 2.0
        if hi > 1e9:
            raise RuntimeError("calibration bracket failed")
    b = brentq(g, lo, hi, xtol=1e-12, rtol=8.9e-16)
    if abs(poisson_f_moment(f, b) - 1.0) > 1e-8:
        raise RuntimeError("calibration residual too large")
    root = fn_inverse(f, 1.0)
    k_vals = tuple(root * math.sqrt(x) for x in t)
    return RestrictedCounterexample(t, float(b), k_vals)
