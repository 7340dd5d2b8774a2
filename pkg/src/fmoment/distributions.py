"""Named sampleable distributions with JSON round-trip.

Used for jump sizes in process specs and for innovations in the CLT
sequence models.  Each kind knows how to sample, its mean, and the
truncated second moment E[xi^2 1{|xi| <= a}] needed by the small-jump
variance diagnostic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import integrate, stats

_KINDS = ("constant", "uniform", "normal", "discrete", "cauchy", "exponential")


@dataclass(frozen=True)
class Dist:
    kind: str
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise ValueError(f"unknown distribution kind {self.kind!r}")

    def sample(self, rng: np.random.Generator, size: int) -> np.ndarray:
        p = self.params
        if self.kind == "constant":
            return np.full(size, float(p["value"]))
        if self.kind == "uniform":
            return rng.uniform(p["low"], p["high"], size)
        if self.kind == "normal":
            return rng.normal(p.get("mean", 0.0), p.get("sd", 1.0), size)
        if self.kind == "discrete":
            vals = np.asarray(p["values"], dtype=float)
            probs = np.asarray(p["probs"], dtype=float)
            idx = rng.choice(len(vals), size=size, p=probs)
            return vals[idx]
        if self.kind == "cauchy":
            return p.get("scale", 1.0) * rng.standard_cauchy(size)
        if self.kind == "exponential":
            return rng.exponential(p.get("scale", 1.0), size)
        raise AssertionError(self.kind)

    def mean(self) -> float:
        p = self.params
        if self.kind == "constant":
            return float(p["value"])
        if self.kind == "uniform":
            return (p["low"] + p["high"]) / 2.0
        if self.kind == "normal":
            return float(p.get("mean", 0.0))
        if self.kind == "discrete":
            return float(
                np.dot(np.asarray(p["values"], float), np.asarray(p["probs"], float))
            )
        if self.kind == "exponential":
            return float(p.get("scale", 1.0))
        raise ValueError(f"mean undefined for {self.kind}")

    def truncated_second_moment(self, a: float) -> float:
        """E[xi^2 1{|xi| <= a}]."""
        if a < 0:
            raise ValueError("threshold must be non-negative")
        p = self.params
        if self.kind == "constant":
            v = float(p["value"])
            return v * v if abs(v) <= a else 0.0
        if self.kind == "discrete":
            vals = np.asarray(p["values"], float)
            probs = np.asarray(p["probs"], float)
            m = np.abs(vals) <= a
            return float(np.sum(vals[m] ** 2 * probs[m]))
        if self.kind == "uniform":
            lo, hi = p["low"], p["high"]
            l, h = max(lo, -a), min(hi, a)
            if l >= h:
                return 0.0
            return (h**3 - l**3) / (3.0 * (hi - lo))
        if self.kind == "normal":
            mu, sd = p.get("mean", 0.0), p.get("sd", 1.0)
            val, _ = integrate.quad(
                lambda x: x * x * stats.norm.pdf(x, mu, sd), -a, a,
                epsabs=1e-13, epsrel=1e-12,
            )
            return val
        if self.kind == "exponential":
            scale = p.get("scale", 1.0)
            val, _ = integrate.quad(
                lambda x: x * x * math.exp(-x / scale) / scale, 0.0, a,
                epsabs=1e-13, epsrel=1e-12,
            )
            return val
        raise ValueError(f"truncated second moment undefined for {self.kind}")

    def to_json(self) -> dict:
        return {"kind": self.kind, **self.params}

    @staticmethod
    def from_json(doc: dict) -> "Dist":
        doc = dict(doc)
        kind = doc.pop("kind")
        return Dist(kind, doc)


def constant(value: float) -> Dist:
    return Dist("constant", {"value": float(value)})


def uniform(low: float, high: float) -> Dist:
    return Dist("uniform", {"low": float(low), "high": float(high)})


def normal(mean: float = 0.0, sd: float = 1.0) -> Dist:
    return Dist("normal", {"mean": float(mean), "sd": float(sd)})


def discrete(values, probs) -> Dist:
    probs = np.asarray(probs, dtype=float)
    if abs(probs.sum() - 1.0) > 1e-12 or (probs < 0).any():
        raise ValueError("probabilities must be non-negative and sum to 1")
    return Dist("discrete", {"values": [float(v) for v in values],
                             "probs": [float(q) for q in probs]})


def cauchy(scale: float = 1.0) -> Dist:
    return Dist("cauchy", {"scale": float(scale)})


def exponential(scale: float = 1.0) -> Dist:
    return Dist("exponential", {"scale": float(scale)})
