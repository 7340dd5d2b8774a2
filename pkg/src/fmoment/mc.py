"""Seeded, reproducible Monte Carlo engine and empirical statistics.

All randomness in the package flows through :class:`SeedSpec`.  Replicates
are evaluated in fixed-size chunks; chunk ``c`` of stream ``s`` always uses
the generator derived from ``(master_seed, s, c)``, so results are
bit-identical for any degree of parallelism.
"""

from __future__ import annotations

import hashlib
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

# Fixed work unit: replicate i lives in chunk i // CHUNK, independent of
# scheduling, so its randomness is a pure function of (seed, i).
CHUNK = 1 << 14


class EstimationError(RuntimeError):
    """A replicate produced a non-finite value."""

    def __init__(self, replicate_index: int, value: float):
        self.replicate_index = replicate_index
        self.value = value
        super().__init__(
            f"non-finite value {value!r} at replicate {replicate_index}"
        )


def _mix(*parts) -> int:
    """Collision-resistant 64-bit mix of integers/strings (stable across runs)."""
    h = hashlib.blake2b(digest_size=8)
    for p in parts:
        if isinstance(p, str):
            h.update(b"s")
            h.update(p.encode("utf-8"))
        else:
            h.update(b"i")
            h.update(int(p).to_bytes(16, "little", signed=True))
    return int.from_bytes(h.digest(), "little")


@dataclass(frozen=True)
class SeedSpec:
    """Master seed plus a stream identifier.

    Distinct streams derived via :meth:`substream` are statistically
    independent (counter-based Philox keyed by a hash of the path).
    """

    master_seed: int
    stream_id: int = 0

    def substream(self, *key) -> "SeedSpec":
        return SeedSpec(self.master_seed, _mix(self.stream_id, *key))

    def generator(self, *key) -> np.random.Generator:
        ss = np.random.SeedSequence(
            entropy=self.master_seed & ((1 << 64) - 1),
            spawn_key=(_mix(self.stream_id, *key),),
        )
        return np.random.Generator(np.random.Philox(ss))


@dataclass(frozen=True)
class EstimateWithError:
    mean: float
    std_error: float
    n_replicates: int

    def __post_init__(self):
        if self.n_replicates < 1:
            raise ValueError("n_replicates must be positive")


@dataclass(frozen=True)
class EmpiricalSample:
    """Sorted sample values, kept with the seed that produced them."""

    values: np.ndarray
    seed: SeedSpec = field(default=SeedSpec(0))

    def __post_init__(self):
        v = np.sort(np.asarray(self.values, dtype=float))
        object.__setattr__(self, "values", v)

    def __len__(self) -> int:
        return len(self.values)


def _chunk_bounds(n: int, chunk_size: int):
    n_chunks = (n + chunk_size - 1) // chunk_size
    for c in range(n_chunks):
        lo = c * chunk_size
        yield c, lo, min(n, lo + chunk_size)


def _eval_chunks(sampler, n, seed, chunk_size, n_jobs):
    """Evaluate sampler over all chunks; returns list of arrays in chunk order."""

    def one(args):
        c, lo, hi = args
        rng = seed.generator(c)
        vals = np.asarray(sampler(rng, hi - lo), dtype=float)
        if vals.shape != (hi - lo,):
            raise ValueError(
                f"sampler returned shape {vals.shape}, expected ({hi - lo},)"
            )
        bad = ~np.isfinite(vals)
        if bad.any():
            i = int(np.argmax(bad))
            raise EstimationError(lo + i, float(vals[i]))
        return c, vals

    jobs = list(_chunk_bounds(n, chunk_size))
    out = [None] * len(jobs)
    if n_jobs <= 1 or len(jobs) == 1:
        for j in jobs:
            c, vals = one(j)
            out[c] = vals
    else:
        with ThreadPoolExecutor(max_workers=n_jobs) as ex:
            for c, vals in ex.map(one, jobs):
                out[c] = vals
    return out


def estimate_expectation(
    sampler,
    n: int,
    seed: SeedSpec,
    chunk_size: int = CHUNK,
    n_jobs: int = 1,
) -> EstimateWithError:
    """Plain Monte Carlo mean with an unbiased standard error.

    ``sampler(rng, size)`` must return ``size`` replicate values drawn from
    ``rng``, consuming randomness deterministically.
    """
    if n < 2:
        raise ValueError("need at least 2 replicates")
    chunks = _eval_chunks(sampler, n, seed, chunk_size, n_jobs)
    # Accumulate in chunk order so the reduction is schedule-invariant.
    total = 0.0
    for vals in chunks:
        total += float(vals.sum())
    mean = total / n
    ssq = 0.0
    for vals in chunks:
        d = vals - mean
        ssq += float(np.dot(d, d))
    var = ssq / (n - 1)
    return EstimateWithError(mean, math.sqrt(max(var, 0.0) / n), n)


def draw_sample(
    sampler,
    n: int,
    seed: SeedSpec,
    chunk_size: int = CHUNK,
    n_jobs: int = 1,
) -> EmpiricalSample:
    """Materialize n replicates as an EmpiricalSample (sorted)."""
    if n < 1:
        raise ValueError("need at least 1 replicate")
    chunks = _eval_chunks(sampler, n, seed, chunk_size, n_jobs)
    return EmpiricalSample(np.concatenate(chunks), seed)


def ks_distance(sample: EmpiricalSample, cdf) -> float:
    """sup_x |F_n(x) - F(x)| evaluated with both one-sided jumps."""
    v = sample.values
    n = len(v)
    if n == 0:
        raise ValueError("empty sample")
    F = np.asarray(cdf(v), dtype=float)
    i = np.arange(1, n + 1)
    d_plus = np.max(i / n - F)
    d_minus = np.max(F - (i - 1) / n)
    return float(max(d_plus, d_minus, 0.0))


def empirical_char_fn(sample: EmpiricalSample, x: float) -> complex:
    """Average of exp(i * x * value) over the sample."""
    v = sample.values
    if len(v) == 0:
        raise ValueError("empty sample")
    return complex(np.mean(np.exp(1j * x * v)))
