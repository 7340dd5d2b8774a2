"""Self-normalized CLT harness for stationary sequences.

Partial sums S_n are normalized by rho_n = ||S_n||_p / ||W||_p instead of
the standard deviation.  The harness measures, for concrete sequence
models, the three ingredients that force S_n / rho_n toward N(0, 1):
asymptotic factorization of the characteristic function (the WII defect),
regular growth rho_{Kn}/rho_n -> sqrt(K), and uniform integrability of
(|S_n|/rho_n)^p.  A circular block bootstrap provides a single-path rho
estimate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import signal, stats
from scipy.special import gammaln

from . import mc
from .distributions import Dist, normal
from .mc import EstimateWithError, SeedSpec

_COL_CHUNK = 1 << 22  # max elements drawn at once inside a sum pass


def gaussian_abs_moment(p: float) -> float:
    """||W||_p = (E|W|^p)^{1/p} via the closed-form absolute-moment formula."""
    if p < 0:
        raise ValueError("p must be non-negative")
    if p == 0:
        return 1.0
    # E|W|^p = 2^{p/2} Gamma((p+1)/2) / sqrt(pi)
    log_m = (p / 2.0) * math.log(2.0) + gammaln((p + 1.0) / 2.0) - 0.5 * math.log(math.pi)
    return math.exp(log_m / p)


@dataclass(frozen=True)
class SequenceModel:
    """Strictly stationary, centered sequence generator.

    kinds:
      iid: {"dist": Dist}
      moving_average: {"weights": [...], "innovation": Dist}
      autoregressive: {"phi": float, "innovation": Dist}
      markov_functional: {"transition": [[...]], "state_values": [...],
                          "period": int}
    """

    kind: str
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.kind not in (
            "iid", "moving_average", "autoregressive", "markov_functional"
        ):
            raise ValueError(f"unknown model kind {self.kind!r}")
        if self.kind == "autoregressive":
            phi = self.params["phi"]
            if not (-1.0 < phi < 1.0):
                raise ValueError("phi must lie in (-1, 1)")
        if self.kind == "markov_functional":
            P = np.asarray(self.params["transition"], dtype=float)
            if P.ndim != 2 or P.shape[0] != P.shape[1]:
                raise ValueError("transition matrix must be square")
            if np.any(P < 0) or np.any(np.abs(P.sum(axis=1) - 1.0) > 1e-10):
                raise ValueError("transition rows must be probability vectors")

    # -- stationary ingredients ------------------------------------------

    def _markov_stationary(self):
        P = np.asarray(self.params["transition"], dtype=float)
        w, v = np.linalg.eig(P.T)
        i = int(np.argmin(np.abs(w - 1.0)))
        pi = np.real(v[:, i])
        pi = np.abs(pi) / np.abs(pi).sum()
        return P, pi

    def centered_state_values(self):
        P, pi = self._markov_stationary()
        vals = np.asarray(self.params["state_values"], dtype=float)
        return vals - float(np.dot(pi, vals)), pi, P

    # -- simulation -------------------------------------------------------

    def sample_sums(self, ns, replicates: int, rng: np.random.Generator) -> dict:
        """S_n for each checkpoint n in ns, from one pass per replicate set.

        Returns {n: array of shape (replicates,)}.
        """
        ns = sorted(set(int(n) for n in ns))
        if not ns or ns[0] < 1:
            raise ValueError("checkpoints must be positive integers")
        n_max = ns[-1]
        out = {}
        S = np.zeros(replicates)

        if self.kind == "iid":
            dist = self.params["dist"]
            t = 0
            for n in ns:
                while t < n:
                    w = min(n - t, max(1, _COL_CHUNK // replicates))
                    S += dist.sample(rng, replicates * w).reshape(replicates, w).sum(axis=1)
                    t += w
                out[n] = S.copy()
            return out

        if self.kind == "moving_average":
            wts = np.asarray(self.params["weights"], dtype=float)
            dist = self.params["innovation"]
            m = len(wts) - 1
            hist = dist.sample(rng, replicates * m).reshape(replicates, m) if m else \
                np.empty((replicates, 0))
            t = 0
            for n in ns:
                while t < n:
                    w = min(n - t, max(1, _COL_CHUNK // replicates))
                    eps = dist.sample(rng, replicates * w).reshape(replicates, w)
                    full = np.concatenate([hist, eps], axis=1)
                    X = np.zeros((replicates, w))
                    for j, wj in enumerate(wts):
                        X += wj * full[:, m - j : m + w - j]
                    S += X.sum(axis=1)
                    hist = full[:, full.shape[1] - m :] if m else hist
                    t += w
                out[n] = S.copy()
            return out

        if self.kind == "autoregressive":
            phi = float(self.params["phi"])
            dist = self.params.get("innovation", normal())
            if dist.kind == "normal" and dist.params.get("mean", 0.0) == 0.0:
                sd = dist.params.get("sd", 1.0)
                X = rng.normal(0.0, sd / math.sqrt(1.0 - phi * phi), replicates)
            else:
                # no closed-form stationary law: burn in until the start
                # transient is below double precision
                X = dist.sample(rng, replicates) - dist.mean()
                burn = max(64, int(math.ceil(-36.0 / math.log(max(abs(phi), 1e-9)))))
                for _ in range(burn):
                    X = phi * X + (dist.sample(rng, replicates) - dist.mean())
            t = 0
            for n in ns:
                while t < n:
                    w = min(n - t, max(1, _COL_CHUNK // replicates))
                    eps = dist.sample(rng, replicates * w).reshape(replicates, w)
                    if dist.mean() != 0.0:
                        eps -= dist.mean()
                    zi = (phi * X)[:, None]
                    Xs, zf = signal.lfilter([1.0], [1.0, -phi], eps, axis=1, zi=zi)
                    S += Xs.sum(axis=1)
                    X = Xs[:, -1]
                    t += w
                out[n] = S.copy()
            return out

        if self.kind == "markov_functional":
            vals, pi, P = self.centered_state_values()
            cum = np.cumsum(P, axis=1)
            state = np.searchsorted(np.cumsum(pi), rng.random(replicates), side="right")
            state = np.minimum(state, len(pi) - 1)
            t = 0
            for n in ns:
                while t < n:
                    u = rng.random(replicates)
                    rows = cum[state]
                    state = np.sum(rows < u[:, None], axis=1)
                    state = np.minimum(state, len(pi) - 1)
                    S += vals[state]
                    t += 1
                out[n] = S.copy()
            return out

        raise AssertionError(self.kind)

    def to_json(self) -> dict:
        doc = {"kind": self.kind}
        for k, v in self.params.items():
            doc[k] = v.to_json() if isinstance(v, Dist) else v
        return doc

    @staticmethod
    def from_json(doc: dict) -> "SequenceModel":
        doc = dict(doc)
        kind = doc.pop("kind")
        for k in ("dist", "innovation"):
            if k in doc:
                doc[k] = Dist.from_json(doc[k])
        return SequenceModel(kind, doc)


def iid_model(dist: Dist) -> SequenceModel:
    return SequenceModel("iid", {"dist": dist})


def moving_average_model(weights, innovation: Dist | None = None) -> SequenceModel:
    return SequenceModel(
        "moving_average",
        {"weights": [float(w) for w in weights],
         "innovation": innovation or normal()},
    )


def ar1_model(phi: float, innovation: Dist | None = None) -> SequenceModel:
    return SequenceModel(
        "autoregressive", {"phi": float(phi), "innovation": innovation or normal()}
    )


def markov_functional_model(transition, state_values, period: int = 1) -> SequenceModel:
    return SequenceModel(
        "markov_functional",
        {"transition": [[float(x) for x in row] for row in transition],
         "state_values": [float(v) for v in state_values],
         "period": int(period)},
    )


# -- rho and diagnostics ---------------------------------------------------


def _rho_from_sums(S: np.ndarray, p: float) -> tuple:
    """(rho_hat, std_error) by the delta method from |S|^p samples."""
    ap = np.abs(S) ** p
    m = float(ap.mean())
    se_m = float(ap.std(ddof=1)) / math.sqrt(len(ap))
    kappa = gaussian_abs_moment(p)
    if m == 0.0:
        return 0.0, 0.0
    rho = m ** (1.0 / p) / kappa
    se = se_m * m ** (1.0 / p - 1.0) / (p * kappa)
    return rho, se


def rho_n(model: SequenceModel, n: int, p: float, replicates: int,
          seed: SeedSpec) -> EstimateWithError:
    """Monte Carlo rho_n = ||S_n||_p / ||W||_p with propagated error."""
    if n < 1:
        raise ValueError("n must be positive")
    S = model.sample_sums([n], replicates, seed.generator("rho", n))[n]
    rho, se = _rho_from_sums(S, p)
    return EstimateWithError(rho, se, replicates)


def wii_defect(model: SequenceModel, n: int, k: int, x: float, p: float,
               replicates: int, seed: SeedSpec) -> float:
    """| ecf of S_n/rho_hat  -  (ecf of S_{[n/k]}/rho_hat)^k |.

    The two empirical characteristic functions come from independent
    replicate sets; both are normalized by the same rho_hat estimated from
    the first set.
    """
    if k < 2 or n < k:
        raise ValueError("need k >= 2 and n >= k")
    if x == 0.0:
        return 0.0
    S_full = model.sample_sums([n], replicates, seed.generator("wii_full", n))[n]
    rho, _ = _rho_from_sums(S_full, p)
    m = n // k
    S_part = model.sample_sums([m], replicates, seed.generator("wii_part", n, k))[m]
    phi_full = np.mean(np.exp(1j * x * S_full / rho))
    phi_part = np.mean(np.exp(1j * x * S_part / rho))
    return float(abs(phi_full - phi_part**k))


def ratio_diagnostic(model: SequenceModel, p: float, n_ladder, K: int,
                     replicates: int, seed: SeedSpec) -> dict:
    """n -> |rho_{Kn}/rho_n - sqrt(K)| for all n with Kn in the ladder."""
    ladder = sorted(set(int(n) for n in n_ladder))
    rhos = {n: rho_n(model, n, p, replicates, seed.substream("ratio", n))
            for n in ladder}
    out = {}
    for n in ladder:
        if K * n in rhos and rhos[n].mean > 0:
            out[n] = abs(rhos[K * n].mean / rhos[n].mean - math.sqrt(K))
    return out


def ui_diagnostic(model: SequenceModel, p: float, n_ladder, thresholds,
                  replicates: int, seed: SeedSpec) -> dict:
    """(n, T) -> E[(|S_n|/rho_hat)^p 1{ (|S_n|/rho_hat)^p > T }]."""
    th = sorted(float(t) for t in thresholds)
    out = {}
    for n in sorted(set(int(x) for x in n_ladder)):
        S = model.sample_sums([n], replicates,
                              seed.generator("ui", n))[n]
        rho, _ = _rho_from_sums(S, p)
        if rho == 0.0:
            raise ValueError("degenerate model: rho estimate is zero")
        Z = (np.abs(S) / rho) ** p
        for T in th:
            out[(n, T)] = float(np.mean(np.where(Z > T, Z, 0.0)))
    return out


def ks_normality(model: SequenceModel, p: float, n: int, replicates: int,
                 seed: SeedSpec) -> float:
    """KS distance of the empirical law of S_n / rho_hat from Phi."""
    S = model.sample_sums([n], replicates, seed.generator("ks", n))[n]
    rho, _ = _rho_from_sums(S, p)
    if rho == 0.0:
        raise ValueError("degenerate model: rho estimate is zero")
    sample = mc.EmpiricalSample(S / rho, seed)
    return mc.ks_distance(sample, stats.norm.cdf)


def corollary15_consistency(model: SequenceModel, p: float, n_ladder,
                            replicates: int, seed: SeedSpec) -> dict:
    """n -> (||S_n||_p / sigma_hat_n, KS of S_n/sigma_hat_n vs N(0, (c/kappa)^2)).

    c is the terminal ratio along the ladder; a Gaussian limit forces the
    ratio toward ||W||_p = kappa, in which case the reference law is N(0, 1).
    """
    kappa = gaussian_abs_moment(p)
    ladder = sorted(set(int(x) for x in n_ladder))
    sums = {}
    for n in ladder:
        sums[n] = model.sample_sums([n], replicates,
                                    seed.generator("c15", n))[n]
    ratios = {}
    for n in ladder:
        sd = float(sums[n].std(ddof=1))
        if sd == 0.0:
            raise ValueError("degenerate model: zero variance of S_n")
        lp = float(np.mean(np.abs(sums[n]) ** p)) ** (1.0 / p)
        ratios[n] = lp / sd
    c_hat = ratios[ladder[-1]]
    out = {}
    for n in ladder:
        sd = float(sums[n].std(ddof=1))
        scale = c_hat / kappa
        sample = mc.EmpiricalSample(sums[n] / sd, seed)
        ks = mc.ks_distance(sample, lambda v: stats.norm.cdf(v, scale=scale))
        out[n] = (ratios[n], ks)
    return out


def block_bootstrap_rho(series, block_len: int, n: int, p: float,
                        resamples: int, seed: SeedSpec) -> EstimateWithError:
    """Circular-block-bootstrap estimate of ||S_n||_p / ||W||_p from one path."""
    x = np.asarray(series, dtype=float)
    N = len(x)
    if block_len < 1:
        raise ValueError("block length must be positive")
    if n > N:
        raise ValueError("resample length exceeds the observed series")
    n_blocks = (n + block_len - 1) // block_len
    rng = seed.generator("bootstrap")
    starts = rng.integers(0, N, size=(resamples, n_blocks))
    offs = np.arange(block_len)
    idx = (starts[:, :, None] + offs[None, None, :]) % N
    draws = x[idx].reshape(resamples, n_blocks * block_len)[:, :n]
    sums = draws.sum(axis=1)
    rho, se = _rho_from_sums(sums, p)
    return EstimateWithError(rho, se, resamples)


# -- report driver ---------------------------------------------------------


@dataclass(frozen=True)
class CltConfig:
    p: float
    n_ladder: tuple
    K: int = 2
    replicates: int = 10_000
    x_grid: tuple = (0.5, 1.0, 2.0)
    k_grid: tuple = (2, 4)
    ui_thresholds: tuple = (2.0, 5.0, 10.0)

    def __post_init__(self):
        if not (1.0 <= self.p < 2.0):
            raise ValueError("p must lie in [1, 2)")
        if self.K < 2:
            raise ValueError("K must exceed 1")
        ladder = tuple(sorted(set(int(n) for n in self.n_ladder)))
        object.__setattr__(self, "n_ladder", ladder)


def run_clt(model: SequenceModel, config: CltConfig, seed: SeedSpec) -> dict:
    """All diagnostics in one JSON-ready report."""
    n_max = config.n_ladder[-1]
    rho = {
        n: rho_n(model, n, config.p, config.replicates, seed.substream("rho", n))
        for n in config.n_ladder
    }
    sigma_n = {}
    for n in config.n_ladder:
        S = model.sample_sums([n], config.replicates, seed.generator("sigma", n))[n]
        sigma_n[n] = float(S.std(ddof=1))
    ratio = ratio_diagnostic(model, config.p, config.n_ladder, config.K,
                             config.replicates, seed.substream("ratio"))
    ks = {
        n: ks_normality(model, config.p, n, config.replicates,
                        seed.substream("ks", n))
        for n in config.n_ladder
    }
    wii = {}
    for k in config.k_grid:
        for x in config.x_grid:
            wii[(n_max, k, x)] = wii_defect(
                model, n_max, k, x, config.p, config.replicates,
                seed.substream("wii", k),
            )
    ui = ui_diagnostic(model, config.p, config.n_ladder, config.ui_thresholds,
                       config.replicates, seed.substream("ui"))
    return {
        "p": config.p,
        "rho": {str(n): {"mean": e.mean, "std_error": e.std_error,
                         "n_replicates": e.n_replicates}
                for n, e in rho.items()},
        "sigma_n": {str(n): v for n, v in sigma_n.items()},
        "ratio_dev": {str(n): v for n, v in ratio.items()},
        "ks": {str(n): v for n, v in ks.items()},
        "wii_defect": {f"{n},{k},{x}": v for (n, k, x), v in wii.items()},
        "ui_tail": {f"{n},{T}": v for (n, T), v in ui.items()},
    }
