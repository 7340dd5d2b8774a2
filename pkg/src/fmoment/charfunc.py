"""The characterizing-function family and its Gaussian-expectation machinery.

The built-in family is f(x) = |x|^p * (A + B*ln(1 + C|x|)) with p in [1, 2),
A > 0, B, C >= 0.  It is symmetric, convex, strictly increasing on the
positive axis, vanishes at 0, and grows no faster than K^p' under dilation by
K >= K0 for some p' in [p, 2).

psi(x) = E f(x W) for W standard normal is the bridge between the single
moment E f(X(1)) and a diffusion coefficient: it is strictly increasing, so
sigma = psi_inverse(E f(X(1))).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate

_SQRT2PI = math.sqrt(2.0 * math.pi)


class QuadratureError(RuntimeError):
    """Gaussian-expectation quadrature failed to reach tolerance."""

    def __init__(self, achieved: float, wanted: float):
        self.achieved = achieved
        self.wanted = wanted
        super().__init__(f"quadrature error {achieved:.3e} > wanted {wanted:.3e}")


def _default_p_prime(p: float, B: float) -> float:
    # The log factor needs strictly more room than p; a pure power does not.
    if B > 0:
        return min((p + 2.0) / 2.0, p + 0.2)
    return p


@dataclass(frozen=True)
class CharFn:
    """f(x) = |x|^p (A + B ln(1 + C|x|)), evaluated symmetrically."""

    p: float
    A: float = 1.0
    B: float = 0.0
    C: float = 0.0
    p_prime: float | None = None
    K0: float = 2.0

    def __post_init__(self):
        if not (1.0 <= self.p < 2.0):
            raise ValueError("p must lie in [1, 2)")
        if self.A <= 0:
            raise ValueError("A must be positive")
        if self.B < 0 or self.C < 0:
            raise ValueError("B and C must be non-negative")
        if self.K0 < 2.0:
            raise ValueError("K0 must be >= 2")
        if self.p_prime is None:
            object.__setattr__(self, "p_prime", _default_p_prime(self.p, self.B))
        if not (self.p <= self.p_prime < 2.0):
            raise ValueError("need p <= p_prime < 2")

    def __call__(self, x):
        return evaluate(self, x)


def evaluate(f: CharFn, x):
    """Evaluate the characterizing function (vectorized, symmetric)."""
    ax = np.abs(np.asarray(x, dtype=float))
    if not np.all(np.isfinite(ax)):
        raise ValueError("non-finite argument")
    out = ax**f.p * (f.A + f.B * np.log1p(f.C * ax))
    if np.isscalar(x) or np.ndim(x) == 0:
        return float(out)
    return out


@dataclass(frozen=True)
class FcondReport:
    convexity_violations: int
    growth_violations: int
    worst_growth_ratio: float
    alpha: float


def verify_fcond(
    f,
    x_grid,
    K_grid,
    p_prime: float | None = None,
    K0: float | None = None,
    tol: float = 1e-9,
) -> FcondReport:
    """Numerically audit symmetry-side properties of a candidate f.

    Counts midpoint-convexity failures f((x+y)/2) > (f(x)+f(y))/2 + tol over
    all grid pairs, and growth failures f(Kx) > K^p' f(x) (1 + tol).  Works
    for the built-in family or any callable (then p_prime and K0 must be
    supplied).
    """
    if isinstance(f, CharFn):
        p_prime = f.p_prime if p_prime is None else p_prime
        K0 = f.K0 if K0 is None else K0
    if p_prime is None or K0 is None:
        raise ValueError("p_prime and K0 required for a bare callable")
    xs = np.asarray(sorted(x_grid), dtype=float)
    Ks = np.asarray(sorted(K_grid), dtype=float)
    if len(xs) == 0 or len(Ks) == 0 or xs[0] <= 0:
        raise ValueError("grids must be non-empty and positive")
    if Ks[0] < K0:
        raise ValueError("K grid must start at or above K0")

    fx = np.asarray([float(f(x)) for x in xs])

    mid = (xs[:, None] + xs[None, :]) / 2.0
    fmid = np.asarray([[float(f(m)) for m in row] for row in mid])
    rhs = (fx[:, None] + fx[None, :]) / 2.0
    convexity_violations = int(np.sum(fmid > rhs + tol))

    growth_violations = 0
    worst = 0.0
    for K in Ks:
        fKx = np.asarray([float(f(K * x)) for x in xs])
        ratio = fKx / (K**p_prime * fx)
        worst = max(worst, float(np.max(ratio)))
        growth_violations += int(np.sum(ratio > 1.0 + tol))

    alpha = p_prime * math.log2(max(K0, 2.0))
    return FcondReport(convexity_violations, growth_violations, worst, alpha)


def _gauss_expect_halfline(g, rel_tol: float = 1e-12) -> float:
    """2 * integral_0^inf g(w) phi(w) dw with QUADPACK, tolerance enforced."""
    val, err = integrate.quad(
        lambda w: g(w) * math.exp(-0.5 * w * w) / _SQRT2PI,
        0.0,
        np.inf,
        epsabs=1e-14,
        epsrel=rel_tol,
        limit=200,
    )
    val *= 2.0
    err *= 2.0
    wanted = rel_tol * max(1.0, abs(val)) + 1e-13
    if err > wanted * 10:
        raise QuadratureError(err, wanted)
    return val


def psi(f, x: float) -> float:
    """E f(x W) for W standard normal; strictly increasing in x >= 0."""
    if x < 0:
        raise ValueError("psi is defined for x >= 0")
    if x == 0.0:
        return 0.0
    return _gauss_expect_halfline(lambda w: float(f(x * w)))


def psi_inverse(f, y: float, tol: float = 1e-10) -> float:
    """Solve psi(f, x) = y for x >= 0 by bracketing plus Brent refinement."""
    if not math.isfinite(y):
        raise ValueError("target must be finite")
    if y < 0:
        raise ValueError("target must be non-negative")
    if y == 0.0:
        return 0.0
    lo, hi = 0.0, 1.0
    while psi(f, hi) < y:
        lo = hi
        hi *= 2.0
        if hi > 1e12:
            raise QuadratureError(float("inf"), tol)
    from scipy.optimize import brentq

    x = brentq(lambda t: psi(f, t) - y, lo, hi, xtol=1e-14, rtol=8.9e-16)
    resid = abs(psi(f, x) - y)
    if resid > tol * max(1.0, y):
        raise QuadratureError(resid, tol * max(1.0, y))
    return float(x)


def g_shift(f, y: float) -> float:
    """E f(W + y): symmetric in y, minimized at 0, increasing for y > 0."""
    if not math.isfinite(y):
        raise ValueError("shift must be finite")
    # Split at the kink of f(w + y) so QUADPACK sees smooth pieces.
    def integrand(w):
        return float(f(w + y)) * math.exp(-0.5 * w * w) / _SQRT2PI

    a, e1 = integrate.quad(integrand, -np.inf, -y, epsabs=1e-14, epsrel=1e-12, limit=200)
    b, e2 = integrate.quad(integrand, -y, np.inf, epsabs=1e-14, epsrel=1e-12, limit=200)
    val = a + b
    if e1 + e2 > 1e-9 * max(1.0, abs(val)):
        raise QuadratureError(e1 + e2, 1e-9 * max(1.0, abs(val)))
    return val


def fn_inverse(f, y: float) -> float:
    """Inverse of f restricted to [0, inf); used by the counterexample."""
    if y < 0:
        raise ValueError("f maps [0, inf) onto [0, inf)")
    if y == 0.0:
        return 0.0
    lo, hi = 0.0, 1.0
    while float(f(hi)) < y:
        lo = hi
        hi *= 2.0
    from scipy.optimize import brentq

    return float(brentq(lambda t: float(f(t)) - y, lo, hi, xtol=1e-14, rtol=8.9e-16))
