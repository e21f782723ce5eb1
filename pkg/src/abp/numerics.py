"""Shared numerical kernel: contours, winding numbers, root finding.

Everything here is pure and re-entrant; inputs are immutable after
construction and safe to share across threads.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .divisors import Divisor, Plane
from .errors import (BadBracket, DegenerateInput, NoConvergence,
                     ValidationError, ZeroOnContour)

MAX_WINDING_SAMPLES = 2 ** 20
MAX_POLY_DEGREE = 64


@dataclass(frozen=True)
class Contour:
    """Circular integration path sampled at a power-of-two count."""

    center: complex = 0.0 + 0.0j
    radius: float = 1.0
    samples: int = 256

    def __post_init__(self):
        if self.radius <= 0:
            raise ValidationError(f"contour radius must be positive, got {self.radius}")
        if self.samples < 64 or self.samples & (self.samples - 1):
            raise ValidationError(
                f"sample count must be a power of two >= 64, got {self.samples}")

    def sample_points(self, n=None):
        n = self.samples if n is None else n
        theta = 2.0 * np.pi * np.arange(n) / n
        return self.center + self.radius * np.exp(1j * theta)


@dataclass(frozen=True)
class Tolerance:
    abs_tol: float = 1e-10
    max_iter: int = 200

    def __post_init__(self):
        if not 1e-14 <= self.abs_tol <= 1e-2:
            raise ValidationError(
                f"abs_tol must lie in [1e-14, 1e-2], got {self.abs_tol}")
        if self.max_iter <= 0:
            raise ValidationError(f"max_iter must be positive, got {self.max_iter}")


DEFAULT_TOL = Tolerance()


def _eval_on_samples(f, zs):
    """Evaluate a callable on an array, falling back to a scalar loop."""
    try:
        vals = np.asarray(f(zs), dtype=complex)
        if vals.shape == zs.shape:
            return vals
    except Exception:
        pass
    return np.array([f(z) for z in zs], dtype=complex)


def _winding_once(f, contour, n, abs_tol):
    zs = contour.sample_points(n)
    vals = _eval_on_samples(f, zs)
    mags = np.abs(vals)
    if not np.all(np.isfinite(vals)) or np.min(mags) <= abs_tol:
        raise ZeroOnContour(
            f"|f| <= {abs_tol} at a sample of the contour "
            f"(min |f| = {np.min(mags):.3e})")
    # branch-tracked increments, each in (-pi, pi]
    ratios = np.roll(vals, -1) * np.conj(vals)
    total = float(np.sum(np.angle(ratios)))
    return total / (2.0 * np.pi)


def winding_number(f, contour: Contour, tol: Tolerance = DEFAULT_TOL) -> int:
    """Counterclockwise winding of f along the contour, by the argument principle.

    The per-sample argument increments are clamped to (-pi, pi]; the sample
    count is doubled until two successive refinements return the same integer.
    """
    n = contour.samples
    prev = None
    while n <= MAX_WINDING_SAMPLES:
        raw = _winding_once(f, contour, n, tol.abs_tol)
        w = int(round(raw))
        if prev is not None and w == prev:
            return w
        prev = w
        n *= 2
    raise NoConvergence(
        f"winding refinement did not stabilize within {MAX_WINDING_SAMPLES} samples")


def _polyval_and_deriv(coeffs, z):
    """Horner evaluation of p and p' for descending-order coefficients."""
    p = np.zeros_like(z) + coeffs[0]
    dp = np.zeros_like(z)
    for c in coeffs[1:]:
        dp = dp * z + p
        p = p * z + c
    return p, dp


def polynomial_roots(coeffs, tol: Tolerance = DEFAULT_TOL) -> Divisor:
    """All roots with multiplicity, by Aberth-Ehrlich simultaneous iteration.

    ``coeffs`` is the coefficient sequence in descending powers.  Roots closer
    than 10*abs_tol are merged into one point whose multiplicity is the
    cluster size.
    """
    coeffs = np.asarray([complex(c) for c in coeffs], dtype=complex)
    if len(coeffs) < 2:
        raise ValidationError("need a polynomial of degree >= 1")
    deg = len(coeffs) - 1
    if deg > MAX_POLY_DEGREE:
        raise ValidationError(f"degree cap is {MAX_POLY_DEGREE}, got {deg}")
    if abs(coeffs[0]) < tol.abs_tol:
        raise DegenerateInput(
            f"leading coefficient magnitude {abs(coeffs[0]):.3e} below tolerance")
    monic = coeffs / coeffs[0]

    # Cauchy bound for the initial circle; golden-angle offset breaks symmetry.
    radius = 1.0 + float(np.max(np.abs(monic[1:]))) if deg >= 1 else 1.0
    angles = 2.0 * np.pi * (np.arange(deg) + 0.27) / deg + 0.4
    z = 0.8 * radius * np.exp(1j * angles)

    for _ in range(max(tol.max_iter, 80)):
        p, dp = _polyval_and_deriv(monic, z)
        # Newton correction with a guard against p' = 0
        dp = np.where(np.abs(dp) < 1e-300, 1e-300, dp)
        newton = p / dp
        diff = z[:, None] - z[None, :]
        np.fill_diagonal(diff, np.inf)
        repel = np.sum(1.0 / diff, axis=1)
        denom = 1.0 - newton * repel
        denom = np.where(np.abs(denom) < 1e-300, 1e-300, denom)
        step = newton / denom
        z = z - step
        if np.max(np.abs(step)) <= tol.abs_tol * np.maximum(1.0, np.max(np.abs(z))):
            break
    else:
        raise NoConvergence("Aberth-Ehrlich iteration did not settle")

    merged = _cluster_points(z, 10.0 * tol.abs_tol)
    return Divisor(tuple(merged), Plane())


def _cluster_points(z, radius):
    """Greedy clustering; each cluster contributes its mean, repeated."""
    pts = list(z)
    out = []
    while pts:
        seed = pts.pop(0)
        cluster = [seed]
        rest = []
        for p in pts:
            if abs(p - seed) <= radius:
                cluster.append(p)
            else:
                rest.append(p)
        pts = rest
        mean = sum(cluster) / len(cluster)
        out.extend([mean] * len(cluster))
    return out


def find_root_monotone(g, bracket, target, tol: Tolerance = DEFAULT_TOL) -> float:
    """Solve g(t) = target on a bracket, by bisection with secant acceleration.

    g must be monotone on the bracket and g(lo), g(hi) must straddle target.
    Returns t with |g(t) - target| <= abs_tol.
    """
    lo, hi = float(bracket[0]), float(bracket[1])
    if lo > hi:
        lo, hi = hi, lo
    flo = g(lo) - target
    fhi = g(hi) - target
    if abs(flo) <= tol.abs_tol:
        return lo
    if abs(fhi) <= tol.abs_tol:
        return hi
    if math.copysign(1.0, flo) == math.copysign(1.0, fhi):
        raise BadBracket(
            f"g({lo}) - target = {flo:.3e} and g({hi}) - target = {fhi:.3e} "
            "do not straddle zero")
    a, fa, b, fb = lo, flo, hi, fhi
    for step in range(tol.max_iter):
        # secant candidate on alternate steps, kept strictly interior;
        # the interleaved bisections guarantee geometric bracket shrinkage
        if step % 2 == 0 and fb != fa:
            t = b - fb * (b - a) / (fb - fa)
        else:
            t = 0.5 * (a + b)
        margin = 0.01 * (b - a)
        if not (a + margin <= t <= b - margin):
            t = 0.5 * (a + b)
        ft = g(t) - target
        if abs(ft) <= tol.abs_tol:
            return t
        if math.copysign(1.0, ft) == math.copysign(1.0, fa):
            a, fa = t, ft
        else:
            b, fb = t, ft
    raise NoConvergence(f"no root to tolerance {tol.abs_tol} in {tol.max_iter} iterations")
