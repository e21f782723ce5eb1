"""Finite Blaschke products on the unit disk.

Products carry the boundary normalization beta(1) = 1, imposed through the
constant prefactor prod (1 - conj(a_k)) / (1 - a_k).  Two centering classes
are supported: fixed-point centered (a zero at 0, so the product fixes 0)
and zero centered (the conformal barycenter of the zeros is 0).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .divisors import Disk, Divisor
from .errors import (ClassViolation, NoConvergence, OutOfDomain, PoleProximity,
                     ValidationError)
from .numerics import DEFAULT_TOL, Tolerance

ZERO_CENTERED_TOL = 1e-8
EVAL_EDGE_SLACK = 1e-9
POLE_GUARD = 1e-14

FIXED_POINT_CENTERED = "fixed_point_centered"
ZERO_CENTERED = "zero_centered"
NO_CENTERING = "none"
_CLASSES = (FIXED_POINT_CENTERED, ZERO_CENTERED, NO_CENTERING)


@dataclass(frozen=True)
class BlaschkeProduct:
    """Degree-D Blaschke product fixing the boundary point 1."""

    zeros: Divisor
    centering: str = NO_CENTERING

    def __post_init__(self):
        if not isinstance(self.zeros.ambient, Disk):
            raise ValidationError("Blaschke zeros must live in the unit disk")
        if self.centering not in _CLASSES:
            raise ValidationError(f"unknown centering class {self.centering!r}")

    @property
    def degree(self) -> int:
        return self.zeros.e

    def __call__(self, z):
        return eval_blaschke(self, z)


def _as_points(zeros):
    if isinstance(zeros, Divisor):
        return zeros.points
    return tuple(complex(p) for p in zeros)


def eval_blaschke(b: BlaschkeProduct, z):
    """Evaluate prod (1-conj(a))/(1-a) * prod (z-a)/(1-conj(a) z).

    Accepts a scalar or an ndarray; |z| may exceed 1 by at most 1e-9.
    """
    zs = np.asarray(z, dtype=complex)
    if np.any(np.abs(zs) > 1.0 + EVAL_EDGE_SLACK):
        raise OutOfDomain("evaluation point outside the closed unit disk")
    out = np.ones_like(zs)
    for a in b.zeros.points:
        denom = 1.0 - np.conj(a) * zs
        if np.any(np.abs(denom) < POLE_GUARD):
            raise PoleProximity(f"|1 - conj({a}) z| < {POLE_GUARD}")
        # prefactor paired with its factor: exactly 1 at z = 1
        out = out * ((1.0 - np.conj(a)) * (zs - a)) / ((1.0 - a) * denom)
    return out if isinstance(z, np.ndarray) else complex(out)


def _moebius_sum(points, w):
    out = 0.0 + 0.0j
    for p in points:
        out += (p - w) / (1.0 - np.conj(w) * p)
    return out


def conformal_barycenter(d, tol: Tolerance = DEFAULT_TOL) -> complex:
    """The unique w in the disk with sum_k (p_k - w)/(1 - conj(w) p_k) = 0.

    Damped Newton on the two real variables; on failure, restarts from the
    Euclidean mean and finally from an exhaustive disk grid at step 1e-3.
    """
    points = _as_points(d)
    if any(abs(p) >= 1.0 for p in points):
        raise OutOfDomain("barycenter needs points strictly inside the disk")

    mean = sum(points) / len(points)
    for start in (mean, 0.0 + 0.0j, _grid_seed(points)):
        w = _barycenter_newton(points, complex(start), tol)
        if w is not None:
            return w
    raise NoConvergence("barycenter Newton failed from all starting points")


def _barycenter_newton(points, w, tol):
    res = _moebius_sum(points, w)
    for _ in range(tol.max_iter):
        if abs(res) <= tol.abs_tol:
            return w
        # Wirtinger derivatives of the residual
        fw = 0.0 + 0.0j
        fwb = 0.0 + 0.0j
        for p in points:
            denom = 1.0 - np.conj(w) * p
            fw += -1.0 / denom
            fwb += (p - w) * p / (denom * denom)
        a11 = (fw + fwb).real
        a12 = -(fw - fwb).imag
        a21 = (fw + fwb).imag
        a22 = (fw - fwb).real
        det = a11 * a22 - a12 * a21
        if abs(det) < 1e-300:
            return None
        dx = (-res.real * a22 + res.imag * a12) / det
        dy = (-a11 * res.imag + a21 * res.real) / det
        step = complex(dx, dy)
        # damp: halve on residual increase or on escaping the disk
        scale = 1.0
        for _ in range(60):
            cand = w + scale * step
            if abs(cand) < 1.0 - 1e-12:
                cand_res = _moebius_sum(points, cand)
                if abs(cand_res) < abs(res):
                    w, res = cand, cand_res
                    break
            scale *= 0.5
        else:
            return None
    return w if abs(res) <= tol.abs_tol else None


def _grid_seed(points, step=1e-3):
    """Brute-force minimizer of |residual| over a disk grid (fallback seed)."""
    xs = np.arange(-1.0 + step, 1.0, step)
    X, Y = np.meshgrid(xs, xs)
    W = X + 1j * Y
    mask = np.abs(W) < 1.0 - 1e-6
    W = W[mask]
    total = np.zeros_like(W)
    for p in points:
        total += (p - W) / (1.0 - np.conj(W) * p)
    return complex(W[int(np.argmin(np.abs(total)))])


def make_centered(zeros, centering: str, tol: Tolerance = DEFAULT_TOL) -> BlaschkeProduct:
    """Build the normalized product and verify its centering class."""
    pts = _as_points(zeros)
    div = zeros if isinstance(zeros, Divisor) else Divisor(pts, Disk())
    if not isinstance(div.ambient, Disk):
        raise ValidationError("centered products need disk-ambient zeros")
    if centering == FIXED_POINT_CENTERED:
        if not any(p == 0 for p in div.points):
            raise ClassViolation("fixed-point centering needs a zero at 0 exactly")
    elif centering == ZERO_CENTERED:
        w = conformal_barycenter(div, tol)
        if abs(w) > ZERO_CENTERED_TOL:
            raise ClassViolation(
                f"conformal barycenter {w} exceeds the {ZERO_CENTERED_TOL} gate",
                measured=w)
    elif centering != NO_CENTERING:
        raise ValidationError(f"unknown centering class {centering!r}")
    b = BlaschkeProduct(div, centering)
    # re-verify post-construction
    if centering == FIXED_POINT_CENTERED and eval_blaschke(b, 0.0) != 0:
        raise ClassViolation("constructed product does not fix 0")
    return b
