"""Coordinates on the space of annulus-to-disk proper maps.

A map is determined by (r, zero set); pushing the zeros through the radial
homeomorphism phi_r(p) = ((|p|-r)/(1-|p|)) p/|p| and normalizing the product
modulus identifies the fixed-r slice with the product-modulus-1 divisors of
C*; elementary symmetric functions then give global coordinates, and
t = tan((r - 1/2) pi) absorbs the radius.  The inverse direction solves
g(t) = prod (|zeta_k| + t r)/(|zeta_k| + t) = r^delta for its unique root.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .annulus import existence_check, radial_correct
from .divisors import Annulus, Divisor, PuncturedPlane
from .errors import OutOfDomain, ValidationError
from .numerics import DEFAULT_TOL, Tolerance, find_root_monotone

NORMALIZED_PRODUCT_TOL = 1e-10
MAX_SYM_POINTS = 64
BALANCED_TOL = 1e-10

LEANED = "leaned"
BALANCED = "balanced"


@dataclass(frozen=True)
class NormalizedDivisor:
    """Divisor in C* with product modulus 1."""

    points: Divisor

    def __post_init__(self):
        pts = self.points
        if not isinstance(pts, Divisor):
            pts = Divisor(tuple(complex(p) for p in pts), PuncturedPlane())
            object.__setattr__(self, "points", pts)
        if not isinstance(pts.ambient, PuncturedPlane):
            object.__setattr__(
                self, "points", Divisor(pts.points, PuncturedPlane()))
        prod_mod = abs(self.points.product())
        if abs(prod_mod - 1.0) > NORMALIZED_PRODUCT_TOL:
            raise ValidationError(
                f"product modulus {prod_mod!r} not 1 within {NORMALIZED_PRODUCT_TOL}")

    @property
    def e(self):
        return self.points.e


@dataclass(frozen=True)
class ModelCoordinates:
    """(tan-transformed radius, c_1..c_{e-1}, unit phase)."""

    t: float
    c: tuple
    phase: complex

    def __post_init__(self):
        if abs(abs(self.phase) - 1.0) > 1e-12:
            raise ValidationError(f"|phase| = {abs(self.phase)!r} is not 1")

    def to_dict(self):
        return {
            "t": self.t,
            "c": [[z.real, z.imag] for z in self.c],
            "phase": [self.phase.real, self.phase.imag],
        }


def _point_map(p, r):
    mod = abs(p)
    return (mod - r) / (1.0 - mod) * (p / mod)


def phi_r(zeros, r=None) -> NormalizedDivisor:
    """Push annulus zeros to C* and normalize the product modulus to 1."""
    if isinstance(zeros, Divisor) and isinstance(zeros.ambient, Annulus):
        r = zeros.ambient.r if r is None else r
    if r is None:
        raise ValidationError("phi_r needs the annulus radius")
    pts = zeros.points if isinstance(zeros, Divisor) else tuple(map(complex, zeros))
    for p in pts:
        if not r < abs(p) < 1.0:
            raise OutOfDomain(f"zero {p} outside the open annulus ({r}, 1)")
    mapped = [_point_map(p, r) for p in pts]
    prod_mod = 1.0
    for q in mapped:
        prod_mod *= abs(q)
    # positive real e-th root of the modulus; only moduli are rooted
    scale = prod_mod ** (1.0 / len(mapped))
    return NormalizedDivisor(
        Divisor(tuple(q / scale for q in mapped), PuncturedPlane()))


def _g_factory(moduli, r):
    def g(t):
        out = 1.0
        for m in moduli:
            out *= (m + t * r) / (m + t)
        return out
    return g


def psi_r(nd: NormalizedDivisor, r, delta, tol: Tolerance = DEFAULT_TOL) -> Divisor:
    """Inverse of phi_r onto the existence locus for (r, delta).

    Finds the unique t0 with g(t0) = r^delta (g decreases from 1 to r^e),
    then rescales each point's modulus to (|zeta| + t0 r)/(|zeta| + t0).
    """
    if not 0.0 < r < 1.0:
        raise ValidationError(f"r must be in (0,1), got {r}")
    e = nd.e
    if not 1 <= delta < e:
        raise ValidationError(f"delta must be in [1, e), got {delta}")
    moduli = [abs(p) for p in nd.points.points]
    g = _g_factory(moduli, r)
    target = r ** delta
    lo, hi = 1e-12, 1.0
    while g(lo) < target and lo > 1e-300:
        lo *= 1e-2
    while g(hi) > target and hi < 1e300:
        hi *= 4.0
    t0 = find_root_monotone(g, (lo, hi), target,
                            Tolerance(min(tol.abs_tol, 1e-13), tol.max_iter))
    pts = tuple((abs(p) + t0 * r) / (abs(p) + t0) * (p / abs(p))
                for p in nd.points.points)
    # final exact rescale so the product condition holds to rounding error
    return radial_correct(r, delta, pts)


def sym_e(points):
    """Elementary symmetric coefficients c_1..c_e of the monic polynomial.

    Convention: (z - z_1)...(z - z_e) = z^e + sum_k (-1)^k c_k z^{e-k}.
    """
    if isinstance(points, NormalizedDivisor):
        pts = points.points.points
    elif isinstance(points, Divisor):
        pts = points.points
    else:
        pts = tuple(complex(p) for p in points)
    if len(pts) > MAX_SYM_POINTS:
        raise ValidationError(f"size cap is {MAX_SYM_POINTS} points")
    coeffs = np.zeros(len(pts) + 1, dtype=complex)
    coeffs[0] = 1.0
    for k, p in enumerate(pts):
        coeffs[1:k + 2] = coeffs[1:k + 2] + p * coeffs[0:k + 1]
    return tuple(coeffs[1:])


def coefficients_to_polynomial(c):
    """Descending monic coefficients [1, -c1, +c2, ...] from c_1..c_e."""
    out = [1.0 + 0.0j]
    for k, ck in enumerate(c, start=1):
        out.append((-1.0) ** k * ck)
    return out


def to_model_coordinates(r, zeros, delta=None) -> ModelCoordinates:
    """Global coordinates (tan((r-1/2) pi), c_1..c_{e-1}, c_e/|c_e|)."""
    if not 0.0 < r < 1.0:
        raise OutOfDomain(f"r must be in (0,1), got {r}")
    if delta is not None:
        report = existence_check(r, delta, zeros)
        if not report.ok:
            raise ValidationError(
                f"zeros fail the (e,{delta}) existence condition: "
                f"log residual {report.log_residual:.3e}")
    nd = phi_r(zeros, r)
    c = sym_e(nd)
    t = math.tan((r - 0.5) * math.pi)
    return ModelCoordinates(t=t, c=c[:-1], phase=c[-1] / abs(c[-1]))


def from_model_coordinates(mc: ModelCoordinates, delta,
                           tol: Tolerance = DEFAULT_TOL):
    """Invert the coordinates: recover (r, zeros) via polynomial roots."""
    from .numerics import polynomial_roots

    r = math.atan(mc.t) / math.pi + 0.5
    coeffs = coefficients_to_polynomial(tuple(mc.c) + (mc.phase,))
    roots = polynomial_roots(coeffs, tol)
    nd = NormalizedDivisor(Divisor(roots.points, PuncturedPlane()))
    return r, psi_r(nd, r, delta, tol)


def mobius_band_point(u, v):
    """Parametrization of the balanced locus as a band in R^3."""
    if not 0.0 <= u <= 1.0 or not -1.0 <= v <= 1.0:
        raise OutOfDomain(f"(u, v) = ({u}, {v}) outside [0,1] x [-1,1]")
    w = 2.0 + math.cos(math.pi * v) * math.cos(math.pi * u)
    return (w * math.cos(2.0 * math.pi * u),
            w * math.sin(2.0 * math.pi * u),
            math.cos(math.pi * v) * math.sin(math.pi * u))


def balanced_locus_classifier(zeros) -> str:
    """For a degree-2 zero set: 'balanced' iff the two moduli agree."""
    pts = zeros.points if isinstance(zeros, Divisor) else tuple(map(complex, zeros))
    if len(pts) != 2:
        raise ValidationError("classifier is defined for e = 2 only")
    return BALANCED if abs(abs(pts[0]) - abs(pts[1])) <= BALANCED_TOL else LEANED
