"""Harmonic measures on circle domains and the divisor criterion for proper maps.

A circle domain is bounded by an outer round circle and g >= 1 disjoint inner
circles.  The harmonic measure of boundary circle k is the harmonic function
with value 1 there and 0 on the rest; a divisor is the zero set of a proper
map onto the disk with prescribed boundary degrees d_k iff its harmonic
measure sums hit the d_k exactly.

Measures are solved by least-squares collocation in the classical basis
(constant, log |z - c_j|, Laurent powers about each inner center, Taylor
powers about the outer center).  For the concentric annulus the closed form
log|z| / log r is available and exact.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .divisors import CircleDomainAmbient, Divisor
from .errors import (NoConvergence, OutOfDomain, Stuck, ValidationError)
from .numerics import DEFAULT_TOL, Tolerance

COLLOCATION_POINTS = 256
RESIDUAL_POINTS = 512
M_START = 8
M_CAP = 128
SEPARATION = 1e-6


@dataclass(frozen=True)
class Circle:
    center: complex
    radius: float

    def __post_init__(self):
        if self.radius <= 0:
            raise ValidationError(f"circle radius must be positive, got {self.radius}")

    def boundary(self, n):
        theta = 2.0 * np.pi * np.arange(n) / n
        return self.center + self.radius * np.exp(1j * theta)


@dataclass(frozen=True)
class CircleDomain:
    """Genus-g circle domain with per-boundary target degrees.

    ``degrees[0]`` belongs to the outer boundary, ``degrees[k]`` to inner
    circle k.
    """

    outer: Circle
    inner: tuple
    degrees: tuple

    def __post_init__(self):
        inner = tuple(self.inner)
        object.__setattr__(self, "inner", inner)
        object.__setattr__(self, "degrees", tuple(int(d) for d in self.degrees))
        if len(inner) < 1:
            raise ValidationError("need at least one inner circle (g >= 1)")
        if len(self.degrees) != len(inner) + 1:
            raise ValidationError("need one degree per boundary circle")
        if any(d < 1 for d in self.degrees):
            raise ValidationError("boundary degrees must be positive integers")
        for c in inner:
            if (abs(c.center - self.outer.center) + c.radius
                    > self.outer.radius - SEPARATION):
                raise ValidationError(
                    f"inner circle {c} not separated from the outer boundary")
        for i, a in enumerate(inner):
            for b in inner[i + 1:]:
                if abs(a.center - b.center) < a.radius + b.radius + SEPARATION:
                    raise ValidationError(
                        f"inner circles {a} and {b} not separated by {SEPARATION}")

    @property
    def genus(self):
        return len(self.inner)

    def contains(self, z):
        if abs(z - self.outer.center) >= self.outer.radius:
            return False
        return all(abs(z - c.center) > c.radius for c in self.inner)

    def is_concentric_annulus(self):
        return (self.genus == 1
                and abs(self.inner[0].center - self.outer.center) < 1e-12)

    def to_json(self):
        return {
            "outer": {"c": [self.outer.center.real, self.outer.center.imag],
                      "r": self.outer.radius},
            "inner": [{"c": [c.center.real, c.center.imag], "r": c.radius}
                      for c in self.inner],
            "degrees": list(self.degrees),
        }

    @classmethod
    def from_json(cls, data):
        outer = Circle(complex(*data["outer"]["c"]), data["outer"]["r"])
        inner = tuple(Circle(complex(*c["c"]), c["r"]) for c in data["inner"])
        return cls(outer, inner, tuple(data["degrees"]))


def harmonic_measure_annulus(r, z):
    """Closed form for the standard annulus: log|z| / log r."""
    mod = abs(z)
    if not r - 1e-12 <= mod <= 1.0 + 1e-12:
        raise OutOfDomain(f"|z| = {mod} outside [{r}, 1]")
    mod = min(max(mod, r), 1.0)
    return math.log(mod) / math.log(r)


def _basis_matrix(dom: CircleDomain, zs, m_terms):
    """Columns: 1, log distances, inner Laurent powers, outer Taylor powers."""
    zs = np.asarray(zs, dtype=complex).ravel()
    cols = [np.ones(zs.size)]
    for c in dom.inner:
        cols.append(np.log(np.abs(zs - c.center)))
    for c in dom.inner:
        w = c.radius / (zs - c.center)
        wp = w.copy()
        for _ in range(m_terms):
            cols.append(wp.real)
            cols.append(wp.imag)
            wp = wp * w
    w = (zs - dom.outer.center) / dom.outer.radius
    wp = w.copy()
    for _ in range(m_terms):
        cols.append(wp.real)
        cols.append(wp.imag)
        wp = wp * w
    return np.column_stack(cols)


@dataclass(frozen=True)
class HarmonicMeasure:
    """Solved harmonic measure of one boundary circle."""

    domain: CircleDomain
    which: int
    coefficients: tuple
    m_terms: int
    residual: float
    condition_number: float

    def __call__(self, z):
        zs = np.asarray(z, dtype=complex)
        vals = _basis_matrix(self.domain, zs.ravel(), self.m_terms) @ np.asarray(
            self.coefficients)
        vals = vals.reshape(zs.shape) if zs.shape else float(vals[0])
        return vals


def _boundary_data(dom, which, n):
    zs = []
    target = []
    circles = [dom.outer] + list(dom.inner)
    for k, c in enumerate(circles):
        zs.append(c.boundary(n))
        target.append(np.full(n, 1.0 if k == which else 0.0))
    return np.concatenate(zs), np.concatenate(target)


def _solve_with_m(dom, which, m_terms):
    zs, target = _boundary_data(dom, which, COLLOCATION_POINTS)
    a = _basis_matrix(dom, zs, m_terms)
    coeff, _, _, svals = np.linalg.lstsq(a, target, rcond=None)
    cond = float(svals[0] / svals[-1]) if svals[-1] > 0 else math.inf
    zs_fine, target_fine = _boundary_data(dom, which, RESIDUAL_POINTS)
    resid = float(np.max(np.abs(
        _basis_matrix(dom, zs_fine, m_terms) @ coeff - target_fine)))
    return coeff, resid, cond


def solve_harmonic_measure(dom: CircleDomain, which: int, tol=1e-10) -> HarmonicMeasure:
    """Collocation solve for the measure of boundary circle ``which`` (1..g).

    The truncation order M doubles from 8 until the boundary max-residual on
    a refinement grid drops below tol, capping at 128.
    """
    if not 0 <= which <= dom.genus:
        raise ValidationError(f"boundary index must be in [0, {dom.genus}]")
    if isinstance(tol, Tolerance):
        tol = tol.abs_tol
    best = None
    m_terms = M_START
    while True:
        coeff, resid, cond = _solve_with_m(dom, which, m_terms)
        if best is None or resid < best[1]:
            best = (coeff, resid, cond, m_terms)
        if resid < tol or m_terms >= M_CAP:
            break
        m_terms *= 2
    coeff, resid, cond, m_terms = best
    if resid >= max(tol, 1e-6):
        raise NoConvergence(
            f"collocation residual {resid:.3e} did not reach {max(tol, 1e-6)}")
    return HarmonicMeasure(domain=dom, which=which,
                           coefficients=tuple(float(c) for c in coeff),
                           m_terms=m_terms, residual=resid,
                           condition_number=cond)


@dataclass(frozen=True)
class AbelReport:
    sums: tuple
    targets: tuple
    residuals: tuple
    passes: tuple
    ok: bool
    solver_residual: float
    tolerance: float

    def to_dict(self):
        return {
            "sums": list(self.sums),
            "targets": list(self.targets),
            "residuals": list(self.residuals),
            "passes": list(self.passes),
            "ok": self.ok,
            "solver_residual": self.solver_residual,
            "tolerance": self.tolerance,
        }


def _domain_points(dom, zeros):
    pts = zeros.points if isinstance(zeros, Divisor) else tuple(map(complex, zeros))
    for p in pts:
        if not dom.contains(p):
            raise OutOfDomain(f"zero {p} not inside the circle domain")
    return pts


def abel_condition(dom: CircleDomain, zeros, tol=1e-8,
                   measures=None) -> AbelReport:
    """Evaluate the harmonic-measure sums against the boundary degrees.

    Passes coordinate k iff |sum_j u_k(p_j) - d_k| <= max(tol, 10 * solver
    residual).  ``measures`` may carry pre-solved measures for reuse.
    """
    pts = _domain_points(dom, zeros)
    if len(pts) != sum(dom.degrees):
        raise ValidationError(
            f"divisor has {len(pts)} points but degrees sum to {sum(dom.degrees)}")
    if measures is None:
        measures = [solve_harmonic_measure(dom, k) for k in range(1, dom.genus + 1)]
    zs = np.asarray(pts)
    sums = tuple(float(np.sum(u(zs))) for u in measures)
    solver_residual = max(u.residual for u in measures)
    gate = max(tol, 10.0 * solver_residual)
    targets = tuple(float(d) for d in dom.degrees[1:])
    residuals = tuple(s - t for s, t in zip(sums, targets))
    passes = tuple(abs(res) <= gate for res in residuals)
    return AbelReport(sums=sums, targets=targets, residuals=residuals,
                      passes=passes, ok=all(passes),
                      solver_residual=solver_residual, tolerance=gate)


def abel_adjust(dom: CircleDomain, zeros, tol=1e-8) -> Divisor:
    """Move up to g designated zeros radially until the criterion passes.

    Newton on the g-dimensional residual of abel_condition, each designated
    zero sliding along the ray from its inner circle's center.  Zeros are
    designated greedily: for each inner circle, the nearest not-yet-designated
    zero.
    """
    if dom.genus > 3:
        raise ValidationError("radial adjustment supports g <= 3")
    pts = list(_domain_points(dom, zeros))
    g = dom.genus
    measures = [solve_harmonic_measure(dom, k) for k in range(1, g + 1)]

    report = abel_condition(dom, pts, tol, measures)
    if report.ok:
        return Divisor(tuple(pts), CircleDomainAmbient(dom))

    designated = []
    for circle in dom.inner:
        order = sorted((abs(p - circle.center), i) for i, p in enumerate(pts)
                       if i not in designated)
        designated.append(order[0][1])

    def residual_vec(current):
        rep = abel_condition(dom, current, tol, measures)
        return np.asarray(rep.residuals)

    def moved(current, shifts):
        out = list(current)
        for idx, circle, ds in zip(designated, dom.inner, shifts):
            p = out[idx]
            direction = (p - circle.center) / abs(p - circle.center)
            out[idx] = p + ds * direction
        return out

    current = pts
    fvec = residual_vec(current)
    gate = max(tol, 10.0 * max(u.residual for u in measures))
    for _ in range(60):
        if np.max(np.abs(fvec)) <= gate:
            return Divisor(tuple(current), CircleDomainAmbient(dom))
        step_h = 1e-6
        jac = np.zeros((g, g))
        for i in range(g):
            shifts = [0.0] * g
            shifts[i] = step_h
            jac[:, i] = (residual_vec(moved(current, shifts)) - fvec) / step_h
        try:
            delta = np.linalg.solve(jac, -fvec)
        except np.linalg.LinAlgError as exc:
            raise NoConvergence("singular Jacobian in radial adjustment") from exc
        scale = 1.0
        for _ in range(40):
            cand = moved(current, scale * delta)
            if all(dom.contains(p) for p in cand):
                cand_f = residual_vec(cand)
                if np.max(np.abs(cand_f)) < np.max(np.abs(fvec)):
                    current, fvec = cand, cand_f
                    break
            scale *= 0.5
        else:
            raise Stuck("radial move would exit the domain or stalled")
    raise NoConvergence("radial adjustment did not reach the tolerance")
