"""Proper holomorphic maps from the round annulus A_r = {r < |z| < 1} onto the disk.

A degree-e map with inner boundary degree delta and zero set {p_1, ..., p_e}
exists iff |p_1 ... p_e| = r^delta, and is then the infinite product

    f(z) = z^(-delta) * B_0(z) * prod_{j >= 1} B_j(z) B_{-j}(z),

where B_j is the Blaschke-type product with zeros p_k r^(2j) and the constant
prefactor making B_j(1) = 1.  We evaluate the truncation f_N and store a
certified upper bound for |f - f_N| on the closed annulus.

Truncation certificate
----------------------
Writing q = r^(2j) and pairing the k-th factors of B_j and B_{-j}, the
deviation of each pair from 1 is a ratio whose numerator minus denominator
factors exactly as (z-1)(1-|p|^2) q [(p + conj(p) z) - (z+1)(1+|p|^2) q
+ (p + conj(p) z) q^2].  Triangle inequalities on |z| <= 1, r < |p| < 1 give

    |pair - 1| <= h(q) := 4 q (1 - r^2) (1+q)^2 / ((1-q)^2 (L-q) (L r - q)),

valid for q < L r, where L is a lower bound for the zero moduli (L = r in
general, L = min_k |p_k| for j = 1).  An alternative magnitude bound,
|B_j B_{-j}| <= |B_{-j}| <= prod_k (q r + |p_k|) / (|p_k| r - q) on the inner
circle, is sharper for moderate q; sup |f_N| takes whichever is smaller per
j, and the tail sum over j > N uses h.  See _truncation_tables.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from .divisors import Annulus, Divisor
from .errors import (ExistenceViolation, IncompleteFiber, OutOfDomain,
                     TruncationOverflow, Unfixable, ValidationError,
                     ZeroOnContour)
from .numerics import DEFAULT_TOL, Contour, Tolerance, winding_number

EXISTENCE_ABS_TOL = 1e-10
TRUNCATION_CAP = 10 ** 5
DOMAIN_EDGE = 1e-9
_LN_HUGE = 700.0


@dataclass(frozen=True)
class ExistenceReport:
    ok: bool
    product_modulus: float
    target: float
    log_residual: float


def _annulus_points(r, zeros):
    if isinstance(zeros, Divisor):
        if isinstance(zeros.ambient, Annulus) and abs(zeros.ambient.r - r) > 1e-12:
            raise ValidationError(
                f"divisor ambient annulus({zeros.ambient.r}) does not match r={r}")
        pts = zeros.points
    else:
        pts = tuple(complex(p) for p in zeros)
    for p in pts:
        if not r < abs(p) < 1.0:
            raise OutOfDomain(f"zero {p} violates r < |p| < 1 for r={r}")
    return pts


def existence_check(r, delta, zeros) -> ExistenceReport:
    """Test the product condition |p_1 ... p_e| = r^delta.

    Returns the boolean verdict (absolute gate 1e-10) together with the
    signed log residual log|prod p| - delta log r.
    """
    pts = _annulus_points(r, zeros)
    if not 1 <= delta < len(pts):
        raise ValidationError(f"delta must satisfy 1 <= delta < e, got {delta}")
    prod_mod = 1.0
    for p in pts:
        prod_mod *= abs(p)
    target = r ** delta
    log_residual = math.log(prod_mod) - delta * math.log(r)
    return ExistenceReport(
        ok=abs(prod_mod - target) <= EXISTENCE_ABS_TOL,
        product_modulus=prod_mod,
        target=target,
        log_residual=log_residual,
    )


def radial_correct(r, delta, zeros) -> Divisor:
    """Rescale all moduli by the common factor solving the product condition.

    The factor is lambda = (r^delta / |prod p|)^(1/e); raises Unfixable if a
    rescaled point would leave the open annulus.
    """
    pts = _annulus_points(r, zeros)
    e = len(pts)
    if not 1 <= delta < e:
        raise ValidationError(f"delta must satisfy 1 <= delta < e, got {delta}")
    prod_mod = 1.0
    for p in pts:
        prod_mod *= abs(p)
    lam = (r ** delta / prod_mod) ** (1.0 / e)
    scaled = tuple(lam * p for p in pts)
    for p in scaled:
        if not r < abs(p) < 1.0:
            raise Unfixable(
                f"common rescale by {lam:.6g} pushes modulus {abs(p):.6g} "
                f"outside ({r}, 1)")
    return Divisor(scaled, Annulus(r))


# ---------------------------------------------------------------------------
# truncation certificate
# ---------------------------------------------------------------------------

def _pair_h(q, lo, r):
    """Certified bound for a single factor pair's deviation from 1 (q < lo*r)."""
    denom = (1.0 - q) ** 2 * (lo - q) * (lo * r - q)
    if denom <= 0.0:
        return math.inf
    return 4.0 * q * (1.0 - r * r) * (1.0 + q) ** 2 / denom


def _sep_log(q, moduli, r):
    """log bound for |B_j B_{-j}| on |z| = r via |B_j| <= 1 and factorwise
    |B_{-j}|; valid for q < r * min moduli, does not vanish as q -> 0."""
    out = 0.0
    for mod in moduli:
        out += math.log((q * r + mod) / (mod * r - q))
    return out


class _TruncationTables:
    """Per-(r, e, zero moduli) data for the certified tail bound.

    ln_max bounds log sup |f_N| on the closed annulus uniformly in N >= 1
    (maximum principle: |f_N| = 1 exactly on |z| = 1, so only the inner
    circle matters; |z^-delta| = r^-delta, |B_0| <= 1, and each j >= 1 pair
    contributes min(pair bound, separate-factor bound)).  suffix_e[k] is a
    bound for sum_{j >= k} |B_j B_{-j} - 1| over the whole closed annulus.
    """

    def __init__(self, r, delta, e, moduli):
        self.r = r
        r2 = r * r
        min_mod = min(moduli)
        hs = []          # h_j with the generic L = r (index 0 <-> j = 1)
        ln_mag = 0.0     # sum of per-j log magnitude bounds for ln_max
        q = r2
        j = 1
        while True:
            h_generic = _pair_h(q, r, r)
            hs.append(h_generic)
            h_here = e * (_pair_h(q, min_mod, r) if j == 1 else h_generic)
            ln_mag += min(h_here, _sep_log(q, moduli, r))
            j += 1
            q *= r2
            if q == 0.0 or (e * hs[-1] < 1e-18 and j > 2):
                break
        # geometric remainder: h(q)/q is increasing, so
        # sum_{j > J} h_j <= h_J * r^2 / (1 - r^2)
        rem_h = hs[-1] * r2 / (1.0 - r2) if math.isfinite(hs[-1]) else 0.0
        ln_mag += e * rem_h
        self.ln_max = max(0.0, -delta * math.log(r) + ln_mag)
        # suffix sums of E_j = expm1(e h_j); entries beyond the table decay
        # geometrically with ratio r^2
        es = [math.expm1(min(e * h, _LN_HUGE)) if math.isfinite(h) else math.inf
              for h in hs]
        suffix = [0.0] * (len(es) + 1)
        for k in range(len(es) - 1, -1, -1):
            suffix[k] = es[k] + suffix[k + 1]
        self._suffix = suffix
        self._e = e
        self._rem_tail = e * rem_h * math.exp(min(e * hs[-1], _LN_HUGE)) \
            if math.isfinite(hs[-1]) else 0.0
        self._h_last = hs[-1]
        self._table_len = len(hs)

    def tail_sum(self, n_trunc):
        """Bound for sum_{j > N} |B_j B_{-j} - 1|; requires N >= 1."""
        r2 = self.r * self.r
        if n_trunc < self._table_len:
            return self._suffix[n_trunc] + self._rem_tail
        # beyond the table: h_j <= h_last * r2^{j - table_len}
        drop = r2 ** (n_trunc - self._table_len + 1)
        h_start = self._h_last * drop
        x = self._e * h_start
        if x > _LN_HUGE:
            return math.inf
        return x * math.exp(x) / (1.0 - r2)

    def ln_tail(self, n_trunc):
        s = self.tail_sum(n_trunc)
        if not math.isfinite(s):
            return math.inf
        if s <= 0.0:
            return -math.inf
        # ln(expm1(s)) <= min(s, ln(s) + s)
        return self.ln_max + min(s, math.log(s) + s)


def _select_truncation(r, delta, e, moduli, tol):
    if tol <= 0.0:
        raise ValidationError(f"truncation tolerance must be positive, got {tol}")
    ln_tol = math.log(tol)
    tables = _TruncationTables(r, delta, e, moduli)

    ln_tail = tables.ln_tail
    if ln_tail(1) < ln_tol:
        return 1, math.exp(ln_tail(1))
    lo, hi = 1, 2
    while hi <= TRUNCATION_CAP and ln_tail(hi) >= ln_tol:
        lo, hi = hi, hi * 2
    if hi > TRUNCATION_CAP:
        if ln_tail(TRUNCATION_CAP) >= ln_tol:
            raise TruncationOverflow(
                f"truncation depth beyond {TRUNCATION_CAP} needed for tol={tol} "
                f"at r={r}")
        hi = TRUNCATION_CAP
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if ln_tail(mid) < ln_tol:
            hi = mid
        else:
            lo = mid
    return hi, math.exp(ln_tail(hi))


# ---------------------------------------------------------------------------
# the map
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class AnnulusProperMap:
    """Truncated canonical product for a proper map A_r -> D of degree e.

    ``build`` is the validated constructor; it enforces the product-modulus
    existence condition at 1e-10.  Direct dataclass construction skips that
    gate (used by negative-control tests) but still checks the structural
    invariants.
    """

    r: float
    delta: int
    zeros: Divisor
    trunc_n: int
    tail_bound: float

    def __post_init__(self):
        if not 0.0 < self.r < 1.0:
            raise ValidationError(f"r must be in (0,1), got {self.r}")
        pts = _annulus_points(self.r, self.zeros)
        if not isinstance(self.zeros.ambient, Annulus):
            object.__setattr__(self, "zeros", Divisor(pts, Annulus(self.r)))
        if not 1 <= self.delta < len(pts):
            raise ValidationError(
                f"delta must be an integer in [1, e), got {self.delta} with e={len(pts)}")
        if self.trunc_n < 1:
            raise ValidationError("truncation depth must be >= 1")
        if self.tail_bound < 0:
            raise ValidationError("tail bound must be nonnegative")

    @property
    def e(self) -> int:
        return self.zeros.e

    def __call__(self, z):
        return evaluate(self, z)

    def to_json(self) -> str:
        return json.dumps({
            "r": self.r,
            "delta": self.delta,
            "zeros": self.zeros.to_json(),
            "N": self.trunc_n,
            "tail_bound": self.tail_bound,
        })

    @classmethod
    def from_json(cls, text: str) -> "AnnulusProperMap":
        data = json.loads(text)
        zeros = Divisor(tuple(complex(a, b) for a, b in data["zeros"]),
                        Annulus(data["r"]))
        return cls(r=data["r"], delta=data["delta"], zeros=zeros,
                   trunc_n=data["N"], tail_bound=data["tail_bound"])


def build(r, delta, zeros, tol=1e-10) -> AnnulusProperMap:
    """Construct the truncated product with a certified tail below tol."""
    pts = _annulus_points(r, zeros)
    e = len(pts)
    if not (isinstance(delta, (int, np.integer)) and 1 <= delta < e):
        raise ValidationError(
            f"delta must be an integer in [1, e); got {delta} with e={e}")
    report = existence_check(r, delta, pts)
    if not report.ok:
        raise ExistenceViolation(
            f"|prod p| = {report.product_modulus!r} vs r^delta = {report.target!r} "
            f"(log residual {report.log_residual:.3e})")
    div = Divisor(pts, Annulus(r))
    n_trunc, tail = _select_truncation(r, delta, e, div.moduli(), tol)
    return AnnulusProperMap(r=float(r), delta=int(delta), zeros=div,
                            trunc_n=n_trunc, tail_bound=tail)


def _product_eval(r, delta, points, n_trunc, zs):
    """Raw truncated product on C*; no domain gate.

    The j and -j factors are evaluated as one pair in the rescaled form
    whose only power of r is q = r^(2j), so deep truncations neither
    overflow nor lose the pair -> 1 limit to underflow; at z = 1 each
    grouped numerator equals its denominator exactly, leaving f(1) - 1 at
    the rounding level of the divisions.
    """
    zs = np.asarray(zs, dtype=complex)
    out = zs ** (-delta)
    for p in points:
        pc = p.conjugate()
        out = out * ((1.0 - pc) * (zs - p)) / ((1.0 - p) * (1.0 - pc * zs))
    r2 = r * r
    q = r2
    for _ in range(n_trunc):
        for p in points:
            pc = p.conjugate()
            num = ((1.0 - pc * q) * (zs - p * q)) * ((q - pc) * (q * zs - p))
            den = ((1.0 - p * q) * (1.0 - pc * q * zs)) * ((q - p) * (q - pc * zs))
            out = out * num / den
        q *= r2
    return out


def evaluate_raw(m: AnnulusProperMap, z):
    """Evaluate the stored product formula anywhere on C*."""
    out = _product_eval(m.r, m.delta, m.zeros.points, m.trunc_n, z)
    return out if isinstance(z, np.ndarray) else complex(out)


def evaluate(m: AnnulusProperMap, z):
    """Evaluate on the closed annulus (with a 1e-9 edge allowance)."""
    zs = np.asarray(z, dtype=complex)
    mags = np.abs(zs)
    if np.any(mags < m.r - DOMAIN_EDGE) or np.any(mags > 1.0 + DOMAIN_EDGE):
        raise OutOfDomain(
            f"evaluation point off the closed annulus [{m.r}, 1]")
    out = _product_eval(m.r, m.delta, m.zeros.points, m.trunc_n, zs)
    return out if isinstance(z, np.ndarray) else complex(out)


def _log_deriv(m, zs):
    """f'/f for the truncated product, in the same rescaled pair form."""
    zs = np.asarray(zs, dtype=complex)
    out = -m.delta / zs
    for p in m.zeros.points:
        pc = p.conjugate()
        out = out + 1.0 / (zs - p) + pc / (1.0 - pc * zs)
    r2 = m.r * m.r
    q = r2
    for _ in range(m.trunc_n):
        for p in m.zeros.points:
            pc = p.conjugate()
            out = out + 1.0 / (zs - p * q) + pc * q / (1.0 - pc * q * zs)
            out = out + q / (q * zs - p) + pc / (q - pc * zs)
        q *= r2
    return out


# ---------------------------------------------------------------------------
# verification
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class VerificationReport:
    boundary_deviation_outer: float
    boundary_deviation_inner: float
    modularity_defect: float
    reflection_defect: float
    inner_degree: int
    outer_degree: int
    eps_inner: float
    eps_outer: float
    samples: int
    seed: int

    @property
    def winding(self):
        """(inner, outer) boundary covering degrees; equals (delta, e - delta)."""
        return (self.inner_degree, self.outer_degree)

    def to_dict(self):
        return {
            "boundary_deviation_outer": self.boundary_deviation_outer,
            "boundary_deviation_inner": self.boundary_deviation_inner,
            "modularity_defect": self.modularity_defect,
            "reflection_defect": self.reflection_defect,
            "winding": [self.inner_degree, self.outer_degree],
            "eps_inner": self.eps_inner,
            "eps_outer": self.eps_outer,
            "samples": self.samples,
            "seed": self.seed,
        }


def verify(m: AnnulusProperMap, samples: int = 512, seed: int = 42,
           tol: Tolerance = DEFAULT_TOL) -> VerificationReport:
    """Check the defining identities of the stored product.

    Reports the max boundary-modulus deviation on both circles, the
    modularity defect |f(r^2 z) - f(z)| and reflection defect
    |1/conj(f(z)) - f(1/conj(z))| on sampled interior points (both sides by
    the raw product formula), and the boundary covering degrees measured by
    the argument principle.  The inner degree is the negative of the
    counterclockwise winding: traversed as the boundary of the annulus, the
    inner circle winds -delta counterclockwise.
    """
    theta = 2.0 * np.pi * np.arange(samples) / samples
    ring = np.exp(1j * theta)
    f_out = evaluate_raw(m, ring)
    f_in = evaluate_raw(m, m.r * ring)
    bd_out = float(np.max(np.abs(np.abs(f_out) - 1.0)))
    bd_in = float(np.max(np.abs(np.abs(f_in) - 1.0)))

    rng = np.random.default_rng(seed)
    zs = (rng.uniform(m.r, 1.0, samples)
          * np.exp(2j * np.pi * rng.uniform(0.0, 1.0, samples)))
    fz = evaluate_raw(m, zs)
    modularity = float(np.max(np.abs(evaluate_raw(m, m.r * m.r * zs) - fz)))
    reflection = float(np.max(np.abs(1.0 / np.conj(fz)
                                     - evaluate_raw(m, 1.0 / np.conj(zs)))))

    moduli = m.zeros.moduli()
    gap_in = min(moduli) - m.r
    gap_out = 1.0 - max(moduli)
    eps_in = min(max(1e-4, gap_in / 2.0), 0.9 * gap_in)
    eps_out = min(max(1e-4, gap_out / 2.0), 0.9 * gap_out)

    def wind_at(radius):
        return winding_number(lambda z: evaluate_raw(m, z),
                              Contour(0.0, radius, 512), tol)

    last_err = None
    for k in range(8):
        try:
            w_in = wind_at(m.r + eps_in)
            break
        except ZeroOnContour as exc:
            last_err = exc
            eps_in *= 0.75
    else:
        raise last_err
    for k in range(8):
        try:
            w_out = wind_at(1.0 - eps_out)
            break
        except ZeroOnContour as exc:
            last_err = exc
            eps_out *= 0.75
    else:
        raise last_err

    return VerificationReport(
        boundary_deviation_outer=bd_out,
        boundary_deviation_inner=bd_in,
        modularity_defect=modularity,
        reflection_defect=reflection,
        inner_degree=-w_in,
        outer_degree=w_out,
        eps_inner=eps_in,
        eps_outer=eps_out,
        samples=samples,
        seed=seed,
    )


# ---------------------------------------------------------------------------
# fibers
# ---------------------------------------------------------------------------

def fiber(m: AnnulusProperMap, w, tol: Tolerance = DEFAULT_TOL) -> Divisor:
    """The e preimages of w, counted with multiplicity.

    Newton iteration on the truncated product from a 64 x 64 seed grid,
    deduplicated at 10*abs_tol; cluster multiplicities are certified by a
    small-circle winding count and must add up to e.
    """
    w = complex(w)
    if abs(w) >= 1.0 - 10.0 * m.tail_bound:
        raise ValidationError(
            f"|w| = {abs(w)} too close to the unit circle for a reliable fiber")
    side = 64
    rho = np.geomspace(m.r * (1.0 + 1e-3), 1.0 - 1e-3, side)
    ang = 2.0 * np.pi * (np.arange(side) + 0.37) / side
    zs = (rho[:, None] * np.exp(1j * ang)[None, :]).ravel()

    alive = np.ones(zs.shape, dtype=bool)
    for _ in range(80):
        with np.errstate(all="ignore"):
            fz = _product_eval(m.r, m.delta, m.zeros.points, m.trunc_n, zs[alive])
            ld = _log_deriv(m, zs[alive])
            step = (fz - w) / (fz * ld)
            step = np.where(np.isfinite(step), step, 0.0)
            step = np.where(np.abs(step) > 0.25, 0.25 * step / np.abs(step), step)
        znew = zs[alive] - step
        zs[alive] = znew
        bad = (np.abs(znew) < 0.5 * m.r) | (np.abs(znew) > 1.5) | ~np.isfinite(znew)
        idx = np.flatnonzero(alive)
        alive[idx[bad]] = False
        if not alive.any():
            break

    cand = zs[alive]
    if cand.size:
        resid = np.abs(
            _product_eval(m.r, m.delta, m.zeros.points, m.trunc_n, cand) - w)
        cand = cand[resid <= max(tol.abs_tol * 100.0, m.tail_bound * 10.0 + tol.abs_tol)]
    cand = cand[(np.abs(cand) > m.r) & (np.abs(cand) < 1.0)]
    if cand.size == 0:
        raise IncompleteFiber("no preimage certified")

    clusters = _cluster_complex(cand, 10.0 * tol.abs_tol)
    centers = [c.mean() for c in clusters]
    points = []
    for i, (c, members) in enumerate(zip(centers, clusters)):
        spread = float(np.max(np.abs(members - c))) if members.size > 1 else 0.0
        radius = max(50.0 * tol.abs_tol, 4.0 * spread)
        others = [abs(c - o) for k, o in enumerate(centers) if k != i]
        if others:
            radius = min(radius, 0.4 * min(others))
        radius = max(radius, 1e-12)
        try:
            mult = winding_number(
                lambda z: _product_eval(m.r, m.delta, m.zeros.points,
                                        m.trunc_n, z) - w,
                Contour(complex(c), radius, 256), tol)
        except ZeroOnContour as exc:
            raise IncompleteFiber(f"could not certify multiplicity near {c}") from exc
        if mult < 1:
            raise IncompleteFiber(f"nonpositive multiplicity near {c}")
        points.extend([complex(c)] * mult)
    if len(points) != m.e:
        raise IncompleteFiber(
            f"certified {len(points)} preimages (with multiplicity), expected {m.e}")
    return Divisor(tuple(points), Annulus(m.r))


def _cluster_complex(zs, radius):
    pts = list(zs)
    clusters = []
    while pts:
        seed = pts.pop(0)
        members = [seed]
        changed = True
        while changed:
            changed = False
            rest = []
            for p in pts:
                if any(abs(p - q) <= radius for q in members):
                    members.append(p)
                    changed = True
                else:
                    rest.append(p)
            pts = rest
        clusters.append(np.asarray(members))
    return clusters
