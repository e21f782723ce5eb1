"""Desk-scale dynamics for the family z -> z^m + c z^(-ell).

For small |c| the Julia set is a Cantor set of circles; the classifier
certifies the finite critical orbits escape, locates the non-escaping set's
radial bands along rays, measures covering degrees by winding numbers in the
Fatou gaps, and reports the mapping-scheme data.  A raster escape-time
renderer reproduces the picture.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import (NotCantorCircle, NotHyperbolicEvidence, OutOfDomain,
                     ValidationError)
from .numerics import DEFAULT_TOL, Contour, winding_number
from .schemes import TYPE_I, is_admissible

ESCAPED = "escaped_to_infinity"
CYCLE = "converged_near_zero_cycle"
UNDECIDED = "undecided"


@dataclass(frozen=True)
class McMullenMap:
    """z -> z^m + c z^(-ell).  Cantor-circle candidates need 1/m + 1/ell < 1."""

    m: int
    ell: int
    c: complex

    def __post_init__(self):
        if self.m < 2 or self.ell < 2:
            raise ValidationError("powers m and ell must both be >= 2")
        object.__setattr__(self, "c", complex(self.c))

    @property
    def cantor_candidate(self) -> bool:
        return Fraction(1, self.m) + Fraction(1, self.ell) < 1 and self.c != 0

    def __call__(self, z):
        if self.c == 0:
            return z ** self.m
        return z ** self.m + self.c * z ** (-self.ell)

    def critical_points(self):
        """The m + ell finite nonzero critical points (equal modulus)."""
        k = self.m + self.ell
        if self.c == 0:
            return tuple()
        base = (self.c * self.ell / self.m) ** (1.0 / k)
        return tuple(base * cmath.exp(2j * cmath.pi * j / k) for j in range(k))


@dataclass(frozen=True)
class OrbitSummary:
    status: str
    steps: int


def _inner_trap_radius(f: McMullenMap, escape_radius):
    # inside this radius the pole term alone exceeds 2 * escape_radius
    if f.c == 0:
        return 0.0
    return (abs(f.c) / (2.0 * escape_radius)) ** (1.0 / f.ell)


def iterate(f: McMullenMap, z, max_iter=200, escape_radius=1e6) -> OrbitSummary:
    """Classify one orbit: escape, convergence to a finite cycle, or undecided.

    Entry into the inner trap |z| < (|c| / 2R)^(1/ell) is counted as an
    escape through the pole, one step later, without evaluating the overflow.
    """
    if escape_radius < 10:
        raise ValidationError("escape radius must be >= 10")
    if max_iter > 10 ** 5:
        raise ValidationError("max_iter capped at 1e5")
    z = complex(z)
    trap = _inner_trap_radius(f, escape_radius)
    history = []
    for step in range(max_iter + 1):
        mod = abs(z)
        if not math.isfinite(mod) or mod > escape_radius:
            return OrbitSummary(ESCAPED, step)
        if mod < trap:
            return OrbitSummary(ESCAPED, step + 1)
        if mod == 0.0:
            return OrbitSummary(ESCAPED, step + 1) if f.c != 0 else \
                OrbitSummary(CYCLE, step)
        for old in history:
            if abs(z - old) <= 1e-13 * max(1.0, mod):
                return OrbitSummary(CYCLE, step)
        history.append(z)
        if len(history) > 24:
            history.pop(0)
        z = f(z)
    return OrbitSummary(UNDECIDED, max_iter)


def escape_steps(f: McMullenMap, zs, budget, escape_radius=1e6):
    """Vectorized escape times; budget + 1 marks 'did not escape'."""
    zs = np.asarray(zs, dtype=complex)
    shape = zs.shape
    z = zs.ravel().copy()
    steps = np.full(z.shape, budget + 1, dtype=np.int64)
    trap = _inner_trap_radius(f, escape_radius)
    active = np.ones(z.shape, dtype=bool)
    mods = np.abs(z)
    out_now = ~np.isfinite(mods) | (mods > escape_radius)
    steps[out_now] = 0
    active &= ~out_now
    trapped = active & (mods < trap)
    steps[trapped] = 1
    active &= ~trapped
    for k in range(1, budget + 1):
        if not active.any():
            break
        za = z[active]
        with np.errstate(all="ignore"):
            if f.c == 0:
                za = za ** f.m
            else:
                za = za ** f.m + f.c * za ** (-f.ell)
        z[active] = za
        mods = np.abs(za)
        esc = ~np.isfinite(mods) | (mods > escape_radius)
        trapped = (mods < trap) & ~esc
        idx = np.flatnonzero(active)
        steps[idx[esc]] = k
        steps[idx[trapped]] = k + 1
        active[idx[esc | trapped]] = False
    return steps.reshape(shape)


# ---------------------------------------------------------------------------
# classification
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ClassifyParams:
    rays: int = 8
    escape_radius: float = 1e6
    member_budget: int = 200
    crit_budget: int = 10 ** 4
    scan_points: int = 8192
    radius_precision: float = 1e-6
    rho_lo: float = 1e-4
    band_threshold: int = 7          # exit level at and above which a sample
                                     # counts as Julia-band material
    gap_log_floor: float = 0.02      # significant Fatou gap: log(hi/lo) >= this
    ray_agreement_log: float = 0.10  # cross-ray tolerance on log-radii
    winding_samples: int = 2048


def certified_escape_zone(f: McMullenMap) -> float:
    """Radius beyond which |f(z)| >= 2 |z|, so escape is monotone.

    For |z| >= ((2 + |c|))^(1/(m-1)) one has |z|^(m-1) - |c| >= 2 (using
    |z| >= 1), hence |f(z)| >= |z|^m - |c| |z|^(-ell) >= 2 |z|.
    """
    return 1.05 * max(1.5, (2.0 + abs(f.c)) ** (1.0 / (f.m - 1)))


def exit_times(f: McMullenMap, zs, budget):
    """Steps until the orbit first enters the certified escape zone.

    This is the level function of the Cantor construction: 0 on the outer
    disk beyond the zone, small and locally constant on each Fatou gap
    (one more than the level of the gap), and growing without bound as the
    starting point approaches the Julia set.  budget + 1 marks 'not yet'.
    """
    zone = certified_escape_zone(f)
    zs = np.asarray(zs, dtype=complex)
    shape = zs.shape
    z = zs.ravel().copy()
    steps = np.full(z.shape, budget + 1, dtype=np.int64)
    active = np.ones(z.shape, dtype=bool)
    mods = np.abs(z)
    done = mods > zone
    steps[done] = 0
    active &= ~done
    for k in range(1, budget + 1):
        if not active.any():
            break
        za = z[active]
        with np.errstate(all="ignore"):
            za = za ** f.m + f.c * za ** (-f.ell)
        z[active] = za
        mods = np.abs(za)
        out = ~np.isfinite(mods) | (mods > zone)
        idx = np.flatnonzero(active)
        steps[idx[out]] = k
        active[idx[out]] = False
    return steps.reshape(shape)


@dataclass(frozen=True)
class DetectedAnnulus:
    lo: float
    hi: float
    degree: int
    winding: int

    @property
    def log_modulus(self):
        return math.log(self.hi / self.lo) / (2.0 * math.pi)


@dataclass(frozen=True)
class ClassificationReport:
    is_cantor_circle: bool
    n: int
    degrees: tuple
    annuli: tuple          # DetectedAnnulus, inner to outer
    moduli: tuple          # round-annulus modulus estimates of the annuli
    central_annulus: tuple  # (rho_min, rho_max): between the two disks
    scheme_type_after_normalization: str
    critical_steps: tuple
    notes: str = ""

    def to_dict(self):
        return {
            "is_cantor_circle": self.is_cantor_circle,
            "n": self.n,
            "degrees": list(self.degrees),
            "annuli": [[a.lo, a.hi] for a in self.annuli],
            "windings": [a.winding for a in self.annuli],
            "moduli": list(self.moduli),
            "central_annulus": list(self.central_annulus),
            "scheme_type_after_normalization": self.scheme_type_after_normalization,
            "critical_steps": list(self.critical_steps),
            "notes": self.notes,
        }


def _ray_bands(f, theta, params):
    """Julia-band radial intervals along one ray, edges bisected.

    A sample belongs to a band when its exit level reaches band_threshold;
    gaps are the low-level Fatou segments in between.
    """
    rho_hi = 1.2 * certified_escape_zone(f)
    rho = np.geomspace(params.rho_lo, rho_hi, params.scan_points)
    zs = rho * np.exp(1j * theta)
    steps = exit_times(f, zs, params.member_budget)
    stay = steps >= params.band_threshold
    bands = []
    i = 0
    n = len(rho)
    while i < n:
        if stay[i]:
            j = i
            while j + 1 < n and stay[j + 1]:
                j += 1
            lo = rho[i] if i == 0 else _bisect_edge(
                f, theta, rho[i - 1], rho[i], params)
            hi = rho[j] if j == n - 1 else _bisect_edge(
                f, theta, rho[j + 1], rho[j], params)
            bands.append((lo, hi))
            i = j + 1
        else:
            i += 1
    return bands


def _bisect_edge(f, theta, rho_out, rho_in, params):
    """Bisect between a below-threshold radius and a band radius."""
    for _ in range(60):
        if abs(rho_out - rho_in) <= params.radius_precision:
            break
        mid = 0.5 * (rho_out + rho_in)
        s = exit_times(f, np.array([mid * np.exp(1j * theta)]),
                       params.member_budget)[0]
        if s >= params.band_threshold:
            rho_in = mid
        else:
            rho_out = mid
    return rho_in


def _merge_small_gaps(bands, gap_log_floor):
    """Join bands separated by gaps below the significance floor."""
    if not bands:
        return bands
    merged = [list(bands[0])]
    for lo, hi in bands[1:]:
        if math.log(lo / merged[-1][1]) < gap_log_floor:
            merged[-1][1] = hi
        else:
            merged.append([lo, hi])
    return [tuple(b) for b in merged]


def _winding_at(f, rho, params, tol=DEFAULT_TOL):
    for shift in (1.0, 1.01, 0.99, 1.02):
        try:
            return winding_number(lambda z: f(z),
                                  Contour(0.0, rho * shift,
                                          params.winding_samples), tol)
        except Exception:
            continue
    raise NotCantorCircle(f"could not measure a winding number near rho={rho}")


def classify_cantor_circle(f: McMullenMap, params: ClassifyParams = None
                           ) -> ClassificationReport:
    """Certify the Cantor-circle picture and measure its combinatorics.

    Steps: (i) all finite critical orbits escape; (ii) radial band structure
    located along rays and merged across them; (iii) winding numbers in the
    significant Fatou gaps split the bands into preimage annuli and give the
    degrees; (iv) degrees must sum to m + ell and be admissible.
    """
    params = params or ClassifyParams()
    if not f.cantor_candidate:
        raise ValidationError(
            f"1/{f.m} + 1/{f.ell} >= 1 or c = 0: not a Cantor-circle candidate")

    crit_steps = []
    for cp in f.critical_points():
        summary = iterate(f, cp, max_iter=params.crit_budget,
                          escape_radius=params.escape_radius)
        if summary.status != ESCAPED:
            raise NotHyperbolicEvidence(
                f"critical orbit at {cp} is {summary.status}", detail=summary)
        crit_steps.append(summary.steps)

    thetas = [2.0 * math.pi * k / params.rays + 0.05 for k in range(params.rays)]
    per_ray = []
    for theta in thetas:
        bands = _merge_small_gaps(_ray_bands(f, theta, params),
                                  params.gap_log_floor)
        if not bands:
            raise NotCantorCircle(f"no Julia band found along ray {theta}")
        per_ray.append(bands)

    # the inner and outer Julia circles must be circle-like across rays
    inner_edges = [b[0][0] for b in per_ray]
    outer_edges = [b[-1][1] for b in per_ray]
    if (math.log(max(inner_edges) / min(inner_edges)) > params.ray_agreement_log
            or math.log(max(outer_edges) / min(outer_edges))
            > params.ray_agreement_log):
        raise NotCantorCircle("innermost/outermost band edges disagree across rays")

    # union envelope across rays: a radius is band material if any ray says so
    all_bands = sorted(b for bands in per_ray for b in bands)
    bands = [list(all_bands[0])]
    for lo, hi in all_bands[1:]:
        if lo <= bands[-1][1] or math.log(lo / bands[-1][1]) < params.gap_log_floor:
            bands[-1][1] = max(bands[-1][1], hi)
        else:
            bands.append([lo, hi])
    bands = [tuple(b) for b in bands]
    nbands = len(bands)

    rho_min, rho_max = bands[0][0], bands[-1][1]

    # winding on each side of every significant interior gap
    gaps = [(bands[i][1], bands[i + 1][0]) for i in range(nbands - 1)]
    w_inner = _winding_at(f, rho_min * 0.8, params)
    w_outer = _winding_at(f, rho_max * 1.15, params)
    splits = []
    cluster_winding = [w_inner]
    for glo, ghi in gaps:
        left = _winding_at(f, glo * (ghi / glo) ** 0.08, params)
        right = _winding_at(f, glo * (ghi / glo) ** 0.92, params)
        if left != cluster_winding[-1]:
            raise NotCantorCircle(
                "winding changed inside a band cluster; gap structure unsound")
        if right != left:
            splits.append((glo, ghi))
            cluster_winding.append(right)
    if cluster_winding[-1] != w_outer:
        raise NotCantorCircle("outermost winding does not match the outer disk")

    n = len(splits)
    if n < 1:
        raise NotCantorCircle("no critical annular Fatou component detected")

    # cluster spans between splitting gaps
    spans = []
    span_lo = bands[0][0]
    bi = 0
    for glo, ghi in splits:
        # bands until the one whose hi == glo
        while bands[bi][1] < glo - 1e-15:
            bi += 1
        spans.append((span_lo, bands[bi][1]))
        bi += 1
        span_lo = bands[bi][0]
    spans.append((span_lo, bands[-1][1]))

    degrees = tuple(abs(w) for w in cluster_winding)
    annuli = tuple(DetectedAnnulus(lo=lo, hi=hi, degree=deg, winding=w)
                   for (lo, hi), deg, w in zip(spans, degrees, cluster_winding))
    notes = ("degrees measured inner to outer; scheme reported after the "
             "0 <-> infinity relabeling (conjugation by 1/z)")

    if sum(degrees) != f.m + f.ell:
        raise NotCantorCircle(
            f"measured degrees {degrees} do not sum to m + ell = {f.m + f.ell}")
    if not is_admissible(degrees):
        raise NotCantorCircle(f"measured degrees {degrees} are not admissible")
    if w_inner >= 0 or w_outer <= 0:
        raise NotCantorCircle(
            f"winding signs ({w_inner}, {w_outer}) lack the pole/power pattern")

    return ClassificationReport(
        is_cantor_circle=True,
        n=n,
        degrees=degrees,
        annuli=annuli,
        moduli=tuple(a.log_modulus for a in annuli),
        central_annulus=(rho_min, rho_max),
        scheme_type_after_normalization=TYPE_I,
        critical_steps=tuple(crit_steps),
        notes=notes,
    )


@dataclass(frozen=True)
class GrotzschDiagnostic:
    mod_central: float
    mod_sum: float
    margin: float
    ok: bool


def grotzsch_check(report: ClassificationReport, required_margin=0.01
                   ) -> GrotzschDiagnostic:
    """Round-annulus modulus comparison mod(A) vs sum of mod(A_k)."""
    rho_min, rho_max = report.central_annulus
    mod_a = math.log(rho_max / rho_min) / (2.0 * math.pi)
    mod_sum = float(sum(report.moduli))
    margin = mod_a - mod_sum
    return GrotzschDiagnostic(mod_central=mod_a, mod_sum=mod_sum,
                              margin=margin, ok=margin >= required_margin)


# ---------------------------------------------------------------------------
# twist map and rendering
# ---------------------------------------------------------------------------

def twist_map(r, z):
    """t_r(z) = z exp(2 pi i (|z| - r)/(1 - r)); identity on both boundaries."""
    zs = np.asarray(z, dtype=complex)
    mods = np.abs(zs)
    if np.any(mods < r - 1e-12) or np.any(mods > 1.0 + 1e-12):
        raise OutOfDomain(f"twist input off the closed annulus [{r}, 1]")
    out = zs * np.exp(2j * np.pi * (mods - r) / (1.0 - r))
    return out if isinstance(z, np.ndarray) else complex(out)


@dataclass(frozen=True)
class RasterImage:
    width: int
    height: int
    pixels: bytes  # RGB triples, row-major from the top

    def __post_init__(self):
        if self.width < 16 or self.height < 16:
            raise ValidationError("image dimensions must be >= 16")
        if len(self.pixels) != 3 * self.width * self.height:
            raise ValidationError("pixel buffer size mismatch")

    def to_ppm(self) -> bytes:
        header = f"P6\n{self.width} {self.height}\n255\n".encode("ascii")
        return header + self.pixels

    def rgb_array(self):
        return np.frombuffer(self.pixels, dtype=np.uint8).reshape(
            self.height, self.width, 3)


def _palette(steps, budget):
    """Deterministic smooth palette; non-escaped pixels are black."""
    t = steps.astype(float) / float(budget)
    esc = steps <= budget
    red = np.where(esc, 0.5 + 0.5 * np.sin(3.0 + 7.0 * t), 0.0)
    green = np.where(esc, 0.5 + 0.5 * np.sin(1.5 + 9.0 * t), 0.0)
    blue = np.where(esc, 0.5 + 0.5 * np.sin(4.4 + 11.0 * t), 0.0)
    rgb = np.stack([red, green, blue], axis=-1)
    return (255.0 * rgb + 0.5).astype(np.uint8)


def render_julia(f: McMullenMap, window, size, max_iter=100,
                 escape_radius=1e6) -> RasterImage:
    """Escape-time raster over the given (xmin, xmax, ymin, ymax) window."""
    if isinstance(size, int):
        width = height = size
    else:
        width, height = size
    if width > 4096 or height > 4096:
        raise ValidationError("size cap is 4096")
    xmin, xmax, ymin, ymax = window
    xs = xmin + (xmax - xmin) * (np.arange(width) + 0.5) / width
    ys = ymax - (ymax - ymin) * (np.arange(height) + 0.5) / height
    grid = xs[None, :] + 1j * ys[:, None]
    steps = escape_steps(f, grid, max_iter, escape_radius)
    rgb = _palette(steps, max_iter)
    return RasterImage(width=width, height=height, pixels=rgb.tobytes())
