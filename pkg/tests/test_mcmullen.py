import math

import numpy as np
import pytest

from abp import schemes
from abp.errors import (NotCantorCircle, NotHyperbolicEvidence, OutOfDomain,
                        ValidationError)
from abp.mcmullen import (CYCLE, ClassifyParams, ESCAPED, McMullenMap,
                          UNDECIDED, classify_cantor_circle, exit_times,
                          grotzsch_check, iterate, render_julia, twist_map,
                          ClassificationReport, DetectedAnnulus)
from abp.numerics import Contour, Tolerance, winding_number


def black_ray_runs(image, rays=8):
    """Count separated black (non-escaped) radial bands along pixel rays."""
    black = np.all(image.rgb_array() == 0, axis=2)
    h, w = black.shape
    cx, cy = w / 2 - 0.5, h / 2 - 0.5
    runs = []
    for k in range(rays):
        th = 2 * np.pi * k / rays + 0.05
        ts = np.arange(1, int(min(w, h) / 2 - 1))
        xs = np.clip((cx + ts * np.cos(th)).round().astype(int), 0, w - 1)
        ys = np.clip((cy - ts * np.sin(th)).round().astype(int), 0, h - 1)
        vals = black[ys, xs]
        runs.append(int(np.sum(vals[1:] & ~vals[:-1]) + (1 if vals[0] else 0)))
    return runs


class TestIterate:
    def test_fast_escape(self):
        f = McMullenMap(3, 3, 1e-3)
        summary = iterate(f, 2.0)
        assert summary.status == ESCAPED
        assert summary.steps <= 5

    def test_already_outside(self):
        f = McMullenMap(3, 3, 1e-3)
        assert iterate(f, 2e6).steps == 0

    def test_critical_orbit_hand_computed(self):
        # f(crit) = 2 sqrt(c) ~ 0.063, then ~4.0, then blow-up
        f = McMullenMap(3, 3, 1e-3)
        crit = (1e-3) ** (1 / 6)
        v1 = f(crit)
        assert abs(v1 - 2 * math.sqrt(1e-3)) < 1e-12
        assert abs(f(v1)) == pytest.approx(4.0, abs=0.1)
        summary = iterate(f, crit)
        assert summary.status == ESCAPED and summary.steps <= 6

    def test_inner_trap(self):
        f = McMullenMap(3, 3, 1e-3)
        summary = iterate(f, 1e-9)
        assert summary.status == ESCAPED and summary.steps <= 1

    def test_cycle_detection_power_map(self):
        summary = iterate(McMullenMap(3, 3, 0.0), 0.5)
        assert summary.status == CYCLE

    def test_parameter_validation(self):
        f = McMullenMap(3, 3, 1e-3)
        with pytest.raises(ValidationError):
            iterate(f, 1.0, escape_radius=2.0)
        with pytest.raises(ValidationError):
            iterate(f, 1.0, max_iter=10 ** 6)
        with pytest.raises(ValidationError):
            McMullenMap(1, 3, 1e-3)


class TestClassifier:
    def test_figure_one_case(self):
        rep = classify_cantor_circle(McMullenMap(3, 3, 1e-3))
        assert rep.is_cantor_circle
        assert rep.n == 1
        assert rep.degrees == (3, 3)
        assert all(s <= 50 for s in rep.critical_steps)
        assert rep.scheme_type_after_normalization == schemes.TYPE_I
        # inner annulus winds like the pole, outer like the leading power
        assert rep.annuli[0].winding == -3
        assert rep.annuli[-1].winding == 3

    def test_cross_module_covering_degree(self):
        rep = classify_cantor_circle(McMullenMap(3, 3, 1e-3))
        assert schemes.covering_degree(rep.degrees) == 1

    def test_degrees_inner_to_outer(self):
        rep = classify_cantor_circle(McMullenMap(4, 2, 1e-4))
        assert rep.degrees == (2, 4)

    def test_large_c_not_cantor(self):
        with pytest.raises(NotCantorCircle):
            classify_cantor_circle(McMullenMap(3, 3, 0.5))

    def test_precondition_half_half(self):
        with pytest.raises(ValidationError):
            classify_cantor_circle(McMullenMap(2, 2, 1e-3))

    def test_non_escaping_critical_orbit(self):
        with pytest.raises(NotHyperbolicEvidence):
            classify_cantor_circle(McMullenMap(2, 3, 1e-3),
                                   ClassifyParams(crit_budget=2000))

    def test_winding_stable_under_angular_doubling(self):
        f = McMullenMap(3, 3, 1e-3)
        tol = Tolerance()
        rep = classify_cantor_circle(f)
        rho = math.sqrt(rep.annuli[0].lo * rep.annuli[0].hi)
        w1 = winding_number(lambda z: f(z), Contour(0, rho, 1024), tol)
        w2 = winding_number(lambda z: f(z), Contour(0, rho, 2048), tol)
        assert w1 == w2 == -3

    def test_exit_levels_structure(self):
        # trap door at level 1, critical annulus gap at level 2
        f = McMullenMap(3, 3, 1e-3)
        assert exit_times(f, np.array([0.05]), 50)[0] == 1
        assert exit_times(f, np.array([0.3]), 50)[0] == 2
        assert exit_times(f, np.array([2.0]), 50)[0] == 0


class TestGrotzsch:
    def test_positive_margin(self):
        rep = classify_cantor_circle(McMullenMap(3, 3, 1e-3))
        diag = grotzsch_check(rep)
        assert diag.ok and diag.margin > 0.01

    def test_margin_decreases_toward_breakup(self):
        margins = []
        for c in (1e-4, 1e-3, 1e-2):
            rep = classify_cantor_circle(McMullenMap(3, 3, c))
            margins.append(grotzsch_check(rep).margin)
        assert margins[0] > margins[1] > margins[2] > 0

    def test_degenerate_single_annulus_flagged(self):
        rep = classify_cantor_circle(McMullenMap(3, 3, 1e-3))
        lo, hi = rep.central_annulus
        degenerate = ClassificationReport(
            is_cantor_circle=True, n=0, degrees=(6,),
            annuli=(DetectedAnnulus(lo, hi, 6, 6),),
            moduli=(math.log(hi / lo) / (2 * math.pi),),
            central_annulus=(lo, hi),
            scheme_type_after_normalization=schemes.TYPE_I,
            critical_steps=())
        diag = grotzsch_check(degenerate)
        assert not diag.ok and abs(diag.margin) < 1e-12


class TestTwist:
    def test_identity_on_boundaries(self):
        r = 0.4
        for s in (r, 1.0):
            zs = s * np.exp(2j * np.pi * np.arange(64) / 64)
            assert np.max(np.abs(twist_map(r, zs) - zs)) < 1e-12

    def test_half_turn_at_mid_modulus(self):
        r = 0.4
        z = (1 + r) / 2 * np.exp(0.3j)
        assert abs(twist_map(r, z) + z) < 1e-12

    def test_circle_bijection_winding(self):
        r, s = 0.4, 0.77
        w = winding_number(lambda z: twist_map(r, z) / s,
                           Contour(0, s, 256), Tolerance())
        assert w == 1

    def test_out_of_domain(self):
        with pytest.raises(OutOfDomain):
            twist_map(0.4, 0.1)


class TestRender:
    def test_deterministic_bytes(self):
        f = McMullenMap(3, 3, 1e-3)
        a = render_julia(f, (-1.5, 1.5, -1.5, 1.5), 128, max_iter=10)
        b = render_julia(f, (-1.5, 1.5, -1.5, 1.5), 128, max_iter=10)
        assert a.to_ppm() == b.to_ppm()
        assert a.to_ppm().startswith(b"P6\n128 128\n255\n")

    def test_cantor_banding(self):
        f = McMullenMap(3, 3, 1e-3)
        img = render_julia(f, (-1.5, 1.5, -1.5, 1.5), 512, max_iter=10)
        assert all(r >= 3 for r in black_ray_runs(img))

    def test_power_map_black_set(self):
        img = render_julia(McMullenMap(3, 3, 0.0), (-1.5, 1.5, -1.5, 1.5),
                           256, max_iter=100)
        black = np.all(img.rgb_array() == 0, axis=2)
        ys, xs = np.mgrid[0:256, 0:256]
        rr = np.hypot(-1.5 + 3.0 * (xs + 0.5) / 256,
                      1.5 - 3.0 * (ys + 0.5) / 256)
        assert not black[rr > 1.02].any()
        assert black[(rr > 0.95) & (rr < 1.0)].all()

    def test_window_outside_fully_colored(self):
        img = render_julia(McMullenMap(3, 3, 1e-3), (2.5, 3.5, 2.5, 3.5),
                           64, max_iter=50)
        assert not np.any(np.all(img.rgb_array() == 0, axis=2))

    def test_size_cap(self):
        with pytest.raises(ValidationError):
            render_julia(McMullenMap(3, 3, 1e-3), (-1, 1, -1, 1), 5000)
