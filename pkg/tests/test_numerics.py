import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from abp import annulus
from abp.divisors import Divisor
from abp.errors import (BadBracket, DegenerateInput, NoConvergence,
                        ValidationError, ZeroOnContour)
from abp.numerics import (Contour, Tolerance, find_root_monotone,
                          polynomial_roots, winding_number)
from conftest import corrected_divisor

TOL = Tolerance()


class TestContourTolerance:
    def test_contour_rejects_non_power_of_two(self):
        with pytest.raises(ValidationError):
            Contour(0, 1.0, 100)

    def test_contour_rejects_small_sample_count(self):
        with pytest.raises(ValidationError):
            Contour(0, 1.0, 32)

    def test_contour_rejects_bad_radius(self):
        with pytest.raises(ValidationError):
            Contour(0, -1.0, 64)

    def test_tolerance_range(self):
        with pytest.raises(ValidationError):
            Tolerance(abs_tol=1e-15)
        with pytest.raises(ValidationError):
            Tolerance(abs_tol=0.5)
        with pytest.raises(ValidationError):
            Tolerance(max_iter=0)


class TestWinding:
    def test_monomial(self):
        assert winding_number(lambda z: z ** 3, Contour(0, 1.0, 64), TOL) == 3

    def test_blaschke_factor_inside_outside(self):
        b = lambda z: (z - 0.5) / (1 - 0.5 * z)
        assert winding_number(b, Contour(0, 1.0, 256), TOL) == 1
        assert winding_number(b, Contour(0, 0.4, 256), TOL) == 0

    def test_doubling_stability(self):
        f = lambda z: (z - 0.3 - 0.2j) ** 2
        w1 = winding_number(f, Contour(0, 1.0, 64), TOL)
        w2 = winding_number(f, Contour(0, 1.0, 1024), TOL)
        assert w1 == w2 == 2

    def test_annulus_map_inner_degree_relation(self, rng):
        # inner boundary degree equals e minus the outer winding
        r, e, delta = 0.25, 3, 1
        div = corrected_divisor(rng, r, e, delta)
        m = annulus.build(r, delta, div)
        eps = (min(div.moduli()) - r) / 2
        w_out = winding_number(lambda z: annulus.evaluate_raw(m, z),
                               Contour(0, 1.0 - (1 - max(div.moduli())) / 2, 256),
                               TOL)
        w_in_ccw = winding_number(lambda z: annulus.evaluate_raw(m, z),
                                  Contour(0, r + eps, 256), TOL)
        assert -w_in_ccw == e - w_out
        assert -w_in_ccw == delta

    def test_zero_on_contour(self):
        with pytest.raises(ZeroOnContour):
            winding_number(lambda z: z - 1.0, Contour(0, 1.0, 64), TOL)

    def test_no_convergence_on_noise(self):
        rng = np.random.default_rng(0)

        def noise(z):
            return np.exp(1j * rng.uniform(0, 2 * np.pi, np.shape(z)))

        with pytest.raises(NoConvergence):
            winding_number(noise, Contour(0, 1.0, 2 ** 18), TOL)

    @settings(max_examples=25, deadline=None)
    @given(st.lists(st.tuples(st.floats(0.05, 0.85), st.floats(0, 2 * math.pi)),
                    min_size=1, max_size=4),
           st.lists(st.tuples(st.floats(1.2, 4.0), st.floats(0, 2 * math.pi)),
                    min_size=0, max_size=3))
    def test_additivity_on_blaschke_factors(self, inside, outside):
        # winding(f * g) = winding(f) + winding(g) for zero-free-on-contour maps
        zeros = [m * np.exp(1j * a) for m, a in inside]
        poles_like = [m * np.exp(1j * a) for m, a in outside]

        def factor(a):
            return lambda z: (z - a) / (1 - np.conj(a) * z)

        def product(fs):
            return lambda z: np.prod([f(z) for f in fs], axis=0)

        fs = [factor(a) for a in zeros]
        gs = [factor(a) for a in poles_like]
        c = Contour(0, 1.0, 256)
        wf = winding_number(product(fs), c, TOL) if fs else 0
        wg = winding_number(product(gs), c, TOL) if gs else 0
        wfg = winding_number(product(fs + gs), c, TOL) if fs + gs else 0
        assert wfg == wf + wg


class TestPolynomialRoots:
    def test_quadratic(self):
        roots = polynomial_roots([1, 0, -1], TOL)
        assert sorted((round(p.real, 8), round(p.imag, 8)) for p in roots.points) \
            == [(-1.0, 0.0), (1.0, 0.0)]

    def test_triple_root_multiplicity(self):
        roots = polynomial_roots([1, 0, 0, 0], TOL)
        assert roots.e == 3
        assert all(abs(p) < 1e-6 for p in roots.points)
        # clustered to a single point with multiplicity
        assert len(set(roots.points)) == 1

    def test_roundtrip_with_sym(self, rng):
        from abp.model import coefficients_to_polynomial, sym_e
        pts = tuple(rng.uniform(0.3, 1.5) * np.exp(2j * np.pi * rng.uniform())
                    for _ in range(5))
        coeffs = coefficients_to_polynomial(sym_e(pts))
        back = polynomial_roots(coeffs, TOL)
        got = sorted(back.points, key=lambda p: (p.real, p.imag))
        want = sorted(pts, key=lambda p: (p.real, p.imag))
        assert max(abs(a - b) for a, b in zip(got, want)) < 1e-8

    def test_reconstruction_error(self, rng):
        pts = tuple(rng.normal(size=2) @ np.array([1, 1j]) for _ in range(6))
        from abp.model import coefficients_to_polynomial, sym_e
        coeffs = coefficients_to_polynomial(sym_e(pts))
        roots = polynomial_roots(coeffs, TOL)
        rebuilt = coefficients_to_polynomial(sym_e(roots.points))
        assert max(abs(a - b) for a, b in zip(coeffs, rebuilt)) <= 100 * TOL.abs_tol

    def test_degenerate_leading_coefficient(self):
        with pytest.raises(DegenerateInput):
            polynomial_roots([1e-12, 1, 1], TOL)

    def test_degree_cap(self):
        with pytest.raises(ValidationError):
            polynomial_roots([1.0] * 66, TOL)


class TestFindRoot:
    def test_reciprocal(self):
        t = find_root_monotone(lambda t: 1.0 / t, (0.1, 10.0), 2.0, TOL)
        assert abs(t - 0.5) < 1e-9

    def test_exponential(self):
        t = find_root_monotone(lambda t: math.exp(-t), (0.0, 50.0), 0.5, TOL)
        assert abs(t - math.log(2)) < 1e-9

    def test_bad_bracket(self):
        with pytest.raises(BadBracket):
            find_root_monotone(lambda t: t, (1.0, 2.0), 0.0, TOL)

    def test_no_convergence(self):
        with pytest.raises(NoConvergence):
            find_root_monotone(lambda t: t, (0.0, 1e9), 0.3,
                               Tolerance(abs_tol=1e-14, max_iter=2))

    def test_psi_bracket_straddle(self, rng):
        # the model-space g straddles its target around the found root
        from abp.model import _g_factory, phi_r
        r, e, delta = 0.3, 3, 2
        div = corrected_divisor(rng, r, e, delta)
        nd = phi_r(div)
        g = _g_factory([abs(p) for p in nd.points.points], r)
        target = r ** delta
        t0 = find_root_monotone(g, (1e-12, 1e6), target, TOL)
        assert (g(t0 - 10 * TOL.abs_tol) - target) > 0 > (g(t0 + 10 * TOL.abs_tol) - target)
