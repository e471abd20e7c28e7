import numpy as np
import pytest
from scipy.optimize import minimize_scalar

from radext.curves import (
    PolarCurve,
    builtin,
    builtin_registry,
    compose,
    evaluate,
    random_trigpoly_family,
    tangent_profile,
    validate_starlike,
    velocity,
)
from radext.errors import DegenerateCurve, InvalidParams, NotPolar, UnknownCurve
from radext.periodic import TWO_PI, PeriodicFunction

from conftest import make_psi


class TestEvaluate:
    def test_circle(self, circle1):
        p = evaluate(circle1, np.pi / 2)
        assert p.real == pytest.approx(0.0, abs=1e-15)
        assert p.imag == pytest.approx(1.0, abs=1e-15)

    def test_square_corner(self, square):
        p = evaluate(square, np.pi / 4)
        assert p.real == pytest.approx(1.0, abs=1e-14)
        assert p.imag == pytest.approx(1.0, abs=1e-14)

    def test_ellipse_major_axis(self, ellipse21):
        p = evaluate(ellipse21, 0.0)
        assert p == pytest.approx(2.0 + 0.0j, abs=1e-14)


class TestVelocity:
    def test_circle(self, circle1):
        assert velocity(circle1, 0.0) == pytest.approx(1j, abs=1e-15)

    def test_square_corner_left_limit(self, square):
        s2 = np.sqrt(2)
        v = velocity(square, np.pi / 4)  # left limit by convention
        expected = (s2 + 1j * s2) * np.exp(1j * np.pi / 4)
        assert v == pytest.approx(expected, rel=1e-13)
        assert abs(v) == pytest.approx(2.0, rel=1e-13)

    def test_shear_one_sided(self, shear):
        v = velocity(shear, 0.0, side="right")
        assert v == pytest.approx(1.0 + 0.1j, abs=1e-12)
        assert abs(v) == pytest.approx(np.sqrt(101) / 10, rel=1e-12)
        # left limit comes from the descending branch
        vl = velocity(shear, 0.0, side="left")
        assert vl == pytest.approx(-1.0 + 0.1j, abs=1e-12)

    def test_agrees_with_finite_differences(self, trig_family):
        h = 1e-5
        for curve in trig_family[:5]:
            ts = np.linspace(0.3, 5.9, 17)
            v = velocity(curve, ts)
            fd = (curve.boundary(ts + h) - curve.boundary(ts - h)) / (2 * h)
            assert np.max(np.abs(v - fd) / np.abs(v)) < 1e-6


class TestTangentProfile:
    def test_circle_right_angle(self, circle1):
        tp = tangent_profile(circle1)
        assert tp.alpha_gamma == pytest.approx(np.pi / 2, abs=1e-12)
        ts = np.linspace(0, TWO_PI, 64)
        assert np.max(np.abs(tp.alpha(ts) - np.pi / 2)) < 1e-12

    def test_square_quarter_angle(self, square):
        tp = tangent_profile(square)
        assert tp.alpha_gamma == pytest.approx(np.pi / 4, abs=1e-9)

    def test_ellipse_against_independent_minimizer(self, ellipse21):
        # oracle: minimize atan2(r, r') with its own closed-form r, r'
        a, b = 2.0, 1.0

        def u(t):
            return np.cos(t) ** 2 / a ** 2 + np.sin(t) ** 2 / b ** 2

        def alpha(t):
            r = u(t) ** -0.5
            rp = -0.5 * u(t) ** -1.5 * np.sin(2 * t) * (1 / b ** 2 - 1 / a ** 2)
            return np.arctan2(r, rp)

        ts = np.linspace(0, TWO_PI, 20001)
        i = np.argmin(alpha(ts))
        res = minimize_scalar(alpha, bracket=(ts[i] - 1e-3, ts[i], ts[i] + 1e-3),
                              options={"xtol": 1e-14})
        tp = tangent_profile(ellipse21)
        assert tp.alpha_gamma == pytest.approx(res.fun, abs=1e-9)
        # closed form for the ellipse: sin(alpha_gamma) = 2ab/(a^2+b^2)
        assert tp.sin_alpha_gamma == pytest.approx(2 * a * b / (a * a + b * b),
                                                   abs=1e-12)

    def test_cot_alpha_reconstructs_chi(self, trig_family):
        for curve in trig_family[:5]:
            tp = tangent_profile(curve)
            ts = np.linspace(0.1, 6.1, 200)
            assert np.max(np.abs(1.0 / np.tan(tp.alpha(ts)) - tp.chi(ts))) < 1e-9

    def test_boundary_map_eq_use(self, ellipse21, psi05):
        # rho'(t) = rho(t) psi'(t) cot(alpha at psi(t)), alpha taken from the
        # induced polar curve via finite differences (independent route)
        bmap = compose(ellipse21, psi05)
        induced = bmap.induced_polar()
        ts = np.linspace(0.2, 6.0, 25)
        rho, psi = bmap.rho, bmap.psi.psi
        h = 1e-6
        s = psi.value(ts)
        r_of_s = induced.r.value
        cot_alpha = (r_of_s(s + h) - r_of_s(s - h)) / (2 * h) / r_of_s(s)
        resid = rho.derivative(ts) - rho.value(ts) * psi.derivative(ts) * cot_alpha
        assert np.max(np.abs(resid)) < 1e-6


class TestBuiltins:
    def test_registry_names(self):
        assert set(builtin_registry()) == {"circle", "ellipse", "square",
                                           "shear", "trigpoly"}

    def test_circle_radius(self):
        c = builtin("circle", s=2.5)
        assert c.r.value(1.0) == 2.5

    def test_ellipse_values(self, ellipse21):
        assert ellipse21.r.value(np.pi / 2) == pytest.approx(1.0, abs=1e-14)
        assert ellipse21.r.value(0.0) == pytest.approx(2.0, abs=1e-14)

    def test_trigpoly(self):
        c = builtin("trigpoly", c0=1, a3=0.3)
        assert c.r.value(0.0) == pytest.approx(1.3, abs=1e-14)
        ts = TWO_PI * np.arange(4096) / 4096
        assert np.min(c.r.value(ts)) > 0

    def test_unknown_curve(self):
        with pytest.raises(UnknownCurve):
            builtin("pentagon")

    def test_invalid_params(self):
        with pytest.raises(InvalidParams):
            builtin("ellipse", a=1, b=2)
        with pytest.raises(InvalidParams):
            builtin("circle", s=-1)
        with pytest.raises(InvalidParams):
            builtin("trigpoly", c0=1, a1=1.2)


class TestValidate:
    def test_circle_passes(self, circle1):
        diag = validate_starlike(circle1)
        assert diag.ok and diag.min_r == pytest.approx(1.0, abs=1e-12)

    def test_square_passes(self, square):
        diag = validate_starlike(square)
        assert diag.ok and diag.min_r == pytest.approx(1.0, abs=1e-12)

    def test_negative_radius_fails(self):
        # direct construction bypasses the builtin parameter check
        r = PeriodicFunction.from_expression("1 + 1.2*cos(t)")
        curve = PolarCurve(r, curve_id="bad-trigpoly")
        diag = validate_starlike(curve)
        assert not diag.ok
        assert diag.min_r == pytest.approx(-0.2, abs=1e-9)
        assert diag.min_r_at == pytest.approx(np.pi, abs=1e-6)
        with pytest.raises(DegenerateCurve):
            tangent_profile(curve)

    def test_shear_passes(self, shear):
        assert validate_starlike(shear).ok


class TestCompose:
    def test_rho_is_r_after_psi(self, ellipse21, psi05):
        bmap = compose(ellipse21, psi05)
        ts = np.linspace(0, TWO_PI, 100)
        expected = ellipse21.r.value(psi05.psi.value(ts))
        assert np.max(np.abs(bmap.rho.value(ts) - expected)) == 0.0
        assert not bmap.is_polar

    def test_identity_psi_is_polar(self, square):
        assert square.to_boundary_map().is_polar

    def test_induced_polar_roundtrip(self, ellipse21, psi05):
        bmap = compose(ellipse21, psi05)
        induced = bmap.induced_polar()
        ss = np.linspace(0, TWO_PI, 50)
        assert np.max(np.abs(induced.r.value(ss) - ellipse21.r.value(ss))) < 1e-10


class TestRandomFamily:
    def test_deterministic_and_valid(self):
        fam1 = random_trigpoly_family(7, count=5)
        fam2 = random_trigpoly_family(7, count=5)
        ts = np.linspace(0, TWO_PI, 257)
        for c1, c2 in zip(fam1, fam2):
            assert np.array_equal(c1.r.value(ts), c2.r.value(ts))
            assert validate_starlike(c1).ok
            assert np.min(c1.r.value(ts)) >= 0.2 - 1e-12
