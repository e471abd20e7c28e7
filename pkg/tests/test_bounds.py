import numpy as np
import pytest

from radext.bounds import (
    ellipse_K_closed_form,
    inverse_bounds,
    min_K_lower,
    star_bounds,
)
from radext.curves import CircleHomeomorphism, builtin, compose
from radext.errors import InvalidAxes, InvalidK, UnboundedL
from radext.lipschitz import lip_Lambda, max_abs_mu, max_dilatation, pairwise_sup
from radext.periodic import PeriodicFunction

SQRT = np.sqrt


class TestStarBounds:
    @pytest.mark.parametrize("s", [0.5, 1.0, 3.0])
    def test_circle_collapse(self, s):
        sb = star_bounds(builtin("circle", s=s))
        assert sb.bigL == pytest.approx(s, abs=1e-12)
        assert sb.ell == pytest.approx(s, abs=1e-12)
        assert sb.k_bound == pytest.approx(0.0, abs=1e-12)
        assert sb.K_bound == pytest.approx(1.0, abs=1e-12)

    def test_square_closed_forms(self, square):
        sb = star_bounds(square)
        assert sb.L_psi == 1.0
        assert sb.rho_sup == pytest.approx(SQRT(2), rel=1e-13)
        assert sb.dist_origin == pytest.approx(1.0, abs=1e-13)
        assert sb.sin_ag == pytest.approx(SQRT(2) / 2, abs=1e-9)
        assert sb.bigL == pytest.approx((SQRT(2) + SQRT(10)) / 2, rel=1e-12)
        assert sb.ell == pytest.approx(2 / (SQRT(2) + SQRT(10)), rel=1e-12)
        assert sb.k_bound == pytest.approx(1 / SQRT(5), rel=1e-12)
        assert sb.K_bound == pytest.approx((3 + SQRT(5)) / 2, rel=1e-12)
        assert sb.csc_lower == pytest.approx(SQRT(2), rel=1e-9)

    def test_square_bound_is_attained(self, square):
        sb = star_bounds(square)
        assert sb.bigL - lip_Lambda(square) == pytest.approx(0.0, abs=1e-9)
        assert max_abs_mu(square) <= sb.k_bound + 1e-12

    def test_circle_homeomorphism_half(self, circle1, psi05):
        # L = max(1.5, 1/0.5) = 2 and sin a_gamma = 1, so the radicals
        # collapse to |L - 1| and L + 1
        sb = star_bounds(compose(circle1, psi05))
        assert sb.L_psi == pytest.approx(2.0, abs=1e-9)
        assert sb.bigL == pytest.approx(2.0, abs=1e-9)
        assert sb.k_bound == pytest.approx(1 / 3, abs=1e-9)
        assert sb.K_bound == pytest.approx(2.0, abs=1e-9)
        assert sb.ell == pytest.approx(0.25, abs=1e-9)
        assert max_dilatation(compose(circle1, psi05)) == pytest.approx(
            sb.K_bound, abs=1e-9)

    def test_unbounded_when_psi_prime_vanishes(self, circle1):
        psi = CircleHomeomorphism(
            PeriodicFunction.from_expression("t + sin(t)",
                                             period_offset=2 * np.pi))
        with pytest.raises(UnboundedL):
            star_bounds(compose(circle1, psi))

    def test_invariants_on_family(self, trig_family, psi02):
        for curve in trig_family[:6]:
            sb = star_bounds(curve)
            assert sb.bigL >= sb.rho_sup - 1e-12
            assert sb.ell <= sb.bigL + 1e-12
            assert 0.0 <= sb.k_bound < 1.0
            assert sb.K_bound == pytest.approx(
                (1 + sb.k_bound) / (1 - sb.k_bound), rel=1e-12)
        sb = star_bounds(compose(trig_family[0], psi02))
        assert sb.L_psi >= 1.0


class TestSoundness:
    def test_family_upper_lower_k(self, trig_family, psi02, psi05):
        maps = [c.to_boundary_map() for c in trig_family[:5]]
        maps.append(compose(trig_family[5], psi02))
        maps.append(compose(trig_family[6], psi05))
        for bmap in maps:
            sb = star_bounds(bmap)
            assert lip_Lambda(bmap) <= sb.bigL + 1e-9
            assert pairwise_sup(bmap, "disk", 256).inf >= sb.ell - 1e-9
            assert max_abs_mu(bmap) <= sb.k_bound + 1e-9
            assert max_dilatation(bmap) >= sb.csc_lower - 1e-9

    def test_inverse_soundness(self, trig_family, psi05):
        bmap = compose(trig_family[2], psi05)
        k = max_abs_mu(bmap)
        lo, hi, sin_lo = inverse_bounds(k)
        psi = bmap.psi.psi
        ts = np.linspace(0, 2 * np.pi, 4096, endpoint=False)
        dpsi = psi.derivative(ts)
        assert dpsi.min() >= lo - 1e-9
        assert dpsi.max() <= hi + 1e-9
        sb = star_bounds(bmap)
        assert sb.sin_ag >= sin_lo - 1e-9


class TestInverseBounds:
    def test_conformal(self):
        assert inverse_bounds(0.0) == (1.0, 1.0, 1.0)

    def test_square_value(self):
        lo, hi, sin_lo = inverse_bounds(1 / SQRT(5))
        assert lo == pytest.approx((3 - SQRT(5)) / 2, rel=1e-12)
        assert hi == pytest.approx((3 + SQRT(5)) / 2, rel=1e-12)
        assert sin_lo == lo

    def test_third(self):
        lo, hi, sin_lo = inverse_bounds(1 / 3)
        assert lo == pytest.approx(0.5, rel=1e-12)
        assert hi == pytest.approx(2.0, rel=1e-12)

    def test_invalid(self):
        with pytest.raises(InvalidK):
            inverse_bounds(1.0)
        with pytest.raises(InvalidK):
            inverse_bounds(-0.1)


class TestMinKLower:
    def test_circle(self, circle1):
        assert min_K_lower(circle1) == pytest.approx(1.0, abs=1e-12)

    def test_square(self, square):
        assert min_K_lower(square) == pytest.approx(SQRT(2), abs=1e-9)

    def test_ellipse(self, ellipse21):
        # sin(alpha_gamma) = 2ab/(a^2+b^2) = 4/5 for the ellipse
        assert min_K_lower(ellipse21) == pytest.approx(1.25, abs=1e-9)
        assert max_dilatation(ellipse21) >= min_K_lower(ellipse21)


class TestEllipseClosedForm:
    def test_unit_circle(self):
        paper, derived = ellipse_K_closed_form(1, 1)
        assert paper == pytest.approx(1.0, abs=1e-14)
        assert derived == pytest.approx(1.0, abs=1e-14)

    def test_two_one(self):
        paper, derived = ellipse_K_closed_form(2, 1)
        expected = (41 + 3 * SQRT(73)) / 32
        # with b = 1 the printed radicand 14a^2 + a^4 + b^4 happens to agree
        # with the derivation's a^4 + 14 a^2 b^2 + b^4
        assert derived == pytest.approx(expected, rel=1e-14)
        assert paper == pytest.approx(expected, rel=1e-14)

    def test_radicand_typo_shows_away_from_b_equal_one(self):
        # at a=2, b=1.5 the radicands (77.0625 vs 147.0625) meet a nonzero
        # |a^2-b^2| factor, so the printed value drifts off the true root
        paper, derived = ellipse_K_closed_form(2, 1.5)
        m = (1 + 6 * (2 / 1.5) ** 2 + (2 / 1.5) ** 4) / (4 * (2 / 1.5) ** 2)
        assert derived + 1.0 / derived == pytest.approx(m, rel=1e-12)
        assert abs(paper - derived) > 1e-3

    def test_derived_matches_measured(self, ellipse21):
        _, derived = ellipse_K_closed_form(2, 1)
        assert max_dilatation(ellipse21) == pytest.approx(derived, abs=1e-4)

    def test_invalid_axes(self):
        with pytest.raises(InvalidAxes):
            ellipse_K_closed_form(1, 2)
