"""Explicit bi-Lipschitz and quasiconformality bounds for radial extensions
of smooth starlike boundary parametrizations g(t) = rho(t) e^{i psi(t)}.

With L = max(sup psi', 1/inf psi'), s = sin(alpha_gamma) the worst tangent
angle, and R = sup rho:

    bigL = R/(2s) * ( sqrt(L^2 + s^2 (1 - 2L)) + sqrt(L^2 + s^2 (1 + 2L)) )
    ell  = dist^2(curve, 0) / (L * bigL)
    k    = sqrt( (L^2 + s^2 (1 - 2L)) / (L^2 + s^2 (1 + 2L)) )

The extension is then (ell, bigL) bi-Lipschitz and k-quasiconformal;
conversely a k-quasiconformal radial extension forces psi' into
[(1-k)/(1+k), (1+k)/(1-k)] and sin(alpha_gamma) >= (1-k)/(1+k), and any
radial K-quasiconformal map satisfies K >= csc(alpha_gamma).
"""

from dataclasses import dataclass

import numpy as np

from ._scan import scan_extremum
from .curves import BoundaryMap, CircleHomeomorphism, PolarCurve, tangent_profile
from .errors import InvalidAxes, InvalidK, UnboundedL

__all__ = ["StarBounds", "star_bounds", "inverse_bounds", "min_K_lower",
           "ellipse_K_closed_form"]


@dataclass
class StarBounds:
    L_psi: float        # max(sup psi', 1/inf psi')
    rho_sup: float
    dist_origin: float
    sin_ag: float
    bigL: float         # upper Lipschitz bound for w
    ell: float          # lower bi-Lipschitz bound for w
    k_bound: float
    K_bound: float
    csc_lower: float    # csc(alpha_gamma), lower bound for any radial K

    def to_dict(self):
        return {
            "L_psi": self.L_psi, "rho_sup": self.rho_sup,
            "dist_origin": self.dist_origin, "sin_alpha_gamma": self.sin_ag,
            "bigL": self.bigL, "ell": self.ell, "k_bound": self.k_bound,
            "K_bound": self.K_bound, "csc_lower": self.csc_lower,
        }


def _as_map(curve):
    if isinstance(curve, PolarCurve):
        return curve.to_boundary_map()
    if isinstance(curve, CircleHomeomorphism):
        return curve.as_boundary_map()
    if isinstance(curve, BoundaryMap):
        return curve
    raise TypeError("star bounds need a polar curve or boundary map")


def star_bounds(curve, grid_n=4096):
    """Evaluate the explicit bound set on a validated boundary map.

    Raises UnboundedL when the grid infimum of psi' is numerically zero;
    the map is then not bi-Lipschitz and the formulas degenerate.
    """
    bmap = _as_map(curve)
    bmap.require_valid()
    psi = bmap.psi.psi
    dmin = scan_extremum(psi.derivative, kinks=psi.kinks,
                         side_fn=psi.deriv_side, grid_n=grid_n, maximize=False)
    if dmin.value < 1e-9:
        raise UnboundedL(f"inf psi' = {dmin.value:.3e} at t = {dmin.t:.6f}")
    dmax = scan_extremum(psi.derivative, kinks=psi.kinks,
                         side_fn=psi.deriv_side, grid_n=grid_n, maximize=True)
    L = max(dmax.value, 1.0 / dmin.value)

    rho = bmap.rho
    rho_sup = scan_extremum(rho.value, kinks=rho.kinks, grid_n=grid_n).value
    dist0 = scan_extremum(rho.value, kinks=rho.kinks, grid_n=grid_n,
                          maximize=False).value
    s = tangent_profile(bmap, grid_n).sin_alpha_gamma

    minus = np.sqrt(L * L + s * s * (1.0 - 2.0 * L))
    plus = np.sqrt(L * L + s * s * (1.0 + 2.0 * L))
    bigL = rho_sup / (2.0 * s) * (minus + plus)
    ell = dist0 * dist0 / (L * bigL)
    k = np.sqrt((L * L + s * s * (1.0 - 2.0 * L)) /
                (L * L + s * s * (1.0 + 2.0 * L)))
    return StarBounds(L_psi=L, rho_sup=rho_sup, dist_origin=dist0, sin_ag=s,
                      bigL=float(bigL), ell=float(ell), k_bound=float(k),
                      K_bound=float((1.0 + k) / (1.0 - k)),
                      csc_lower=float(1.0 / s))


def inverse_bounds(k):
    """From k-quasiconformality of the extension: psi is
    ((1-k)/(1+k), (1+k)/(1-k)) bi-Lipschitz and sin(alpha_gamma) >= (1-k)/(1+k).

    Returns (psi_lower, psi_upper, sin_alpha_lower).
    """
    if not (0.0 <= k < 1.0):
        raise InvalidK(f"k must lie in [0, 1), got {k}")
    lo = (1.0 - k) / (1.0 + k)
    return lo, (1.0 + k) / (1.0 - k), lo


def min_K_lower(curve, grid_n=4096):
    """csc(alpha_gamma): no radial extension onto this curve can be
    K-quasiconformal with smaller K."""
    return tangent_profile(curve, grid_n).csc_alpha_gamma


def ellipse_K_closed_form(a, b):
    """Quasiconformality constant of the radial map onto an ellipse.

    Returns (paper_value, derived_value): paper_value evaluates the
    printed closed form with radicand 14 a^2 + a^4 + b^4, derived_value
    solves K + 1/K = (1 + 6 c^2 + c^4)/(4 c^2) with c = a/b, whose
    expansion has radicand a^4 + 14 a^2 b^2 + b^4.  The radicands agree
    exactly when b = 1 but differ otherwise; the derived root is the
    oracle.
    """
    if not (0 < b <= a):
        raise InvalidAxes(f"need 0 < b <= a, got a={a}, b={b}")
    paper = (a ** 4 + 6 * a ** 2 * b ** 2 + b ** 4
             + np.sqrt(14 * a ** 2 + a ** 4 + b ** 4) * abs(a ** 2 - b ** 2)) \
        / (8 * a ** 2 * b ** 2)
    c = a / b
    m = (1.0 + 6.0 * c ** 2 + c ** 4) / (4.0 * c ** 2)
    derived = 0.5 * (m + np.sqrt(m * m - 4.0))
    return float(paper), float(derived)
