"""Lipschitz and dilatation constants of boundary maps and their radial
extensions.

Two independent routes are provided for each constant:

  * derivative route -- essential suprema realized as kink-aware grid
    maxima of |f'|, sqrt(r^2 + r'^2), |nabla w| and D_w, with local
    refinement around the incumbent;
  * pairwise route   -- exhaustive O(n^2) difference-quotient suprema
    over a uniform parameter grid (angular distance d1, chordal distance
    d2, or points of the closed disk), optionally refined by zooming
    around the attaining pair.

The pairwise route is the oracle: it approaches the true constant from
below and never exceeds the derivative route beyond grid tolerance.
"""

from dataclasses import dataclass, field

import numpy as np

from ._scan import scan_extremum
from .curves import BoundaryMap, CircleHomeomorphism, ParametricCurve, PolarCurve
from .errors import DegenerateDifferential, GridTooLarge, NotPolar
from .extension import differential_arrays

TWO_PI = 2.0 * np.pi
_PAIR_CAP = 4096
_MIN_DIST = 1e-9  # pairs closer than this are excluded from ratios

__all__ = [
    "distances", "lip_l", "lip_L_polar", "lip_Lambda", "max_dilatation",
    "max_abs_mu", "pairwise_sup", "PairwiseResult", "LipschitzReport",
    "lipschitz_report",
]


def distances(t, s):
    """(d1, d2): angular distance |t - s| on the parameter interval and
    chordal distance 2 |sin((t-s)/2)|; d1 >= d2 always."""
    t = np.asarray(t, dtype=float)
    s = np.asarray(s, dtype=float)
    d1 = np.abs(t - s)
    d2 = 2.0 * np.abs(np.sin((t - s) / 2.0))
    return d1, d2


def _as_boundary(curve):
    if isinstance(curve, CircleHomeomorphism):
        return curve.as_boundary_map()
    return curve


# --- derivative-route constants ---------------------------------------

def lip_l(curve, grid_n=4096, refine=True):
    """Lip(f) = ess sup |f'(t)|, over a kink-aware refined grid."""
    curve = _as_boundary(curve)
    curve.require_valid()
    ext = scan_extremum(
        lambda ts: np.abs(curve.boundary_velocity(ts)),
        kinks=curve.kinks,
        side_fn=lambda k, side: abs(curve.velocity_side(k, side)),
        grid_n=grid_n, refine=refine)
    return ext.value


def lip_L_polar(curve, grid_n=4096, refine=True):
    """Lip(F) = max sqrt(r^2 + r'^2) for a polar parametrization
    (equals lip_l by the diagonal-limit theorem)."""
    if isinstance(curve, BoundaryMap):
        if not curve.is_polar:
            raise NotPolar("lip_L_polar needs a polar parametrization")
        curve = curve.induced_polar()
    if not isinstance(curve, PolarCurve):
        raise NotPolar("lip_L_polar needs a polar curve")
    curve.require_valid()
    r = curve.r

    def vec(ts):
        return np.hypot(r.value(ts), r.derivative(ts))

    ext = scan_extremum(
        vec, kinks=curve.kinks,
        side_fn=lambda k, side: float(np.hypot(r.value(k), r.deriv_side(k, side))),
        grid_n=grid_n, refine=refine)
    return ext.value


def lip_Lambda(curve, grid_n=4096, refine=True):
    """Lip(w) = ess sup (|f - i f'| + |f + i f'|)/2 over the boundary."""
    curve = _as_boundary(curve)
    curve.require_valid()

    def vec(ts):
        d = differential_arrays(curve, ts, require_orientation=False)
        return d["op_norm"]

    def side(k, s):
        d = differential_arrays(curve, np.asarray([k]), side=s,
                                require_orientation=False)
        return float(d["op_norm"][0])

    return scan_extremum(vec, kinks=curve.kinks, side_fn=side, grid_n=grid_n,
                         refine=refine).value


def _diff_extremum(curve, key, grid_n, maximize=True, refine=True):
    curve = _as_boundary(curve)
    curve.require_valid()

    def vec(ts):
        return differential_arrays(curve, ts)[key]

    def side(k, s):
        return float(differential_arrays(curve, np.asarray([k]), side=s)[key][0])

    return scan_extremum(vec, kinks=curve.kinks, side_fn=side, grid_n=grid_n,
                         maximize=maximize, refine=refine)


def max_dilatation(curve, grid_n=4096, refine=True):
    """ess sup of D_w = (|w_z| + |w_zbar|)/(|w_z| - |w_zbar|); requires a
    sense-preserving map."""
    return _diff_extremum(curve, "dilatation", grid_n, refine=refine).value


def max_abs_mu(curve, grid_n=4096, refine=True):
    """ess sup of the Beltrami modulus |w_zbar / w_z|."""
    return _diff_extremum(curve, "mu_abs", grid_n, refine=refine).value


# --- pairwise oracle ---------------------------------------------------

@dataclass
class PairwiseResult:
    kind: str
    grid_n: int
    sup: float
    inf: float
    sup_pair: tuple
    inf_pair: tuple
    refined: bool = False


def _pair_scan(values, px, py=None):
    """Exhaustive blocked scan over all pairs; returns sup/inf of
    |values_i - values_j| / dist(i, j), where dist is Euclidean over the
    (px, py) coordinates (py omitted: the 1-D parameter distance |px_i - px_j|).

    Works on squared ratios with reused buffers (one division, no hypot)
    and excludes coincident pairs; on these uniform grids distinct points
    are never closer than the 1e-9 coincidence floor, so the exclusion is
    exactly the diagonal.
    """
    n = len(values)
    re = np.ascontiguousarray(values.real)
    im = np.ascontiguousarray(values.imag)
    sup2, inf2 = -np.inf, np.inf
    sup_ij, inf_ij = (0, 0), (0, 0)
    block = max(1, int(2 ** 22 // n))
    A = np.empty((block, n))
    B = np.empty((block, n))
    C = np.empty((block, n))
    with np.errstate(invalid="ignore", divide="ignore"):
        for i0 in range(0, n, block):
            b = min(block, n - i0)
            sl = slice(i0, i0 + b)
            A_, B_, C_ = A[:b], B[:b], C[:b]
            np.subtract(re[sl, None], re[None, :], out=A_)
            A_ *= A_
            np.subtract(im[sl, None], im[None, :], out=B_)
            B_ *= B_
            A_ += B_
            np.subtract(px[sl, None], px[None, :], out=B_)
            B_ *= B_
            if py is not None:
                np.subtract(py[sl, None], py[None, :], out=C_)
                C_ *= C_
                B_ += C_
            A_ /= B_  # squared ratio; diagonal becomes 0/0 = nan
            rows = np.arange(b)
            A_[rows, i0 + rows] = -np.inf
            j = int(np.argmax(A_))
            if A_.flat[j] > sup2:
                sup2 = float(A_.flat[j])
                sup_ij = (i0 + j // n, j % n)
            A_[rows, i0 + rows] = np.inf
            j = int(np.argmin(A_))
            if A_.flat[j] < inf2:
                inf2 = float(A_.flat[j])
                inf_ij = (i0 + j // n, j % n)
    return float(np.sqrt(sup2)), float(np.sqrt(inf2)), sup_ij, inf_ij


def pairwise_sup(curve, distance_kind, grid_n=4096, radial_n=8):
    """Brute-force sup/inf of distance ratios over all grid pairs.

    distance_kind 'd1'/'d2' compares boundary values against the angular
    or chordal distance on n <= 4096 parameters; 'disk' compares radial
    extension values on a (<=256 x radial_n) polar grid of the closed
    disk plus the origin.
    """
    curve = _as_boundary(curve)
    curve.require_valid()
    if distance_kind in ("d1", "d2"):
        if grid_n > _PAIR_CAP:
            raise GridTooLarge(f"pairwise grid_n capped at {_PAIR_CAP}")
        ts = TWO_PI * np.arange(grid_n) / grid_n
        fv = curve.boundary(ts)
        if distance_kind == "d1":
            sup, inf, sij, iij = _pair_scan(fv, ts)
        else:
            # d2 = 2|sin((t-s)/2)| = |e^{it} - e^{is}| exactly; the literal
            # chord is used so the radius-1 ring of the disk oracle computes
            # the same ratios bit for bit (the l <= L <= Lambda chain then
            # holds pair by pair)
            zs = np.exp(1j * ts)
            sup, inf, sij, iij = _pair_scan(fv, zs.real, zs.imag)
        return PairwiseResult(distance_kind, grid_n, sup, inf,
                              (float(ts[sij[0]]), float(ts[sij[1]])),
                              (float(ts[iij[0]]), float(ts[iij[1]])))
    if distance_kind == "disk":
        na = min(grid_n, 256)
        ts = TWO_PI * np.arange(na) / na
        rs = np.arange(1, radial_n + 1) / radial_n
        z = (rs[:, None] * np.exp(1j * ts)[None, :]).ravel()
        wv = (rs[:, None] * curve.boundary(ts)[None, :]).ravel()
        z = np.append(z, 0.0 + 0.0j)
        wv = np.append(wv, 0.0 + 0.0j)
        sup, inf, sij, iij = _pair_scan(wv, z.real, z.imag)
        return PairwiseResult("disk", na, sup, inf,
                              (complex(z[sij[0]]), complex(z[sij[1]])),
                              (complex(z[iij[0]]), complex(z[iij[1]])))
    raise ValueError(f"unknown distance kind {distance_kind!r}")


def _refine_pair(curve, kind, pair, h0, maximize=True, rounds=30, m=33):
    """Zoom around an attaining parameter pair; monotone in the incumbent.

    Pairs closer than 1e-7 are excluded here (stricter than the 1e-9 of
    the exhaustive scan): at that separation the quotient is within
    ~1e-14 of its diagonal limit, while letting the zoom approach the
    diagonal further would amplify float cancellation in |f(t) - f(s)|
    into ~1e-6 noise on the ratio.
    """
    sign = 1.0 if maximize else -1.0
    floor = 1e-7
    bt, bs = pair
    best = -np.inf
    h = h0
    for _ in range(rounds):
        # d1 lives on the parameter interval [0, 2pi], so stay inside it
        tt = np.clip(bt + np.linspace(-h, h, m), 0.0, TWO_PI)
        ss = np.clip(bs + np.linspace(-h, h, m), 0.0, TWO_PI)
        ft = curve.boundary(tt)
        fs = curve.boundary(ss)
        if kind == "d1":
            d = np.abs(tt[:, None] - ss[None, :])
        else:
            d = np.abs(np.exp(1j * tt)[:, None] - np.exp(1j * ss)[None, :])
        df = np.abs(ft[:, None] - fs[None, :])
        mask = d > floor
        if not mask.any():
            h /= 3.0
            continue
        with np.errstate(invalid="ignore", divide="ignore"):
            ratio = np.where(mask, sign * df / np.where(mask, d, 1.0), np.nan)
        i, j = np.unravel_index(np.nanargmax(ratio), ratio.shape)
        if ratio[i, j] > best:
            best = float(ratio[i, j])
            bt, bs = float(tt[i]), float(ss[j])
        h /= 3.0
        if h < 1e-13:
            break
    return sign * best, (bt, bs)


def pairwise_sup_refined(curve, distance_kind, grid_n=4096, rounds=30,
                         base=None):
    """Pairwise oracle followed by local zoom around both attaining pairs;
    pass a precomputed ``base`` result to skip the exhaustive scan."""
    curve = _as_boundary(curve)
    res = base if base is not None else pairwise_sup(curve, distance_kind, grid_n)
    if distance_kind == "disk":
        return res
    h0 = 2.0 * TWO_PI / grid_n
    sup, sp = _refine_pair(curve, distance_kind, res.sup_pair, h0,
                           maximize=True, rounds=rounds)
    inf, ip = _refine_pair(curve, distance_kind, res.inf_pair, h0,
                           maximize=False, rounds=rounds)
    return PairwiseResult(distance_kind, grid_n,
                          max(sup, res.sup), min(inf, res.inf),
                          sp if sup > res.sup else res.sup_pair,
                          ip if inf < res.inf else res.inf_pair,
                          refined=True)


# --- report ------------------------------------------------------------

@dataclass
class LipschitzReport:
    """Estimates of the four constants l <= L <= Lambda and K = ess sup D_w,
    plus lower bi-Lipschitz constants from the pairwise oracle."""
    l: float
    L: float
    Lambda: float
    K_qc: float | None
    lower_l: float
    lower_w: float
    method: str
    grid_n: int
    attained_at: dict = field(default_factory=dict)

    def to_dict(self):
        def jsonable(v):
            if isinstance(v, complex):
                return [v.real, v.imag]
            if isinstance(v, (tuple, list)):
                return [jsonable(x) for x in v]
            return float(v)

        return {
            "l": self.l, "L": self.L, "Lambda": self.Lambda,
            "K_qc": self.K_qc, "lower_l": self.lower_l,
            "lower_w": self.lower_w, "method": self.method,
            "grid_n": self.grid_n,
            "attained_at": {k: jsonable(v) for k, v in self.attained_at.items()},
        }


def lipschitz_report(curve, grid_n=4096, method="derivative", refine=True):
    """Full constant report.  method='derivative' uses kink-aware grid
    ess-sup formulas (with a pairwise L where no polar shortcut exists);
    method='pairwise' takes everything from the brute-force oracle."""
    curve = _as_boundary(curve)
    curve.require_valid()
    attained = {}
    pair_n = min(grid_n, 2048)

    if method == "pairwise":
        p1 = pairwise_sup_refined(curve, "d1", min(grid_n, _PAIR_CAP))
        p2 = pairwise_sup_refined(curve, "d2", min(grid_n, _PAIR_CAP))
        l, L = p1.sup, p2.sup
        attained["l"] = p1.sup_pair
        attained["L"] = p2.sup_pair
        pdisk = pairwise_sup(curve, "disk", min(grid_n, 256))
        Lambda = pdisk.sup
        attained["Lambda"] = pdisk.sup_pair
        lower_l = p2.inf
        attained["lower_l"] = p2.inf_pair
    else:
        ext = scan_extremum(
            lambda ts: np.abs(curve.boundary_velocity(ts)),
            kinks=curve.kinks,
            side_fn=lambda k, side: abs(curve.velocity_side(k, side)),
            grid_n=grid_n, refine=refine)
        l = ext.value
        attained["l"] = ext.t
        if isinstance(curve, PolarCurve) or \
                (isinstance(curve, BoundaryMap) and curve.is_polar):
            L = lip_L_polar(curve if isinstance(curve, PolarCurve)
                            else curve.induced_polar(), grid_n, refine=refine)
            attained["L"] = attained["l"]
        else:
            p2 = (pairwise_sup_refined(curve, "d2", pair_n) if refine
                  else pairwise_sup(curve, "d2", pair_n))
            L = p2.sup
            attained["L"] = p2.sup_pair
        Lambda = lip_Lambda(curve, grid_n, refine=refine)
        p2i = pairwise_sup(curve, "d2", pair_n)
        lower_l = p2i.inf
        attained["lower_l"] = p2i.inf_pair

    try:
        K_qc = max_dilatation(curve, grid_n, refine=refine)
    except DegenerateDifferential:
        K_qc = None
    pdisk = pairwise_sup(curve, "disk", min(grid_n, 256))
    lower_w = pdisk.inf
    attained["lower_w"] = pdisk.inf_pair

    return LipschitzReport(l=l, L=L, Lambda=Lambda, K_qc=K_qc,
                           lower_l=lower_l, lower_w=lower_w, method=method,
                           grid_n=grid_n, attained_at=attained)
