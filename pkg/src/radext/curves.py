"""Starlike Jordan curves and circle homeomorphisms.

Curve kinds:

  * PolarCurve           -- f(t) = r(t) e^{it}, the polar parametrization;
  * CircleHomeomorphism  -- an increasing degree-1 circle map psi;
  * BoundaryMap          -- g(t) = rho(t) e^{i psi(t)}, a general
    orientation-preserving parametrization of a starlike curve;
  * ParametricCurve      -- f(t) = x(t) + i y(t) given componentwise; used
    for maps that are not of rho/psi form (the shear builtin winds
    clockwise, so it cannot have a monotone psi).

All curve objects are immutable after construction and all operations are
pure, so shared concurrent reads are safe.
"""

from dataclasses import dataclass, field

import numpy as np

from ._scan import Extremum, scan_extremum
from .errors import DegenerateCurve, InvalidParams, UnknownCurve
from .periodic import (
    TWO_PI,
    PeriodicFunction,
    grid_lipschitz,
    identity_lift,
    mollify,
)

__all__ = [
    "PolarCurve", "CircleHomeomorphism", "BoundaryMap", "ParametricCurve",
    "TangentProfile", "StarlikeDiagnostics", "evaluate", "velocity",
    "tangent_profile", "validate_starlike", "builtin", "builtin_registry",
    "compose", "random_trigpoly_family", "mollify", "grid_lipschitz",
]

_VALIDATION_TOL = 1e-9


@dataclass
class StarlikeDiagnostics:
    """Result of validate_starlike; never raises, analysis ops reject on ok=False."""
    ok: bool
    min_r: float
    min_r_at: float
    periodicity_defect: float
    psi_monotonicity_defect: float | None = None
    psi_mean_defect: float | None = None
    messages: list = field(default_factory=list)

    def to_dict(self):
        out = {
            "ok": self.ok,
            "min_r": self.min_r,
            "min_r_at": self.min_r_at,
            "periodicity_defect": self.periodicity_defect,
        }
        if self.psi_monotonicity_defect is not None:
            out["psi_monotonicity_defect"] = self.psi_monotonicity_defect
        if self.psi_mean_defect is not None:
            out["psi_mean_defect"] = self.psi_mean_defect
        out["messages"] = list(self.messages)
        return out


class _CurveBase:
    curve_id = "curve"
    _diagnostics = None

    def validate(self, grid_n=4096):
        if self._diagnostics is None:
            self._diagnostics = self._validate(grid_n)
        return self._diagnostics

    def require_valid(self):
        diag = self.validate()
        if not diag.ok:
            raise DegenerateCurve(
                f"{self.curve_id}: " + "; ".join(diag.messages))
        return diag


class PolarCurve(_CurveBase):
    """Starlike curve via its polar radius r (positive, period offset 0)."""

    def __init__(self, r, curve_id="polar"):
        if r.period_offset != 0.0:
            raise ValueError("polar radius must have period offset 0")
        self.r = r
        self.kinks = r.kinks
        self.curve_id = curve_id

    def boundary(self, t):
        t = np.asarray(t, dtype=float)
        return self.r.value(t) * np.exp(1j * t)

    def boundary_velocity(self, t):
        t = np.asarray(t, dtype=float)
        return (self.r.derivative(t) + 1j * self.r.value(t)) * np.exp(1j * t)

    def velocity_side(self, t, side):
        return (self.r.deriv_side(t, side) + 1j * self.r.value(t)) * np.exp(1j * t)

    def to_boundary_map(self):
        return BoundaryMap(self.r, CircleHomeomorphism(identity_lift()),
                           curve_id=self.curve_id)

    def _validate(self, grid_n):
        ext = scan_extremum(self.r.value, kinks=self.kinks, grid_n=grid_n,
                            maximize=False)
        pdef = self.r.periodicity_defect()
        msgs = []
        if not ext.value > 0.0:
            msgs.append(f"r is not positive: r({ext.t:.6f}) = {ext.value:.6g}")
        if pdef >= _VALIDATION_TOL:
            msgs.append(f"periodicity defect {pdef:.3e}")
        return StarlikeDiagnostics(ok=not msgs, min_r=ext.value, min_r_at=ext.t,
                                   periodicity_defect=pdef, messages=msgs)


class CircleHomeomorphism(_CurveBase):
    """Increasing circle map given by its lift psi with psi(t+2pi)=psi(t)+2pi."""

    def __init__(self, psi, curve_id="circle-map"):
        if abs(psi.period_offset - TWO_PI) > 1e-12:
            raise ValueError("circle homeomorphism lift must have offset 2pi")
        self.psi = psi
        self.kinks = psi.kinks
        self.curve_id = curve_id

    def boundary(self, t):
        return np.exp(1j * self.psi.value(np.asarray(t, dtype=float)))

    def boundary_velocity(self, t):
        t = np.asarray(t, dtype=float)
        return 1j * self.psi.derivative(t) * np.exp(1j * self.psi.value(t))

    def velocity_side(self, t, side):
        return 1j * self.psi.deriv_side(t, side) * np.exp(1j * self.psi.value(t))

    def as_boundary_map(self):
        rho = PeriodicFunction.from_expression("1")
        return BoundaryMap(rho, self, curve_id=self.curve_id)

    def inverse(self, s):
        """Lift of the inverse map, by monotone bisection."""
        s = np.asarray(s, dtype=float)
        scalar = s.ndim == 0
        s = np.atleast_1d(s).astype(float)
        psi0 = self.psi.value(0.0)
        k = np.floor((s - psi0) / TWO_PI)
        s0 = s - TWO_PI * k
        lo = np.zeros_like(s0)
        hi = np.full_like(s0, TWO_PI)
        for _ in range(60):
            mid = 0.5 * (lo + hi)
            below = self.psi.value(mid) < s0
            lo = np.where(below, mid, lo)
            hi = np.where(below, hi, mid)
        out = 0.5 * (lo + hi) + TWO_PI * k
        return float(out[0]) if scalar else out

    def _validate(self, grid_n):
        dmin = scan_extremum(self.psi.derivative, kinks=self.kinks,
                             side_fn=self.psi.deriv_side, grid_n=grid_n,
                             maximize=False)
        mono_defect = max(0.0, -dmin.value)
        mean_defect = abs((self.psi.value(TWO_PI) - self.psi.value(0.0)) / TWO_PI - 1.0)
        psi0 = self.psi.value(0.0)
        msgs = []
        if mono_defect >= _VALIDATION_TOL:
            msgs.append(f"psi not nondecreasing: psi'({dmin.t:.6f}) = {dmin.value:.6g}")
        if mean_defect >= _VALIDATION_TOL:
            msgs.append(f"mean of psi' differs from 1 by {mean_defect:.3e}")
        if not (0.0 <= psi0 < TWO_PI):
            msgs.append(f"psi(0) = {psi0:.6g} outside [0, 2pi)")
        return StarlikeDiagnostics(ok=not msgs, min_r=1.0, min_r_at=0.0,
                                   periodicity_defect=self.psi.periodicity_defect(),
                                   psi_monotonicity_defect=mono_defect,
                                   psi_mean_defect=mean_defect, messages=msgs)


class BoundaryMap(_CurveBase):
    """g(t) = rho(t) e^{i psi(t)} onto a starlike curve, psi increasing."""

    def __init__(self, rho, psi, curve_id="boundary-map"):
        self.rho = rho
        self.psi = psi if isinstance(psi, CircleHomeomorphism) else CircleHomeomorphism(psi)
        self.kinks = np.unique(np.concatenate([rho.kinks, self.psi.kinks]))
        self.curve_id = curve_id

    @property
    def is_polar(self):
        """True when psi is the identity (up to 1e-12 on a coarse grid)."""
        ts = TWO_PI * np.arange(64) / 64
        return bool(np.max(np.abs(self.psi.psi.value(ts) - ts)) < 1e-12)

    def boundary(self, t):
        t = np.asarray(t, dtype=float)
        return self.rho.value(t) * np.exp(1j * self.psi.psi.value(t))

    def boundary_velocity(self, t):
        t = np.asarray(t, dtype=float)
        rho, drho = self.rho.value(t), self.rho.derivative(t)
        psi, dpsi = self.psi.psi.value(t), self.psi.psi.derivative(t)
        return (drho + 1j * rho * dpsi) * np.exp(1j * psi)

    def velocity_side(self, t, side):
        rho = self.rho.value(t)
        drho = self.rho.deriv_side(t, side)
        psi = self.psi.psi.value(t)
        dpsi = self.psi.psi.deriv_side(t, side)
        return (drho + 1j * rho * dpsi) * np.exp(1j * psi)

    def induced_polar(self):
        """The polar curve r(s) = rho(psi^{-1}(s)) traced by this map."""
        inv = self.psi.inverse

        def value(s):
            return self.rho.value(inv(np.asarray(s, dtype=float)))

        def deriv(s):
            tt = inv(np.asarray(s, dtype=float))
            return self.rho.derivative(tt) / self.psi.psi.derivative(tt)

        kinks = np.sort(np.mod(self.psi.psi.value(self.kinks), TWO_PI)) \
            if self.kinks.size else np.empty(0)
        r = PeriodicFunction.from_callables(
            value, deriv, period_offset=0.0, kinks=kinks,
            source=f"induced-polar({self.curve_id})")
        return PolarCurve(r, curve_id=f"{self.curve_id}:induced-polar")

    def _validate(self, grid_n):
        rmin = scan_extremum(self.rho.value, kinks=self.rho.kinks,
                             grid_n=grid_n, maximize=False)
        pdef = self.rho.periodicity_defect()
        psi_diag = self.psi.validate(grid_n)
        msgs = list(psi_diag.messages)
        if not rmin.value > 0.0:
            msgs.append(f"rho not positive: rho({rmin.t:.6f}) = {rmin.value:.6g}")
        if pdef >= _VALIDATION_TOL:
            msgs.append(f"rho periodicity defect {pdef:.3e}")
        return StarlikeDiagnostics(
            ok=not msgs, min_r=rmin.value, min_r_at=rmin.t,
            periodicity_defect=max(pdef, psi_diag.periodicity_defect),
            psi_monotonicity_defect=psi_diag.psi_monotonicity_defect,
            psi_mean_defect=psi_diag.psi_mean_defect, messages=msgs)


class ParametricCurve(_CurveBase):
    """Boundary map given componentwise as f(t) = x(t) + i y(t).

    Carries no rho/psi structure, so only Lipschitz-type analyses apply;
    differential data may be orientation-reversing and is rejected there.
    """

    def __init__(self, x, y, curve_id="parametric"):
        self.x = x
        self.y = y
        self.kinks = np.unique(np.concatenate([x.kinks, y.kinks]))
        self.curve_id = curve_id

    def boundary(self, t):
        t = np.asarray(t, dtype=float)
        return self.x.value(t) + 1j * self.y.value(t)

    def boundary_velocity(self, t):
        t = np.asarray(t, dtype=float)
        return self.x.derivative(t) + 1j * self.y.derivative(t)

    def velocity_side(self, t, side):
        return self.x.deriv_side(t, side) + 1j * self.y.deriv_side(t, side)

    def _validate(self, grid_n):
        fmin = scan_extremum(lambda ts: np.abs(self.boundary(ts)),
                             kinks=self.kinks, grid_n=grid_n, maximize=False)
        pdef = max(self.x.periodicity_defect(), self.y.periodicity_defect())
        msgs = []
        if not fmin.value > 0.0:
            msgs.append(f"curve passes through origin near t = {fmin.t:.6f}")
        if pdef >= _VALIDATION_TOL:
            msgs.append(f"closure defect {pdef:.3e}")
        return StarlikeDiagnostics(ok=not msgs, min_r=fmin.value, min_r_at=fmin.t,
                                   periodicity_defect=pdef, messages=msgs)


# --- pointwise operations ---------------------------------------------

def evaluate(curve, t):
    """Boundary point of the curve at parameter t, as a complex number."""
    return curve.boundary(t)


def velocity(curve, t, side=None):
    """Boundary velocity f'(t); at flagged kinks the left-limit value by
    default, or the requested one-sided limit."""
    if side is not None:
        return curve.velocity_side(t, side)
    return curve.boundary_velocity(t)


# --- tangent profile ---------------------------------------------------

@dataclass
class TangentProfile:
    """Angle alpha_t between the position vector and the oriented tangent,
    with cot(alpha_t) = r'(t)/r(t), and the worst-case angle
    alpha_gamma = min(alpha_1, pi - alpha_2)."""
    alpha: object
    chi: object
    alpha1: float
    alpha2: float
    alpha_gamma: float
    alpha1_at: float
    alpha2_at: float

    @property
    def sin_alpha_gamma(self):
        return float(np.sin(self.alpha_gamma))

    @property
    def csc_alpha_gamma(self):
        return 1.0 / self.sin_alpha_gamma


def tangent_profile(curve, grid_n=4096):
    """Tangent-angle profile of a polar curve, or of the polar curve
    induced by a boundary map (alpha evaluated along the parametrization)."""
    curve.require_valid()
    if isinstance(curve, PolarCurve):
        r = curve.r

        def alpha_vec(ts):
            return np.arctan2(r.value(ts), r.derivative(ts))

        def alpha_side(t, side):
            return float(np.arctan2(r.value(t), r.deriv_side(t, side)))

        def chi(ts):
            return r.derivative(ts) / r.value(ts)

    elif isinstance(curve, BoundaryMap):
        rho, psi = curve.rho, curve.psi.psi

        def alpha_vec(ts):
            return np.arctan2(rho.value(ts) * psi.derivative(ts),
                              rho.derivative(ts))

        def alpha_side(t, side):
            return float(np.arctan2(rho.value(t) * psi.deriv_side(t, side),
                                    rho.deriv_side(t, side)))

        def chi(ts):
            return rho.derivative(ts) / (rho.value(ts) * psi.derivative(ts))

    else:
        raise TypeError("tangent profile needs a PolarCurve or BoundaryMap")

    lo = scan_extremum(alpha_vec, kinks=curve.kinks, side_fn=alpha_side,
                       grid_n=grid_n, maximize=False)
    hi = scan_extremum(alpha_vec, kinks=curve.kinks, side_fn=alpha_side,
                       grid_n=grid_n, maximize=True)
    alpha_gamma = min(lo.value, np.pi - hi.value)
    return TangentProfile(alpha=alpha_vec, chi=chi, alpha1=lo.value,
                          alpha2=hi.value, alpha_gamma=alpha_gamma,
                          alpha1_at=lo.t, alpha2_at=hi.t)


def validate_starlike(curve, grid_n=4096):
    """Starlikeness diagnostics: min radius, periodicity defect, and (for
    boundary maps) psi monotonicity defect. Structured result, never raises."""
    return curve.validate(grid_n)


# --- builtin curve registry --------------------------------------------

def _make_circle(params):
    s = params.pop("s", 1.0)
    if params:
        raise InvalidParams(f"circle takes only s, got {sorted(params)}")
    if not s > 0:
        raise InvalidParams(f"circle radius must be positive, got {s}")
    r = PeriodicFunction.from_expression("s", params={"s": s})
    return PolarCurve(r, curve_id=f"circle(s={s:g})")


def _make_ellipse(params):
    a = params.pop("a", 1.0)
    b = params.pop("b", 1.0)
    if params:
        raise InvalidParams(f"ellipse takes a, b; got extras {sorted(params)}")
    if not (0 < b <= a):
        raise InvalidParams(f"ellipse needs 0 < b <= a, got a={a}, b={b}")
    r = PeriodicFunction.from_expression(
        "(cos(t)^2/a^2 + sin(t)^2/b^2)^(-1/2)", params={"a": a, "b": b})
    return PolarCurve(r, curve_id=f"ellipse(a={a:g},b={b:g})")


def _make_square(params):
    if params:
        raise InvalidParams(f"square takes no params, got {sorted(params)}")
    r = PeriodicFunction.from_expression("min(1/abs(sin(t)), 1/abs(cos(t)))")
    return PolarCurve(r, curve_id="square")


def _make_shear(params):
    if params:
        raise InvalidParams(f"shear takes no params, got {sorted(params)}")
    x = PeriodicFunction.from_expression("-1 + min(2*pi - t, t)")
    y = PeriodicFunction.from_expression("sin(t)/10")
    return ParametricCurve(x, y, curve_id="shear")


def _trigpoly_expr(params):
    c0 = params.pop("c0", 1.0)
    terms = [f"{c0!r}"]
    for key in sorted(params, key=lambda k: (int(k[1:]), k[0])):
        kind, order = key[0], key[1:]
        if kind not in ("a", "b") or not order.isdigit() or int(order) < 1:
            raise InvalidParams(f"trigpoly params are c0, aK, bK; got {key!r}")
        fn = "cos" if kind == "a" else "sin"
        terms.append(f"{params[key]!r}*{fn}({int(order)}*t)")
    return " + ".join(terms)


def _make_trigpoly(params):
    text = _trigpoly_expr(dict(params))
    r = PeriodicFunction.from_expression(text)
    ts = TWO_PI * np.arange(4096) / 4096
    rmin = float(np.min(r.value(ts)))
    if rmin <= 0:
        raise InvalidParams(f"trigpoly radius not positive (min {rmin:.6g})")
    return PolarCurve(r, curve_id=f"trigpoly({text})")


_BUILTINS = {
    "circle": (_make_circle, "s>0 (radius); r(t) = s"),
    "ellipse": (_make_ellipse, "0<b<=a; r(t) = (cos^2 t/a^2 + sin^2 t/b^2)^(-1/2)"),
    "square": (_make_square, "unit square; r(t) = min(1/|sin t|, 1/|cos t|)"),
    "shear": (_make_shear, "F(e^it) = (-1+min(2pi-t, t), sin(t)/10); not polar"),
    "trigpoly": (_make_trigpoly, "c0, aK, bK; r(t) = c0 + sum aK cos(Kt) + bK sin(Kt)"),
}


def builtin(name, **params):
    """Construct a builtin curve by name (circle, ellipse, square, shear,
    trigpoly)."""
    try:
        factory, _ = _BUILTINS[name]
    except KeyError:
        raise UnknownCurve(name, _BUILTINS) from None
    return factory(dict(params))


def builtin_registry():
    return {name: desc for name, (_, desc) in _BUILTINS.items()}


# --- composition and random families -----------------------------------

def compose(curve, psi):
    """Reparametrize a polar curve by a circle homeomorphism:
    g(t) = r(psi(t)) e^{i psi(t)}."""
    r = curve.r if isinstance(curve, PolarCurve) else curve
    pf = psi.psi

    def value(ts):
        return r.value(pf.value(np.asarray(ts, dtype=float)))

    def deriv(ts):
        ts = np.asarray(ts, dtype=float)
        return r.derivative(pf.value(ts)) * pf.derivative(ts)

    if r.kinks.size:
        kinks = np.sort(np.mod(psi.inverse(r.kinks), TWO_PI))
    else:
        kinks = np.empty(0)
    rho = PeriodicFunction.from_callables(
        value, deriv, period_offset=0.0, kinks=kinks,
        source=f"compose({getattr(curve, 'curve_id', r.source)}, {pf.source})")
    cid = f"{getattr(curve, 'curve_id', 'polar')} o {psi.curve_id}"
    return BoundaryMap(rho, psi, curve_id=cid)


def random_trigpoly_family(seed, count=20, max_degree=3):
    """Seeded family of positive trigonometric-polynomial curves with
    coefficient mass at most 0.8, so min r >= 0.2."""
    rng = np.random.default_rng(seed)
    out = []
    for i in range(count):
        deg = int(rng.integers(1, max_degree + 1))
        coeffs = rng.uniform(-1.0, 1.0, size=2 * deg)
        mass = np.sum(np.abs(coeffs))
        coeffs *= 0.8 / max(mass, 1e-9)
        params = {"c0": 1.0}
        for k in range(deg):
            params[f"a{k + 1}"] = float(coeffs[2 * k])
            params[f"b{k + 1}"] = float(coeffs[2 * k + 1])
        curve = builtin("trigpoly", **params)
        curve.curve_id = f"trigpoly[seed={seed},i={i}]"
        out.append(curve)
    return out
