"""2pi-periodic scalar functions with almost-everywhere derivative access.

A PeriodicFunction satisfies phi(t + 2pi) = phi(t) + b where b is its
``period_offset`` (0 for radial functions, 2pi for circle homeomorphism
lifts).  Three backends:

  * expression  -- a DSL formula with symbolic derivative; corner points
    (kinks) of abs/min/max are located automatically and derivatives
    there follow the left-limit convention, with one-sided limits
    available on request;
  * samples     -- a uniform sample array, interpolated by a periodic
    cubic spline (offset 0) or a monotonicity-preserving PCHIP cubic
    (nonzero offset, the circle-homeomorphism case);
  * callables   -- arbitrary value/derivative functions, used for
    compositions and mollified outputs.
"""

import numpy as np
from scipy.interpolate import CubicSpline, PchipInterpolator

from . import dsl
from .errors import InvalidWidth

TWO_PI = 2.0 * np.pi

_SIDE_EPS = 1e-7      # probe distance for one-sided branch decisions
_KINK_MATCH = 1e-12   # grid point counts as "at" a kink within this


def wrap_angle(t):
    """Map t (scalar or array) to [0, 2pi) and return (wrapped, turns)."""
    t = np.asarray(t, dtype=float)
    tw = np.mod(t, TWO_PI)
    k = np.round((t - tw) / TWO_PI)
    return tw, k


def _scalarize(out, t):
    if np.ndim(t) == 0:
        return float(out)
    return np.asarray(out, dtype=float)


def _circular_dist(a, b):
    d = np.abs(np.mod(a - b, TWO_PI))
    return np.minimum(d, TWO_PI - d)


# --- kink detection for expression sources ---------------------------

def _switch_exprs(node, out):
    """Collect the scalar functions whose zeros are branch switches:
    the argument of abs, and u - v for min/max/selmin/selmax."""
    if isinstance(node, dsl.Call):
        if node.name == "abs":
            out.append(node.args[0])
        elif node.name in ("min", "max", "selmin", "selmax"):
            out.append(dsl.BinOp("-", node.args[0], node.args[1]))
        for a in node.args:
            _switch_exprs(a, out)
    elif isinstance(node, dsl.Neg):
        _switch_exprs(node.child, out)
    elif isinstance(node, dsl.BinOp):
        _switch_exprs(node.left, out)
        _switch_exprs(node.right, out)


def _raw_eval(expr, t, params):
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        out = dsl._eval(expr, np.asarray(t, dtype=float), params,
                        np.asarray(t, dtype=float))
    return np.broadcast_to(np.asarray(out, dtype=float),
                           np.asarray(t, dtype=float).shape)


def detect_kinks(expr, params, scan_n=8192):
    """Zeros in [0, 2pi) of every branch-switch function of the expression,
    located by bisection on a scan grid."""
    switches = []
    _switch_exprs(expr, switches)
    if not switches:
        return np.empty(0)
    ts = np.linspace(0.0, TWO_PI, scan_n + 1)
    roots = []
    for s in switches:
        vals = _raw_eval(s, ts, params)
        sign = np.sign(vals)
        for i in range(scan_n):
            a, b = vals[i], vals[i + 1]
            if not (np.isfinite(a) and np.isfinite(b)):
                continue
            if sign[i] == 0.0:
                roots.append(ts[i])
                continue
            if sign[i] * sign[i + 1] < 0:
                lo, hi = ts[i], ts[i + 1]
                flo = a
                for _ in range(80):
                    mid = 0.5 * (lo + hi)
                    fm = float(_raw_eval(s, mid, params))
                    if fm == 0.0:
                        lo = hi = mid
                        break
                    if flo * fm < 0:
                        hi = mid
                    else:
                        lo, flo = mid, fm
                roots.append(0.5 * (lo + hi))
        if sign[scan_n] == 0.0:
            roots.append(0.0)
    if not roots:
        return np.empty(0)
    roots = np.mod(np.asarray(roots), TWO_PI)
    roots.sort()
    keep = [roots[0]]
    for r in roots[1:]:
        if r - keep[-1] > 1e-10:
            keep.append(r)
    if len(keep) > 1 and _circular_dist(keep[0], keep[-1]) <= 1e-10:
        keep.pop()
    return np.asarray(keep)


# --- the function object ---------------------------------------------

class PeriodicFunction:
    """Scalar function with phi(t + 2pi) = phi(t) + period_offset."""

    def __init__(self, raw_value, raw_deriv, period_offset, kinks, source,
                 side_deriv=None, lifted=False):
        # raw_value/raw_deriv act on t in [0, 2pi]; when ``lifted`` they
        # already handle arbitrary real t including the offset term.
        self._raw_value = raw_value
        self._raw_deriv = raw_deriv
        self._side_deriv = side_deriv
        self._lifted = lifted
        self.period_offset = float(period_offset)
        self.kinks = np.asarray(kinks, dtype=float)
        self.source = source

    # -- constructors --

    @classmethod
    def from_expression(cls, text_or_expr, params=None, period_offset=0.0,
                        kinks=None):
        """Build from DSL text or a parsed AST; kinks are auto-detected
        from abs/min/max branch switches unless given explicitly."""
        expr = dsl.parse(text_or_expr) if isinstance(text_or_expr, str) else text_or_expr
        params = dict(params or {})
        missing = dsl.free_params(expr) - set(params)
        if missing:
            from .errors import UnboundParameter
            raise UnboundParameter(missing)
        dexpr = dsl.diff(expr)
        if kinks is None:
            kinks = detect_kinks(expr, params)

        def raw_value(t):
            return dsl.evaluate(expr, t, params)

        def raw_deriv(t):
            return dsl.evaluate(dexpr, t, params)

        def side_deriv(t, probe):
            return dsl.evaluate(dexpr, t, params, probe=probe)

        pf = cls(raw_value, raw_deriv, period_offset, kinks,
                 source=dsl.to_text(expr), side_deriv=side_deriv)
        pf.expr = expr
        pf.dexpr = dexpr
        pf._finish_kinks()
        return pf

    @classmethod
    def from_samples(cls, samples, period_offset=0.0):
        """Uniform samples over [0, 2pi), n >= 16.  Offset 0 uses a
        periodic cubic spline; nonzero offset uses PCHIP (monotone data
        stays monotone) pinned to phi(2pi) = phi(0) + offset."""
        samples = np.asarray(samples, dtype=float)
        n = samples.size
        if n < 16:
            raise ValueError(f"need at least 16 samples, got {n}")
        xs = np.linspace(0.0, TWO_PI, n + 1)
        ys = np.append(samples, samples[0] + period_offset)
        if period_offset == 0.0:
            interp = CubicSpline(xs, ys, bc_type="periodic")
        else:
            interp = PchipInterpolator(xs, ys)
        dinterp = interp.derivative()
        return cls(interp, dinterp, period_offset, np.empty(0),
                   source=f"samples[{n}]")

    @classmethod
    def from_callables(cls, value, deriv, period_offset=0.0, kinks=(),
                       source="callable"):
        """Wrap arbitrary value/derivative callables that already accept
        any real t (lift included)."""
        return cls(value, deriv, period_offset, np.asarray(kinks, dtype=float),
                   source=source, lifted=True)

    def _finish_kinks(self):
        # a derivative jump across the period seam is a kink at t = 0
        dr = self.deriv_side(0.0, "right")
        dl = self.deriv_side(0.0, "left")
        if abs(dr - dl) > 1e-9 * max(1.0, abs(dr), abs(dl)):
            if self.kinks.size == 0 or _circular_dist(self.kinks, 0.0).min() > 1e-10:
                self.kinks = np.sort(np.append(self.kinks, 0.0))

    # -- evaluation --

    def value(self, t):
        if self._lifted:
            return _scalarize(self._raw_value(np.asarray(t, dtype=float)), t)
        tw, k = wrap_angle(t)
        out = np.asarray(self._raw_value(tw), dtype=float)
        if self.period_offset != 0.0:
            out = out + self.period_offset * k
        return _scalarize(out, t)

    def derivative(self, t):
        """A.e. derivative; at registered kinks the left-limit value."""
        if self._lifted:
            out = np.asarray(self._raw_deriv(np.asarray(t, dtype=float)), dtype=float)
        else:
            tw, _ = wrap_angle(t)
            out = np.asarray(self._raw_deriv(tw), dtype=float)
        if self.kinks.size:
            tw, _ = wrap_angle(t)
            out = np.atleast_1d(np.array(out, dtype=float, copy=True))
            tw1 = np.atleast_1d(tw)
            for kk in self.kinks:
                hit = _circular_dist(tw1, kk) < _KINK_MATCH
                if hit.any():
                    out[hit] = self.deriv_side(kk, "left")
            out = out.reshape(np.shape(t))
        return _scalarize(out, t)

    def deriv_side(self, t, side):
        """One-sided derivative limit at t ('left' or 'right')."""
        tw, _ = wrap_angle(t)
        tw = float(tw)
        if side == "left":
            if tw == 0.0:
                tw = TWO_PI
            probe = tw - _SIDE_EPS
        elif side == "right":
            probe = tw + _SIDE_EPS
        else:
            raise ValueError(f"side must be 'left' or 'right', not {side!r}")
        if self._side_deriv is not None:
            return float(self._side_deriv(tw, probe))
        if self._lifted:
            return float(np.asarray(self._raw_deriv(np.asarray(tw))))
        return float(np.asarray(self._raw_deriv(np.asarray(tw))))

    def periodicity_defect(self, probes=(0.0, 1.0, 2.5, 4.0, 5.5)):
        """max |phi(t + 2pi) - phi(t) - offset| over a few probe points."""
        ts = np.asarray(probes, dtype=float)
        return float(np.max(np.abs(self.value(ts + TWO_PI) - self.value(ts)
                                   - self.period_offset)))


def identity_lift():
    """The lift of the identity circle map: phi(t) = t, offset 2pi."""
    return PeriodicFunction.from_expression("t", period_offset=TWO_PI)


def grid_lipschitz(pf, n=4096):
    """Grid estimate of the Lipschitz constant: max |phi'| over a uniform
    grid plus one-sided limits at kinks."""
    ts = TWO_PI * np.arange(n) / n
    best = float(np.max(np.abs(pf.derivative(ts))))
    for k in pf.kinks:
        best = max(best, abs(pf.deriv_side(k, "left")),
                   abs(pf.deriv_side(k, "right")))
    return best


# --- mollification ----------------------------------------------------

def _bump_quadrature(width, nodes):
    """Positive half of a symmetric Gauss-Legendre rule, with weights
    proportional to the C-infinity bump exp(-1/(1-(y/width)^2)) and
    normalized so that the mirrored rule has total mass exactly 1."""
    x, w = np.polynomial.legendre.leggauss(nodes)
    pos = x > 0
    xp, wp = x[pos], w[pos]
    eta = np.exp(-1.0 / (1.0 - xp ** 2))
    q = wp * eta
    q = q / (2.0 * q.sum())
    return width * xp, q


def mollify(phi, width, nodes=64):
    """Smooth a periodic function by convolution with a normalized
    compactly supported bump kernel of the given half-width.

    The discrete operator is a symmetric convex combination of translates
    of phi, so it cannot increase the Lipschitz constant, it reproduces
    affine functions exactly, it preserves the period offset, and its
    sup-distance to phi is at most Lip(phi) * width.
    """
    if not (0.0 < width < np.pi):
        raise InvalidWidth(f"width must lie in (0, pi), got {width}")
    y, q = _bump_quadrature(width, nodes)

    def value(ts):
        ts = np.asarray(ts, dtype=float)
        acc = np.zeros(ts.shape)
        for yi, qi in zip(y, q):
            acc += qi * (np.asarray(phi.value(ts - yi))
                         + np.asarray(phi.value(ts + yi)))
        return acc

    def deriv(ts):
        ts = np.asarray(ts, dtype=float)
        acc = np.zeros(ts.shape)
        for yi, qi in zip(y, q):
            acc += qi * (np.asarray(phi.derivative(ts - yi))
                         + np.asarray(phi.derivative(ts + yi)))
        return acc

    return PeriodicFunction.from_callables(
        value, deriv, period_offset=phi.period_offset,
        source=f"mollify({phi.source}, width={width})")
