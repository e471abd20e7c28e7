"""Theorem-verification suite: measure every constant two ways and emit a
structured pass/fail report.

Checks are one of three kinds, with matching default tolerances:

  * pairwise-oracle comparisons (grid-limited):       1e-3
  * closed-form comparisons (refined grids):          1e-6
  * identities and one-sided soundness inequalities:  1e-9

A check that contradicts a printed claim which the oracle itself refutes
is reported as ``flagged`` rather than pass/fail (currently only the
circle-map dilatation claim: D_w = max(psi', 1/psi') pointwise, so
ess sup D_w = max(sup psi', 1/inf psi'), which exceeds sup psi' whenever
inf psi' < 1/sup psi').
"""

from dataclasses import dataclass, field

import numpy as np

from ._scan import scan_extremum
from .bounds import inverse_bounds, star_bounds
from .curves import (
    BoundaryMap,
    CircleHomeomorphism,
    ParametricCurve,
    PolarCurve,
)
from .errors import RadextError
from .lipschitz import (
    LipschitzReport,
    lip_l,
    lip_L_polar,
    lip_Lambda,
    max_abs_mu,
    max_dilatation,
    pairwise_sup,
    pairwise_sup_refined,
)

TOL_PAIRWISE = 1e-3
TOL_CLOSED = 1e-6
TOL_IDENT = 1e-9

_CHECK_NAMES = frozenset({
    "starlike-valid",
    "chain-l-L-Lambda",
    "cir-l-eq-lip-psi", "cir-L-eq-lip-psi", "cir-Lambda-eq-lip-psi",
    "cir-K-claim",
    "ara-l-eq-L", "ara-corollary-grid",
    "rrr-strict-gap", "rrr-circle-collapse",
    "star-upper-sound", "star-lower-sound", "star-k-sound",
    "star-inverse-psi", "star-inverse-alpha", "star-tightness-gap",
    "min-K-lower",
    "generic-l-le-L",
})

__all__ = [
    "CheckResult", "VerificationReport", "verify_circle", "verify_polar",
    "verify_star", "verify_generic", "verify_curve", "limit_lemma_check",
    "TOL_PAIRWISE", "TOL_CLOSED", "TOL_IDENT",
]


@dataclass
class CheckResult:
    name: str
    status: str  # pass | fail | flagged
    measured: list
    expected: list
    tolerance: float
    detail: str = ""

    def __post_init__(self):
        assert self.name in _CHECK_NAMES, f"unregistered check {self.name}"

    def to_dict(self):
        return {
            "name": self.name, "status": self.status,
            "measured": [float(m) for m in self.measured],
            "expected": [float(e) for e in self.expected],
            "tolerance": self.tolerance, "detail": self.detail,
        }


@dataclass
class VerificationReport:
    curve_id: str
    checks: list = field(default_factory=list)
    lipschitz: LipschitzReport | None = None
    bounds: object = None
    notes: list = field(default_factory=list)

    @property
    def passed(self):
        return all(c.status != "fail" for c in self.checks)

    def to_dict(self):
        return {
            "curve_id": self.curve_id,
            "passed": self.passed,
            "checks": [c.to_dict() for c in self.checks],
            "lipschitz": self.lipschitz.to_dict() if self.lipschitz else None,
            "bounds": self.bounds.to_dict() if self.bounds else None,
            "notes": list(self.notes),
        }

    def merge(self, other):
        seen = {c.name for c in self.checks}
        for c in other.checks:
            if c.name not in seen:
                self.checks.append(c)
        self.notes.extend(n for n in other.notes if n not in self.notes)
        if self.bounds is None:
            self.bounds = other.bounds
        if self.lipschitz is None:
            self.lipschitz = other.lipschitz
        return self


def _close(name, measured, expected, tol, detail=""):
    ok = abs(measured - expected) <= tol
    return CheckResult(name, "pass" if ok else "fail", [measured], [expected],
                       tol, detail)


def _ge(name, measured, lower, tol, detail=""):
    ok = measured >= lower - tol
    return CheckResult(name, "pass" if ok else "fail", [measured], [lower],
                       tol, detail)


def _chain_check(curve, n=256):
    """l <= L <= Lambda with all three from the pairwise oracle on the
    same angle grid (the radius-1 ring of the disk grid is exactly the
    boundary grid, so the inequalities hold pair-by-pair)."""
    p1 = pairwise_sup(curve, "d1", n)
    p2 = pairwise_sup(curve, "d2", n)
    pd = pairwise_sup(curve, "disk", n)
    ok = p1.sup <= p2.sup + 1e-15 and p2.sup <= pd.sup + 1e-15
    return CheckResult("chain-l-L-Lambda", "pass" if ok else "fail",
                       [p1.sup, p2.sup, pd.sup], [], 0.0,
                       "pairwise l <= L <= Lambda on a shared grid"), p2, pd


def _validity_check(curve):
    diag = curve.validate()
    return CheckResult("starlike-valid", "pass" if diag.ok else "fail",
                       [diag.min_r], [0.0], 0.0,
                       "; ".join(diag.messages) or "min r > 0, defects < 1e-9")


def verify_circle(psi, grid_n=4096, tol=None):
    """Circle-to-circle maps: l = L = Lambda = Lip(psi) = sup psi'.

    The printed claim also equates ess sup D_w with sup psi'; pointwise
    D_w = max(psi', 1/psi'), so the measured value is
    max(sup psi', 1/inf psi') and the claim is flagged when they differ.
    """
    tol = TOL_CLOSED if tol is None else tol
    if isinstance(psi, BoundaryMap):
        bmap = psi
        psi = bmap.psi
    else:
        bmap = psi.as_boundary_map()
    report = VerificationReport(curve_id=psi.curve_id)
    report.checks.append(_validity_check(psi))

    pf = psi.psi
    sup_dpsi = scan_extremum(pf.derivative, kinks=pf.kinks,
                             side_fn=pf.deriv_side, grid_n=grid_n).value
    inf_dpsi = scan_extremum(pf.derivative, kinks=pf.kinks,
                             side_fn=pf.deriv_side, grid_n=grid_n,
                             maximize=False).value
    l = lip_l(bmap, grid_n)
    p2 = pairwise_sup_refined(bmap, "d2", min(grid_n, 4096))
    lam = lip_Lambda(bmap, grid_n)
    report.checks.append(_close("cir-l-eq-lip-psi", l, sup_dpsi, tol))
    report.checks.append(_close("cir-L-eq-lip-psi", p2.sup, sup_dpsi, tol,
                                "pairwise chordal oracle, refined"))
    report.checks.append(_close("cir-Lambda-eq-lip-psi", lam, sup_dpsi, tol))

    K_measured = max_dilatation(bmap, grid_n)
    K_pointwise = max(sup_dpsi, 1.0 / inf_dpsi)
    if abs(K_measured - sup_dpsi) <= tol:
        status = "pass"
    else:
        status = "flagged"
        report.notes.append(
            f"dilatation claim: measured ess sup D_w = {K_measured:.12g} "
            f"= max(sup psi', 1/inf psi') = {K_pointwise:.12g}, but the "
            f"printed claim equates it with sup psi' = {sup_dpsi:.12g}")
    report.checks.append(CheckResult(
        "cir-K-claim", status, [K_measured], [sup_dpsi], tol,
        "pointwise D_w = max(psi', 1/psi')"))

    chain, p2c, pdc = _chain_check(bmap)
    report.checks.append(chain)
    report.lipschitz = LipschitzReport(
        l=l, L=p2.sup, Lambda=lam, K_qc=K_measured, lower_l=p2c.inf,
        lower_w=pdc.inf, method="mixed", grid_n=grid_n,
        attained_at={"L": p2.sup_pair})
    return report


def verify_polar(curve, grid_n=4096, tol=None):
    """Polar parametrizations: l = L (diagonal-limit theorem), and
    Lambda > L strictly unless the curve is a circle centered at 0."""
    tol = TOL_PAIRWISE if tol is None else tol
    report = VerificationReport(curve_id=curve.curve_id)
    report.checks.append(_validity_check(curve))

    n = min(grid_n, 4096)
    p1 = pairwise_sup_refined(curve, "d1", n)
    p2 = pairwise_sup_refined(curve, "d2", n)
    report.checks.append(CheckResult(
        "ara-l-eq-L", "pass" if abs(p1.sup - p2.sup) <= tol * p2.sup else "fail",
        [p1.sup, p2.sup], [], tol, "pairwise oracles, relative gap"))

    l_deriv = lip_l(curve, grid_n)
    L_deriv = lip_L_polar(curve, grid_n)
    report.checks.append(_close("ara-corollary-grid", L_deriv, l_deriv,
                                TOL_IDENT,
                                "max sqrt(r^2+r'^2) equals ess sup |f'|"))

    lam = lip_Lambda(curve, grid_n)
    r = curve.r
    ts = 2.0 * np.pi * np.arange(4096) / 4096
    rv = r.value(ts)
    is_circle = (rv.max() - rv.min()) <= 1e-9 * rv.max()
    if is_circle:
        report.checks.append(_close("rrr-circle-collapse", lam, L_deriv,
                                    TOL_IDENT, "circle: Lambda = L"))
    else:
        gap = lam - L_deriv
        report.checks.append(CheckResult(
            "rrr-strict-gap", "pass" if gap > tol else "fail",
            [lam, L_deriv, gap], [], tol,
            "non-circular polar curve must have Lambda > L"))

    chain, p2c, pdc = _chain_check(curve)
    report.checks.append(chain)
    try:
        K = max_dilatation(curve, grid_n)
    except RadextError:
        K = None
    report.lipschitz = LipschitzReport(
        l=p1.sup, L=p2.sup, Lambda=lam, K_qc=K, lower_l=p2c.inf,
        lower_w=pdc.inf, method="mixed", grid_n=grid_n,
        attained_at={"l": p1.sup_pair, "L": p2.sup_pair})
    return report


def verify_star(curve, grid_n=4096, tol=None):
    """Soundness of the explicit bounds: Lambda <= bigL, pairwise lower
    constant >= ell, max |mu| <= k, plus the inverse bounds with
    k = measured max |mu| and the csc(alpha_gamma) floor."""
    tol = TOL_IDENT if tol is None else tol
    if isinstance(curve, PolarCurve):
        bmap = curve.to_boundary_map()
    elif isinstance(curve, CircleHomeomorphism):
        bmap = curve.as_boundary_map()
    else:
        bmap = curve
    report = VerificationReport(curve_id=bmap.curve_id)
    report.checks.append(_validity_check(bmap))

    sb = star_bounds(bmap, grid_n)
    report.bounds = sb
    lam = lip_Lambda(bmap, grid_n)
    pd = pairwise_sup(bmap, "disk", min(grid_n, 256))
    mu = max_abs_mu(bmap, grid_n)
    K = max_dilatation(bmap, grid_n)

    report.checks.append(CheckResult(
        "star-upper-sound", "pass" if lam <= sb.bigL + tol else "fail",
        [lam], [sb.bigL], tol, "measured Lambda <= bigL"))
    report.checks.append(_ge("star-lower-sound", pd.inf, sb.ell, tol,
                             "pairwise disk lower constant >= ell"))
    report.checks.append(CheckResult(
        "star-k-sound", "pass" if mu <= sb.k_bound + tol else "fail",
        [mu], [sb.k_bound], tol, "measured max |mu| <= k bound"))

    gap = sb.bigL - lam
    report.checks.append(CheckResult(
        "star-tightness-gap", "pass", [gap], [], 0.0,
        "informational: bigL - measured Lambda"))

    lo, hi, sin_lo = inverse_bounds(mu)
    pf = bmap.psi.psi
    dmin = scan_extremum(pf.derivative, kinks=pf.kinks, side_fn=pf.deriv_side,
                         grid_n=grid_n, maximize=False).value
    dmax = scan_extremum(pf.derivative, kinks=pf.kinks, side_fn=pf.deriv_side,
                         grid_n=grid_n).value
    ok_psi = dmin >= lo - tol and dmax <= hi + tol
    report.checks.append(CheckResult(
        "star-inverse-psi", "pass" if ok_psi else "fail",
        [dmin, dmax], [lo, hi], tol,
        "grid psi' within [(1-k)/(1+k), (1+k)/(1-k)], k = measured max |mu|"))
    report.checks.append(_ge("star-inverse-alpha", sb.sin_ag, sin_lo, tol,
                             "sin alpha_gamma >= (1-k)/(1+k)"))
    report.checks.append(_ge("min-K-lower", K, sb.csc_lower, tol,
                             "measured K >= csc alpha_gamma"))
    return report


def verify_generic(curve, grid_n=4096, tol=None):
    """Curves without rho/psi structure (e.g. the shear example): record
    the pairwise constants and check the l <= L <= Lambda chain."""
    tol = TOL_PAIRWISE if tol is None else tol
    report = VerificationReport(curve_id=curve.curve_id)
    report.checks.append(_validity_check(curve))
    n = min(grid_n, 4096)
    p1 = pairwise_sup_refined(curve, "d1", n)
    p2 = pairwise_sup_refined(curve, "d2", n)
    lam = lip_Lambda(curve, grid_n)
    report.checks.append(CheckResult(
        "generic-l-le-L", "pass" if p1.sup <= p2.sup + 1e-12 else "fail",
        [p1.sup, p2.sup], [], 0.0, "d1 >= d2 makes l <= L"))
    chain, p2c, pdc = _chain_check(curve)
    report.checks.append(chain)
    report.lipschitz = LipschitzReport(
        l=p1.sup, L=p2.sup, Lambda=lam, K_qc=None, lower_l=p2c.inf,
        lower_w=pdc.inf, method="mixed", grid_n=grid_n,
        attained_at={"l": p1.sup_pair, "L": p2.sup_pair})
    report.notes.append("no rho/psi structure: dilatation data not defined")
    return report


def verify_curve(curve, grid_n=4096, tol=None):
    """Run every verification applicable to the curve kind and merge the
    reports (polar curves also get the star-bound soundness block, circle
    maps get both the circle theorem and the star block)."""
    if isinstance(curve, CircleHomeomorphism):
        report = verify_circle(curve, grid_n, tol)
        return report.merge(verify_star(curve, grid_n))
    if isinstance(curve, PolarCurve):
        report = verify_polar(curve, grid_n, tol)
        return report.merge(verify_star(curve, grid_n))
    if isinstance(curve, BoundaryMap):
        ts = 2.0 * np.pi * np.arange(64) / 64
        rho = curve.rho.value(ts)
        if np.max(np.abs(rho - 1.0)) < 1e-12:
            report = verify_circle(curve, grid_n, tol)
            return report.merge(verify_star(curve, grid_n))
        if curve.is_polar:
            report = verify_polar(curve.induced_polar(), grid_n, tol)
            return report.merge(verify_star(curve, grid_n))
        report = verify_star(curve, grid_n, tol)
        chain, p2c, pdc = _chain_check(curve)
        report.checks.append(chain)
        return report
    if isinstance(curve, ParametricCurve):
        return verify_generic(curve, grid_n, tol)
    raise TypeError(f"cannot verify {type(curve).__name__}")


def limit_lemma_check(p, q, t, eps_seq=(1e-2, 1e-3, 1e-4)):
    """Residuals |E(eps) - q^2 sin^2 t / p^2| of the finite-eps expression

        E(eps) = 2 (1 - ((1-eps) p + eps q cos t)
                      / |(1-eps) p + eps q e^{it}|) / eps^2

    along the given eps sequence; the limit is q^2 sin^2 t / p^2."""
    if not (p > 0 and q > 0):
        raise ValueError("p and q must be positive")
    limit = q ** 2 * np.sin(t) ** 2 / p ** 2
    out = []
    for eps in eps_seq:
        num = (1.0 - eps) * p + eps * q * np.cos(t)
        den = abs((1.0 - eps) * p + eps * q * np.exp(1j * t))
        val = 2.0 * (1.0 - num / den) / eps ** 2
        out.append(abs(val - limit))
    return out
