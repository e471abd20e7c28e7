"""The radial extension w(z) = |z| F(z/|z|) and its differential data.

For a boundary function f(t) = F(e^{it}) the Wirtinger-derivative moduli
of the extension are radius-free:

    |w_z|    = |f(t) - i f'(t)| / 2
    |w_zbar| = |f(t) + i f'(t)| / 2

so every pointwise quantity (operator norm, Jacobian, dilatation,
Beltrami modulus) is a function of t alone and is computed from boundary
data only; 2-D numeric differentiation exists purely as a test oracle.
"""

from dataclasses import dataclass

import numpy as np

from .curves import BoundaryMap, CircleHomeomorphism, PolarCurve
from .errors import DegenerateDifferential, OutsideDomain

__all__ = [
    "DifferentialData", "radial_map", "differential_data",
    "differential_arrays", "jacobian_identity_check", "field_grid",
    "kappa_from_angles",
]


@dataclass
class DifferentialData:
    """Pointwise differential data of the radial extension at angle t
    (independent of the radius)."""
    t: float
    abs_wz: float
    abs_wzbar: float
    op_norm: float       # |nabla w| = |w_z| + |w_zbar|
    min_norm: float      # l(nabla w) = ||w_z| - |w_zbar||
    jacobian: float      # |w_z|^2 - |w_zbar|^2
    dilatation: float    # (|w_z| + |w_zbar|) / (|w_z| - |w_zbar|)
    mu_abs: float        # |w_zbar / w_z|
    kappa: float         # mu_abs^2


def radial_map(curve, z):
    """Evaluate w(z) = |z| F(z/|z|) for |z| <= 1 (w(0) = 0)."""
    z = np.asarray(z, dtype=complex)
    r = np.abs(z)
    if np.any(r > 1.0 + 1e-12):
        bad = z[np.atleast_1d(r > 1.0 + 1e-12)][0] if z.ndim else complex(z)
        raise OutsideDomain(f"|z| > 1 at z = {bad}")
    t = np.angle(z)
    with np.errstate(invalid="ignore"):
        out = np.where(r > 0.0, r * curve.boundary(t), 0.0 + 0.0j)
    if z.ndim == 0:
        return complex(out)
    return out


def _raw_moduli(curve, ts, side=None):
    f = curve.boundary(ts)
    if side is not None:
        df = np.asarray([curve.velocity_side(float(tt), side)
                         for tt in np.atleast_1d(ts)])
    else:
        df = curve.boundary_velocity(ts)
    wz = 0.5 * np.abs(f - 1j * df)
    wzbar = 0.5 * np.abs(f + 1j * df)
    return wz, wzbar


def differential_arrays(curve, ts, side=None, require_orientation=True):
    """Vectorized differential data over an array of angles; returns a dict
    of arrays keyed like the DifferentialData fields."""
    ts = np.asarray(ts, dtype=float)
    wz, wzbar = _raw_moduli(curve, ts, side=side)
    jac = wz ** 2 - wzbar ** 2
    if require_orientation and np.any(wz <= wzbar):
        bad = float(np.atleast_1d(ts)[np.atleast_1d(wz <= wzbar)][0])
        raise DegenerateDifferential(
            "|w_z| <= |w_zbar| (map is not sense-preserving)", t=bad)
    with np.errstate(divide="ignore", invalid="ignore"):
        mu = wzbar / wz
        dil = (wz + wzbar) / (wz - wzbar)
    return {
        "t": ts,
        "abs_wz": wz,
        "abs_wzbar": wzbar,
        "op_norm": wz + wzbar,
        "min_norm": np.abs(wz - wzbar),
        "jacobian": jac,
        "dilatation": dil,
        "mu_abs": mu,
        "kappa": mu ** 2,
    }


def differential_data(curve, t, side=None):
    """Differential data at one angle; DegenerateDifferential if the map
    fails to be sense-preserving there."""
    arr = differential_arrays(curve, np.asarray([t], dtype=float), side=side)
    return DifferentialData(**{k: float(v[0]) for k, v in arr.items()})


def kappa_from_angles(bmap, ts, side=None):
    """kappa(t) = (psi'^2 + (1 - 2 psi') sin^2 a) / (psi'^2 + (1 + 2 psi') sin^2 a)
    with a the tangent angle of the induced polar curve at psi(t); the
    closed form used to cross-check the boundary-data route."""
    ts = np.asarray(ts, dtype=float)
    rho, psi = bmap.rho, bmap.psi.psi
    if side is None:
        dpsi = psi.derivative(ts)
        drho = rho.derivative(ts)
    else:
        dpsi = np.asarray([psi.deriv_side(t, side) for t in np.atleast_1d(ts)])
        drho = np.asarray([rho.deriv_side(t, side) for t in np.atleast_1d(ts)])
    alpha = np.arctan2(rho.value(ts) * dpsi, drho)
    s2 = np.sin(alpha) ** 2
    return (dpsi ** 2 + (1.0 - 2.0 * dpsi) * s2) / \
           (dpsi ** 2 + (1.0 + 2.0 * dpsi) * s2)


def jacobian_identity_check(bmap, t, side=None):
    """Residual |4 J - 4 rho^2 psi'| of the proof identity
    (|g'+ig| + |g'-ig|)(|g'+ig| - |g'-ig|) = 4 rho^2 psi'."""
    if isinstance(bmap, PolarCurve):
        bmap = bmap.to_boundary_map()
    ts = np.asarray(t, dtype=float)
    arr = differential_arrays(bmap, np.atleast_1d(ts), side=side,
                              require_orientation=False)
    rho = bmap.rho.value(np.atleast_1d(ts))
    if side is None:
        dpsi = bmap.psi.psi.derivative(np.atleast_1d(ts))
    else:
        dpsi = np.asarray([bmap.psi.psi.deriv_side(tt, side)
                           for tt in np.atleast_1d(ts)])
    res = np.abs(4.0 * arr["jacobian"] - 4.0 * rho ** 2 * dpsi)
    if np.ndim(t) == 0:
        return float(res[0])
    return res


def field_grid(curve, radial_n, angular_n):
    """Dilatation field on the product grid r_i = i/radial_n (i = 1..radial_n),
    t_j = 2 pi j/angular_n.  Returns a dict of flat arrays in row-major
    order (r outer, t inner); the differential columns are constant in r
    by construction and this is asserted."""
    if radial_n < 1:
        raise ValueError("radial_n must be >= 1")
    if angular_n < 8:
        raise ValueError("angular_n must be >= 8")
    ts = 2.0 * np.pi * np.arange(angular_n) / angular_n
    rs = np.arange(1, radial_n + 1) / radial_n
    data = differential_arrays(curve, ts)
    f = curve.boundary(ts)
    w = rs[:, None] * f[None, :]
    out = {
        "r": np.repeat(rs, angular_n),
        "t": np.tile(ts, radial_n),
        "x": w.real.ravel(),
        "y": w.imag.ravel(),
    }
    for key in ("abs_wz", "abs_wzbar", "op_norm", "jacobian", "dilatation",
                "mu_abs"):
        col = np.tile(data[key], radial_n)
        assert np.array_equal(col.reshape(radial_n, angular_n)[0],
                              data[key]), "differential data must be radius-free"
        out[key] = col
    return out
