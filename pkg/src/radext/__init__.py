"""Radial extensions of starlike Jordan curves.

Analyze w(z) = |z| F(z/|z|): Lipschitz constants of boundary
parametrizations and their extensions, Wirtinger-derivative moduli and
dilatation fields, explicit bi-Lipschitz/quasiconformality bounds, and a
verification suite for the supporting theorems.
"""

from . import bounds, curves, dsl, extension, lipschitz, periodic, verify
from .bounds import StarBounds, ellipse_K_closed_form, inverse_bounds, min_K_lower, star_bounds
from .curves import (
    BoundaryMap,
    CircleHomeomorphism,
    ParametricCurve,
    PolarCurve,
    TangentProfile,
    builtin,
    builtin_registry,
    compose,
    mollify,
    random_trigpoly_family,
    tangent_profile,
    validate_starlike,
)
from .extension import DifferentialData, differential_data, field_grid, jacobian_identity_check, radial_map
from .lipschitz import (
    LipschitzReport,
    distances,
    lip_L_polar,
    lip_Lambda,
    lip_l,
    lipschitz_report,
    max_dilatation,
    pairwise_sup,
)
from .periodic import PeriodicFunction
from .verify import VerificationReport, limit_lemma_check, verify_circle, verify_curve, verify_polar, verify_star

__version__ = "0.1.0"
