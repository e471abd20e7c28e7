"""Exception types shared across the package."""


class RadextError(Exception):
    """Base class for all errors raised by this package."""


# --- expression language ---

class ExprSyntaxError(RadextError):
    """Malformed expression text.

    Carries the character offset of the offending token and the set of
    token kinds that would have been accepted there.
    """

    def __init__(self, message, offset, expected=()):
        super().__init__(f"{message} at offset {offset}")
        self.offset = offset
        self.expected = tuple(expected)


class UnknownFunction(RadextError):
    def __init__(self, name, offset):
        super().__init__(f"unknown function '{name}' at offset {offset}")
        self.name = name
        self.offset = offset


class ArityMismatch(RadextError):
    def __init__(self, name, expected, got, offset):
        super().__init__(
            f"function '{name}' takes {expected} argument(s), got {got} at offset {offset}"
        )
        self.name = name
        self.expected = expected
        self.got = got
        self.offset = offset


class DomainError(RadextError):
    """Expression evaluated to a non-finite value (division by zero, log of
    a non-positive number, fractional power of a negative base, ...)."""

    def __init__(self, message, t=None):
        if t is not None:
            message = f"{message} at t={t!r}"
        super().__init__(message)
        self.t = t


class UnboundParameter(RadextError):
    def __init__(self, names):
        names = sorted(names)
        super().__init__(f"unbound parameter(s): {', '.join(names)}")
        self.names = names


# --- curves ---

class DegenerateCurve(RadextError):
    """Curve fails starlikeness validation (r <= 0, periodicity defect, ...)."""


class InvalidWidth(RadextError):
    """Mollification width outside (0, pi)."""


class UnknownCurve(RadextError):
    def __init__(self, name, known):
        super().__init__(f"unknown builtin curve '{name}' (known: {', '.join(sorted(known))})")
        self.name = name


class InvalidParams(RadextError):
    """Builtin curve parameters outside their valid range."""


# --- extension / analysis ---

class OutsideDomain(RadextError):
    """Point lies outside the closed unit disk."""


class DegenerateDifferential(RadextError):
    """|w_z| <= |w_zbar| at a point: the map is not sense-preserving there."""

    def __init__(self, message, t=None):
        if t is not None:
            message = f"{message} at t={t!r}"
        super().__init__(message)
        self.t = t


class NotPolar(RadextError):
    """Operation requires a polar parametrization (psi = identity)."""


class GridTooLarge(RadextError):
    """Pairwise oracle grid exceeds the O(n^2) cost cap."""


class UnboundedL(RadextError):
    """inf psi' is (numerically) zero: the boundary map is not bi-Lipschitz
    and the explicit bounds degenerate."""


class InvalidK(RadextError):
    """Quasiconformality coefficient k outside [0, 1)."""


class InvalidAxes(RadextError):
    """Ellipse semi-axes must satisfy 0 < b <= a."""
