"""Geometry of the qutrit Bloch body B8 and its bounding box C8.

Membership is decided by the two polynomial conditions on the Bloch vector
(ball + cubic). The cubic equals ``216 * det(rho(x))``, and together with the
ball condition it is equivalent to positivity of ``rho(x)``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidParamsError, InvalidPlaneError
from .su_basis import SQRT3, bloch_from_rho, rho_from_bloch

BALL_RADIUS_SQ = 4.0 / 3.0
# absolute slack on both conditions so that exactly-representable boundary
# points (pure states) are not rejected by rounding
BOUNDARY_TOL = 1e-12


@dataclass(frozen=True)
class Orthotope8:
    lower: np.ndarray
    upper: np.ndarray

    def __post_init__(self):
        if np.any(self.lower >= self.upper):
            raise InvalidParamsError("orthotope needs lower < upper in every coordinate")

    @property
    def widths(self) -> np.ndarray:
        return self.upper - self.lower

    @property
    def volume(self) -> float:
        return float(np.prod(self.widths))

    def contains(self, x, atol: float = 0.0):
        x = np.asarray(x, dtype=float)
        return np.all((x >= self.lower - atol) & (x <= self.upper + atol), axis=-1)

    def map_unit(self, u) -> np.ndarray:
        """Affinely map points of the unit cube onto the box."""
        return self.lower + self.widths * np.asarray(u, dtype=float)


def bounding_box() -> Orthotope8:
    """Smallest axis-aligned box containing B8: [-1, 1]^7 x [-2/sqrt3, 1/sqrt3]."""
    lower = np.array([-1.0] * 7 + [-2.0 / SQRT3])
    upper = np.array([1.0] * 7 + [1.0 / SQRT3])
    return Orthotope8(lower, upper)


def ball_condition(x):
    x = np.asarray(x, dtype=float)
    return np.sum(x * x, axis=-1) <= BALL_RADIUS_SQ + BOUNDARY_TOL


def cubic_condition_value(x):
    """Left-hand side of the cubic positivity condition; B8 requires it to be >= 0.

    This is ``216 * det(rho(x))`` for the generator convention of ``su_basis``.
    With that convention the triple-product terms read
    ``x1 x4 x6 + x1 x5 x7 - x2 x4 x7 + x2 x5 x6``.
    """
    x = np.asarray(x, dtype=float)
    x1, x2, x3, x4, x5, x6, x7, x8 = np.moveaxis(x, -1, 0)
    r2 = np.sum(x * x, axis=-1)
    a = x1 * x1 + x2 * x2
    b = x6 * x6 + x7 * x7
    return (
        8.0
        - 18.0 * r2
        + 27.0 * x3 * (a - b)
        - 6.0 * SQRT3 * x8**3
        + 9.0 * SQRT3 * x8 * (2.0 * (x3 * x3 + x4 * x4 + x5 * x5) - (a + b))
        + 54.0 * (x1 * x4 * x6 + x1 * x5 * x7 - x2 * x4 * x7 + x2 * x5 * x6)
    )


def chi_B(x):
    """Characteristic function of B8 (closed set), 1 inside and 0 outside.

    Vectorised over a leading axis; returns an int array in that case.
    """
    inside = ball_condition(x) & (cubic_condition_value(x) >= -BOUNDARY_TOL)
    if np.ndim(inside) == 0:
        return int(inside)
    return inside.astype(np.int8)


def chi_eigen_oracle(x, tol: float = 0.0):
    """Positivity test by eigenvalues; independent of the polynomial conditions."""
    eig = np.linalg.eigvalsh(rho_from_bloch(x))
    return eig[..., 0] >= -tol


@dataclass(frozen=True)
class PureStateParams:
    """Parameters of ``a|1> + e^{-i beta} b|2> + e^{-i gamma} c|3>``."""

    a: float
    b: float
    c: float
    beta: float = 0.0
    gamma: float = 0.0

    def __post_init__(self):
        if min(self.a, self.b, self.c) < 0:
            raise InvalidParamsError("a, b, c must be non-negative")
        if abs(self.a**2 + self.b**2 + self.c**2 - 1.0) > 1e-12:
            raise InvalidParamsError("a^2 + b^2 + c^2 must equal 1")

    def ket(self) -> np.ndarray:
        return np.array(
            [self.a, np.exp(-1j * self.beta) * self.b, np.exp(-1j * self.gamma) * self.c]
        )


def pure_state_bloch(p: PureStateParams) -> np.ndarray:
    """Bloch vector of the pure state described by ``p``.

    Components follow from ``x_j = tr(lambda_j |phi><phi|)``; note x3 = a^2 - c^2,
    x6/x7 carry a factor 2, x8 = sqrt3 (1/3 - b^2), and the phases enter
    the ket as exp(-i beta), exp(-i gamma) so x2, x5 pick up a minus sign.
    """
    a, b, c, beta, gamma = p.a, p.b, p.c, p.beta, p.gamma
    return np.array(
        [
            2 * a * b * np.cos(beta),
            -2 * a * b * np.sin(beta),
            a * a - c * c,
            2 * a * c * np.cos(gamma),
            -2 * a * c * np.sin(gamma),
            2 * b * c * np.cos(beta - gamma),
            2 * b * c * np.sin(beta - gamma),
            SQRT3 * (1.0 / 3.0 - b * b),
        ]
    )


def diagonal_triangle() -> np.ndarray:
    """Vertices (x3, x8) of the B8 section through the diagonal states, closed."""
    verts = [bloch_from_rho(np.diag(e).astype(complex))[[2, 7]] for e in np.eye(3)]
    return np.array(verts + [verts[0]])


def _parse_axes(axes) -> tuple[int, int]:
    a, b = (int(v) for v in axes)
    if a == b:
        raise InvalidPlaneError("section axes must differ")
    if not (1 <= a <= 8 and 1 <= b <= 8):
        raise InvalidPlaneError("axes are 1-based indices in 1..8")
    return a, b


def ray_boundary(direction, steps: int = 60) -> float:
    """Distance from the origin to the B8 boundary along a unit direction."""
    lo, hi = 0.0, np.sqrt(BALL_RADIUS_SQ) * (1 + 1e-12)
    for _ in range(steps):
        mid = 0.5 * (lo + hi)
        if chi_B(mid * direction):
            lo = mid
        else:
            hi = mid
    return lo


def planar_section(axes=(3, 8), resolution: int = 64) -> list[np.ndarray]:
    """Boundary of the 2-D section of B8 through the origin spanned by two axes.

    Returns a list of closed polylines, each an ``(m, 2)`` array. The (x3, x8)
    plane is returned exactly as the diagonal-state triangle; other planes are
    traced by radial bisection (B8 is convex with the origin inside).
    """
    a, b = _parse_axes(axes)
    if resolution < 8:
        raise InvalidParamsError("resolution must be >= 8")
    if {a, b} == {3, 8}:
        tri = diagonal_triangle()
        return [tri if (a, b) == (3, 8) else tri[:, ::-1]]
    points = []
    for theta in np.linspace(0.0, 2 * np.pi, resolution, endpoint=False):
        direction = np.zeros(8)
        direction[a - 1] = np.cos(theta)
        direction[b - 1] = np.sin(theta)
        r = ray_boundary(direction)
        points.append((r * np.cos(theta), r * np.sin(theta)))
    points.append(points[0])
    return [np.array(points)]
