"""Prior densities on Bloch coordinates and their two-dimensional marginals."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import qmc
from .bloch_geometry import bounding_box, chi_B
from .errors import DegenerateMarginalError, InvalidParamsError
from .su_basis import SQRT3

CONSTANT = "constant"
GAUSSIAN = "gaussian"


@dataclass(frozen=True)
class Prior:
    """Unnormalised prior density. ``center``/``breadth`` are used by the Gaussian-like kind only."""

    kind: str = CONSTANT
    center: tuple[float, ...] | None = None
    breadth: float | None = None

    def __post_init__(self):
        if self.kind not in (CONSTANT, GAUSSIAN):
            raise InvalidParamsError(f"unknown prior kind {self.kind!r}")
        if self.kind == GAUSSIAN:
            if self.center is None or len(self.center) != 8:
                raise InvalidParamsError("Gaussian-like prior needs an 8-component center")
            if self.breadth is None or not self.breadth > 0:
                raise InvalidParamsError("breadth must be positive")
            object.__setattr__(self, "center", tuple(float(c) for c in self.center))
            object.__setattr__(self, "breadth", float(self.breadth))
            if not chi_B(np.array(self.center)):
                raise InvalidParamsError("prior center must lie in the Bloch body")

    @classmethod
    def constant(cls) -> "Prior":
        return cls(CONSTANT)

    @classmethod
    def gaussian(cls, center, breadth: float) -> "Prior":
        return cls(GAUSSIAN, tuple(center), breadth)

    @property
    def tag(self) -> str:
        if self.kind == CONSTANT:
            return CONSTANT
        return f"gaussian(s={self.breadth:.6g})"

    def to_dict(self) -> dict:
        out = {"kind": self.kind}
        if self.kind == GAUSSIAN:
            out["center"] = list(self.center)
            out["breadth"] = self.breadth
        return out


def default_gaussian_prior() -> Prior:
    """Gaussian-like prior centred on |2><2| with breadth 1/(2 sqrt 2)."""
    center = (0.0,) * 7 + (-2.0 / SQRT3,)
    return Prior.gaussian(center, 1.0 / (2.0 * np.sqrt(2.0)))


def prior_density(p: Prior, x):
    """Unnormalised density at ``x``; the Bloch-body indicator is NOT included."""
    x = np.asarray(x, dtype=float)
    if p.kind == CONSTANT:
        return np.ones(x.shape[:-1]) if x.ndim > 1 else 1.0
    d = x - np.asarray(p.center)
    return np.exp(-np.sum(d * d, axis=-1) / (2.0 * p.breadth**2))


def grid_centers(axes=(3, 8), grid: int = 64) -> tuple[np.ndarray, np.ndarray]:
    """Cell centres along the two axes, spanning the bounding box."""
    box = bounding_box()
    out = []
    for ax in axes:
        lo, hi = box.lower[ax - 1], box.upper[ax - 1]
        edges = np.linspace(lo, hi, grid + 1)
        out.append(0.5 * (edges[:-1] + edges[1:]))
    return out[0], out[1]


def _offdiagonal_box(x3: float, x8: float) -> tuple[np.ndarray, np.ndarray]:
    # |rho_ij|^2 <= rho_ii rho_jj bounds each off-diagonal pair inside B8
    r = np.array([1 / 3 + x3 / 2 + x8 / (2 * SQRT3), 1 / 3 - x8 / SQRT3, 1 / 3 - x3 / 2 + x8 / (2 * SQRT3)])
    if np.any(r <= 0):
        return np.zeros(6), np.zeros(6)
    h = 2 * np.sqrt([r[0] * r[1], r[0] * r[2], r[1] * r[2]])
    half = np.repeat(h, 2)  # (x1, x2), (x4, x5), (x6, x7)
    return -half, 2 * half


def marginal_density_grid(
    p: Prior,
    axes=(3, 8),
    grid: int = 64,
    samples_per_cell: int = 4096,
    seed: int = 0,
    threads: int | None = None,
) -> np.ndarray:
    """Monte Carlo estimate of the 2-D marginal of ``p`` restricted to B8.

    Entry ``[i, j]`` corresponds to ``axes[0] = centers[0][i]`` and
    ``axes[1] = centers[1][j]``; the remaining six coordinates are integrated
    over their box ranges with a scrambled Sobol' rule seeded by ``(seed, i, j)``.
    In the (x3, x8) plane the box is shrunk per cell to the off-diagonal ranges
    allowed by the diagonal, which keeps the acceptance rate uniform.
    The result is normalised so that ``sum * cell_area == 1``.
    """
    a, b = (int(v) for v in axes)
    if a == b or not (1 <= a <= 8 and 1 <= b <= 8):
        raise InvalidParamsError("axes must be two distinct indices in 1..8")
    if grid < 16:
        raise InvalidParamsError("grid must be >= 16")
    if samples_per_cell < 1:
        raise InvalidParamsError("samples_per_cell must be positive")
    box = bounding_box()
    rest = [k for k in range(8) if k not in (a - 1, b - 1)]
    sub_lo, sub_w = box.lower[rest], box.widths[rest]
    sub_vol = float(np.prod(sub_w))
    ca, cb = grid_centers((a, b), grid)

    diagonal_plane = {a, b} == {3, 8}

    def row(i: int) -> np.ndarray:
        out = np.zeros(grid)
        for j in range(grid):
            lo, w, vol = sub_lo, sub_w, sub_vol
            if diagonal_plane:
                lo, w = _offdiagonal_box(ca[i], cb[j]) if a == 3 else _offdiagonal_box(cb[j], ca[i])
                vol = float(np.prod(w))
                if vol == 0.0:
                    continue
            u = qmc.sobol_points(6, samples_per_cell, np.random.SeedSequence([seed, i, j]))
            x = np.empty((samples_per_cell, 8))
            x[:, rest] = lo + w * u
            x[:, a - 1] = ca[i]
            x[:, b - 1] = cb[j]
            w = chi_B(x) * prior_density(p, x)
            out[j] = vol * w.mean()
        return out

    values = np.array(qmc.map_ordered(row, range(grid), threads))
    cell_area = (ca[1] - ca[0]) * (cb[1] - cb[0])
    total = values.sum() * cell_area
    if not total > 0:
        raise DegenerateMarginalError("marginal has zero total mass on this grid")
    return values / total
