"""Assigned statistical operator from moments, plus predictive and POVM utilities."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .bloch_geometry import chi_B
from .errors import InvalidKernelError, InvalidParamsError, InvalidPovmError, InvalidSimplexError
from .posterior import (
    VON_NEUMANN_ELEMENTS,
    FrequencyTriple,
    IntegrationConfig,
    MomentEstimate,
    affine_outcomes,
    moments,
    moments_from_bank,
    sample_bank,
    stderr_from_influence,
)
from .priors import CONSTANT, Prior
from .su_basis import SQRT3, rho_from_bloch
from .symmetry import apply_transforms, canonical_triple, vanishing_components

# d(rho_ii)/d(x3, x8): rows are i = 1, 2, 3
DIAG_FROM_X3_X8 = np.array([[0.5, 0.5 / SQRT3], [0.0, -1.0 / SQRT3], [-0.5, 0.5 / SQRT3]])


@dataclass(frozen=True)
class Povm:
    elements: tuple[np.ndarray, ...]

    def __post_init__(self):
        els = tuple(np.asarray(e, dtype=complex) for e in self.elements)
        if not els:
            raise InvalidPovmError("a POVM needs at least one element")
        for e in els:
            if e.shape != (3, 3) or not np.allclose(e, e.conj().T, atol=1e-10):
                raise InvalidPovmError("POVM elements must be Hermitian 3x3 matrices")
            if np.linalg.eigvalsh(e)[0] < -1e-10:
                raise InvalidPovmError("POVM elements must be positive semidefinite")
        if not np.allclose(sum(els), np.eye(3), atol=1e-10):
            raise InvalidPovmError("POVM elements must sum to the identity")
        object.__setattr__(self, "elements", els)

    def __len__(self):
        return len(self.elements)


def von_neumann_povm() -> Povm:
    return Povm(tuple(VON_NEUMANN_ELEMENTS))


def _is_measurement_basis(povm: Povm | None) -> bool:
    if povm is None:
        return True
    if len(povm) != 3:
        return False
    c0, C = affine_outcomes(povm.elements)
    v0, V = affine_outcomes(VON_NEUMANN_ELEMENTS)
    return np.array_equal(c0, v0) and np.array_equal(C, V)


@dataclass(frozen=True)
class SmearingKernel:
    """``h[i, mu]``: plausibility of registering event i given outcome mu."""

    h: np.ndarray

    def __post_init__(self):
        h = np.asarray(self.h, dtype=float)
        if h.ndim != 2:
            raise InvalidKernelError("kernel must be a matrix")
        if np.any(h < 0):
            raise InvalidKernelError("kernel entries must be non-negative")
        if not np.allclose(h.sum(axis=0), 1.0, atol=1e-12):
            raise InvalidKernelError("each kernel column must sum to 1")
        object.__setattr__(self, "h", h)


def smear_povm(povm: Povm, k: SmearingKernel) -> Povm:
    """``Delta_i = sum_mu h(i|mu) E_mu``."""
    if k.h.shape[1] != len(povm):
        raise InvalidKernelError("kernel columns must match the number of POVM elements")
    E = np.array(povm.elements)
    return Povm(tuple(np.tensordot(k.h, E, axes=([1], [0]))))


def predictive(rho, povm: Povm) -> np.ndarray:
    """Outcome probabilities ``tr(E_mu rho)``; tiny negatives are clamped to 0."""
    rho = np.asarray(rho, dtype=complex)
    p = np.array([np.trace(e @ rho).real for e in povm.elements])
    if np.any(p < -1e-10) or abs(p.sum() - 1.0) > 1e-10:
        raise InvalidPovmError("POVM/state pair does not give a probability vector")
    return np.clip(p, 0.0, None)


@dataclass(frozen=True)
class AssignmentResult:
    rho: np.ndarray
    bloch: np.ndarray
    uncertainty: np.ndarray
    counts: tuple[int, ...]
    prior: Prior
    diagnostics: MomentEstimate | None
    diagonal_stderr: np.ndarray
    exact: bool = False

    @property
    def diagonal(self) -> np.ndarray:
        return np.real(np.diag(self.rho))

    def to_dict(self) -> dict:
        d = {
            "counts": list(self.counts),
            "prior": self.prior.to_dict(),
            "exact_by_symmetry": self.exact,
            "rho_real": np.real(self.rho).tolist(),
            "rho_imag": np.imag(self.rho).tolist(),
            "diagonal": self.diagonal.tolist(),
            "diagonal_stderr": self.diagonal_stderr.tolist(),
            "bloch": self.bloch.tolist(),
            "bloch_stderr": self.uncertainty.tolist(),
        }
        m = self.diagnostics
        if m is not None:
            d["raw_bloch"] = m.ratio.tolist()
            d["raw_bloch_stderr"] = m.ratio_stderr.tolist()
            d["Z"] = m.Z
            d["Z_stderr"] = m.stderr_Z
            d["accepted"] = m.accepted
            d["total"] = m.total
            d["replicates"] = m.replicates
        return d


def diagonal_influence(m: MomentEstimate) -> np.ndarray:
    """Per-replicate linearised deviations of the three diagonal entries."""
    return m.ratio_influence()[:, [2, 7]] @ DIAG_FROM_X3_X8.T


def _result(f, p, m: MomentEstimate, zero: frozenset[int]) -> AssignmentResult:
    bloch = m.ratio.copy()
    unc = m.ratio_stderr.copy()
    infl = m.ratio_influence()
    for j in zero:
        bloch[j - 1] = 0.0
        unc[j - 1] = 0.0
        infl[:, j - 1] = 0.0
    diag_err = stderr_from_influence(infl[:, [2, 7]] @ DIAG_FROM_X3_X8.T)
    return AssignmentResult(rho_from_bloch(bloch), bloch, unc, tuple(f), p, m, diag_err)


def assign_state(f, p: Prior, cfg: IntegrationConfig | None = None, povm: Povm | None = None):
    """Posterior-mean statistical operator for counts ``f`` under prior ``p``.

    With the measurement-basis POVM, moments are integrated for the canonical
    triple and mapped back by symmetry, and symmetry-vanishing components are
    reported as exact zeros (raw estimates remain in ``diagnostics``).
    Any other POVM integrates all eight components directly.
    """
    cfg = cfg or IntegrationConfig()
    if not _is_measurement_basis(povm):
        counts = tuple(int(n) for n in f)
        if any(n < 0 for n in counts):
            raise InvalidParamsError("counts must be non-negative")
        m = moments(counts, p, cfg, povm)
        return _result(counts, p, m, frozenset())
    f = FrequencyTriple.of(f)
    zero = vanishing_components(f, p)
    if len(zero) == 8:
        bloch = np.zeros(8)
        return AssignmentResult(
            rho_from_bloch(bloch), bloch, np.zeros(8), tuple(f), p, None, np.zeros(3), exact=True
        )
    canon, transforms = canonical_triple(f, p)
    m = apply_transforms(moments(canon, p, cfg), transforms, p)
    return _result(f, p, m, zero)


def prior_state(p: Prior, cfg: IntegrationConfig | None = None) -> AssignmentResult:
    """State encoding the prior alone (no data)."""
    return assign_state((0, 0, 0), p, cfg)


def large_N_state(fstar) -> np.ndarray:
    """Limit of the assigned state as N grows with relative frequencies -> fstar."""
    fstar = np.asarray(fstar, dtype=float)
    if fstar.shape != (3,) or np.any(fstar < 0) or abs(fstar.sum() - 1.0) > 1e-12:
        raise InvalidSimplexError("fstar must be three non-negative numbers summing to 1")
    return np.diag(fstar).astype(complex)


@dataclass(frozen=True)
class ConvexityRow:
    counts: tuple[int, int, int]
    residual: np.ndarray  # (x3, x8) components
    stderr: np.ndarray

    def within(self, k: float = 3.0, abs_tol: float = 0.01) -> bool:
        r = np.abs(self.residual)
        return bool(np.all(r <= k * self.stderr) and np.all(r < abs_tol))


def triples_with_sum(N: int) -> list[tuple[int, int, int]]:
    return [(a, b, N - a - b) for a in range(N, -1, -1) for b in range(N - a, -1, -1)]


def convexity_check(
    N: int, p: Prior, cfg: IntegrationConfig | None = None, experimental: bool = False
) -> list[ConvexityRow]:
    """Residuals of the assigned Bloch vectors against the convex combination of the extremes.

    For ``f = (N1, N2, N3)`` the residual is ``v(f) - sum_i (N_i/N) v(N e_i)``
    in the (x3, x8) components, every ``v`` from direct integration on the
    same point set; errors use the paired replicate deviations.
    """
    if N < 2:
        raise InvalidParamsError("the convexity relation is only informative for N >= 2")
    if p.kind != CONSTANT and not experimental:
        raise InvalidParamsError("convexity check is defined for the constant prior")
    cfg = cfg or IntegrationConfig()
    bank = sample_bank(cfg)
    idx = [2, 7]
    extremes = [moments_from_bank(t, p, bank) for t in ((N, 0, 0), (0, N, 0), (0, 0, N))]
    rows = []
    for t in triples_with_sum(N):
        m = moments_from_bank(t, p, bank)
        w = np.array(t, dtype=float) / N
        res = m.ratio[idx] - sum(wi * e.ratio[idx] for wi, e in zip(w, extremes))
        infl = m.ratio_influence()[:, idx] - sum(wi * e.ratio_influence()[:, idx] for wi, e in zip(w, extremes))
        rows.append(ConvexityRow(t, res, stderr_from_influence(infl)))
    return rows


def posterior_mean_inside(result: AssignmentResult) -> bool:
    return bool(chi_B(result.bloch))
