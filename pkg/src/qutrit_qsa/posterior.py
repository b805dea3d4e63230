"""Likelihood and quasi-Monte Carlo estimation of the posterior moment integrals.

For data counts ``N`` and prior ``g`` the integrals are

    Z   = int_C8 prod_i p_i(x)^N_i g(x) chi_B(x) dx
    L_j = int_C8 x_j prod_i p_i(x)^N_i g(x) chi_B(x) dx

with ``p_i(x) = tr(E_i rho(x))``. Each replicate is an independently
scrambled Sobol' rule over the box C8; the indicator is a multiplicative
factor, so only accepted points need to be kept. All triples and priors
evaluated with the same ``(samples, replicates, seed)`` share one point set.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import qmc
from .bloch_geometry import bounding_box, chi_B
from .errors import (
    ConsistencyError,
    DegenerateEvidenceError,
    EmptyBodyError,
    InvalidParamsError,
)
from .priors import Prior, prior_density
from .su_basis import LAMBDA

DEFAULT_SAMPLES = 2_000_000
DEFAULT_REPLICATES = 8
DEFAULT_SEED = 20070429


@dataclass(frozen=True)
class FrequencyTriple:
    n1: int
    n2: int
    n3: int

    def __post_init__(self):
        for n in self:
            if int(n) != n or n < 0:
                raise InvalidParamsError(f"counts must be non-negative integers, got {tuple(self)}")

    def __iter__(self):
        return iter((self.n1, self.n2, self.n3))

    def __getitem__(self, i):
        return (self.n1, self.n2, self.n3)[i]

    @property
    def N(self) -> int:
        return self.n1 + self.n2 + self.n3

    @classmethod
    def of(cls, counts) -> "FrequencyTriple":
        if isinstance(counts, cls):
            return counts
        if isinstance(counts, str):
            counts = [c for c in counts.replace(" ", "").split(",")] if "," in counts else list(counts)
        vals = [int(c) for c in counts]
        if len(vals) != 3:
            raise InvalidParamsError(f"need three counts, got {vals}")
        return cls(*vals)

    def label(self) -> str:
        return "".join(str(n) for n in self) if max(self) < 10 else ",".join(str(n) for n in self)


@dataclass(frozen=True)
class IntegrationConfig:
    samples: int = DEFAULT_SAMPLES
    replicates: int = DEFAULT_REPLICATES
    seed: int = DEFAULT_SEED
    threads: int | None = field(default=None, compare=False)

    def __post_init__(self):
        if self.samples < 10_000:
            raise InvalidParamsError("samples must be >= 1e4")
        if self.replicates < 2:
            raise InvalidParamsError("replicates must be >= 2")


@dataclass(frozen=True)
class SampleBank:
    """Accepted points (inside B8) of each scrambled replicate over C8."""

    points: tuple[np.ndarray, ...]
    total: int
    seed: int
    volume: float

    @property
    def replicates(self) -> int:
        return len(self.points)

    @property
    def accepted(self) -> int:
        return sum(len(p) for p in self.points)


def _accepted_points(n: int, seed_seq) -> np.ndarray:
    box = bounding_box()
    keep = []
    for u in qmc.sobol_chunks(8, n, seed_seq):
        x = box.map_unit(u)
        keep.append(x[chi_B(x).astype(bool)])
    return np.concatenate(keep, axis=0)


_BANKS: dict[tuple[int, int, int], SampleBank] = {}
_MAX_BANKS = 6


def _build_bank(samples: int, replicates: int, seed: int, threads: int | None) -> SampleBank:
    seeds = qmc.child_seeds(seed, replicates)
    pts = qmc.map_ordered(lambda s: _accepted_points(samples, s), seeds, threads)
    for p in pts:
        p.setflags(write=False)
    return SampleBank(tuple(pts), samples, seed, bounding_box().volume)


def sample_bank(cfg: IntegrationConfig) -> SampleBank:
    """Build (or fetch from cache) the point bank for ``cfg``.

    The bank depends only on ``(samples, replicates, seed)``; the thread count
    changes scheduling, never values.
    """
    key = (cfg.samples, cfg.replicates, cfg.seed)
    bank = _BANKS.get(key)
    if bank is None:
        bank = _build_bank(*key, threads=cfg.threads)
        if len(_BANKS) >= _MAX_BANKS:
            _BANKS.pop(next(iter(_BANKS)))
        _BANKS[key] = bank
    return bank


def affine_outcomes(elements) -> tuple[np.ndarray, np.ndarray]:
    """Write ``tr(E_i rho(x)) = c0_i + C_i . x`` for each POVM element."""
    E = np.asarray(elements, dtype=complex)
    c0 = np.real(np.trace(E, axis1=1, axis2=2)) / 3.0
    C = 0.5 * np.einsum("iab,jba->ij", E, LAMBDA).real
    return c0, C


VON_NEUMANN_ELEMENTS = np.array([np.diag(e).astype(complex) for e in np.eye(3)])
_VN_COEFFS = affine_outcomes(VON_NEUMANN_ELEMENTS)


def outcome_probabilities(x, povm=None) -> np.ndarray:
    """``tr(E_i rho(x))`` for every element; the diagonal of rho(x) by default."""
    c0, C = _VN_COEFFS if povm is None else affine_outcomes(povm.elements)
    x = np.asarray(x, dtype=float)
    return c0 + x @ C.T


def likelihood(x, f, povm=None):
    """``prod_i tr(E_i rho(x))^N_i`` with the convention 0^0 = 1.

    The caller guarantees ``x`` lies in B8; a negative outcome probability there
    (beyond -1e-12) signals a broken invariant.
    """
    counts = tuple(int(n) for n in f)
    x = np.asarray(x, dtype=float)
    probs = outcome_probabilities(x, povm)
    if probs.shape[-1] != len(counts):
        raise InvalidParamsError("number of counts does not match number of POVM elements")
    out = np.ones(probs.shape[:-1])
    for i, n in enumerate(counts):
        if n == 0:
            continue
        p = probs[..., i]
        bad = p < -1e-12
        if np.any(bad):
            inside = chi_B(np.atleast_2d(x)[np.atleast_1d(bad)])
            if np.any(inside):
                raise ConsistencyError("negative outcome probability inside the Bloch body")
        out = out * np.clip(p, 0.0, None) ** n
    return out if out.ndim else float(out)


@dataclass(frozen=True)
class MomentEstimate:
    """Replicate-level estimates of ``L_1..L_8`` and ``Z``.

    ``L_rep`` has shape ``(R, 8)`` and ``Z_rep`` shape ``(R,)``; the reported
    values are replicate means, errors the replicate spread over sqrt(R).
    """

    L_rep: np.ndarray
    Z_rep: np.ndarray
    accepted: int
    total: int
    seed: int
    counts: tuple[int, ...] = ()

    @property
    def replicates(self) -> int:
        return len(self.Z_rep)

    @property
    def L(self) -> np.ndarray:
        return self.L_rep.mean(axis=0)

    @property
    def Z(self) -> float:
        return float(self.Z_rep.mean())

    @property
    def stderr_L(self) -> np.ndarray:
        return self.L_rep.std(axis=0, ddof=1) / np.sqrt(self.replicates)

    @property
    def stderr_Z(self) -> float:
        return float(self.Z_rep.std(ddof=1) / np.sqrt(self.replicates))

    @property
    def ratio(self) -> np.ndarray:
        """Posterior-mean Bloch vector ``L / Z``."""
        return self.L / self.Z

    def ratio_influence(self) -> np.ndarray:
        """Linearised per-replicate deviations of ``L / Z``, shape ``(R, 8)``.

        First-order propagation including the L-Z covariance: the standard error
        of any linear combination of ratios (also across estimates sharing the
        same replicates) is the spread of the same combination of these rows.
        """
        return (self.L_rep - np.outer(self.Z_rep, self.ratio)) / self.Z

    @property
    def ratio_stderr(self) -> np.ndarray:
        return stderr_from_influence(self.ratio_influence())

    def transformed(self, matrix: np.ndarray, counts=()) -> "MomentEstimate":
        """Moments after a linear change of Bloch coordinates ``x -> matrix @ x``."""
        return MomentEstimate(
            self.L_rep @ np.asarray(matrix).T,
            self.Z_rep.copy(),
            self.accepted,
            self.total,
            self.seed,
            tuple(counts),
        )


def stderr_from_influence(infl: np.ndarray) -> np.ndarray:
    infl = np.asarray(infl)
    return infl.std(axis=0, ddof=1) / np.sqrt(infl.shape[0])


def compute_moments(
    f,
    p: Prior,
    n_samples: int = DEFAULT_SAMPLES,
    replicates: int = DEFAULT_REPLICATES,
    seed: int = DEFAULT_SEED,
    povm=None,
    threads: int | None = None,
) -> MomentEstimate:
    """Estimate ``L_j`` and ``Z`` for counts ``f`` under prior ``p``."""
    cfg = IntegrationConfig(n_samples, replicates, seed, threads)
    return moments_from_bank(f, p, sample_bank(cfg), povm)


def moments_from_bank(f, p: Prior, bank: SampleBank, povm=None) -> MomentEstimate:
    counts = tuple(int(n) for n in f)
    if bank.accepted == 0:
        raise EmptyBodyError("no sample point fell inside the Bloch body")
    scale = bank.volume / bank.total
    L_rep = np.empty((bank.replicates, 8))
    Z_rep = np.empty(bank.replicates)
    for r, pts in enumerate(bank.points):
        w = likelihood(pts, counts, povm) * prior_density(p, pts)
        Z_rep[r] = scale * w.sum()
        L_rep[r] = scale * (w @ pts)
    if not Z_rep.mean() > 0:
        raise DegenerateEvidenceError(f"evidence estimate is not positive for counts {counts}")
    return MomentEstimate(L_rep, Z_rep, bank.accepted, bank.total * bank.replicates, bank.seed, counts)


def moments(f, p: Prior, cfg: IntegrationConfig | None = None, povm=None) -> MomentEstimate:
    cfg = cfg or IntegrationConfig()
    return moments_from_bank(f, p, sample_bank(cfg), povm)


@dataclass(frozen=True)
class EvidenceRatio:
    value: float
    stderr: float


def evidence_ratio(f, p: Prior, cfg: IntegrationConfig | None = None, povm=None) -> EvidenceRatio:
    """``Z(f) / Z(0, 0, 0)``: the prior-predictive probability of one outcome sequence."""
    m = moments(f, p, cfg, povm)
    m0 = moments((0,) * len(m.counts), p, cfg, povm)
    value = m.Z / m0.Z
    infl = (m.Z_rep - value * m0.Z_rep) / m0.Z
    return EvidenceRatio(value, float(stderr_from_influence(infl[:, None])[0]))
