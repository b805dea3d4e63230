"""Invariant suites runnable from the command line."""
from __future__ import annotations

from dataclasses import dataclass, field
from math import factorial

import numpy as np

from . import qmc
from .assignment import triples_with_sum
from .bloch_geometry import bounding_box, chi_B, chi_eigen_oracle, cubic_condition_value
from .posterior import IntegrationConfig, moments
from .priors import Prior, default_gaussian_prior
from .su_basis import LAMBDA, bloch_from_rho, rho_from_bloch
from .symmetry import canonical_triple, apply_transforms, vanishing_components

SUITES = ("basis", "roundtrip", "oracle", "normalization", "symmetry")


@dataclass
class SuiteResult:
    name: str
    passed: bool
    details: dict = field(default_factory=dict)


def check_basis() -> SuiteResult:
    gram = np.einsum("iab,jba->ij", LAMBDA, LAMBDA)
    orth = float(np.abs(gram - 2 * np.eye(8)).max())
    traces = float(np.abs(np.trace(LAMBDA, axis1=1, axis2=2)).max())
    herm = float(np.abs(LAMBDA - LAMBDA.conj().transpose(0, 2, 1)).max())
    ok = orth < 1e-12 and traces < 1e-12 and herm == 0.0
    return SuiteResult("basis", ok, {"max_gram_error": orth, "max_trace": traces, "max_hermiticity_error": herm})


def check_roundtrip(points: int = 1000, seed: int = 0) -> SuiteResult:
    rng = np.random.default_rng(seed)
    x = rng.uniform(-1, 1, size=(points, 8))
    err = max(float(np.abs(bloch_from_rho(rho_from_bloch(xi)) - xi).max()) for xi in x)
    return SuiteResult("roundtrip", err < 1e-12, {"points": points, "max_error": err})


def check_oracle(points: int = 100_000, seed: int = 0) -> SuiteResult:
    """Polynomial membership vs. eigenvalue positivity on scrambled points of C8."""
    x = bounding_box().map_unit(qmc.sobol_points(8, points, seed))
    poly = chi_B(x).astype(bool)
    eig = chi_eigen_oracle(x, 1e-9)
    near = (np.abs(cubic_condition_value(x)) < 1e-9) | (np.abs(np.sum(x * x, axis=1) - 4 / 3) < 1e-9)
    disagree = poly != eig
    hard = int(np.sum(disagree & ~near))
    return SuiteResult(
        "oracle",
        hard == 0,
        {"points": points, "inside": int(poly.sum()), "disagreements": int(disagree.sum()), "unexplained": hard},
    )


def normalization_sum(N: int, p: Prior, cfg: IntegrationConfig) -> float:
    """sum over triples with total N of multinomial(N; f) Z(f) / Z(0)."""
    z0 = moments((0, 0, 0), p, cfg).Z
    total = 0.0
    for t in triples_with_sum(N):
        w = factorial(N) / (factorial(t[0]) * factorial(t[1]) * factorial(t[2]))
        total += w * moments(t, p, cfg).Z / z0
    return total


def check_normalization(N: int = 3, cfg: IntegrationConfig | None = None) -> SuiteResult:
    cfg = cfg or IntegrationConfig()
    details = {}
    ok = True
    for name, p in (("constant", Prior.constant()), ("gaussian", default_gaussian_prior())):
        for n in range(N + 1):
            s = normalization_sum(n, p, cfg)
            details[f"{name}_N{n}"] = s
            ok &= abs(s - 1.0) < 1e-3
    return SuiteResult("normalization", ok, details)


def symmetry_deviations(N_max: int, p: Prior, cfg: IntegrationConfig) -> list[dict]:
    """Compare symmetry reconstructions with direct integration for every triple up to N_max.

    Deviations are expressed in units of the paired standard error of the
    difference (both estimates share the same replicates).
    """
    out = []
    for N in range(N_max + 1):
        for t in triples_with_sum(N):
            canon, transforms = canonical_triple(t, p)
            direct = moments(t, p, cfg)
            recon = apply_transforms(moments(canon, p, cfg), transforms, p)
            diff = recon.ratio - direct.ratio
            infl = recon.ratio_influence() - direct.ratio_influence()
            se = infl.std(axis=0, ddof=1) / np.sqrt(infl.shape[0])
            z = np.where(se > 0, np.abs(diff) / np.where(se > 0, se, 1.0), np.where(np.abs(diff) < 1e-12, 0.0, np.inf))
            vanish = sorted(vanishing_components(t, p))
            zv = np.abs(direct.ratio) / direct.ratio_stderr
            out.append(
                {
                    "counts": t,
                    "transforms": [tr.kind for tr in transforms],
                    "max_relation_z": float(z[[2, 7]].max()),
                    "max_vanishing_z": float(zv[[j - 1 for j in vanish]].max()),
                }
            )
    return out


def check_symmetry(N_max: int = 3, cfg: IntegrationConfig | None = None) -> SuiteResult:
    cfg = cfg or IntegrationConfig()
    rows = []
    for p in (Prior.constant(), default_gaussian_prior()):
        for r in symmetry_deviations(N_max, p, cfg):
            rows.append({**r, "prior": p.kind})
    ok = all(r["max_relation_z"] < 3 and r["max_vanishing_z"] < 3 for r in rows)
    return SuiteResult("symmetry", ok, {"rows": rows})


def run_suites(names=SUITES, points: int = 100_000, N: int = 3, cfg: IntegrationConfig | None = None):
    runners = {
        "basis": lambda: check_basis(),
        "roundtrip": lambda: check_roundtrip(),
        "oracle": lambda: check_oracle(points),
        "normalization": lambda: check_normalization(N, cfg),
        "symmetry": lambda: check_symmetry(N, cfg),
    }
    return [runners[n]() for n in names]
