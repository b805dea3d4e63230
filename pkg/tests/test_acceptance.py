"""Acceptance criteria, one test per criterion; each prints a PASS/FAIL line.

Table criteria (1, 2, 10) use the default budget of 8 replicates of 2e6
points. Criteria that scan many triples at once (3-7, 9) use 64 replicates
of 2^18 points: with 8 replicates the error estimate is Student-t with 7
degrees of freedom, and over ~100 simultaneous 3-sigma checks a few
exceedances are expected by chance alone.
"""
import time

import numpy as np
import pytest

from qutrit_qsa.assignment import (
    SmearingKernel,
    assign_state,
    convexity_check,
    smear_povm,
    von_neumann_povm,
)
from qutrit_qsa.posterior import DEFAULT_SEED, IntegrationConfig, moments, sample_bank
from qutrit_qsa.priors import Prior, default_gaussian_prior
from qutrit_qsa.table import load_reference, reproduce_table
from qutrit_qsa.validation import check_oracle, normalization_sum, symmetry_deviations

TABLE_CFG = IntegrationConfig()
SCAN_CFG = IntegrationConfig(samples=1 << 18, replicates=64, seed=DEFAULT_SEED)
FLAT = Prior.constant()
GAUSS = default_gaussian_prior()


@pytest.fixture
def report(capsys):
    def emit(criterion: int, ok: bool, detail: str):
        with capsys.disabled():
            print(f"\n[criterion {criterion:2d}] {'PASS' if ok else 'FAIL'}  {detail}")
        return ok

    return emit


def _table(prior: str):
    rows = [r for r in load_reference() if r["prior"] == prior]
    start = time.perf_counter()
    sample_bank(TABLE_CFG)
    bank_time = time.perf_counter() - start
    rep = reproduce_table(TABLE_CFG, rows)
    per_triple = (time.perf_counter() - start) / len(rows)
    return rep, bank_time, per_triple


def _row_summary(rep):
    return "; ".join(
        f"({''.join(map(str, r.counts))}) max|d|/tol={np.max(np.abs(r.computed - r.reference) / np.maximum(r.tolerance, 1e-300)):.2f}"
        for r in rep.rows
    )


def test_criterion_01_table_constant(report):
    rep, bank_time, per_triple = _table("constant")
    max_se = max(float(r.stderr.max()) for r in rep.rows)
    ok = rep.passed and max_se <= 0.005 and per_triple <= 180.0
    detail = f"max stderr {max_se:.4f}, {per_triple:.1f}s per triple (bank {bank_time:.1f}s); {_row_summary(rep)}"
    assert report(1, ok, detail)


def test_criterion_02_table_gaussian(report):
    rep, _, _ = _table("gaussian")
    assert report(2, rep.passed, _row_summary(rep))


def test_criterion_03_exact_rows(report):
    ok = True
    details = []
    for f in ((0, 0, 0), (1, 1, 1)):
        res = assign_state(f, FLAT, SCAN_CFG)
        exact = res.exact and res.diagnostics is None and np.array_equal(res.rho, np.eye(3) / 3)
        m = moments(f, FLAT, SCAN_CFG)
        z = np.abs(m.ratio) / m.ratio_stderr
        ok &= exact and bool(np.all(z < 3))
        details.append(f"({''.join(map(str, f))}) exact={exact} direct max z={z.max():.2f}")
    assert report(3, ok, "; ".join(details))


def test_criterion_04_vanishing_components(report):
    triples = sorted({tuple(r["counts"]) for r in load_reference()} | {(0, 2, 1)})
    worst = 0.0
    for p in (FLAT, GAUSS):
        for f in triples:
            m = moments(f, p, SCAN_CFG)
            z = np.abs(m.ratio) / m.ratio_stderr
            worst = max(worst, float(z[[0, 1, 3, 4, 5, 6]].max()))
    assert report(4, worst < 3, f"{2 * len(triples)} prior/triple pairs, max |L_j/Z|/stderr = {worst:.2f}")


def test_criterion_05_symmetry_relations(report):
    flat = symmetry_deviations(3, FLAT, SCAN_CFG)
    gauss = symmetry_deviations(3, GAUSS, SCAN_CFG)
    zf = max(r["max_relation_z"] for r in flat)
    zg = max(r["max_relation_z"] for r in gauss)
    ok = zf < 3 and zg < 3 and all(t == "swap13" for r in gauss for t in r["transforms"])
    assert report(5, ok, f"N<=3: constant max z {zf:.2f} ({len(flat)} triples), gaussian swap13 max z {zg:.2f}")


def test_criterion_06_convexity(report):
    ok = True
    worst_z = worst_abs = 0.0
    for N in (2, 3):
        for r in convexity_check(N, FLAT, SCAN_CFG):
            ok &= r.within(3.0, 0.01)
            se = np.where(r.stderr > 0, r.stderr, 1.0)
            worst_z = max(worst_z, float(np.max(np.abs(r.residual) / se)))
            worst_abs = max(worst_abs, float(np.max(np.abs(r.residual))))
    assert report(6, ok, f"N=2,3: max residual {worst_abs:.4f}, max z {worst_z:.2f}")


def test_criterion_07_normalization(report):
    worst = 0.0
    for p in (FLAT, GAUSS):
        for N in range(5):
            worst = max(worst, abs(normalization_sum(N, p, SCAN_CFG) - 1.0))
    assert report(7, worst < 1e-3, f"N<=4, both priors: max |sum - 1| = {worst:.2e}")


def test_criterion_08_membership_oracle(report):
    res = check_oracle(100_000, seed=0)
    d = res.details
    detail = f"{d['points']} points, {d['inside']} inside, {d['disagreements']} disagreements, {d['unexplained']} unexplained"
    assert report(8, res.passed, detail)


def test_criterion_09_smearing(report):
    plain = assign_state((0, 1, 0), FLAT, SCAN_CFG)
    ident = assign_state((0, 1, 0), FLAT, SCAN_CFG, smear_povm(von_neumann_povm(), SmearingKernel(np.eye(3))))
    h = np.full((3, 3), 0.05) + 0.85 * np.eye(3)
    noisy = assign_state((0, 1, 0), FLAT, SCAN_CFG, smear_povm(von_neumann_povm(), SmearingKernel(h)))
    bit_identical = np.array_equal(ident.rho, plain.rho)
    gap = plain.diagonal[1] - noisy.diagonal[1]
    se = float(np.hypot(plain.diagonal_stderr[1], noisy.diagonal_stderr[1]))
    ok = bit_identical and noisy.diagonal[1] < 0.399 and gap > 3 * se
    detail = (f"identity bit-identical={bit_identical}; rho22 smeared {noisy.diagonal[1]:.4f} "
              f"vs unsmeared {plain.diagonal[1]:.4f}, gap {gap:.4f} = {gap / se:.1f} stderr")
    assert report(9, ok, detail)


def test_criterion_10_monotone_trend(report):
    vals, errs = [], []
    for N in range(1, 8):
        res = assign_state((0, N, 0), FLAT, TABLE_CFG)
        vals.append(res.diagonal[1])
        errs.append(res.diagonal_stderr[1])
    gaps = np.diff(vals)
    combined = np.hypot(errs[1:], errs[:-1])
    ok = bool(np.all(gaps > combined))
    detail = "rho22: " + " ".join(f"{v:.4f}" for v in vals) + f"; min gap/uncertainty {np.min(gaps / combined):.1f}"
    assert report(10, ok, detail)

