"""Acceptance criteria 1-10.  Each test prints one PASS/FAIL line; the lines
are repeated in the pytest terminal summary.

Three sub-criteria are known not to hold as stated and are marked
xfail(strict=True); the analysis lives in the decisions ledger.
"""
import time

import pytest

from wqt.classical import PBParams, verify_classical_limit
from wqt.verify import (mutation_suite, verify_case1_truncation, verify_dynkin, verify_exchange_T,
                        verify_exchange_table, verify_fusion_table, verify_kernels, verify_prop22,
                        verify_quadratic, verify_screening_exchange, verify_theorem21)

CASES = (1, 2, 3)
GRID = [(i, j) for j in (1, 2, 3) for i in range(1, j + 1)]


def _fails(reports):
    return [f"{r.key}: {c.name}" for r in reports for c in r.failures()]


def _check(rep, prefix):
    hits = [c for c in rep.checks if c.name.startswith(prefix)]
    assert hits, f"no check named {prefix!r} in {rep.key}"
    return hits[0]


@pytest.fixture(scope="module")
def classical_report():
    return verify_classical_limit(PBParams(q0=4.0, betas=(1e-2, 1e-3, 1e-4), imax=3, mmax=8, K=10.0))


def test_criterion_1_parameter_tables(record):
    t0 = time.perf_counter()
    reps = [verify_theorem21(c, N=20) for c in CASES]
    dt = time.perf_counter() - t0
    bad = _fails(reps)
    names = {c.name for r in reps for c in r.checks if c.required}
    for want in ("locality zero modes", "locality modes", "start condition", "normalisation ratio",
                 "screening-screening locality", "diagonal screening data", "p_12 = q_12 and p_31 = q_31"):
        assert any(want in n for n in names), want
    record(1, not bad and dt < 30, f"3 cases, m = 1..20, {dt:.1f}s")
    assert not bad, bad
    assert dt < 30


def test_criterion_2_kernels(record):
    reps = [verify_kernels(c, N=20) for c in CASES]
    bad = _fails(reps)
    compared = sum(c.count for r in reps for c in r.checks)
    record(2, not bad, f"9 pairs x 3 cases, order 20, {compared} exact comparisons")
    assert not bad, bad


def test_criterion_3_screening(record):
    reps = [verify_screening_exchange(c, N=20) for c in CASES]
    bad = _fails(reps)
    fermionic = [c.name for r in reps for c in r.checks if "(fermion)" in c.name]
    record(3, not bad and len(fermionic) == 3, "h_12 = h_21, fermionic 1 - zeta, exchange exponents")
    assert not bad, bad
    assert len(fermionic) == 3


def test_criterion_4_vertex_exchange(record):
    reps = [verify_prop22(c, N=20) for c in CASES]
    bad = _fails(reps)
    record(4, not bad, "theta ratios with nome x^{2s}, m = 1..20")
    assert not bad, bad


def test_criterion_5_quadratic_grid(record):
    t0 = time.perf_counter()
    reps = [verify_quadratic(c, i, j, N=12) for c in (2, 3) for i, j in GRID]
    dt = time.perf_counter() - t0
    bad = _fails(reps)
    bf = [r for r in reps if r.indices["i"] + r.indices["j"] <= 3]
    assert bf and all(any("two-region expansion" in c.name for c in r.checks) for r in bf)
    record(5, not bad and dt < 600, f"cases 2, 3, i <= j <= 3, brute force for i+j <= 3, {dt:.1f}s")
    assert not bad, bad


def test_criterion_6_dynkin_relation_level(record):
    reps = [verify_dynkin(i, j, N=12) for i, j in GRID]
    bad = _fails(reps)
    record(6, not bad, "pole sets, s and delta-side coefficient Scalars agree")
    assert not bad, bad


@pytest.mark.xfail(strict=True, reason="pattern-level coefficients differ after relabelling; see ledger")
def test_criterion_6b_dynkin_pattern_level(record):
    reps = [verify_dynkin(i, j, N=12) for i, j in GRID]
    bad = [f"{r.key}: {c.name}" for r in reps for c in r.checks
           if not c.required and not c.passed and "re-sorting" in c.name]
    record("6b", not bad, f"pattern-wise match fails for {len(bad)} of {len(reps)} index pairs")
    assert not bad, bad


def test_criterion_7_case1(record):
    reps = [verify_quadratic(1, i, j, N=12) for i, j in ((1, 1), (1, 2), (2, 2))]
    reps.append(verify_case1_truncation(N=20))
    bad = _fails(reps)
    record(7, not bad, "three relations, T_3 = 1 ingredients for m = 1..20")
    assert not bad, bad


def test_criterion_8_tables(record):
    reps = [verify_fusion_table(imax=3), verify_exchange_table(imax=3)]
    reps += [verify_exchange_T(c, i, j) for c in (2, 3) for i, j in GRID]
    bad = _fails(reps)
    rows = sum(c.count for r in reps[:2] for c in r.checks)
    record(8, not bad, f"{rows} fusion and exchange rows, zero rows included")
    assert not bad, bad


@pytest.mark.xfail(strict=True, reason="c/(beta log q) tends to +1 with x = q^{1/2r}; see ledger")
def test_criterion_9a_central_sign(record, classical_report):
    ratio = _check(classical_report, "c(r,x)/(beta log q)")
    order = _check(classical_report, "c residual order")
    c = classical_report.data["c"]
    record("9a", ratio.passed and order.passed, f"ratios {', '.join(v[:8] for v in c['ratios'])}, order {c['order']}")
    assert ratio.passed and order.passed


@pytest.mark.xfail(strict=True, reason="first-order error needs about 12.2 beta for m <= 8; see ledger")
def test_criterion_9b_first_order_tolerance(record, classical_report):
    rel = _check(classical_report, "f_ij first-order coefficients match")
    van = _check(classical_report, "f_ij first-order coefficients vanish")
    k = classical_report.data["K_needed"]
    record("9b", rel.passed and van.passed,
           f"K needed {float(k['nonzero']):.2f} (nonzero), {float(k['vanishing']):.2f} (vanishing), allowed 10")
    assert rel.passed and van.passed


def test_criterion_9c_order_and_vanishing(record, classical_report):
    order = _check(classical_report, "f_ij residual order")
    zero = _check(classical_report, "C_12 = C_21 = C_22 = 0")
    record("9c", order.passed and zero.passed, "f residual order >= 1.8, C_{i,2} = 0 exactly")
    assert order.passed and zero.passed


def test_criterion_9d_inverse_convention(record):
    rep = verify_classical_limit(PBParams(convention="q=x^-2r"))
    ratio = _check(rep, "c(r,x)/(beta log q)")
    order = _check(rep, "c residual order")
    record("9d", ratio.passed and order.passed, "informational: c -> -beta log q once x = q^{-1/2r}")
    assert ratio.passed and order.passed


def test_criterion_10_mutations(record):
    reps = mutation_suite(N=6)
    undetected = [r.indices["mutation"] for r in reps if not r.passed]
    no_witness = [r.indices["mutation"] for r in reps if not r.data.get("witness")]
    record(10, len(reps) >= 10 and not undetected and not no_witness,
           f"{len(reps)} mutations, all detected with a witness" if not undetected else f"missed {undetected}")
    assert len(reps) >= 10
    assert not undetected
    assert not no_witness
