import json

import pytest

from wqt.exponent import E, ExponentFn, R
from wqt.model import params
from wqt.verify import (SCHEMA, Check, Report, Witness, expected_poles, mutation_suite, verify_case1_truncation,
                        verify_fusion_chain, verify_fusion_f, verify_fusion_T, verify_prop22, verify_quadratic,
                        verify_screening_exchange, verify_theorem21)


def test_parameter_tables_small_order():
    for case in (1, 2, 3):
        rep = verify_theorem21(case, N=4)
        assert rep.passed, rep.to_text()
        # the literal reading of the h_jj difference equation is reported, not required
        lit = [c for c in rep.checks if "read literally" in c.name]
        assert lit and not lit[0].required and not lit[0].passed


def test_wrong_table_gives_witness():
    P = params(2)
    bad = P.with_changes("probe", A0={**P.A0, (1, 1): P.A0[(1, 1)] + 1})
    rep = verify_theorem21(2, N=4, P=bad)
    assert not rep.passed
    w = rep.witness
    assert w is not None and w.lhs != w.rhs
    assert rep.failures()


def test_wrong_structure_parameter_breaks_vertex_exchange():
    P = params(3).with_changes("probe", s_param=R + 2)
    assert not verify_prop22(3, N=4, P=P).passed


def test_screening_small_order():
    assert all(verify_screening_exchange(c, N=4).passed for c in (1, 2, 3))


def test_fusion_f_small():
    assert verify_fusion_f(2, N=5, imax=3).passed


@pytest.mark.parametrize("case,i,j", [(2, 1, 1), (3, 1, 2), (1, 1, 1)])
def test_quadratic_small(case, i, j):
    rep = verify_quadratic(case, i, j, N=6)
    assert rep.passed, rep.to_text()
    assert [ExponentFn.from_text(e) for e in rep.data["poles"]] == expected_poles(case, i, j)


def test_expected_poles():
    assert expected_poles(2, 1, 1) == [E(-2), E(2)]
    assert expected_poles(2, 2, 3) == [E(-5), E(-3), E(3), E(5)]


def test_literal_case3_construction_fails_with_witness():
    rep = verify_quadratic(3, 1, 1, N=6, construction="literal")
    assert not rep.passed
    assert "L1" in rep.witness.pattern and "L3" in rep.witness.pattern


def test_quadratic_index_validation():
    with pytest.raises(ValueError):
        verify_quadratic(1, 1, 3)
    with pytest.raises(ValueError):
        verify_quadratic(2, 2, 1)


def test_fusion_T_and_chain():
    assert verify_fusion_T(2, 1, 2, 1).passed
    assert verify_fusion_T(3, 2, 1, -1).passed
    assert verify_fusion_chain(3, imax=4).passed


def test_case1_truncation():
    rep = verify_case1_truncation(N=5)
    assert rep.passed, rep.to_text()


def test_mutations_are_detected():
    reps = mutation_suite(N=4)
    assert len(reps) >= 10
    for r in reps:
        assert r.passed, r.indices["mutation"]
        assert r.data["detected_by"]
        assert r.data["witness"]["lhs"] != r.data["witness"]["rhs"] or "raised" in r.data["witness"].get("note", "")


def test_report_serialisation_is_stable():
    rep = Report("demo", "case2", {"i": 1}, [Check("a", True, count=3),
                                             Check("b", False, Witness("p", "e", "1", "2", "n"), required=False)])
    d = rep.to_dict()
    assert d["status"] == "pass"          # informational failures do not count
    assert "witness" not in d
    assert json.dumps(d, sort_keys=True) == json.dumps(Report(**{**rep.__dict__}).to_dict(), sort_keys=True)
    assert "note" in rep.to_text()
    assert SCHEMA.startswith("wqt-report/")


def test_required_failure_sets_witness():
    w = Witness("p", "e", "1", "2")
    rep = Report("demo", None, {}, [Check("a", False, w)])
    assert rep.status == "fail" and rep.witness is w
