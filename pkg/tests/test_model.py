import pytest

from wqt.exponent import E, R
from wqt.model import (CaseId, Monomial, UNIT, Vertex, current_T, dynkin_map, f_struct, fusion_chain, kernel,
                       pair_rational, params, reduce_case1)
from wqt.scalar import ONE, ZERO


def test_case_parsing():
    assert CaseId.parse("2") is CaseId.CASE2
    assert CaseId.parse("case3") is CaseId.CASE3
    assert CaseId.parse(CaseId.CASE1) is CaseId.CASE1
    with pytest.raises(ValueError):
        CaseId.parse("4")


def test_vertex_parsing():
    assert Vertex.parse("St2") == Vertex("St", 2)
    assert str(Vertex.parse("L3")) == "L3"
    with pytest.raises(ValueError):
        Vertex.parse("Q1")


def test_structure_parameter():
    assert params(1).s_param == E(3)
    assert params(2).s_param == R + 1
    assert params(3).s_param == R + 1


@pytest.mark.parametrize("case", [1, 2, 3])
def test_kernel_table(case):
    for k in (1, 2, 3):
        assert kernel(case, k, k).delta_type in (0, 2)
        for l in (1, 2, 3):
            if k != l:
                K, Kr = kernel(case, k, l), kernel(case, l, k)
                assert K.delta_type == Kr.delta_type == 1
                assert K.shift == -Kr.shift == (-1 if k < l else 1)


def test_diagonal_kernels():
    assert kernel(2, 3, 3).describe() == "Delta_2(x^0 zeta)"
    assert kernel(3, 2, 2).describe() == "Delta_2(x^0 zeta)"
    assert kernel(2, 1, 1).describe() == "1"


def test_f_structure_starts_at_one():
    f = f_struct(R + 1, 1, 1, 4)
    assert f.coeff(0) == ONE
    assert f.coeff(1) != ZERO


def test_monomial_normal_form():
    a = Monomial.of((2, 1), (1, -1))
    b = Monomial.of((1, -1), (2, 1))
    assert a == b and hash(a) == hash(b)
    assert a.shifted(2) == Monomial.of((1, 1), (2, 3))
    assert a.to_text() == ":L1(x^-1z) L2(x^1z):"


def test_case1_truncation_of_patterns():
    assert reduce_case1(Monomial.of((1, -2), (2, 0), (3, 2))) == UNIT
    M = Monomial.of((1, -2), (2, 0), (3, 2), (1, 5))
    assert reduce_case1(M) == Monomial.of((1, 5))
    assert reduce_case1(Monomial.of((1, 0), (2, 2))) == Monomial.of((1, 0), (2, 2))


def test_case1_chain_truncates():
    assert len(fusion_chain(1, 3)) == 1 and fusion_chain(1, 3).weight(UNIT) == ONE
    assert len(fusion_chain(1, 4)) == 0


@pytest.mark.parametrize("case", [2, 3])
def test_closed_form_currents_match_fusion(case):
    for i in (1, 2, 3):
        assert current_T(case, i) == fusion_chain(case, i)


def test_current_sizes():
    assert len(current_T(2, 1)) == 3
    assert len(current_T(2, 2)) == 4


def test_pair_rational_exchange():
    M1, M2 = Monomial.of((1, 0)), Monomial.of((2, 0))
    assert pair_rational(2, M1, M2, 1, 1) == pair_rational(2, M2, M1, 1, 1).invert()


def test_dynkin_map_is_a_relabelling():
    M = Monomial.of((1, 0), (3, 2))
    assert len(dynkin_map(M)) == len(M)
