import pytest

from Shimura.algebra.quadint import QuadInt, quad_splitting
from Shimura.arithmetic.hilbert import (
    H_TABLE, J_H, J_H_CHI4, HilbertMatch, hilbert_trace_match, integral_model, missing_norms, prime_generators,
    target_for, trace_above_two, uniformizer, valuation,
)
from Shimura.arithmetic.weierstrass import with_j

SQRT5 = QuadInt(-1, 2)


def test_table_has_sixteen_eigenvalues():
    assert sum(len(values) for values in H_TABLE.values()) == 16
    assert target_for(H_TABLE, True)[11] == (-4, 4)
    assert target_for(H_TABLE, True)[29] == (-6, 10)


def test_twist_generators():
    gens = prime_generators(J_H)
    assert gens[:3] == [QuadInt(2), SQRT5, QuadInt(3)]
    assert any(abs(g.norm()) == 31 for g in gens)
    chi4_gens = prime_generators(J_H_CHI4)
    assert {abs(int(g.norm())) for g in chi4_gens[3:]} == {29, 41, 181}


def test_uniformizers():
    for p in (11, 31, 59):
        for ideal in quad_splitting(p):
            pi = uniformizer(ideal)
            assert abs(pi.norm()) == p
            assert valuation(QuadInt(p), ideal) == 1
    assert uniformizer(quad_splitting(7)[0]) == QuadInt(7)


@pytest.mark.parametrize("j", [J_H, J_H_CHI4])
def test_additive_above_two(j):
    base = with_j(j, "Q(sqrt5)")
    ideal = quad_splitting(2)[0]
    for d in (QuadInt(1), QuadInt(2), SQRT5):
        a4, a6 = integral_model(base.a4 * d * d, base.a6 * d * d * d)
        assert trace_above_two(a4, a6, ideal) == (0, "additive")


def test_missing_traces_fail_the_match():
    target = {5: (0,), 9: (-2,)}
    computed = {5: (0,), 9: (None,)}
    assert missing_norms(computed, target) == [9]
    match = HilbertMatch(str(J_H), QuadInt(3), computed, target, {}, 1, missing_norms(computed, target))
    assert not match.passed


@pytest.mark.slow
def test_hilbert_form_matches_a_twist():
    match = hilbert_trace_match(J_H)
    assert match.passed
    assert match.skipped == []
    assert match.compared == 16
    assert set(match.alignment) == {11, 19, 29, 31, 41, 59}


@pytest.mark.slow
def test_chi4_twist_matches():
    match = hilbert_trace_match(J_H_CHI4, twisted_by_chi4=True)
    assert match.passed
    assert match.computed[4] == (0,)
