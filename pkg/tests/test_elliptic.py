from fractions import Fraction

import pytest

from Shimura.arithmetic.counting import trace_of_frobenius, trace_table, weil_bound_holds
from Shimura.arithmetic.modular import F20, G40, check_listed, chi4
from Shimura.arithmetic.weierstrass import (
    E, E_PRIME, E_TORSION_POINT, J_E, J_E_PRIME, WeierstrassCurve, invariants, legendre_j, point_order,
    quadratic_twist, velu_isogeny, with_j,
)
from Shimura.helper.exceptions import DomainError


def test_invariants_of_e():
    inv = invariants(E)
    assert (inv.c4, inv.c6, inv.discriminant) == (64, -352, 80)
    assert inv.j == J_E == Fraction(16384, 5)
    assert WeierstrassCurve.short(0, 1).j == 0


@pytest.mark.parametrize("p, a_p", [(3, -2), (7, 2), (11, 0), (13, 2), (17, -6), (19, -4)])
def test_traces_match_the_newform(p: int, a_p: int):
    assert trace_of_frobenius(E, p) == a_p
    assert F20.coefficient(p) == a_p


def test_newform_recursion():
    table = check_listed(F20)
    assert table[9] == 1 and table[21] == -4
    check_listed(G40)
    assert [chi4(n) for n in range(1, 6)] == [1, 0, -1, 0, 1]


def test_weil_bound():
    assert weil_bound_holds(trace_table(E, [3, 7, 11, 13, 17]))


def test_torsion():
    assert point_order(E, E_TORSION_POINT) == 6
    assert point_order(E, (Fraction(0), Fraction(0))) == 2
    assert point_order(E, E.multiply(2, E_TORSION_POINT)) == 3
    with pytest.raises(DomainError):
        point_order(E, (Fraction(1), Fraction(5)))


def test_twist_by_minus_one():
    twisted = quadratic_twist(E, -1)
    for p in (7, 19, 23):
        assert trace_of_frobenius(twisted, p) == -trace_of_frobenius(E, p)
    with pytest.raises(DomainError):
        quadratic_twist(E, 0)


def test_isogenies():
    two = velu_isogeny(E, (Fraction(0), Fraction(0)))
    assert two.degree == 2
    for p in (3, 7, 13):
        assert trace_of_frobenius(two.codomain, p) == trace_of_frobenius(E, p)
    assert velu_isogeny(E, E_TORSION_POINT).codomain.j == J_E_PRIME == E_PRIME.j


def test_legendre_and_models_with_given_j():
    assert legendre_j(Fraction(-1)) == 1728
    assert legendre_j(Fraction(2)) == 1728
    with pytest.raises(DomainError):
        legendre_j(Fraction(1))
    assert with_j(J_E).j == J_E
    with pytest.raises(DomainError):
        with_j(1728)
