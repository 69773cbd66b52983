import cmath
from collections import Counter
from fractions import Fraction

import pytest

from Shimura.algebra.cyclo import DELTA, ETA, I, ONE, PHI, SQRT5, ZERO, ZETA, ZETA5, phi20_roots
from Shimura.algebra.domains import GF, QQ
from Shimura.algebra.finite import field, legendre, nonresidue, sqrt_fp
from Shimura.algebra.linalg import ExactMatrix, bareiss_det, bareiss_rank
from Shimura.algebra.multipoly import MultiPoly, multivariate_gcd
from Shimura.algebra.projective import fp2_mul, fp2_rank, fp2_roots, singular_points_fp2
from Shimura.algebra.quadint import QuadInt, quad_splitting
from Shimura.algebra.reconstruct import rational_reconstruct
from Shimura.algebra.upoly import gcd, multiplicity_profile, roots_mod_p
from Shimura.helper.exceptions import BadPrimeError, DomainError


def test_root_of_unity_relations():
    assert ZETA ** 20 == ONE
    assert ZETA ** 10 == -ONE
    assert I * I == -ONE
    assert ZETA5 ** 5 == ONE


def test_real_subfield_constants():
    assert ETA * ETA + ETA - 1 == ZERO
    assert DELTA * DELTA == -3 - ETA
    assert SQRT5 * SQRT5 == 5 * ONE
    assert PHI * PHI == PHI + 1


def test_inverse_and_conjugation():
    x = ONE + ZETA
    assert x * x.inverse() == ONE
    assert ZETA.conjugate() == ZETA ** 19
    assert DELTA.conjugate() == -DELTA


@pytest.mark.parametrize("call", [lambda: ZERO.inverse(), lambda: ZETA.galois(2)])
def test_domain_errors(call):
    with pytest.raises(DomainError):
        call()


def test_complex_embedding():
    assert abs(ZETA.embed_complex() - cmath.exp(1j * cmath.pi / 10)) < 1e-14
    assert abs(SQRT5.embed_complex() - 5 ** 0.5) < 1e-14


def test_reduction_is_multiplicative():
    p = 41
    x, y = ONE + ZETA * 3, ETA - ZETA ** 7
    for root in phi20_roots(p):
        assert ZETA.reduce_mod_p(p, root) == root
        assert (x * y).reduce_mod_p(p, root) == x.reduce_mod_p(p, root) * y.reduce_mod_p(p, root) % p


def test_phi20_roots_need_one_mod_twenty():
    with pytest.raises(BadPrimeError):
        phi20_roots(43)


def test_quadratic_integers():
    phi = QuadInt(0, 1)
    assert phi.norm() == -1
    assert phi.trace() == 1
    assert phi * phi == phi + 1
    assert QuadInt.from_sqrt5(0, 1) ** 2 == QuadInt(5)
    x = QuadInt(3, -2)
    assert x * x.inverse() == QuadInt(1)
    assert x.to_cyclo() == 3 * ONE - 2 * PHI


def test_prime_splitting():
    assert [ideal.phi for ideal in quad_splitting(11)] == [4, 8]
    assert quad_splitting(7)[0].norm == 49
    assert quad_splitting(5)[0].kind == "ramified"


def test_finite_fields():
    assert legendre(2, 7) == 1
    assert legendre(3, 7) == -1
    assert sqrt_fp(2, 7) in (3, 4)
    f25 = field(5, 2)
    g = f25.primitive_element()
    assert g ** 24 == f25.one
    assert g ** 12 != f25.one
    assert g.frobenius() == g ** 5
    assert sum(1 for _ in f25.elements()) == 25


def test_univariate_helpers():
    assert gcd([2, -3, 1], [3, -4, 1], QQ) == [-1, 1]
    cubic = [1, -1, -1, 1]  # (x - 1)^2 (x + 1)
    assert multiplicity_profile(cubic, QQ) == [2, 1]
    assert roots_mod_p(cubic, 7) == Counter({1: 2, 6: 1})


def test_multivariate_arithmetic():
    x, y = MultiPoly.gens(2)
    assert (x + y) ** 2 == x * x + 2 * x * y + y * y
    assert multivariate_gcd((x + y) * (x - y), (x + y) ** 2) == x + y
    assert ((x + y) * (x - y)).exact_divide(x - y) == x + y


def test_exact_linear_algebra():
    assert bareiss_det([[2, 1], [1, 2]]) == 3
    assert bareiss_det([[-3, 1, 1], [1, -3, 1], [1, 1, -3]]) == -16
    assert bareiss_rank([[1, 2], [2, 4]]) == 1
    m = ExactMatrix([[1, 2], [3, 4]])
    assert m.det() == -2
    assert m.transpose().transpose() == m


def test_rational_reconstruction():
    assert rational_reconstruct(pow(3, -1, 101), 101) == Fraction(1, 3)


def test_fp2_helpers():
    import sympy as sp

    y = sp.Symbol("y")
    roots = fp2_roots(y ** 3 - 2 * y, y, 11, 2)
    assert (0, 0) in roots and len(roots) == 3
    assert all(fp2_mul(r, r, 11, 2) == (2, 0) for r in roots if r != (0, 0))
    assert fp2_rank([[(1, 0), (0, 1)], [(0, 1), (2, 0)]], 11, 2) == 1


def test_conjugate_nodes_are_found_over_fp2():
    p = 11
    x0, x1, x2, x3 = MultiPoly.gens(4, GF(p))
    # nodes at (1 : +-sqrt 2 : 0 : 0), 2 being a non-square mod 11
    form = (x1 * x1 - 2 * x0 * x0) ** 2 + x0 * x0 * (x2 * x2 + x3 * x3) + x2 ** 4 + x3 ** 4
    points = singular_points_fp2(form, p)
    assert len(points) == 2
    for point in points:
        assert not point.rational
        assert point.hessian_rank == 3
        assert point.coords[0] == (1, 0)
        assert point.coords[2:] == ((0, 0), (0, 0))
        assert fp2_mul(point.coords[1], point.coords[1], p, nonresidue(p)) == (2, 0)
