import numpy as np
import pytest

from Shimura.algebra.cyclo import I, ONE, ZETA5
from Shimura.helper.exceptions import DomainError
from Shimura.suites.theta import genus_one_value
from Shimura.theta.characteristics import (
    Characteristic, even_characteristics, odd_characteristics, quadric_poly, quadric_terms,
)
from Shimura.theta.heisenberg import (
    PHI5_CHARPOLY, build_order5, commutator_scalar, eigen_pairs, equivariance_check, identity, kron_matrix,
    lift_reduction_matches, matrix_power, nonzero_vectors, order_mod2, pairing, scaled, schrodinger_U,
    symplectic_lift_Z, tensor_eigenspace, theta_lift, transvection_sp, SympVec,
)
from Shimura.theta.relations import RIEMANN_FIRST, RIEMANN_SECOND, quartic_identity
from Shimura.theta.series import (
    square_identity_check, theta_second_kind, theta_with_char, thetanulls, vanishing_count,
)
from Shimura.theta.siegel import (
    SiegelMatrix, block_diagonal, is_symplectic, random_siegel, siegel_action, symplectic_form,
)

TOL = 1e-12
THETA3_AT_I = 1.086434811213308


@pytest.fixture(scope="module")
def order5():
    return build_order5()


@pytest.mark.parametrize("g, count", [(1, 3), (2, 10), (3, 36), (4, 136)])
def test_even_characteristic_count(g: int, count: int):
    assert len(even_characteristics(g)) == count
    assert len(even_characteristics(g)) + len(odd_characteristics(g)) == 4 ** g


def test_characteristic_labels():
    even = Characteristic.parse("[11;11]")
    assert even.is_even
    assert even.label() == "[11;11]"
    assert len(quadric_terms(even)) == 4
    odd = Characteristic.parse("[10;10]")
    assert not odd.is_even
    assert odd.label() == "[10;10]"
    with pytest.raises(DomainError):
        quadric_terms(odd)


def test_genus_one_value_at_default_tolerance(suite_config):
    outcome = genus_one_value(suite_config)
    assert outcome.passed
    assert outcome.inputs["threshold"] == pytest.approx(suite_config.tol / 100)


def test_quadrics_are_distinct():
    quadrics = {quadric_poly(c).monic() for c in even_characteristics(4)}
    assert len(quadrics) == 136


def test_siegel_validation():
    with pytest.raises(DomainError):
        SiegelMatrix([[1j, 0.5], [0.0, 1j]])
    with pytest.raises(DomainError):
        SiegelMatrix([[-1j]])


def test_involution_fixes_i():
    j = symplectic_form(2)
    assert is_symplectic(j)
    image = siegel_action(-j, SiegelMatrix.diagonal(1j, 1j))
    assert np.allclose(image.tau, 1j * np.eye(2))


def test_genus_one_value():
    point = SiegelMatrix([[1j]])
    assert abs(theta_with_char(Characteristic((0,), (0,)), point, TOL) - THETA3_AT_I) < 1e-12
    # theta[0](2 tau) at tau = i/2
    assert abs(theta_second_kind((0,), SiegelMatrix([[0.5j]]), TOL) - THETA3_AT_I) < 1e-12


def test_square_identities_genus_two():
    rng = np.random.default_rng(20)
    for _ in range(3):
        point = random_siegel(2, rng)
        for c in even_characteristics(2):
            assert square_identity_check(c, point, TOL) < 1e-8


def test_odd_thetanulls_vanish():
    point = random_siegel(2, np.random.default_rng(7))
    assert np.max(np.abs(thetanulls(point, TOL, odd_characteristics(2)))) < 1e-12


@pytest.mark.slow
def test_vanishing_counts():
    rng = np.random.default_rng(20)
    assert vanishing_count(random_siegel(4, rng), 1e-10) == 0
    blocks = block_diagonal(random_siegel(2, rng), random_siegel(2, rng))
    assert vanishing_count(blocks, 1e-10) == 36


def test_transvections_have_order_two():
    vectors = nonzero_vectors(2)
    assert len(vectors) == 15
    for v in vectors:
        assert order_mod2(transvection_sp(v)) == 2
        assert is_symplectic(symplectic_lift_Z(v))
        assert lift_reduction_matches(v)
    with pytest.raises(DomainError):
        transvection_sp(SympVec((0, 0), (0, 0)))


def test_heisenberg_commutators():
    vectors = nonzero_vectors(2)
    minus_one = identity(4)
    minus_one = scaled(minus_one, -ONE)
    for v in vectors:
        assert schrodinger_U(v) * schrodinger_U(v) == minus_one
        for w in vectors:
            assert commutator_scalar(v, w) == (-1) ** pairing(v, w) * ONE


def test_theta_lift_powers():
    for v in nonzero_vectors(2):
        m = theta_lift(v)
        assert m * m == scaled(schrodinger_U(v), -I)
        assert matrix_power(m, 4) == identity(4)


@pytest.mark.slow
def test_equivariance_at_diagonal_point():
    point = SiegelMatrix.diagonal(1j, 2j)
    for v in nonzero_vectors(2):
        assert equivariance_check(v, point, 1e-10).residual < 1e-8


def test_eigen_pairs():
    assert set(eigen_pairs(2)) == {(1, 1), (2, 3), (4, 2)}
    assert eigen_pairs(4) == ((1, 1), (2, 2), (3, 3), (4, 4))


@pytest.mark.slow
def test_order_five_lift(order5):
    assert order5.charpoly == PHI5_CHARPOLY
    assert order5.lam ** 5 == order5.c
    for j, vec in order5.eigenvectors.items():
        assert order5.L.apply(vec) == [ZETA5 ** j * x for x in vec]


@pytest.mark.slow
@pytest.mark.parametrize("k, dim", [(2, 3), (4, 4)])
def test_tensor_eigenspaces(order5, k: int, dim: int):
    chart = tensor_eigenspace(k)
    assert chart.dim == dim
    operator = kron_matrix(order5.L, matrix_power(order5.L, k))
    for column in chart.columns:
        assert operator.apply(list(column)) == [ZETA5 ** (1 + k) * x for x in column]


def test_genus_two_quartic_identities():
    assert quartic_identity(RIEMANN_FIRST).is_zero()
    assert quartic_identity(RIEMANN_SECOND).is_zero()
    printed = RIEMANN_SECOND[:3] + ((Characteristic((1, 0), (1, 0)), 1),)
    assert not Characteristic((1, 0), (1, 0)).is_even
    assert not quartic_identity(printed).is_zero()
