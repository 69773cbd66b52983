import pytest

from Shimura.algebra.cyclo import DELTA, ETA, ONE
from Shimura.algebra.quadint import QuadInt
from Shimura.arithmetic.endomorphisms import (
    QuatElement, displayed_norm_discrepancy, hermitian_signature, isotropy_search, psi_diagram_check,
    quat_arith_check, quaternion_algebra, quaternion_basis_check, rosati_integrality, sqrt_k0,
)
from Shimura.helper.exceptions import DomainError


def test_commuting_square():
    assert psi_diagram_check().holds


def test_rosati_product_is_integral():
    check = rosati_integrality()
    assert check.integral
    assert check.holds


def test_quaternion_arithmetic():
    check = quat_arith_check(pairs=20, seed=7)
    assert check.multiplicative and check.anti_involution
    assert check.homomorphism and check.norm_is_det


def test_mixed_algebras_do_not_multiply():
    x = QuatElement.of([1, 0, 0, 0], 1, -1)
    y = QuatElement.of([1, 0, 0, 0], 2, -1)
    with pytest.raises(DomainError):
        x * y


def test_printed_norm_form_fails_on_k():
    assert displayed_norm_discrepancy(DELTA, DELTA * ETA) == {"1": True, "i": True, "j": True, "k": False}


def test_quaternion_basis():
    check = quaternion_basis_check()
    assert check.holds
    assert not all(check.displayed.values())
    with pytest.raises(DomainError):
        quaternion_basis_check(ONE, DELTA)


def test_sqrt_in_real_subfield():
    assert sqrt_k0(QuadInt(4)) in (QuadInt(2), QuadInt(-2))
    assert sqrt_k0(QuadInt(2)) is None
    root = sqrt_k0(QuadInt(0, 1) * QuadInt(0, 1))
    assert root * root == QuadInt(0, 1) * QuadInt(0, 1)


def test_isotropy():
    assert isotropy_search(1, -1).found
    assert isotropy_search(4, -4).verdict == "isotropic"
    witness = isotropy_search(1, -1).witness
    assert not witness.norm()
    with pytest.raises(DomainError):
        isotropy_search(0, 1)
    a, b = quaternion_algebra(DELTA, DELTA * ETA)
    assert a and b


@pytest.mark.parametrize("d1, d2, signature", [
    (DELTA, DELTA, ((0, 2), (0, 2))),
    (DELTA, -DELTA, ((1, 1), (1, 1))),
    (-DELTA, -(DELTA * ETA), ((2, 0), (1, 1))),
])
def test_hermitian_signature(d1, d2, signature):
    assert hermitian_signature(d1, d2) == signature


def test_signature_needs_imaginary_entries():
    with pytest.raises(DomainError):
        hermitian_signature(ONE, DELTA)
