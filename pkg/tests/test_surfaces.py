import pytest

from Shimura.algebra.domains import GF
from Shimura.algebra.linalg import bareiss_det
from Shimura.algebra.multipoly import MultiPoly
from Shimura.arithmetic.function_field import T, base_change, lattice_rank, nagell_weierstrass, weierstrass_equiv_search
from Shimura.arithmetic.weierstrass import WeierstrassCurve
from Shimura.helper.exceptions import BadPrimeError, ProfileMismatchError
from Shimura.surfaces.fibration import (
    constant_fibration, count_fibration, is_good_prime, kummer_check, kummer_fiber_types, transcendental_match,
)
from Shimura.surfaces.lattice import (
    DET_WITH_HYPERPLANE, DET_WITHOUT_CUBICS, SIZE, adjunction, all_synthemes, curve_labels, search_assignment,
    triangle_block,
)
from Shimura.surfaces.library import KUMMER_CUBIC, library_self_check, model_library, x, xp
from Shimura.surfaces.projective import exceptional_points, is_smooth_at, strict_transform
from Shimura.surfaces.zeta import (
    ReductioRow, factor_degrees, field_overlap, hodge_bookkeeping, ns_trace, picard_number_mod_p, predicted_count,
    predicted_count_power, reductio_table, shimura_ns_module, squarefree_part, zeta_assemble,
)


@pytest.fixture
def module():
    return shimura_ns_module()


def test_ns_module(module):
    assert module.rank == 46
    assert module.multiplicities() == {"Q": 10, "Q(sqrt5)": 6, "Q(zeta5)": 6}


@pytest.mark.parametrize("q, trace", [(3, 10), (7, 10), (11, 46), (19, 22), (49, 22)])
def test_ns_trace(module, q: int, trace: int):
    assert ns_trace(module, q) == trace


def test_ns_trace_at_five(module):
    with pytest.raises(BadPrimeError):
        ns_trace(module, 5)


def test_predicted_counts():
    assert predicted_count(3) == 45
    assert predicted_count(7) == 105
    assert predicted_count(13) == 255
    assert predicted_count_power(7, 2) == 3735


def test_reductio_table_at_three():
    rows = reductio_table(3, predicted_count(3))
    assert rows == [ReductioRow(5, -2, -2), ReductioRow(0, 1, -35), ReductioRow(-5, 4, -5)]
    assert field_overlap({3: rows, 0: [ReductioRow(0, 0, -5)]}) == {-5}


def test_squarefree_part():
    assert [squarefree_part(n) for n in (-32, -35, 12, 1)] == [-2, -35, 3, 1]


def test_hodge_numbers():
    hodge = hodge_bookkeeping()
    assert (hodge.b2, hodge.h11) == (61, 51)
    assert hodge.noether
    assert factor_degrees() == hodge.euler == 63


def test_picard_number_jumps_at_supersingular_prime():
    assert picard_number_mod_p(11) == 61
    assert picard_number_mod_p(7) == 51


def test_configuration_shape():
    labels = curve_labels()
    assert len(labels) == SIZE == 51
    assert sum(1 for label in labels if label.square == -2) == 24
    assert len(all_synthemes()) == 15
    assert bareiss_det(triangle_block()) == -16


def test_lattice_ranks():
    assert lattice_rank(["U", "A3", "E6", "E8"]) == 19
    assert lattice_rank(["U", "<12>"]) == 3


def test_constant_fibration():
    count = count_fibration(constant_fibration(WeierstrassCurve.short(0, 1)), 5)
    assert count.smooth_count == 36


def _local(p: int, build):
    x, y, z = MultiPoly.gens(3, GF(p))
    return build(x, y, z)


@pytest.mark.parametrize("n, blow_ups", [(1, 1), (2, 1), (3, 2), (4, 2), (5, 3)])
def test_an_singularity_resolves_to_a_chain(n: int, blow_ups: int):
    p = 7
    local = _local(p, lambda x, y, z: x * y - z ** (n + 1))
    # a chain of n lines over F_p
    assert exceptional_points(local, p) == (n * p + 1, blow_ups)


def test_triangle_cusp_needs_one_blow_up():
    p = 11
    local = _local(p, lambda x, y, z: x * y * z + x ** 4 + y ** 4 + z ** 4)
    assert exceptional_points(local, p) == (3 * p, 1)


def test_singular_line_is_rejected():
    local = _local(7, lambda x, y, z: x * y + z * x * y)
    with pytest.raises(ProfileMismatchError):
        exceptional_points(local, 7)


def test_strict_transform_and_smoothness():
    p = 7
    local = _local(p, lambda x, y, z: x * y - z ** 4)
    transform = strict_transform(local, 2)
    assert transform == _local(p, lambda x, y, z: x * y - z ** 2)
    assert not is_smooth_at(transform, (0, 0, 0))
    assert is_smooth_at(strict_transform(transform, 0), (0, 0, 0))


@pytest.mark.slow
def test_intersection_lattice():
    result = search_assignment()
    found = result.found
    assert found is not None
    assert found.rank == 46
    assert found.det_without_cubics == DET_WITHOUT_CUBICS == -(2 ** 45) * 3
    assert found.det_with_hyperplane == DET_WITH_HYPERPLANE == -(2 ** 33) * 3
    assert result.consistent()
    assert adjunction(found.assignment, found.model).k_squared == 9


@pytest.mark.slow
def test_tate_fiber_types():
    report = library_self_check(strict=False)
    for check in report.fibers:
        assert check.observed == check.expected, check.model
        assert check.euler_sum == (12 if check.model == "RES" else 24), check.model


@pytest.mark.slow
def test_kummer_pencil():
    kummer = model_library()["KummerPencil"].equation
    assert kummer_fiber_types(kummer) == {"0": "IV*", "inf": "IV*", "euler": "24"}
    assert not is_good_prime(kummer, 7)
    for p in [p for p in (11, 13, 17, 19, 23) if is_good_prime(kummer, p)][:2]:
        assert kummer_check(kummer, p).passed


@pytest.mark.slow
def test_inose_base_change():
    pulled = base_change(model_library()["Inose"].equation, T ** 2)
    assert weierstrass_equiv_search(nagell_weierstrass(KUMMER_CUBIC, x, xp), pulled) is not None


@pytest.mark.slow
def test_zeta_counts_at_seven_and_thirteen():
    result = zeta_assemble([7, 13])
    assert result.counts == {7: 105, 13: 255}
    assert result.mismatches == []
    module = shimura_ns_module()
    per_copy = {p: (n - 1 - p * p - p * ns_trace(module, p)) // 5 for p, n in result.counts.items()}
    assert per_copy == {7: -3, 13: -9}


@pytest.mark.slow
@pytest.mark.parametrize("p, residual", [(7, -3), (13, -9)])
def test_fibration_trace(p: int, residual: int):
    xprime = model_library()["Xprime"].equation
    if not is_good_prime(xprime, p):
        pytest.skip(f"{p} is bad for the fibration")
    assert transcendental_match(xprime, p) == {"residual": residual, "sym2": residual}
