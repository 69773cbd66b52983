import pytest

from Shimura.algebra.cyclo import phi20_roots
from Shimura.algebra.domains import GF
from Shimura.algebra.multipoly import MultiPoly
from Shimura.helper.exceptions import DomainError, UnsupportedCaseError
from Shimura.moduli.canonical import (
    FIVE_CYCLE, FROBENIUS_GENERATORS, TRANSPOSITION, alternating_cubic_check, canonical_map_check, cusp_quadrics,
    cycle_perm, frobenius_eigenvectors, generate_group, permutation_on_six, s5_model_checks, sign, six_quadrics,
    span_dimension, stabilized_quadric,
)
from Shimura.moduli.charts import eigenspace_chart, restrict_quadrics
from Shimura.moduli.conic import conic_configuration
from Shimura.moduli.covers import (
    FAMILIES, SuperellipticCurve, classify_genus4_quintics, deformation_dim, degeneration_report, eigenvalues, genus,
    hyperelliptic_limit, limit_cover,
)
from Shimura.moduli.intersections import (
    SCHOTTKY_SAMPLES, jacobi_intersections, quadric_intersection_curves, schottky_on_conic, type5_dimension,
)
from Shimura.moduli.models import EXPECTED_DEGREE, derive_model, model_degree
from Shimura.algebra.projective import ConjugatePoint
from Shimura.moduli.sextic import NODE_TAGS, SingularLocus, is_triangle, quadratic_rank, singular_census


@pytest.fixture(scope="module")
def conic_model():
    return derive_model(2)


def test_family_genera():
    assert {name: genus(curve) for name, curve in FAMILIES.items()} == {"C": 4, "C'": 4, "C''": 4}
    assert genus(limit_cover(5, 1, 1)) == 2


def test_eigenvalues_of_the_family():
    assert eigenvalues(FAMILIES["C"]) == [1, 1, 2, 3]
    assert eigenvalues(FAMILIES["C'"]) == [1, 2, 3, 4]
    assert eigenvalues(limit_cover(5, 2, 1)) == [1, 3]


def test_limit_cover_hypothesis():
    with pytest.raises(UnsupportedCaseError):
        limit_cover(5, 2, 3)


def test_bad_curves_are_rejected():
    with pytest.raises(DomainError):
        genus(SuperellipticCurve(5, (("0", 5),)))
    with pytest.raises(DomainError):
        genus(SuperellipticCurve(5, (("0", 1), ("0", 2))))


@pytest.mark.parametrize("k, dim", [(1, 0), (2, 1), (3, 1), (4, 2)])
def test_deformation_dimensions(k: int, dim: int):
    assert deformation_dim(k) == dim


@pytest.mark.parametrize("family, point, types", [
    ("C", "0", [2, 3]), ("C", "1", [2, 3]), ("C", "inf", [2, 3]), ("C''", "0", [4]),
])
def test_degenerations(family: str, point: str, types: list):
    report = degeneration_report(family, point)
    assert report.automorphism_types == types
    assert report.genus_adds_up


def test_hyperelliptic_degeneration():
    report = hyperelliptic_limit()
    assert report.automorphism_types == [4]
    assert report.limit_eigenvalues == [1, 2]


def test_unknown_degeneration():
    with pytest.raises(UnsupportedCaseError):
        degeneration_report("C'", "1")


def test_quintic_classification():
    report = classify_genus4_quintics()
    assert report.passed
    assert len(report.classes) == 3
    assert report.corrected_involution
    assert report.canonical_quadric_rank == 3


def test_permutation_groups():
    assert cycle_perm(3, (1, 2, 3)) == (1, 2, 0)
    assert len(generate_group(FROBENIUS_GENERATORS)) == 20
    assert len(generate_group((TRANSPOSITION, FIVE_CYCLE))) == 120
    assert (sign(TRANSPOSITION), sign(FIVE_CYCLE), sign(FROBENIUS_GENERATORS[1])) == (-1, 1, -1)


def test_frobenius_group_fixes_one_quadric_up_to_sign():
    basis = cusp_quadrics()
    assert len(basis) == 5
    assert frobenius_eigenvectors(basis, "trivial") == []
    character, found = stabilized_quadric(basis)
    assert character == "sign"
    assert span_dimension(found) == 1


def test_six_quadrics():
    character, found = stabilized_quadric(cusp_quadrics())
    six = six_quadrics(found[0], character)
    assert len(six) == 6
    total = six[0]
    for z in six[1:]:
        total = total + z
    assert total.is_zero()
    assert span_dimension(six) == 5
    swap = permutation_on_six(six, TRANSPOSITION)
    assert all(swap[i] != i and swap[swap[i]] == i for i in range(6))
    assert sorted(permutation_on_six(six, FIVE_CYCLE)) == list(range(6))


def test_quadratic_forms_and_triangles():
    x, y, z = MultiPoly.gens(3)
    assert quadratic_rank(x * y) == 2
    assert quadratic_rank(x * x + y * y + z * z) == 3
    assert is_triangle(x * y * z)
    assert not is_triangle(x ** 3 + y ** 3 + z ** 3 + x * y * z)


def test_alternating_cubic():
    report = alternating_cubic_check()
    assert (report.transposition_sign, report.five_cycle_sign) == (-1, 1)


def test_short_scan_counts_conjugate_points():
    pair = (ConjugatePoint(((1, 0), (0, 1), (0, 0), (0, 0)), 3), ConjugatePoint(((1, 0), (0, 40), (0, 0), (0, 0)), 3))
    locus = SingularLocus(41, 0, [], {"cusp": 5, "node": 22}, {}, [], [], [], pair)
    assert not locus.rational
    assert locus.all_kinds() == {"cusp": 5, "node": 24}
    assert locus.complete
    flat = locus._replace(conjugate=(ConjugatePoint(pair[0].coords, 0), ConjugatePoint(pair[1].coords, 0)))
    assert flat.all_kinds() == {"cusp": 5, "node": 22, "order 3": 2}
    assert not flat.complete


def test_type5_dimension_agrees_with_the_gcd():
    s0, s1, t0, t1 = MultiPoly.gens(4, GF(41))
    d, fj = s0 * t1 - s1 * t0, s0 * t0 + s1 * t1
    assert type5_dimension(d, fj, seed=3) == (0, "groebner")
    common = s0 * t0 - 3 * s1 * t1
    assert type5_dimension(d * common, fj * common, seed=3) == (1, "groebner")


@pytest.mark.slow
def test_s5_model():
    report = s5_model_checks()
    assert report.orbit_sizes == (5, 24)
    assert report.passed


@pytest.mark.slow
def test_conic_model(conic_model):
    assert conic_model.degree == 2
    assert conic_model.irreducible


@pytest.mark.slow
@pytest.mark.parametrize("seed", [1, 7, 20, 2024])
@pytest.mark.parametrize("k", [2, 4])
def test_model_degree_across_seeds(k: int, seed: int):
    for p in (41, 61):
        assert model_degree(eigenspace_chart(k), p, phi20_roots(p)[0], seed) == EXPECTED_DEGREE[k]


@pytest.mark.slow
@pytest.mark.parametrize("seed", [1, 20])
def test_conic_model_for_other_seeds(seed: int):
    model = derive_model(2, seed=seed)
    assert model.degree == 2 and model.irreducible
    assert model.held_out not in model.primes


@pytest.mark.slow
def test_surface_model():
    model = derive_model(4)
    assert model.degree == 6
    assert model.irreducible


@pytest.mark.slow
def test_canonical_map():
    report = canonical_map_check()
    assert report.relabeling is not None
    assert report.sampled >= 200
    assert report.invariant_cubic_vanishes and report.alternating_cubic_vanishes
    assert report.model_nodes == 24
    assert report.passed


@pytest.mark.slow
def test_conic_census():
    census = restrict_quadrics(eigenspace_chart(2), strict=False)
    assert len(census.zero_members) == 1
    assert census.multiplicity_profile() == {5: 27}


@pytest.mark.slow
def test_surface_census():
    census = restrict_quadrics(eigenspace_chart(4))
    assert census.multiplicity_profile() == {1: 1, 5: 15, 10: 6}


@pytest.mark.slow
def test_conic_configuration():
    conf = conic_configuration()
    assert conf.distinct_points == 12
    assert all(sorted(p) == [1, 3] for p in conf.rank2_profiles)
    assert all(sorted(p) == [1, 1, 1, 1] for p in conf.rank3_profiles)
    assert conf.pairing_is_matching
    assert set(conf.pair_coverage.values()) == {5} and len(conf.pair_coverage) == 6
    assert conf.pairs_of_pairs == 15
    assert set(conf.vanishing.values()) == {36}
    assert {tuple(sorted(s)) for s in conf.vanishing_split.values()} == {(1, 5, 5, 25)}


@pytest.mark.slow
def test_mobius_match_at_every_embedding():
    conf = conic_configuration()
    assert conf.mobius_found and conf.mobius_preserves_pairs
    assert conf.mobius_embeddings >= 2
    assert conf.mobius_assignments >= 1
    assert conf.mobius_consistent


@pytest.mark.slow
def test_conic_lies_in_the_jacobian_locus():
    values = schottky_on_conic()
    assert len(values) == SCHOTTKY_SAMPLES
    assert all(values)


@pytest.mark.slow
def test_sextic_singular_locus():
    loci = singular_census(primes=(41, 61))
    assert [locus.prime for locus in loci] == [41, 61]
    for locus in loci:
        assert locus.rational and locus.complete
        assert locus.kinds == {"cusp": 5, "node": 24}
        assert locus.incidence_counts == {"cusp": {18: 5}, "node": {7: 24}}
        assert all(tags == NODE_TAGS for tags in locus.node_tags)
        assert all(missing == {"invariant": 1, "type5": 3} for missing in locus.cusp_missing_tags)
        assert len(locus.through_all_cusps) == 6


@pytest.mark.slow
def test_quadric_intersection_curves():
    report = quadric_intersection_curves()
    assert report.type10.squarefree_bidegree == (3, 3)
    assert sorted(report.type10.components) == [(1, 2), (2, 1)]
    assert report.type10.factorisation_holds
    assert report.type10.intersection_length == 5
    assert report.type5.is_square and report.type5.nodes == 4
    assert report.passed


@pytest.mark.slow
def test_jacobi_locus_intersections():
    report = jacobi_intersections()
    assert report.conic_in_jacobi_locus
    assert report.divisible_by_curves
    assert report.residual_squarefree_degree == 10
    assert report.type5_dimension == 0
    assert report.passed
