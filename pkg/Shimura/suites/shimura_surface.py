from Shimura.helper.modal import Outcome, SuiteConfig
from Shimura.helper.report import Suite
from Shimura.moduli.charts import eigenspace_chart, restrict_quadrics
from Shimura.moduli.intersections import jacobi_intersections, quadric_intersection_curves
from Shimura.moduli.models import derive_model
from Shimura.moduli.sextic import EXPECTED_KINDS, NODE_TAGS, incidence_summary, singular_census

suite = Suite("shimura-surface")

CENSUS_TARGET = {"classes": 22, "multiplicities": {1: 1, 5: 15, 10: 6}, "zero": 0}
SEXTIC_TARGET = {"degree": 6, "irreducible": True}


@suite.check("quadric-census", "136 = 6 * 10 + 15 * 5 + 1", expected=CENSUS_TARGET)
def quadric_census(config: SuiteConfig) -> Outcome:
    census = restrict_quadrics(eigenspace_chart(4), strict=False)
    observed = {"classes": len(census.classes), "multiplicities": census.multiplicity_profile(),
                "zero": len(census.zero_members)}
    return Outcome(observed=observed, passed=observed == CENSUS_TARGET)


@suite.check("sextic-model", "equation, of degree six", expected=SEXTIC_TARGET)
def sextic_model(config: SuiteConfig) -> Outcome:
    model = derive_model(4, config.seed, tuple(config.modular_primes))
    observed = {"degree": model.degree, "irreducible": model.irreducible}
    return Outcome(observed=observed, passed=observed == SEXTIC_TARGET, inputs=model.certificate)


@suite.check("singular-locus", "the 5 cusps and the 24 points; 18 of the 22 quadrics; 7 of the 22 quadrics",
             expected={"kinds": EXPECTED_KINDS, "rational": True, "incidence": {"cusp": 18, "node": 7}})
def singular_locus(config: SuiteConfig) -> Outcome:
    model = derive_model(4, config.seed, tuple(config.modular_primes))
    loci = singular_census(model, config.modular_primes[:2], config.scan_budget)
    summaries = [incidence_summary(locus) for locus in loci]
    passed = len(loci) >= 2
    for locus in loci:
        passed = passed and (
            locus.complete and locus.rational
            and locus.incidence_counts == {"cusp": {18: 5}, "node": {7: 24}}
            and all(tags == NODE_TAGS for tags in locus.node_tags)
            and all(missing == {"invariant": 1, "type5": 3} for missing in locus.cusp_missing_tags)
            and len(locus.through_all_cusps) == 6
        )
    return Outcome(observed=summaries, passed=passed)


@suite.check("quadric-curves", "classes of the curves are (1,2), (2,1); 4-nodal curve of bidegree (3,3)",
             expected={"type10 components": [(1, 2), (2, 1)], "intersection": 5, "type5 nodes": 4})
def quadric_curves(config: SuiteConfig) -> Outcome:
    report = quadric_intersection_curves(config.seed, tuple(config.modular_primes))
    t10, t5 = report.type10, report.type5
    observed = {
        "type10 squarefree": t10.squarefree_bidegree,
        "type10 components": sorted(t10.components),
        "factorisation": t10.factorisation_holds,
        "intersection": t10.intersection_length,
        "type5 squarefree": t5.squarefree_bidegree,
        "type5 square": t5.is_square,
        "type5 nodes": t5.nodes,
    }
    passed = (
        t10.squarefree_bidegree == (3, 3) and sorted(t10.components) == [(1, 2), (2, 1)]
        and t10.factorisation_holds and t10.intersection_length == 5
        and t5.squarefree_bidegree == (3, 3) and t5.is_square and t5.nodes == 4
    )
    return Outcome(observed=observed, passed=passed)


@suite.check("jacobi-intersections", "residual curve of degree 10; only in a finite set of points",
             expected={"residual degree": 10, "type5 dimension": 0})
def jacobi(config: SuiteConfig) -> Outcome:
    report = jacobi_intersections(config.seed, tuple(config.modular_primes))
    observed = {
        "conic inside": report.conic_in_jacobi_locus,
        "divisible": report.divisible_by_curves,
        "residual degree": report.residual_squarefree_degree,
        "residual profile": {str(k): v for k, v in report.residual_profile.items()},
        "type5 dimension": report.type5_dimension,
    }
    return Outcome(observed=observed, passed=report.passed, inputs={"type5 method": report.type5_method})
