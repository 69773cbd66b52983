from Shimura.helper.modal import Outcome, SuiteConfig
from Shimura.helper.report import Suite
from Shimura.moduli.charts import eigenspace_chart, restrict_quadrics
from Shimura.moduli.conic import conic_configuration
from Shimura.moduli.intersections import SCHOTTKY_SAMPLES, schottky_on_conic
from Shimura.moduli.models import derive_model, unit_points_on_model

suite = Suite("shimura-curve")

CENSUS_TARGET = {"zero": 1, "classes": 27, "multiplicities": {5: 27}, "ranks": {2: 12, 3: 15}}
CONIC_TARGET = {"degree": 2, "smooth": True, "unit points on conic": True}


@suite.check("conic-census", "restrict to 27 conics; 12 of the conics are reducible", expected=CENSUS_TARGET)
def conic_census(config: SuiteConfig) -> Outcome:
    census = restrict_quadrics(eigenspace_chart(2), strict=False)
    observed = {
        "zero": len(census.zero_members),
        "classes": len(census.classes),
        "multiplicities": census.multiplicity_profile(),
        "ranks": census.rank_profile(),
    }
    return Outcome(observed=observed, passed=observed == CENSUS_TARGET)


@suite.check("conic-model", "it is a (smooth) conic", expected=CONIC_TARGET)
def conic_model(config: SuiteConfig) -> Outcome:
    model = derive_model(2, config.seed, tuple(config.modular_primes))
    unit_points = unit_points_on_model(model)
    observed = {"degree": model.degree, "smooth": model.irreducible, "unit points on conic": all(unit_points)}
    return Outcome(observed=observed, passed=observed == CONIC_TARGET, inputs=model.certificate)


@suite.check("twelve-points", "in only 12 distinct points",
             expected={"distinct": 12, "rank2": [1, 3], "rank3": [1, 1, 1, 1]})
def twelve_points(config: SuiteConfig) -> Outcome:
    conf = conic_configuration(config.seed)
    observed = {
        "distinct": conf.distinct_points,
        "rank2 profiles": sorted({tuple(p) for p in conf.rank2_profiles}),
        "rank3 profiles": sorted({tuple(p) for p in conf.rank3_profiles}),
        "matching": conf.pairing_is_matching,
    }
    passed = (
        conf.distinct_points == 12
        and all(sorted(p) == [1, 3] for p in conf.rank2_profiles)
        and all(sorted(p) == [1, 1, 1, 1] for p in conf.rank3_profiles)
        and conf.pairing_is_matching
    )
    return Outcome(observed=observed, passed=passed, inputs={"prime": conf.prime})


@suite.check("pairs-of-pairs", "lies in fact on 5 irreducible conics",
             expected={"coverage": [5], "pairs": 6, "pairs of pairs": 15})
def pairs_of_pairs(config: SuiteConfig) -> Outcome:
    conf = conic_configuration(config.seed)
    coverage = sorted(set(conf.pair_coverage.values()))
    passed = conf.rank3_pair_splits and coverage == [5] and len(conf.pair_coverage) == 6 and conf.pairs_of_pairs == 15
    observed = {"coverage": coverage, "pairs": len(conf.pair_coverage), "pairs of pairs": conf.pairs_of_pairs}
    return Outcome(observed=observed, passed=passed)


@suite.check("twelve-point-vanishing", "36 thetanulls vanish at the special points",
             expected={"total": 36, "split": [1, 5, 5, 25]})
def twelve_point_vanishing(config: SuiteConfig) -> Outcome:
    conf = conic_configuration(config.seed)
    totals = sorted(set(conf.vanishing.values()))
    splits = sorted({tuple(sorted(s)) for s in conf.vanishing_split.values()})
    passed = totals == [36] and splits == [(1, 5, 5, 25)]
    return Outcome(observed={"totals": totals, "splits": splits}, passed=passed)


@suite.check("moebius", "{0, inf} and {zeta^k, alpha zeta^k}, alpha = zeta^3 + zeta^2 - 1",
             expected={"found": True, "pairs preserved": True, "same at every embedding": True})
def moebius(config: SuiteConfig) -> Outcome:
    conf = conic_configuration(config.seed)
    observed = {
        "found": conf.mobius_found,
        "pairs preserved": conf.mobius_preserves_pairs,
        "same at every embedding": conf.mobius_consistent,
    }
    return Outcome(observed=observed, passed=all(observed.values()),
                   inputs={"prime": conf.prime, "embeddings": conf.mobius_embeddings,
                           "assignments": conf.mobius_assignments})


@suite.check("jacobi-locus", "lies inside the closure of the moduli space of curves", expected=SCHOTTKY_SAMPLES)
def jacobi_locus(config: SuiteConfig) -> Outcome:
    values = schottky_on_conic(config.seed)
    return Outcome(expected=len(values), observed=sum(values), passed=all(values))
