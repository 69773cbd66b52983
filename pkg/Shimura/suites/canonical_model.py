from Shimura.helper.modal import Outcome, SuiteConfig
from Shimura.helper.report import Suite
from Shimura.moduli.canonical import alternating_cubic_check, canonical_map_check, s5_model_checks

suite = Suite("canonical-model")

CANONICAL_TARGET = {"cusp quadrics": 5, "stabiliser character": "sign", "orbit": 6, "sampled": ">= 200", "nodes": 24}


@suite.check("s5-sextic", "s1 = 0, s2^3 + 10 s3^2 - 20 s2 s4 = 0; tangent cone xyz = 0 at p0",
             expected={"cusp rank": 0, "node rank": 3, "orbits": [5, 24]})
def s5_sextic(config: SuiteConfig) -> Outcome:
    report = s5_model_checks()
    return Outcome(observed=report._asdict(), passed=report.passed)


@suite.check("alternating-cubic", "(1 2) -> (1 4)(2 3)(5 6); the alternating cubic",
             expected={"transposition": -1, "five cycle": 1})
def alternating_cubic(config: SuiteConfig) -> Outcome:
    report = alternating_cubic_check()
    return Outcome(observed=report._asdict(), passed=report.passed)


@suite.check("canonical-map", "quadrics vanishing in the cusps has dimension 5; only 24 singular points",
             expected=CANONICAL_TARGET)
def canonical_map(config: SuiteConfig) -> Outcome:
    report = canonical_map_check(budget=config.scan_budget)
    observed = {
        "cusp quadrics": report.cusp_quadric_dim,
        "stabiliser character": report.character,
        "invariant": report.invariant_dim,
        "orbit": report.orbit_size,
        "sum vanishes": report.sum_vanishes,
        "relabeling": list(report.relabeling) if report.relabeling else None,
        "convention": report.convention,
        "sampled": report.sampled,
        "cubics vanish": report.invariant_cubic_vanishes and report.alternating_cubic_vanishes,
        "nodes": report.model_nodes,
    }
    return Outcome(observed=observed, passed=report.passed,
                   inputs={"prime": report.prime, "node prime": report.node_prime})
