from Shimura.arithmetic.counting import trace_of_frobenius
from Shimura.arithmetic.weierstrass import E
from Shimura.helper.modal import Outcome, SuiteConfig
from Shimura.helper.report import Suite
from Shimura.surfaces.fibration import is_good_prime, transcendental_match
from Shimura.surfaces.library import model_library
from Shimura.surfaces.zeta import (
    ZETA_FACTORS, count_check, factor_degrees, field_overlap, hodge_bookkeeping, ns_trace, picard_number_mod_p,
    predicted_count, predicted_count_power, reductio_table, shimura_ns_module, zeta_assemble,
)

suite = Suite("zeta")

TRACE_READING = "the table column is alpha + conj(alpha) on a rank two piece, not p + alpha + conj(alpha)"
NS_TRACES = {3: 10, 11: 46, 19: 22}
REDUCTIO_AT_3 = [[5, -2, -2], [0, 1, -35], [-5, 4, -5]]
SUPERSINGULAR_TARGET = {"a_11": 0, "rho(11)": 61, "rho(7)": 51}


def _rows(rows) -> list:
    return [list(row) for row in rows]


@suite.check("ns-trace", "NS = Q^10 + Q(sqrt5)^6 + Q(zeta5)^6", expected=NS_TRACES)
def ns_traces(config: SuiteConfig) -> Outcome:
    module = shimura_ns_module()
    observed = {p: ns_trace(module, p) for p in (3, 11, 19)}
    return Outcome(observed=observed, passed=observed == NS_TRACES, inputs={"rank": module.rank})


@suite.check("reductio-table", "h, trace Frob_p*|V, alpha at p = 3, 7, 13", expected={3: REDUCTIO_AT_3})
def reductio(config: SuiteConfig) -> Outcome:
    counts = {3: predicted_count(3)}
    for p in (7, 13):
        counts[p] = count_check(p, config.scan_budget).counted
    tables = {p: reductio_table(p, count) for p, count in counts.items()}
    observed = {p: _rows(rows) for p, rows in tables.items()}
    outcome = Outcome(observed=observed, passed=observed[3] == REDUCTIO_AT_3,
                      inputs={"counts": counts, "count at 3": "predicted"})
    outcome.flags.append(TRACE_READING)
    return outcome


@suite.check("field-overlap", "no overlap between the possible fields", expected=[])
def overlap(config: SuiteConfig) -> Outcome:
    tables = {p: reductio_table(p, count_check(p, config.scan_budget).counted) for p in (7, 13)}
    common = sorted(field_overlap(tables))
    outcome = Outcome(observed=common, passed=not common,
                      inputs={str(p): sorted({row.field for row in rows}) for p, rows in tables.items()})
    outcome.flags.append(TRACE_READING)
    return outcome


@suite.check("zeta-counts", "#S~(F_p) = 1 + p tr_NS + 5(a_p^2 - p) + p^2",
             expected="a_p(E)^2 - p per copy")
def zeta_counts(config: SuiteConfig) -> Outcome:
    result = zeta_assemble(config.primes, config.scan_budget)
    module = shimura_ns_module()
    per_copy = {
        p: (count - 1 - p * p - p * ns_trace(module, p)) // 5
        for p, count in result.counts.items()
    }
    expected = {p: trace_of_frobenius(E, p) ** 2 - p for p in per_copy}
    return Outcome(expected=expected, observed=per_copy, passed=not result.mismatches and per_copy == expected,
                   inputs={"counts": result.counts, "predicted": result.predicted, "degrees": result.degrees})


@suite.check("fibration-trace", "the same trace from the elliptic fibration on X'",
             expected="trace of Sym^2 from the fibration")
def fibration_trace(config: SuiteConfig) -> Outcome:
    xprime = model_library()["Xprime"].equation
    primes = sorted(p for p in {7, 13} | set(config.primes) if is_good_prime(xprime, p))
    matches = {p: transcendental_match(xprime, p) for p in primes}
    observed = {p: m["residual"] for p, m in matches.items()}
    expected = {p: m["sym2"] for p, m in matches.items()}
    return Outcome(expected=expected, observed=observed, passed=observed == expected)


@suite.check("zeta-degrees", "zeta(s) zeta(s-1)^10 ... L(Sym^2 H^1(E), s)^5 zeta(s-2)",
             expected={"degrees": 63, "b2": 61, "h11": 51, "noether": True})
def zeta_degrees(config: SuiteConfig) -> Outcome:
    total = factor_degrees()
    hodge = hodge_bookkeeping()
    observed = {"degrees": total, "b2": hodge.b2, "h11": hodge.h11, "noether": hodge.noether}
    expected = {"degrees": hodge.euler, "b2": 61, "h11": 51, "noether": True}
    return Outcome(expected=expected, observed=observed, passed=observed == expected,
                   inputs={f.name: f.degree for f in ZETA_FACTORS})


@suite.check("supersingular", "E attains supersingular reduction at 11; rho = 61", expected=SUPERSINGULAR_TARGET)
def supersingular(config: SuiteConfig) -> Outcome:
    observed = {"a_11": trace_of_frobenius(E, 11), "rho(11)": picard_number_mod_p(11), "rho(7)": picard_number_mod_p(7)}
    outcome = Outcome(observed=observed, passed=observed == SUPERSINGULAR_TARGET,
                      inputs={"predicted over F_p^2": {p: predicted_count_power(p, 2) for p in (7, 13)}})
    outcome.flags.append("counts over F_p^2 are predicted, not enumerated")
    return outcome
