from Shimura.arithmetic.hilbert import (
    H_TABLE, J_H, J_H_CHI4, conjugate_match, conjugate_pattern, hilbert_trace_match, target_for,
)
from Shimura.helper.modal import Outcome, SuiteConfig
from Shimura.helper.report import Suite

suite = Suite("hilbert")

ALIGNMENT_FLAG = "eigenvalues above a split prime are matched up to swapping the two conjugate primes"


def _as_lists(table: dict) -> dict:
    return {str(norm): list(values) for norm, values in sorted(table.items())}


@suite.check("hilbert-h", "2^7(25 - 11 sqrt 5)/5: 0, 0, -2, 4, -4, 4, 4, -6, 10, 8, 0, 10, -6, 6, -4, 12",
             expected=_as_lists(target_for(H_TABLE, False)))
def hilbert_h(config: SuiteConfig) -> Outcome:
    match = hilbert_trace_match(J_H, bound=config.twist_bound)
    outcome = Outcome(
        expected=_as_lists(match.target), observed=_as_lists(match.computed), passed=match.passed,
        inputs={"twist": str(match.twist), "compared": match.compared, "skipped norms": match.skipped,
                "alignment": {str(k): v for k, v in match.alignment.items()}},
    )
    outcome.flags.append(ALIGNMENT_FLAG)
    return outcome


@suite.check("hilbert-h-chi4", "8(8903 + 3333 sqrt 5)/5 against h (x) chi_4",
             expected=_as_lists(target_for(H_TABLE, True)))
def hilbert_h_chi4(config: SuiteConfig) -> Outcome:
    match = hilbert_trace_match(J_H_CHI4, twisted_by_chi4=True, bound=config.twist_bound)
    outcome = Outcome(expected=_as_lists(match.target), observed=_as_lists(match.computed), passed=match.passed,
                      inputs={"twist": str(match.twist)})
    outcome.flags.append(ALIGNMENT_FLAG)
    return outcome


@suite.check("galois-conjugate", "pair of Galois-conjugate",
             expected="conjugate eigenvalues after swapping split primes")
def galois_conjugate(config: SuiteConfig) -> Outcome:
    match = hilbert_trace_match(J_H, bound=config.twist_bound)
    if match.twist is None:
        return Outcome(observed=None, passed=False)
    expected = conjugate_pattern(match)
    observed = conjugate_match(J_H, match.twist)
    return Outcome(expected=_as_lists(expected), observed=_as_lists(observed), passed=observed == expected)
