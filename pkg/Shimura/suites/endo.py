from Shimura.algebra.cyclo import DELTA, ETA
from Shimura.arithmetic.endomorphisms import (
    displayed_norm_discrepancy, hermitian_signature, isotropy_search, psi_diagram_check, quat_arith_check,
    quaternion_algebra, quaternion_basis_check, rosati_integrality,
)
from Shimura.helper.modal import Outcome, SuiteConfig
from Shimura.helper.report import Suite

suite = Suite("endo")

# T = diag(d1, d2) with the signature pattern of the Shimura curve
CURVE_FORM = (-DELTA, -(DELTA * ETA))
DISPLAYED_NORM_TARGET = {"1": True, "i": True, "j": True, "k": False}
SIGNATURE_TARGET = {
    "diag(delta, delta)": [[0, 2], [0, 2]],
    "diag(delta, -delta)": [[1, 1], [1, 1]],
    "curve form": [[2, 0], [1, 1]],
}


def _matrix(rows) -> list:
    return [[str(x) for x in row] for row in rows]


@suite.check("commuting-square", "Psi = (1 delta; 1 -delta); note that delta^2 = -3 - eta",
             expected=[["0", "0"], ["0", "0"]])
def commuting_square(config: SuiteConfig) -> Outcome:
    square = psi_diagram_check()
    return Outcome(observed=_matrix(square.residual), passed=square.holds)


@suite.check("rosati", "tPsi-bar Psi lies in M_2(Z[eta])", expected="an integral product")
def rosati(config: SuiteConfig) -> Outcome:
    check = rosati_integrality()
    return Outcome(expected=_matrix(check.expected), observed=_matrix(check.product), passed=check.holds,
                   inputs={"integral": check.integral})


@suite.check("quaternion-arithmetic", "N(alpha) := alpha alpha-bar = det(A)",
             expected="multiplicative norm, anti-involution, homomorphism, N = det")
def quaternion_arithmetic(config: SuiteConfig) -> Outcome:
    check = quat_arith_check(seed=config.seed)
    observed = check._asdict()
    a, b = quaternion_algebra(DELTA, DELTA * ETA)
    return Outcome(observed=observed, passed=check.holds, inputs={"a": str(a), "b": str(b), "seed": config.seed})


@suite.check("displayed-norm", "a0^2 - delta^2 a1^2 + delta delta' a2^2 + delta^3 delta' a3^2",
             expected=DISPLAYED_NORM_TARGET)
def displayed_norm(config: SuiteConfig) -> Outcome:
    agrees = displayed_norm_discrepancy(DELTA, DELTA * ETA)
    outcome = Outcome(observed=agrees, passed=agrees == DISPLAYED_NORM_TARGET,
                      inputs={"delta": "d1", "delta'": "d2"})
    if not agrees["k"]:
        outcome.flags.append("the a3^2 term of the printed norm form has the wrong sign: N(k) = -d1^3 d2")
    return outcome


@suite.check("quaternion-basis", "i = diag(delta1, -delta1), j = (0 delta2; -delta1 0)",
             expected={key: True for key in "1ijk"})
def quaternion_basis(config: SuiteConfig) -> Outcome:
    check = quaternion_basis_check()
    outcome = Outcome(observed=check.corrected, passed=check.holds,
                      inputs={"printed j": check.displayed, "adjoint": check.adjoint})
    if not all(check.displayed.values()):
        outcome.flags.append("A U = U A-bar needs j = (0 d2; d1 0) for purely imaginary d1, d2")
    return outcome


@suite.check("isotropy", "isomorphic to the matrix algebra M_2(K0)",
             expected={"(1,-1)": "isotropic", "(4,-4)": "isotropic"})
def isotropy(config: SuiteConfig) -> Outcome:
    a, b = quaternion_algebra(DELTA, DELTA * ETA)
    results = {
        "(1,-1)": isotropy_search(1, -1),
        "(4,-4)": isotropy_search(4, -4),
        "(d1^2,-d1 d2)": isotropy_search(a, b, bound=2),
    }
    observed = {key: result.verdict for key, result in results.items()}
    passed = results["(1,-1)"].found and results["(4,-4)"].found
    return Outcome(observed=observed, passed=passed,
                   inputs={"witnesses": {k: [str(c) for c in r.witness.coords] for k, r in results.items() if r.found}})


@suite.check("hermitian-signature", "SU(2,0) x SU(1,1)", expected=SIGNATURE_TARGET)
def signatures(config: SuiteConfig) -> Outcome:
    observed = {
        "diag(delta, delta)": hermitian_signature(DELTA, DELTA),
        "diag(delta, -delta)": hermitian_signature(DELTA, -DELTA),
        "curve form": hermitian_signature(*CURVE_FORM),
    }
    observed = {key: [list(pair) for pair in value] for key, value in observed.items()}
    outcome = Outcome(observed=observed, passed=observed == SIGNATURE_TARGET,
                      inputs={"curve form": "T = diag(-delta, -delta eta)"})
    outcome.flags.append("the polarization is not given; signatures are computed on representative diagonal forms")
    return outcome
