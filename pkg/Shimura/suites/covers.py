from Shimura.helper.exceptions import UnsupportedCaseError
from Shimura.helper.modal import Outcome, SuiteConfig
from Shimura.helper.report import Suite
from Shimura.moduli.covers import (
    FAMILIES, SuperellipticCurve, classify_genus4_quintics, deformation_dim, degeneration_report, eigenvalues, genus,
    limit_cover,
)

suite = Suite("covers")

QUINTIC_HYPERELLIPTIC = SuperellipticCurve(2, tuple((str(i), 1) for i in range(5)), "v^2 = quintic")
GENUS_TARGET = {"C": 4, "t^5=r(r-1)": 2, "v^2=quintic": 2}
EIGEN_TARGET = {
    "C": [1, 1, 2, 3], "C' support": [1, 2, 3, 4], "(5,1,1)": [1, 2], "(5,2,1)": [1, 3], "(5,3,1)": [1, 2],
}
DEGENERATION_TARGET = {"C@0": [2, 3], "C@1": [2, 3], "C@inf": [2, 3], "C'@0": [4], "C''@0": [4]}
DEFORMATION_TARGET = {1: 0, 2: 1, 3: 1, 4: 2}


@suite.check("genus", "family of genus 4 curves; E~ has genus (n-1)/2", expected=GENUS_TARGET)
def genera(config: SuiteConfig) -> Outcome:
    observed = {
        "C": genus(FAMILIES["C"]),
        "t^5=r(r-1)": genus(limit_cover(5, 1, 1)),
        "v^2=quintic": genus(QUINTIC_HYPERELLIPTIC),
    }
    return Outcome(observed=observed, passed=observed == GENUS_TARGET)


@suite.check("eigenforms", "zeta, zeta, zeta^2, zeta^3; eigenvalues (zeta, zeta^2, zeta^3, zeta^4)",
             expected=EIGEN_TARGET)
def eigenforms(config: SuiteConfig) -> Outcome:
    observed = {
        "C": eigenvalues(FAMILIES["C"]),
        "C' support": sorted(set(eigenvalues(FAMILIES["C'"]))),
        "(5,1,1)": eigenvalues(limit_cover(5, 1, 1)),
        "(5,2,1)": eigenvalues(limit_cover(5, 2, 1)),
        "(5,3,1)": eigenvalues(limit_cover(5, 3, 1)),
    }
    return Outcome(observed=observed, passed=observed == EIGEN_TARGET)


@suite.check("limit-hypothesis", "(a,n) = (b,n) = (a+b,n) = 1", expected="UnsupportedCaseError")
def limit_hypothesis(config: SuiteConfig) -> Outcome:
    try:
        limit_cover(5, 2, 3)
    except UnsupportedCaseError as err:
        return Outcome(observed=type(err).__name__, passed=True)
    return Outcome(observed="accepted", passed=False)


@suite.check("degenerations", "with automorphism phi_2 (or phi_3); degenerates as B0 x B0 with automorphism phi_4",
             expected=DEGENERATION_TARGET)
def degenerations(config: SuiteConfig) -> Outcome:
    observed, genus_ok = {}, True
    for key in DEGENERATION_TARGET:
        family, point = key.split("@")
        report = degeneration_report(family, point)
        observed[key] = report.automorphism_types
        genus_ok = genus_ok and report.genus_adds_up
    return Outcome(observed=observed, passed=genus_ok and observed == DEGENERATION_TARGET)


@suite.check("deformation-dims", "n_k is the number of 1's in the set of 10 products", expected=DEFORMATION_TARGET)
def deformation_dims(config: SuiteConfig) -> Outcome:
    observed = {k: deformation_dim(k) for k in range(1, 5)}
    return Outcome(observed=observed, passed=observed == DEFORMATION_TARGET)


@suite.check("quintic-classes", "three families up to isomorphisms; rank three quadric X2^2 = X0 X3",
             expected={"classes": 3, "canonical quadric rank": 3})
def quintic_classes(config: SuiteConfig) -> Outcome:
    report = classify_genus4_quintics()
    observed = {
        "classes": len(report.classes),
        "families": sorted(report.family_of_class.values()),
        "involution (1/u, v/u^2)": report.corrected_involution,
        "involution as printed": report.printed_involution,
        "canonical quadric rank": report.canonical_quadric_rank,
    }
    outcome = Outcome(observed=observed, passed=report.passed)
    if not report.printed_involution:
        outcome.flags.append("hyperelliptic involution holds as (1/u, v/u^2), not (1/u, v/u^5)")
    return outcome
