from fractions import Fraction

import sympy as sp

from Shimura.algebra.quadint import QuadInt
from Shimura.arithmetic.counting import trace_of_frobenius, trace_table, weil_bound_holds
from Shimura.arithmetic.modular import F20, G40, check_listed, covers_table_match, modular_match
from Shimura.arithmetic.weierstrass import (
    E, E_PRIME, E_TORSION_POINT, J_E, J_E_PRIME, WeierstrassCurve, invariants, legendre_j, point_order,
    quadratic_twist, velu_chain, velu_isogeny,
)
from Shimura.helper.modal import Outcome, SuiteConfig
from Shimura.helper.report import Suite

suite = Suite("elliptic")

GOLDEN_RATIO_ROOT = QuadInt.from_sqrt5(Fraction(-3, 2), Fraction(-1, 2))
INVARIANTS_TARGET = {"c4": 64, "c6": -352, "disc": 80, "j": str(J_E), "j'": str(J_E_PRIME), "j(y^2=x^3+1)": "0"}
TORSION_TARGET = {"(-1,1)": 6, "(0,0)": 2, "2(-1,1)": 3}
LEGENDRE_TARGET = {"alpha": str(J_E), "-1": "1728", "zeta6": "0"}


@suite.check("invariants", "j-invariant of this elliptic curve is 16384/5; j' = -2^4 109^3 / 5^6",
             expected=INVARIANTS_TARGET)
def curve_invariants(config: SuiteConfig) -> Outcome:
    inv = invariants(E)
    observed = {
        "c4": int(inv.c4), "c6": int(inv.c6), "disc": int(inv.discriminant), "j": str(inv.j),
        "j'": str(E_PRIME.j), "j(y^2=x^3+1)": str(WeierstrassCurve.short(0, 1).j),
    }
    return Outcome(observed=observed, passed=observed == INVARIANTS_TARGET)


@suite.check("newform-f", "q - 2q^3 - q^5 + 2q^7 + q^9 + ...", expected="a_p(E) = a_p(f)")
def newform_f(config: SuiteConfig) -> Outcome:
    check_listed(F20)
    check_listed(G40)
    primes = [p for p in sp.primerange(3, F20.precision)]
    matches = modular_match(E, F20, primes)
    bad = {p: pair for p, pair in matches.items() if pair[0] != pair[1]}
    return Outcome(expected={p: F20.coefficient(p) for p in primes},
                   observed={p: pair[0] for p, pair in matches.items()}, passed=not bad,
                   inputs={"a21": F20.coefficient(21), "a9": F20.coefficient(9)})


@suite.check("weil-bound", "|a_p| <= 2 sqrt(p)", expected={"isogenous traces differ at": []})
def weil_bound(config: SuiteConfig) -> Outcome:
    primes = [p for p in sp.primerange(3, 200)]
    table_e = trace_table(E, primes)
    table_ep = trace_table(E_PRIME, primes)
    differ = [p for p in primes if p != 5 and table_e[p][0] != table_ep[p][0]]
    passed = weil_bound_holds(table_e) and weil_bound_holds(table_ep) and not differ
    return Outcome(observed={"isogenous traces differ at": differ}, passed=passed)


@suite.check("torsion", "rational point (-1, 1) of order 6", expected=TORSION_TARGET)
def torsion(config: SuiteConfig) -> Outcome:
    doubled = E.multiply(2, E_TORSION_POINT)
    observed = {
        "(-1,1)": point_order(E, E_TORSION_POINT),
        "(0,0)": point_order(E, (Fraction(0), Fraction(0))),
        "2(-1,1)": point_order(E, doubled),
    }
    return Outcome(observed=observed, passed=observed == TORSION_TARGET)


@suite.check("quadratic-twist", "f (x) chi_4", expected="a_p(E^(-1)) = -a_p(E) at p = 3 mod 4")
def twist_by_minus_one(config: SuiteConfig) -> Outcome:
    twisted = quadratic_twist(E, -1)
    primes = (7, 19, 23)
    observed = {p: (trace_of_frobenius(E, p), trace_of_frobenius(twisted, p)) for p in primes}
    back = quadratic_twist(twisted, -1)
    involution = all(trace_of_frobenius(back, p) == trace_of_frobenius(E, p) for p in (7, 11, 13, 17, 19))
    passed = involution and all(t == -a for a, t in observed.values())
    return Outcome(observed=observed, passed=passed)


@suite.check("velu-six-isogeny", "The corresponding 6-isogeny leads to the minimal model of E'",
             expected=str(J_E_PRIME))
def six_isogeny(config: SuiteConfig) -> Outcome:
    chains = {steps: velu_chain(E, E_TORSION_POINT, steps) for steps in ((2, 3), (3, 2))}
    js = {"x".join(map(str, steps)): str(chain[-1].codomain.j) for steps, chain in chains.items()}
    direct = velu_isogeny(E, E_TORSION_POINT)
    passed = all(j == str(J_E_PRIME) for j in js.values()) and direct.codomain.j == J_E_PRIME
    return Outcome(observed={**js, "direct": str(direct.codomain.j)}, passed=passed)


@suite.check("velu-two-isogeny", "2-isogeny with kernel <(0, 0)>", expected="equal traces")
def two_isogeny(config: SuiteConfig) -> Outcome:
    image = velu_isogeny(E, (Fraction(0), Fraction(0))).codomain
    observed = {p: (trace_of_frobenius(E, p), trace_of_frobenius(image, p)) for p in (3, 7, 13)}
    return Outcome(observed=observed, passed=all(a == b for a, b in observed.values()))


@suite.check("legendre", "double cover of P^1 branched over the four points 0, 1, inf, alpha",
             expected=LEGENDRE_TARGET)
def legendre(config: SuiteConfig) -> Outcome:
    zeta6 = (1 + sp.sqrt(-3)) / 2
    observed = {
        "alpha": str(legendre_j(GOLDEN_RATIO_ROOT)),
        "-1": str(legendre_j(Fraction(-1))),
        "zeta6": str(sp.simplify(legendre_j(zeta6))),
    }
    return Outcome(observed=observed, passed=observed == LEGENDRE_TARGET)


@suite.check("cover-table-twists", "the rational j-invariants of the cover table", expected="a twist for every row")
def cover_table(config: SuiteConfig) -> Outcome:
    matches = covers_table_match()
    observed = {m.j: {"form": m.form, "twist": m.twist} for m in matches}
    return Outcome(observed=observed, passed=all(m.passed for m in matches))
