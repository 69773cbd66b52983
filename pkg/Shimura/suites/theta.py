import numpy as np

from Shimura.helper.modal import Outcome, SuiteConfig
from Shimura.helper.report import Suite
from Shimura.theta.characteristics import Characteristic, even_characteristics, odd_characteristics, quadric_poly
from Shimura.theta.relations import (
    RIEMANN_FIRST, RIEMANN_SECOND, eqmod_circuits, flagged, quartic_identity, schottky_forms,
)
from Shimura.theta.series import (
    outer_structure, square_identity_check, theta_map, theta_second_kind, theta_with_char, thetanulls,
    vanishing_count,
)
from Shimura.theta.siegel import SiegelMatrix, block_diagonal, random_siegel, siegel_action, symplectic_form

suite = Suite("theta")

THETA3_AT_I = 1.086434811213308


def _rng(config: SuiteConfig, salt: int = 0) -> np.random.Generator:
    return np.random.default_rng(config.seed + salt)


EVEN_COUNTS = {1: 3, 2: 10, 4: 136}


@suite.check("even-count", "the 136 even theta characteristics", expected=EVEN_COUNTS)
def even_count(config: SuiteConfig) -> Outcome:
    observed = {g: len(even_characteristics(g)) for g in (1, 2, 4)}
    return Outcome(observed=observed, passed=observed == EVEN_COUNTS)


@suite.check("quadrics-distinct", "the 136 quadrics Q[eps; eps'] are pairwise distinct", expected=136)
def quadrics_distinct(config: SuiteConfig) -> Outcome:
    monic = {quadric_poly(c).monic() for c in even_characteristics(4)}
    return Outcome(observed=len(monic), passed=len(monic) == 136)


@suite.check("genus-one-value", "theta_3(0, e^-pi)", expected=THETA3_AT_I)
def genus_one_value(config: SuiteConfig) -> Outcome:
    # the tail bound is absolute, so truncate well below the threshold
    threshold = max(config.tol / 100, 1e-14)
    first = theta_second_kind((0,), SiegelMatrix([[0.5j]]), threshold / 100)
    second = theta_with_char(Characteristic((0,), (0,)), SiegelMatrix([[1j]]), threshold / 100)
    error = max(abs(first - THETA3_AT_I), abs(second - THETA3_AT_I))
    return Outcome(observed=first.real, passed=error < threshold, standard_fact=True,
                   inputs={"threshold": threshold, "error": error})


@suite.check("block-factorisation", "Theta[sigma](tau) = Theta[sigma_a](tau_a) Theta[sigma_b](tau_b)",
             expected="< 1e-8")
def block_factorisation(config: SuiteConfig) -> Outcome:
    rng = _rng(config)
    left, right = random_siegel(2, rng), random_siegel(2, rng)
    values = theta_map(block_diagonal(left, right), config.tol).values
    outer = np.outer(theta_map(left, config.tol).values, theta_map(right, config.tol).values)
    residual = float(np.max(np.abs(np.array(outer_structure(values, 2, 2)) - outer)))
    return Outcome(observed=residual, passed=residual < 1e-8)


@suite.check("square-identities", "theta[eps;eps']^2 in terms of the second order thetas", expected="< 1e-8")
def square_identities(config: SuiteConfig) -> Outcome:
    rng = _rng(config, 1)
    worst = 0.0
    for g, count in ((2, 20), (4, 5)):
        for _ in range(count):
            point = random_siegel(g, rng)
            worst = max(worst, max(square_identity_check(c, point, config.tol * 1e-2) for c in even_characteristics(g)))
    return Outcome(observed=worst, passed=worst < 1e-8, inputs={"g2": 20, "g4": 5})


@suite.check("odd-thetanulls", "odd thetanulls vanish", expected="< 1e-12")
def odd_thetanulls(config: SuiteConfig) -> Outcome:
    point = random_siegel(4, _rng(config, 2))
    worst = float(np.max(np.abs(thetanulls(point, config.tol, odd_characteristics(4)))))
    return Outcome(observed=worst, passed=worst < 1e-12)


VANISHING_COUNTS = {"B+B": 36, "E+E+B": 46, "generic": 0}


@suite.check("vanishing-counts", "36 and 36 + 1 * 10 = 46 vanishing thetanulls", expected=VANISHING_COUNTS)
def vanishing_counts(config: SuiteConfig) -> Outcome:
    rng = _rng(config, 3)
    surface = random_siegel(2, rng)
    curve = random_siegel(1, rng)
    observed = {
        "B+B": vanishing_count(block_diagonal(surface, random_siegel(2, rng)), config.tol),
        "E+E+B": vanishing_count(block_diagonal(curve, random_siegel(1, rng), surface), config.tol),
        "generic": vanishing_count(random_siegel(4, rng), config.tol),
    }
    return Outcome(observed=observed, passed=observed == VANISHING_COUNTS)


@suite.check("schottky-blocks", "J vanishes on the closure of the Jacobian locus",
             expected={"blocks": "< 1e-8", "generic": "> 1e-4"})
def schottky_blocks(config: SuiteConfig) -> Outcome:
    rng = _rng(config, 4)
    evaluate, _ = schottky_forms()
    on_blocks = [abs(evaluate(block_diagonal(random_siegel(1, rng), random_siegel(3, rng)), config.tol)) for _ in range(10)]
    generic = [abs(evaluate(random_siegel(4, rng), config.tol)) for _ in range(10)]
    observed = {"max on blocks": max(on_blocks), "min generic": min(generic)}
    passed = max(on_blocks) < 1e-8 and min(generic) > 1e-4
    return Outcome(observed=observed, passed=passed, standard_fact=True)


@suite.check("schottky-circuit", "F_J(Theta(tau)) = J(tau)", expected="< 1e-8")
def schottky_circuit_agrees(config: SuiteConfig) -> Outcome:
    rng = _rng(config, 5)
    evaluate, circuit = schottky_forms()
    worst = 0.0
    for _ in range(20):
        point = random_siegel(4, rng)
        j = evaluate(point, config.tol)
        f = circuit.evaluate(list(theta_map(point, config.tol).values))
        worst = max(worst, abs(f - j) / max(abs(j), 1.0))
    return Outcome(observed=worst, passed=worst < 1e-8)


@suite.check("degree-32-relations", "the two relations vanish on Theta(H_4)",
             expected={"on": "< 1e-6", "off": "> 0", "genus 2 identities exact": [True, True]})
def degree_32_relations(config: SuiteConfig) -> Outcome:
    rng = _rng(config, 6)
    circuits = eqmod_circuits()
    worst, off = 0.0, []
    for _ in range(20):
        values = theta_map(random_siegel(4, rng), config.tol).values
        scale = float(np.max(np.abs(values))) ** 32
        worst = max(worst, max(abs(c.evaluate(list(values))) / scale for c in circuits))
    random_point = list(rng.normal(size=16) + 1j * rng.normal(size=16))
    off = [abs(c.evaluate(random_point)) for c in circuits]
    exact = [quartic_identity(relation).is_zero() for relation in (RIEMANN_FIRST, RIEMANN_SECOND)]
    outcome = Outcome(observed={"on": worst, "off": off, "genus 2 identities exact": exact},
                      passed=worst < 1e-6 and min(off) > 1e-6 and all(exact))
    return flagged(outcome)


@suite.check("siegel-action", "the action of Sp(2g, Z) on H_g", expected=0)
def siegel_fixed_point(config: SuiteConfig) -> Outcome:
    g = 2
    image = siegel_action(symplectic_form(g) * -1, SiegelMatrix(1j * np.eye(g)))
    residual = float(np.max(np.abs(image.tau - 1j * np.eye(g))))
    return Outcome(observed=residual, passed=residual < 1e-12)
