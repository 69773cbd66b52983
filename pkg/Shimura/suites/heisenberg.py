import numpy as np

from Shimura.algebra.cyclo import I, ZERO, ZETA5, CycloElement
from Shimura.algebra.domains import CYCLO
from Shimura.algebra.linalg import ExactMatrix
from Shimura.helper.modal import Outcome, SuiteConfig
from Shimura.helper.report import Suite
from Shimura.theta.characteristics import even_characteristics, quadric_terms
from Shimura.theta.heisenberg import (
    SympVec, build_order5, commutator_scalar, eigen_pairs, identity, kron_matrix, lift_reduction_matches,
    matrix_power, nonzero_vectors, order_mod2, pairing, scaled, schrodinger_U, symplectic_lift_Z, tensor_eigenspace,
    theta_lift, trace, transvection_sp, word_image, equivariance_check,
)
from Shimura.theta.siegel import SiegelMatrix, is_symplectic, random_siegel

suite = Suite("heisenberg")

ORDER_FIVE_TARGET = {
    "five cycle": True, "M^5 scalar": True, "trace -1": True,
    "independent": True, "eigenvectors": True, "off quadrics": True,
}


@suite.check("transvections", "t_v(w) = w + E(w, v) v", expected=15)
def transvections(config: SuiteConfig) -> Outcome:
    vectors = nonzero_vectors(2)
    involutions = all(order_mod2(transvection_sp(v)) == 2 for v in vectors)
    return Outcome(observed=len(vectors) if involutions else 0, passed=involutions and len(vectors) == 15)


@suite.check("heisenberg-relations", "U_v^2 = -I and U_v U_w = (-1)^E(v,w) U_w U_v", expected=[])
def heisenberg_relations(config: SuiteConfig) -> Outcome:
    bad = []
    for g, pairs in ((2, None), (4, 200)):
        vectors = nonzero_vectors(g)
        if pairs is None:
            todo = [(v, w) for v in vectors for w in vectors]
        else:
            rng = np.random.default_rng(config.seed)
            todo = [(vectors[i], vectors[j]) for i, j in rng.integers(0, len(vectors), (pairs, 2))]
        for v, w in todo:
            expected = -1 if pairing(v, w) else 1
            if commutator_scalar(v, w) != CycloElement.from_int(expected):
                bad.append((v.label(), w.label()))
        for v in vectors[:15]:
            u = schrodinger_U(v)
            if u * u != scaled(identity(2 ** g), CycloElement.from_int(-1)):
                bad.append((v.label(), "square"))
    return Outcome(observed=bad, passed=not bad, inputs={"g2": 225, "g4": 200})


@suite.check("theta-lift", "M_Theta = (1 - i)/2 (U_v + I), M_Theta^4 = I", expected=[])
def theta_lift_powers(config: SuiteConfig) -> Outcome:
    bad = []
    for v in nonzero_vectors(2):
        m = theta_lift(v)
        if m * m != scaled(schrodinger_U(v), -I):
            bad.append((v.label(), "square"))
        if matrix_power(m, 4) != identity(4):
            bad.append((v.label(), "fourth power"))
    return Outcome(observed=bad, passed=not bad)


@suite.check("integral-lift", "an M in Sp(2g, Z) mapping to t_v", expected=[])
def integral_lift(config: SuiteConfig) -> Outcome:
    vectors = nonzero_vectors(2)
    bad = [v.label() for v in vectors if not (lift_reduction_matches(v) and is_symplectic(symplectic_lift_Z(v)))]
    return Outcome(observed=bad, passed=not bad)


@suite.check("equivariance", "Theta(M tau) = M_Theta Theta(tau) up to Heisenberg conjugation",
             expected="one twist per v")
def equivariance(config: SuiteConfig) -> Outcome:
    rng = np.random.default_rng(config.seed)
    points = [SiegelMatrix.diagonal(1j, 2j)] + [random_siegel(2, rng) for _ in range(3)]
    twists, worst = {}, 0.0
    for v in nonzero_vectors(2):
        found = {equivariance_check(v, point, config.tol) for point in points}
        worst = max(worst, max(f.residual for f in found))
        twists[v.label()] = sorted({f.w.label() for f in found})
    stable = all(len(w) == 1 for w in twists.values())
    return Outcome(observed={"twists": twists, "worst": worst}, passed=stable)


def _fixed_points_off_quadrics(eigenvectors) -> bool:
    for vec in eigenvectors.values():
        for c in even_characteristics(2):
            value = ZERO
            for sign, i, j in quadric_terms(c):
                value = value + sign * vec[i] * vec[j]
            if not value:
                return False
    return True


@suite.check("order-five", "an element of PGL(4) of order five with eigenvalues zeta, ..., zeta^4",
             expected=ORDER_FIVE_TARGET)
def order_five(config: SuiteConfig) -> Outcome:
    data = build_order5()
    five_cycle = order_mod2(word_image(data.word)) == 5
    scalar = matrix_power(data.matrix, 5) == scaled(identity(4), data.c)
    trace_ok = trace(data.L) == CycloElement.from_int(-1)
    columns = [data.eigenvectors[j] for j in range(1, 5)]
    independent = bool(ExactMatrix(columns, CYCLO).det())
    eigen_ok = all(
        data.L.apply(vec) == [ZETA5 ** j * x for x in vec] for j, vec in data.eigenvectors.items()
    )
    off_quadrics = _fixed_points_off_quadrics(data.eigenvectors)
    observed = {
        "five cycle": five_cycle, "M^5 scalar": scalar, "trace -1": trace_ok,
        "independent": independent, "eigenvectors": eigen_ok, "off quadrics": off_quadrics,
    }
    return Outcome(observed=observed, passed=all(observed.values()), inputs=data.golden())


@suite.check("tensor-eigenspaces", "the eigenspace of L x L^k with eigenvalue zeta^(1+k)", expected={2: 3, 4: 4})
def tensor_eigenspaces(config: SuiteConfig) -> Outcome:
    data = build_order5()
    observed, passed = {}, True
    for k, dim in ((2, 3), (4, 4)):
        chart = tensor_eigenspace(k)
        operator = kron_matrix(data.L, matrix_power(data.L, k))
        eigenvalue = ZETA5 ** (1 + k)
        holds = all(operator.apply(list(col)) == [eigenvalue * x for x in col] for col in chart.columns)
        observed[k] = {"dim": chart.dim, "pairs": [list(p) for p in eigen_pairs(k)], "eigen": holds}
        passed = passed and holds and chart.dim == dim
    return Outcome(observed=observed, passed=passed)
