"""
Curves cut on the Shimura sextic by the restricted quadrics, and the Jacobi
locus F_J = 0 on the Shimura curve and surface.

Everything on the surface is done modulo p = 1 mod 20. A smooth split quadric
is ruled by P^1 x P^1 from a skew quadrilateral P, U, V, W on it:

    (s, t) -> s0 t0 P + s1 t0 U + s0 t1 W + c s1 t1 V,   c = -B(U, W) / B(P, V)

so forms on P^3 pull back to bihomogeneous forms in (s0, s1; t0, t1).
"""

import random
from collections import Counter
from functools import lru_cache
from typing import Dict, List, NamedTuple, Optional, Sequence, Tuple

import numpy as np

from Shimura.algebra.cyclo import phi20_roots
from Shimura.algebra.domains import CYCLO, GF
from Shimura.algebra.finite import legendre
from Shimura.algebra.groebner import groebner_fp
from Shimura.algebra.linalg import ExactMatrix, kernel_mod_p, rank_mod_p
from Shimura.algebra.multipoly import MultiPoly, multivariate_gcd
from Shimura.algebra.projective import normalize_point, scan_projective
from Shimura.algebra.upoly import binary_to_univariate, roots_mod_p
from Shimura.config import Verify
from Shimura.helper.exceptions import (
    DomainError, NotDivisibleError, ProfileMismatchError, ResourceBudgetError, UnsupportedCaseError,
)
from Shimura.logger import LOGGER
from Shimura.moduli.charts import QuadricClass, eigenspace_chart, restrict_quadrics
from Shimura.moduli.conic import parametrize_conic
from Shimura.moduli.models import derive_model
from Shimura.moduli.sextic import quadratic_form_matrix, tangent_cone
from Shimura.theta.relations import schottky_circuit

Bidegree = Tuple[int, int]


# ---------------- P^1 x P^1 ----------------
def bidegree(form: MultiPoly) -> Optional[Bidegree]:
    if form.is_zero():
        return None
    exps = next(iter(form.terms))
    return exps[0] + exps[1], exps[2] + exps[3]


def p1_points(p: int) -> List[Tuple[int, int]]:
    return [(x, 1) for x in range(p)] + [(1, 0)]


def binary_roots(form: MultiPoly, p: int) -> Counter:
    """Roots in P^1(F_p) of a binary form over F_p, as pairs (x0, x1)."""
    f, at_infinity = binary_to_univariate(form)
    roots = Counter({(x, 1): m for x, m in roots_mod_p(f, p).items()}) if len(f) > 1 else Counter()
    if at_infinity:
        roots[(1, 0)] += at_infinity
    return roots


def restrict_t(form: MultiPoly, tau: Tuple[int, int]) -> MultiPoly:
    """The binary form in (s0, s1) at a fixed point tau of the second factor."""
    dom = form.domain
    s0, s1 = MultiPoly.gens(2, dom)
    return form.substitute([s0, s1, MultiPoly.constant(2, tau[0], dom), MultiPoly.constant(2, tau[1], dom)])


def affine_slice(form: MultiPoly, seed: int) -> MultiPoly:
    """Dehomogenise both factors after a random change of coordinates on each."""
    dom = form.domain
    p = dom.p
    rng = random.Random(seed)
    u, v = MultiPoly.gens(2, dom)
    one = MultiPoly.constant(2, 1, dom)
    images = []
    for var in (u, v):
        while True:
            a, b, c, d = (rng.randrange(p) for _ in range(4))
            if (a * d - b * c) % p:
                break
        images += [one.scale(a) + var.scale(b), one.scale(c) + var.scale(d)]
    return form.substitute(images)


def derivative_gcd(form: MultiPoly) -> MultiPoly:
    g = form
    for i in range(form.nvars):
        d = form.diff(i)
        if d:
            g = multivariate_gcd(g, d)
    return g


def multiplicity_profile(form: MultiPoly) -> Dict[int, Bidegree]:
    """Bidegree of the part of each exact multiplicity, from the chain of derivative gcds."""
    chain = [form]
    while chain[-1].degree() > 0:
        chain.append(derivative_gcd(chain[-1]))
    at_least = [chain[k].exact_divide(chain[k + 1]) for k in range(len(chain) - 1)]
    out = {}
    for k, part in enumerate(at_least):
        exact = part.exact_divide(at_least[k + 1]) if k + 1 < len(at_least) else part
        if exact.degree() > 0:
            out[k + 1] = bidegree(exact)
    return out


class QuadricRuling(NamedTuple):
    prime: int
    root: int
    quadric: MultiPoly
    corners: Tuple[Tuple[int, ...], ...]
    scale: int
    images: List[MultiPoly]

    def pullback(self, form: MultiPoly) -> MultiPoly:
        return form.substitute(self.images)

    def point(self, sigma: Tuple[int, int], tau: Tuple[int, int]) -> Tuple[int, ...]:
        p = self.prime
        P, U, V, W = (np.array(c, dtype=np.int64) for c in self.corners)
        vec = (sigma[0] * tau[0] * P + sigma[1] * tau[0] * U + sigma[0] * tau[1] * W
               + self.scale * sigma[1] * tau[1] * V) % p
        return normalize_point(vec.tolist(), p)


def rule_quadric(quadric: MultiPoly, p: int, root: int, budget: Optional[int] = None) -> QuadricRuling:
    dom = GF(p)
    m = quadratic_form_matrix(quadric)
    if ExactMatrix(m, dom).rank() != 4:
        raise UnsupportedCaseError("the quadric is singular")
    if legendre(ExactMatrix(m, dom).det(), p) != 1:
        raise UnsupportedCaseError(f"the quadric is not split over F_{p}")
    M = np.array(m, dtype=np.int64)
    points = scan_projective([quadric], p, budget)

    def form(x, y) -> int:
        return int(np.array(x) @ M @ np.array(y) % p)

    for P in points:
        on_tangent = points[(points @ (M @ P)) % p == 0]
        others = [x for x in on_tangent if rank_mod_p([P, x], p) == 2]
        if not others:
            continue
        U = others[0]
        W = next((x for x in others if rank_mod_p([P, U, x], p) == 3), None)
        if W is None:
            continue
        # T_U and T_W meet in a line through P and the opposite corner V
        meet = kernel_mod_p([((M @ U) % p).tolist(), ((M @ W) % p).tolist()], p)
        direction = next((np.array(v, dtype=np.int64) for v in meet if rank_mod_p([P, v], p) == 2), None)
        if direction is None or form(direction, direction) == 0:
            continue
        t = -2 * form(P, direction) * pow(form(direction, direction), -1, p) % p
        V = (P + t * direction) % p
        if form(P, V) == 0:
            continue
        c = -form(U, W) * pow(form(P, V), -1, p) % p
        s0, s1, t0, t1 = MultiPoly.gens(4, dom)
        images = [
            (s0 * t0).scale(int(P[k])) + (s1 * t0).scale(int(U[k])) + (s0 * t1).scale(int(W[k]))
            + (s1 * t1).scale(c * int(V[k]))
            for k in range(4)
        ]
        ruling = QuadricRuling(p, root, quadric, tuple(tuple(int(x) for x in v) for v in (P, U, V, W)), c, images)
        if ruling.pullback(quadric):
            raise ProfileMismatchError("the ruling does not land on the quadric")
        return ruling
    raise UnsupportedCaseError(f"no skew quadrilateral found on the quadric over F_{p}")


def find_ruling(classes: Sequence[QuadricClass], primes: Sequence[int]) -> Tuple[QuadricClass, QuadricRuling]:
    for p in primes:
        root = phi20_roots(p)[0]
        for cls in classes:
            try:
                return cls, rule_quadric(cls.reduced(p, root), p, root)
            except UnsupportedCaseError as err:
                LOGGER.info(f"{cls.label()} at p={p}: {err}")
    raise UnsupportedCaseError("no split smooth quadric among the candidates")


# ---------------- components on a type 10 quadric ----------------
def fit_linear_component(curve: MultiPoly, p: int, t_degree: int) -> Optional[MultiPoly]:
    """The bidegree (1, t_degree) factor, from the fibres over t carrying a single simple F_p root in s."""
    dom = GF(p)
    rows = []
    for tau in p1_points(p):
        fibre = restrict_t(curve, tau)
        if fibre.is_zero():
            continue
        roots = binary_roots(fibre, p)
        if len(roots) != 1 or sum(roots.values()) != 1:
            continue
        sigma = next(iter(roots))
        rows.append([sigma[i] * pow(tau[0], t_degree - j, p) * pow(tau[1], j, p) % p
                     for i in range(2) for j in range(t_degree + 1)])
    if len(rows) < 2 * (t_degree + 1):
        return None
    kernel = kernel_mod_p(rows, p)
    if len(kernel) != 1:
        return None
    terms = {}
    for idx, c in enumerate(kernel[0]):
        i, j = divmod(idx, t_degree + 1)
        exps = [0, 0, t_degree - j, j]
        exps[i] = 1
        terms[tuple(exps)] = c
    return MultiPoly(4, terms, dom).monic()


def intersection_length(f: MultiPoly, g: MultiPoly, seed: int) -> Optional[int]:
    result = groebner_fp([affine_slice(f, seed), affine_slice(g, seed)])
    return result.degree if result.dimension == 0 else None


def node_count(curve: MultiPoly, seed: int) -> Optional[int]:
    affine = affine_slice(curve, seed)
    result = groebner_fp([affine, affine.diff(0), affine.diff(1)])
    return result.degree if result.dimension == 0 else None


class Type10Curves(NamedTuple):
    quadric: str
    prime: int
    pullback_bidegree: Bidegree
    squarefree_bidegree: Optional[Bidegree]
    components: List[Bidegree]
    factorisation_holds: bool
    intersection_length: Optional[int]
    rational_intersections: int
    cusp_images: int


class Type5Curve(NamedTuple):
    quadric: str
    prime: int
    squarefree_bidegree: Optional[Bidegree]
    is_square: bool
    nodes: Optional[int]


class QuadricCurvesReport(NamedTuple):
    type10: Type10Curves
    type5: Type5Curve
    rulings: Dict[str, QuadricRuling]
    components: Dict[str, MultiPoly]

    @property
    def passed(self) -> bool:
        t10, t5 = self.type10, self.type5
        return (t10.factorisation_holds and sorted(t10.components) == [(1, 2), (2, 1)]
                and t10.intersection_length == 5 and t10.cusp_images == t10.rational_intersections
                and t5.is_square and t5.squarefree_bidegree == (3, 3) and t5.nodes == 4)


def _type10_curves(sextic_p, cls: QuadricClass, ruling: QuadricRuling, seed: int):
    p = ruling.prime
    pulled = ruling.pullback(sextic_p)
    half = derivative_gcd(pulled)
    c1 = fit_linear_component(half, p, 2)
    c2, holds, length, rational, cusps = None, False, None, 0, 0
    if c1 is not None:
        try:
            c2 = half.exact_divide(c1)
        except NotDivisibleError:
            c2 = None
    if c2 is not None:
        holds = pulled.is_proportional(c1 ** 2 * c2 ** 2)
        length = intersection_length(c1, c2, seed)
        for sigma in p1_points(p):
            for tau in p1_points(p):
                pt = sigma + tau
                if c1.evaluate(pt) == 0 and c2.evaluate(pt) == 0:
                    rational += 1
                    if tangent_cone(sextic_p, ruling.point(sigma, tau), GF(p)).kind == "cusp":
                        cusps += 1
    components = sorted(bidegree(c) for c in (c1, c2) if c is not None)
    report = Type10Curves(cls.label(), p, bidegree(pulled), bidegree(half), components, holds, length, rational, cusps)
    return report, {"C1": c1, "C2": c2}


def _type5_curve(sextic_p, cls: QuadricClass, ruling: QuadricRuling, seed: int):
    pulled = ruling.pullback(sextic_p)
    half = derivative_gcd(pulled)
    square = half.degree() > 0 and pulled.is_proportional(half ** 2)
    nodes = node_count(half, seed) if square else None
    return Type5Curve(cls.label(), ruling.prime, bidegree(half), square, nodes), half


@lru_cache(maxsize=None)
def quadric_intersection_curves(seed: int = Verify.SEED, primes: tuple = tuple(Verify.MODULAR_PRIMES)) -> QuadricCurvesReport:
    model = derive_model(4, seed)
    census = restrict_quadrics(eigenspace_chart(4))
    type10 = [c for c in census.of_tag("type10") if c.rank == 4]
    type5 = [c for c in census.of_tag("type5") if c.rank == 4]
    cls10, ruling10 = find_ruling(type10, primes)
    cls5, ruling5 = find_ruling(type5, primes)

    t10, comps = _type10_curves(model.reduced(ruling10.prime, ruling10.root), cls10, ruling10, seed)
    t5, d = _type5_curve(model.reduced(ruling5.prime, ruling5.root), cls5, ruling5, seed)
    comps["D"] = d
    LOGGER.info(f"Type 10 curves {t10.components} meeting in {t10.intersection_length}; type 5 curve {t5.squarefree_bidegree} with {t5.nodes} nodes")
    return QuadricCurvesReport(t10, t5, {"type10": ruling10, "type5": ruling5}, comps)


# ---------------- Jacobi locus ----------------
SCHOTTKY_SAMPLES = 40


def schottky_on_conic(seed: int = Verify.SEED) -> List[bool]:
    """
    F_J at rational parameter values u = 0, 1, ... of the Shimura conic.

    The pullback of F_J is a binary form over Q(zeta_20) whose degree is
    the declared degree of F_J times that of the parametrisation. More
    vanishing values than that degree force every coefficient to vanish, so
    all True is an exact statement.
    """
    conic = derive_model(2, seed)
    chart = eigenspace_chart(2)
    param = parametrize_conic(conic.poly)
    matrix = chart.matrix()
    circuit = schottky_circuit()
    pulled = circuit.declared_degree * max(image.degree() for image in param.images)
    if SCHOTTKY_SAMPLES <= pulled:
        raise DomainError(f"{SCHOTTKY_SAMPLES} values cannot decide a pullback of degree {pulled}")
    out = []
    for u in range(SCHOTTKY_SAMPLES):
        at = [CYCLO.convert(u), CYCLO.one]
        y = [image.evaluate(at) for image in param.images]
        coords = [sum((row[j] * y[j] for j in range(len(y))), CYCLO.zero) for row in matrix]
        out.append(not circuit.evaluate(coords))
    return out


def schottky_pullback(ruling: QuadricRuling) -> MultiPoly:
    forms = eigenspace_chart(4).reduced_forms(ruling.prime, ruling.root)
    return schottky_circuit().substitute_linear([ruling.pullback(f) for f in forms])


def type5_dimension(d: MultiPoly, fj: MultiPoly, seed: int) -> Tuple[int, str]:
    """
    Dimension of S n Q5 n {F_J = 0}, read on the ruling of Q5 where S n Q5 is D.

    The Groebner dimension of (D, F_J) on an affine slice is computed first.
    Two curves on P^1 x P^1 meet in finitely many points exactly when they
    share no component, so the gcd decides when the step budget runs out and
    must agree with Groebner otherwise.
    """
    common = multivariate_gcd(d, fj)
    by_gcd = 0 if common.degree() == 0 else 1
    try:
        result = groebner_fp([affine_slice(d, seed), affine_slice(fj, seed)])
    except ResourceBudgetError as err:
        LOGGER.warning(f"type 5 intersection decided by the gcd: {err}")
        return by_gcd, "gcd"
    # an empty affine slice still means a finite intersection
    dimension = max(result.dimension, 0)
    if dimension != by_gcd:
        raise ProfileMismatchError(f"Groebner dimension {result.dimension} and gcd dimension {by_gcd} disagree")
    return dimension, "groebner"


class JacobiReport(NamedTuple):
    conic_in_jacobi_locus: bool
    schottky_bidegree: Optional[Bidegree]
    divisible_by_curves: bool
    residual_bidegree: Optional[Bidegree]
    residual_squarefree_degree: Optional[int]
    residual_profile: Dict[int, Bidegree]
    type5_common_component: Optional[Bidegree]
    type5_dimension: Optional[int]
    type5_method: str = "gcd"

    @property
    def passed(self) -> bool:
        return (self.conic_in_jacobi_locus and self.divisible_by_curves
                and self.residual_squarefree_degree == 10 and self.type5_dimension == 0)


def jacobi_intersections(seed: int = Verify.SEED, primes: tuple = tuple(Verify.MODULAR_PRIMES)) -> JacobiReport:
    on_conic = all(schottky_on_conic(seed))

    curves = quadric_intersection_curves(seed, primes)
    ruling10 = curves.rulings["type10"]
    fj10 = schottky_pullback(ruling10)
    c1, c2 = curves.components["C1"], curves.components["C2"]
    divisible, residual, sq_degree, profile = False, None, None, {}
    if c1 is not None and c2 is not None and fj10:
        try:
            residual = fj10.exact_divide(c1 ** 2 * c2 ** 2)
            divisible = True
        except NotDivisibleError as err:
            LOGGER.warning(f"F_J pullback not divisible by C1^2 C2^2: {err}")
    if residual is not None:
        squarefree = residual.exact_divide(derivative_gcd(residual))
        bd = bidegree(squarefree)
        sq_degree = sum(bd) if bd else 0
        profile = multiplicity_profile(residual)

    fj5 = schottky_pullback(curves.rulings["type5"])
    common_bd = bidegree(multivariate_gcd(curves.components["D"], fj5))
    dimension, method = type5_dimension(curves.components["D"], fj5, seed)

    report = JacobiReport(on_conic, bidegree(fj10), divisible, bidegree(residual) if residual is not None else None,
                          sq_degree, profile, common_bd, dimension, method)
    LOGGER.info(f"Jacobi locus: conic inside={on_conic}, residual {report.residual_bidegree} profile {profile}, "
                f"type 5 dimension {dimension} by {method}")
    return report

