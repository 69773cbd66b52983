"""
The Shimura surface in S_5 coordinates and its canonical image.

In P^4 with coordinates x_1..x_5 the surface is s_1 = 0, s_2^3 + 10 s_3^2 -
20 s_2 s_4 = 0 (s_i elementary symmetric). Quadrics through the five cusps
span a five dimensional representation V of S_5; the stabiliser of one of the
six type 10 quadrics is a Frobenius group of order 20, and the orbit of its
invariant vector gives coordinates z_1..z_6 with sum zero. The image is cut
out by sum z_i^3 and an alternating cubic.
"""

from functools import lru_cache
from itertools import permutations
from math import prod
from typing import List, NamedTuple, Optional, Sequence, Tuple

import numpy as np

from Shimura.algebra.cyclo import ZETA5
from Shimura.algebra.domains import CYCLO, GF, QQ
from Shimura.algebra.linalg import ExactMatrix, rank_mod_p
from Shimura.algebra.multipoly import MultiPoly, elementary_symmetric
from Shimura.algebra.projective import evaluate_array, scan_projective
from Shimura.helper.exceptions import BadPrimeError, ProfileMismatchError
from Shimura.logger import LOGGER
from Shimura.moduli.models import monomials
from Shimura.moduli.sextic import local_expansion, quadratic_rank, is_triangle

Perm = Tuple[int, ...]

# sign, (i, j, k) with 1-based z indices
ALTERNATING_TERMS = (
    (1, (1, 2, 3)), (-1, (1, 2, 4)), (-1, (1, 2, 5)), (1, (1, 2, 6)), (1, (1, 3, 4)),
    (-1, (1, 3, 5)), (-1, (1, 3, 6)), (1, (1, 4, 5)), (-1, (1, 4, 6)), (1, (1, 5, 6)),
    (-1, (2, 3, 4)), (1, (2, 3, 5)), (-1, (2, 3, 6)), (1, (2, 4, 5)), (1, (2, 4, 6)),
    (-1, (2, 5, 6)), (-1, (3, 4, 5)), (1, (3, 4, 6)), (1, (3, 5, 6)), (-1, (4, 5, 6)),
)


# ---------------- permutations ----------------
def cycle_perm(n: int, *cycles: Sequence[int]) -> Perm:
    """Permutation of range(n) from 1-based cycles, as the tuple of images."""
    image = list(range(n))
    for cycle in cycles:
        for a, b in zip(cycle, list(cycle[1:]) + [cycle[0]]):
            image[a - 1] = b - 1
    return tuple(image)


def compose(f: Perm, g: Perm) -> Perm:
    """f after g."""
    return tuple(f[g[i]] for i in range(len(g)))


def inverse(f: Perm) -> Perm:
    out = [0] * len(f)
    for i, x in enumerate(f):
        out[x] = i
    return tuple(out)


def generate_group(gens: Sequence[Perm]) -> List[Perm]:
    n = len(gens[0])
    seen = {tuple(range(n))}
    frontier = list(seen)
    while frontier:
        nxt = []
        for g in frontier:
            for s in gens:
                h = compose(s, g)
                if h not in seen:
                    seen.add(h)
                    nxt.append(h)
        frontier = nxt
    return sorted(seen)


def act(poly: MultiPoly, perm: Perm) -> MultiPoly:
    return poly.rename(poly.nvars, perm)


TRANSPOSITION = cycle_perm(5, (1, 2))
FIVE_CYCLE = cycle_perm(5, (5, 4, 3, 2, 1))
FROBENIUS_GENERATORS = (cycle_perm(5, (1, 2, 3, 4, 5)), cycle_perm(5, (2, 3, 5, 4)))
TARGET_TRANSPOSITION = cycle_perm(6, (1, 4), (2, 3), (5, 6))
TARGET_FIVE_CYCLE = cycle_perm(6, (2, 6, 5, 4, 3))


# ---------------- the S_5 model ----------------
def s5_sextic(domain=QQ) -> MultiPoly:
    x = MultiPoly.gens(5, domain)
    s2, s3, s4 = (elementary_symmetric(x, k) for k in (2, 3, 4))
    return s2 ** 3 + (s3 ** 2).scale(10) - (s2 * s4).scale(20)


def on_hyperplane(poly: MultiPoly) -> MultiPoly:
    """Restriction to s_1 = 0 through x_5 = -(x_1 + ... + x_4)."""
    x = MultiPoly.gens(4, poly.domain)
    last = -(x[0] + x[1] + x[2] + x[3])
    return poly.substitute(x + [last])


def lift(poly4: MultiPoly) -> MultiPoly:
    return poly4.rename(5, (0, 1, 2, 3))


def s5_act(poly4: MultiPoly, perm: Perm) -> MultiPoly:
    """Action of a permutation of x_1..x_5 on a form on the hyperplane."""
    return on_hyperplane(act(lift(poly4), perm))


def cusp_points() -> List[Tuple[int, ...]]:
    return [tuple(-4 if i == j else 1 for i in range(5)) for j in range(5)]


def node_point() -> Tuple:
    return tuple(ZETA5 ** k for k in range(5))


def _projective_key(point: Sequence, domain) -> tuple:
    pivot = next(x for x in point if not domain.is_zero(domain.convert(x)))
    inv = domain.inv(domain.convert(pivot))
    return tuple(domain.mul(domain.convert(x), inv) for x in point)


def orbit_size(point: Sequence, domain) -> int:
    return len({_projective_key([point[g[i]] for i in range(5)], domain) for g in permutations(range(5))})


class S5ModelReport(NamedTuple):
    invariant: bool
    gradient_zero_at_cusp: bool
    gradient_zero_at_node: bool
    cusp_quadratic_rank: int
    cusp_cubic_is_triangle: bool
    node_quadratic_rank: int
    orbit_sizes: Tuple[int, int]

    @property
    def passed(self) -> bool:
        return (self.invariant and self.gradient_zero_at_cusp and self.gradient_zero_at_node
                and self.cusp_quadratic_rank == 0 and self.cusp_cubic_is_triangle
                and self.node_quadratic_rank == 3 and self.orbit_sizes == (5, 24))


@lru_cache(maxsize=None)
def s5_model_checks() -> S5ModelReport:
    sextic = s5_sextic()
    invariant = all(act(sextic, g) == sextic for g in (TRANSPOSITION, FIVE_CYCLE))
    surface = on_hyperplane(sextic)

    p0 = cusp_points()[0][:4]
    grad_p0 = all(g.evaluate([QQ.convert(x) for x in p0]) == 0 for g in surface.gradient())
    local = local_expansion(surface, p0, QQ)
    cusp_rank = quadratic_rank(local.homogeneous_part(2))
    triangle = local.lowest_degree() == 3 and is_triangle(local.homogeneous_part(3))

    over_cyclo = surface.map_coeffs(CYCLO.convert, CYCLO)
    q0 = node_point()[:4]
    grad_q0 = all(not g.evaluate(list(q0)) for g in over_cyclo.gradient())
    node_rank = quadratic_rank(local_expansion(over_cyclo, q0, CYCLO).homogeneous_part(2))

    sizes = (orbit_size(cusp_points()[0], QQ), orbit_size(node_point(), CYCLO))
    report = S5ModelReport(invariant, grad_p0, grad_q0, cusp_rank, triangle, node_rank, sizes)
    LOGGER.info(f"S5 model: {report}")
    return report


# ---------------- canonical map ----------------
def _coefficient_rows(polys: Sequence[MultiPoly], monos: Sequence[tuple]) -> List[List]:
    return [[poly.coeff(m) for m in monos] for poly in polys]


def cusp_quadrics() -> List[MultiPoly]:
    """Basis of the quadrics on s_1 = 0 through the five cusps."""
    monos = monomials(4, 2)
    rows = [[QQ.convert(prod(c[i] ** e for i, e in enumerate(m))) for m in monos] for c in cusp_points()]
    kernel = ExactMatrix(rows, QQ).kernel()
    return [MultiPoly(4, dict(zip(monos, vec)), QQ) for vec in kernel]


def span_dimension(polys: Sequence[MultiPoly]) -> int:
    if not polys:
        return 0
    monos = sorted({m for poly in polys for m in poly.terms})
    return ExactMatrix(_coefficient_rows(polys, monos), QQ).rank()


def sign(perm: Perm) -> int:
    seen, flips = set(), 0
    for start in range(len(perm)):
        length, i = 0, start
        while i not in seen:
            seen.add(i)
            i = perm[i]
            length += 1
        flips += max(length - 1, 0)
    return -1 if flips % 2 else 1


CHARACTERS = {"trivial": lambda g: 1, "sign": sign}


def frobenius_eigenvectors(basis: Sequence[MultiPoly], character: str) -> List[MultiPoly]:
    """Basis of {q in span(basis) : g q = chi(g) q} for the Frobenius group of order 20.

    The group fixes one type 10 quadric as a point of P(V); on the quadric
    itself it acts through a character, found by solving the linear conditions
    on the generators.
    """
    chi = CHARACTERS[character]
    monos = monomials(4, 2)
    rows = []
    for g in FROBENIUS_GENERATORS:
        moved = [s5_act(q, g) for q in basis]
        for m in monos:
            rows.append([moved[k].coeff(m) - chi(g) * basis[k].coeff(m) for k in range(len(basis))])
    out = []
    for vec in ExactMatrix(rows, QQ).kernel():
        total = MultiPoly(4, {}, QQ)
        for c, q in zip(vec, basis):
            total = total + q.scale(c)
        out.append(total)
    return out


def stabilized_quadric(basis: Sequence[MultiPoly]) -> Tuple[str, List[MultiPoly]]:
    """The character and eigenvectors for the first character with a nonzero solution."""
    for character in CHARACTERS:
        found = frobenius_eigenvectors(basis, character)
        if found:
            return character, found
    raise ProfileMismatchError("the Frobenius group fixes no quadric through the cusps")


def six_quadrics(seed_vector: MultiPoly, character: str = "sign") -> List[MultiPoly]:
    """chi(g) g q over the cosets of the stabiliser; these sum to zero."""
    chi = CHARACTERS[character]
    orbit: List[MultiPoly] = []
    for g in permutations(range(5)):
        image = s5_act(seed_vector, tuple(g))
        if image in orbit or -image in orbit:
            continue
        orbit.append(image if chi(tuple(g)) == 1 else -image)
    return orbit


def permutation_on_six(six: Sequence[MultiPoly], perm: Perm) -> Optional[Perm]:
    """The permutation of the z_i induced by perm; odd permutations also flip every sign."""
    image = []
    for z in six:
        moved = s5_act(z, perm)
        if moved in six:
            image.append(six.index(moved))
        elif -moved in six:
            image.append(six.index(-moved))
        else:
            return None
    return tuple(image)


def find_relabeling(pairs: Sequence[Tuple[Perm, Perm]]) -> Optional[Perm]:
    """r with r pi r^-1 = target for every (pi, target) pair."""
    for r in permutations(range(6)):
        r_inv = inverse(r)
        if all(compose(r, compose(pi, r_inv)) == target for pi, target in pairs):
            return tuple(r)
    return None


def invariant_cubic(domain=QQ) -> MultiPoly:
    total = MultiPoly(6, {}, domain)
    for z in MultiPoly.gens(6, domain):
        total = total + z ** 3
    return total


def alternating_cubic(domain=QQ) -> MultiPoly:
    z = MultiPoly.gens(6, domain)
    total = MultiPoly(6, {}, domain)
    for sign, (i, j, k) in ALTERNATING_TERMS:
        total = total + (z[i - 1] * z[j - 1] * z[k - 1]).scale(sign)
    return total


class AlternatingCubicReport(NamedTuple):
    invariant_fixed: bool
    transposition_sign: int
    five_cycle_sign: int

    @property
    def passed(self) -> bool:
        return self.invariant_fixed and self.transposition_sign == -1 and self.five_cycle_sign == 1


def _sign_under(poly: MultiPoly, perm: Perm) -> int:
    moved = act(poly, perm)
    if moved == poly:
        return 1
    if moved == -poly:
        return -1
    return 0


def alternating_cubic_check() -> AlternatingCubicReport:
    inv, alt = invariant_cubic(), alternating_cubic()
    fixed = all(act(inv, g) == inv for g in (TARGET_TRANSPOSITION, TARGET_FIVE_CYCLE))
    return AlternatingCubicReport(fixed, _sign_under(alt, TARGET_TRANSPOSITION), _sign_under(alt, TARGET_FIVE_CYCLE))


def model_nodes(p: int, budget: Optional[int] = None) -> int:
    """Singular points over F_p of {sum z = 0, sum z^3 = 0, alternating cubic = 0} in P^5."""
    dom = GF(p)
    z = MultiPoly.gens(5, dom)
    eliminate = z + [-(z[0] + z[1] + z[2] + z[3] + z[4])]
    cubics = [invariant_cubic(dom).substitute(eliminate), alternating_cubic(dom).substitute(eliminate)]
    points = scan_projective(cubics, p, budget)
    if not len(points):
        return 0
    jac = [[evaluate_array(c.diff(i), points, p) for i in range(5)] for c in cubics]
    singular = 0
    for row in range(points.shape[0]):
        matrix = [[int(jac[a][i][row]) for i in range(5)] for a in range(2)]
        if rank_mod_p(matrix, p) < 2:
            singular += 1
    return singular


class CanonicalReport(NamedTuple):
    cusp_quadric_dim: int
    character: str
    invariant_dim: int
    orbit_size: int
    sum_vanishes: bool
    spans_cusp_quadrics: bool
    convention: Optional[str]
    relabeling: Optional[Perm]
    prime: int
    sampled: int
    invariant_cubic_vanishes: bool
    alternating_cubic_vanishes: bool
    alternating: AlternatingCubicReport
    node_prime: int
    model_nodes: int

    @property
    def passed(self) -> bool:
        return (self.cusp_quadric_dim == 5 and self.character == "sign" and self.invariant_dim == 1
                and self.orbit_size == 6
                and self.sum_vanishes and self.spans_cusp_quadrics and self.relabeling is not None
                and self.sampled >= 200 and self.invariant_cubic_vanishes
                and self.alternating_cubic_vanishes and self.alternating.passed and self.model_nodes == 24)


def _sample_images(six: Sequence[MultiPoly], relabeling: Perm, p: int, budget: Optional[int]) -> np.ndarray:
    """Rows (z_1..z_6) in the published labelling at the points of S(F_p) off the cusps."""
    dom = GF(p)
    surface = on_hyperplane(s5_sextic()).map_coeffs(dom.convert, dom)
    points = scan_projective([surface], p, budget)
    values = np.stack([evaluate_array(z.map_coeffs(dom.convert, dom), points, p) for z in six], axis=1)
    values = values[np.any(values != 0, axis=1)]
    out = np.zeros_like(values)
    for i, target in enumerate(relabeling):
        out[:, target] = values[:, i]
    return out


def canonical_map_check(p: int = 31, node_prime: int = 11, budget: Optional[int] = None) -> CanonicalReport:
    if p % 5 != 1 or node_prime % 5 != 1:
        raise BadPrimeError(f"primes {p}, {node_prime} must be 1 mod 5")
    basis = cusp_quadrics()
    character, invariants = stabilized_quadric(basis)
    inv_dim = span_dimension(invariants)
    six = six_quadrics(invariants[0], character)
    total = MultiPoly(4, {}, QQ)
    for z in six:
        total = total + z
    spans = span_dimension(six) == 5 and span_dimension(list(basis) + six) == 5

    convention, relabeling = None, None
    if len(six) == 6:
        for name, five in (("left", FIVE_CYCLE), ("inverse", inverse(FIVE_CYCLE))):
            pi_t = permutation_on_six(six, TRANSPOSITION)
            pi_f = permutation_on_six(six, five)
            if pi_t is None or pi_f is None:
                break
            relabeling = find_relabeling([(pi_t, TARGET_TRANSPOSITION), (pi_f, TARGET_FIVE_CYCLE)])
            if relabeling is not None:
                convention = name
                break

    sampled, inv_ok, alt_ok = 0, False, False
    if relabeling is not None:
        dom = GF(p)
        images = _sample_images(six, relabeling, p, budget)
        sampled = images.shape[0]
        inv_ok = bool(np.all(evaluate_array(invariant_cubic(dom), images, p) == 0))
        alt_ok = bool(np.all(evaluate_array(alternating_cubic(dom), images, p) == 0))

    report = CanonicalReport(
        len(basis), character, inv_dim, len(six), total.is_zero(), spans, convention, relabeling, p, sampled,
        inv_ok, alt_ok, alternating_cubic_check(), node_prime, model_nodes(node_prime, budget),
    )
    LOGGER.info(f"Canonical map: dim V={report.cusp_quadric_dim}, orbit {report.orbit_size}, "
                f"relabeling {report.relabeling} ({report.convention}), {report.model_nodes} nodes at p={node_prime}")
    return report

