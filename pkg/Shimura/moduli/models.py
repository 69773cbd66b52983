"""
Equations of the Shimura curve and surface inside their eigenspace charts.

The two degree 32 relations are never expanded. Modulo a prime p = 1 mod 20
and a root of Phi_20 they are evaluated on random lines of the chart, the
univariate gcd of the two restrictions gives the degree of the model, and a
linear fit G(a + t b) = G(b) g(t) over many lines recovers G mod p. The
images for all roots at several primes are glued into an exact polynomial
over Q(zeta_20) and checked at a held out prime.
"""

import random
from collections import Counter
from functools import lru_cache
from itertools import combinations_with_replacement
from typing import Dict, List, NamedTuple, Optional, Sequence

import numpy as np

from Shimura.algebra import upoly
from Shimura.algebra.cyclo import phi20_roots
from Shimura.algebra.domains import CYCLO, GF
from Shimura.algebra.groebner import projective_dimension
from Shimura.algebra.linalg import ExactMatrix, kernel_mod_p
from Shimura.algebra.multipoly import MultiPoly
from Shimura.algebra.reconstruct import RESERVE_PRIMES, modular_images, reconstruct_poly, reduce_poly, vote
from Shimura.config import Verify
from Shimura.helper.exceptions import BadPrimeError, ProfileMismatchError, ResourceBudgetError
from Shimura.logger import LOGGER
from Shimura.moduli.charts import EigenspaceChart, eigenspace_chart
from Shimura.theta.relations import eqmod_circuits

EXPECTED_DEGREE = {2: 2, 4: 6}
SAMPLES = 33


class DerivedModel(NamedTuple):
    k: int
    poly: MultiPoly
    degree: int
    primes: List[int]
    held_out: int
    irreducible: bool
    certificate: Dict[str, object]

    def reduced(self, p: int, root: int) -> MultiPoly:
        return reduce_poly(self.poly, p, root)


def monomials(d: int, degree: int) -> List[tuple]:
    out = []
    for combo in combinations_with_replacement(range(d), degree):
        exps = [0] * d
        for i in combo:
            exps[i] += 1
        out.append(tuple(exps))
    return out


def _monomial_values(points: np.ndarray, monos: Sequence[tuple], p: int) -> np.ndarray:
    """Matrix (points x monomials) of monomial values mod p."""
    out = np.ones((points.shape[0], len(monos)), dtype=np.int64)
    for j, exps in enumerate(monos):
        col = np.ones(points.shape[0], dtype=np.int64)
        for i, e in enumerate(exps):
            for _ in range(e):
                col = col * points[:, i] % p
        out[:, j] = col
    return out


def relations_at(matrix: np.ndarray, p: int, points: np.ndarray) -> List[np.ndarray]:
    """Both relations at chart points (rows) mod p."""
    coords = points @ matrix.T % p
    inputs = [coords[:, s] for s in range(16)]
    return [np.asarray(circuit.evaluate(inputs, modulus=p)) % p for circuit in eqmod_circuits()]


def relations_on_lines(matrix: np.ndarray, p: int, lines: Sequence[tuple]) -> List[List[List[int]]]:
    """Values of both relations at t = 0..32 on each line a + t b; one list per circuit per line."""
    ts = np.arange(SAMPLES, dtype=np.int64)
    points = np.concatenate([(np.array(a)[None, :] + ts[:, None] * np.array(b)[None, :]) % p for a, b in lines])
    values = relations_at(matrix, p, points)
    out = []
    for idx in range(len(lines)):
        block = slice(idx * SAMPLES, (idx + 1) * SAMPLES)
        out.append([v[block].tolist() for v in values])
    return out


def line_gcd(values: Sequence[Sequence[int]], p: int) -> Optional[list]:
    dom = GF(p)
    xs = list(range(SAMPLES))
    polys = [upoly.interpolate_mod_p(xs, ys, p) for ys in values]
    polys = [f for f in polys if f]
    if not polys:
        return None
    g = polys[0]
    for f in polys[1:]:
        g = upoly.gcd(g, f, dom)
    return upoly.monic(g, dom)


def _random_lines(rng: random.Random, p: int, d: int, count: int) -> List[tuple]:
    return [(tuple(rng.randrange(p) for _ in range(d)), tuple(rng.randrange(p) for _ in range(d))) for _ in range(count)]


def model_degree(chart: EigenspaceChart, p: int, root: int, seed: int, trials: int = 16) -> int:
    """Smallest gcd degree over random lines a + t b whose direction b is off the zero locus.

    The model divides both restrictions, so extra common factors only raise the
    gcd degree; with the relations nonzero at b the model keeps its full degree
    on the line, so the minimum is exact.
    """
    rng = random.Random(seed)
    matrix = chart.reduced_matrix(p, root)
    lines = _random_lines(rng, p, chart.dim, trials)
    at_infinity = relations_at(matrix, p, np.array([b for _, b in lines], dtype=np.int64))
    lines = [line for idx, line in enumerate(lines) if any(int(v[idx]) for v in at_infinity)]
    degrees = Counter()
    for values in relations_on_lines(matrix, p, lines) if lines else []:
        g = line_gcd(values, p)
        if g is not None:
            degrees[upoly.degree(g)] += 1
    if not degrees:
        raise BadPrimeError(f"k={chart.k}: no usable line at p={p}")
    degree = min(degrees)
    LOGGER.info(f"k={chart.k}: restricted gcd degrees {dict(degrees)} at p={p}")
    return degree


def fit_model_mod_p(chart: EigenspaceChart, degree: int, p: int, root: int, seed: int) -> MultiPoly:
    """G mod (p, root) with G(a + t b) = G(b) g(t) on random lines, g the gcd of the restricted relations."""
    d = chart.dim
    monos = monomials(d, degree)
    rng = random.Random(seed * 7919 + p)
    matrix = chart.reduced_matrix(p, root)
    nlines = len(monos) // max(degree, 1) + 8
    lines = _random_lines(rng, p, d, nlines)
    rows = []
    dom = GF(p)
    for (a, b), values in zip(lines, relations_on_lines(matrix, p, lines)):
        g = line_gcd(values, p)
        if g is None or upoly.degree(g) != degree:
            continue
        ts = np.arange(degree + 1, dtype=np.int64)
        pts = (np.array(a)[None, :] + ts[:, None] * np.array(b)[None, :]) % p
        on_line = _monomial_values(pts, monos, p)
        at_b = _monomial_values(np.array([b], dtype=np.int64), monos, p)[0]
        for s in range(degree + 1):
            gt = upoly.evaluate(g, int(ts[s]), dom)
            rows.append(((on_line[s] - at_b * gt) % p).tolist())
    kernel = kernel_mod_p(rows, p)
    if len(kernel) != 1:
        raise BadPrimeError(f"model fit at p={p} has a {len(kernel)}-dimensional solution space")
    return MultiPoly(d, dict(zip(monos, kernel[0])), dom).monic()


def _exact_model(chart: EigenspaceChart, degree: int, seed: int, primes: Sequence[int]):
    pool = list(primes) + [p for p in RESERVE_PRIMES if p not in primes]
    images: Dict[int, List[MultiPoly]] = {}
    used = 0
    while used < len(pool) - 1:
        batch = pool[used:used + 3]
        used += len(batch)
        images.update(modular_images(lambda p, r: fit_model_mod_p(chart, degree, p, r, seed), batch))
        agreed = vote(images)
        if len(agreed) < 3:
            continue
        candidate = reconstruct_poly(agreed)
        if candidate is None:
            LOGGER.info(f"k={chart.k}: reconstruction from {sorted(agreed)} not yet stable")
            continue
        candidate = candidate.monic()
        held = pool[used]
        try:
            checks = [reduce_poly(candidate, held, r) == fit_model_mod_p(chart, degree, held, r, seed)
                      for r in phi20_roots(held)]
        except BadPrimeError:
            used += 1
            continue
        if all(checks):
            return candidate, sorted(agreed), held
        images[held] = [fit_model_mod_p(chart, degree, held, r, seed) for r in phi20_roots(held)]
        used += 1
    raise ResourceBudgetError(f"k={chart.k}: model reconstruction exhausted {len(pool)} primes")


def conic_determinant(poly: MultiPoly):
    """Determinant of the symmetric matrix of a ternary quadratic form."""
    m = [[CYCLO.zero] * 3 for _ in range(3)]
    for exps, c in poly.terms.items():
        idx = [i for i, e in enumerate(exps) for _ in range(e)]
        a, b = idx
        if a == b:
            m[a][a] = c
        else:
            m[a][b] = m[b][a] = c / 2
    return ExactMatrix(m, CYCLO).det()


def smooth_plane_section(model: MultiPoly, p: int, root: int, seed: int, attempts: int = 3) -> bool:
    """A random plane section of the reduced surface is a smooth curve, so its singular locus is finite."""
    reduced = reduce_poly(model, p, root)
    dom = GF(p)
    rng = random.Random(seed + p)
    u = MultiPoly.gens(3, dom)
    for _ in range(attempts):
        basis = [[rng.randrange(p) for _ in range(4)] for _ in range(3)]
        images = []
        for j in range(4):
            form = MultiPoly(3, {}, dom)
            for i in range(3):
                form = form + u[i].scale(basis[i][j])
            images.append(form)
        section = reduced.substitute(images)
        if section.degree() != model.degree():
            continue
        if projective_dimension(section.gradient(), Verify.STEP_BUDGET) == -1:
            return True
    return False


@lru_cache(maxsize=None)
def derive_model(k: int, seed: int = Verify.SEED, primes: tuple = tuple(Verify.MODULAR_PRIMES)) -> DerivedModel:
    chart = eigenspace_chart(k)
    p0 = primes[0]
    degree = model_degree(chart, p0, phi20_roots(p0)[0], seed)
    if degree != EXPECTED_DEGREE[k]:
        raise ProfileMismatchError(f"k={k}: gcd of the restricted relations has degree {degree}, expected {EXPECTED_DEGREE[k]}")
    poly, used, held = _exact_model(chart, degree, seed, primes)
    certificate: Dict[str, object] = {"held_out_prime": held, "primes": used}
    if k == 2:
        det = conic_determinant(poly)
        certificate["determinant"] = str(det)
        irreducible = bool(det)
    else:
        smooth = {p: smooth_plane_section(poly, p, phi20_roots(p)[0], seed) for p in primes[:2]}
        certificate["smooth_plane_section"] = smooth
        irreducible = all(smooth.values())
    LOGGER.info(f"k={k}: model of degree {poly.degree()} with {len(poly)} terms, irreducible={irreducible}")
    return DerivedModel(k, poly, poly.degree(), used, held, irreducible, certificate)


def unit_points_on_model(model: DerivedModel) -> List[bool]:
    """Whether each chart unit vector (the fixed points f_i x f_j) lies on the model."""
    d = model.poly.nvars
    out = []
    for i in range(d):
        point = [CYCLO.one if j == i else CYCLO.zero for j in range(d)]
        out.append(not model.poly.evaluate(point))
    return out
