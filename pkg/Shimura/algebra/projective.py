"""
Enumeration of P^n(F_p) by strata and vectorised evaluation of F_p polynomials on point batches.

Singular points that are only defined over F_{p^2} are found by elimination
instead, since P^3(F_{p^2}) is far too large to scan.
"""

from itertools import product
from typing import Dict, Iterator, List, NamedTuple, Optional, Sequence, Tuple

import numpy as np
import sympy as sp
from sympy.ntheory import sqrt_mod

from Shimura.algebra.finite import nonresidue
from Shimura.algebra.multipoly import MultiPoly
from Shimura.config import Verify
from Shimura.helper.exceptions import DomainError, ProfileMismatchError, ResourceBudgetError
from Shimura.helper.executor import map_ordered


def projective_size(n: int, p: int) -> int:
    return (p ** (n + 1) - 1) // (p - 1)


def stratum(n: int, p: int, j: int) -> np.ndarray:
    """Points of P^n(F_p) whose first nonzero coordinate is x_j = 1."""
    free = n - j
    out = np.zeros((p ** free, n + 1), dtype=np.int64)
    out[:, j] = 1
    if free:
        grids = np.meshgrid(*([np.arange(p, dtype=np.int64)] * free), indexing="ij")
        for k, grid in enumerate(grids):
            out[:, j + 1 + k] = grid.ravel()
    return out


def strata(n: int, p: int) -> Iterator[np.ndarray]:
    for j in range(n + 1):
        yield stratum(n, p, j)


def evaluate_array(poly: MultiPoly, points: np.ndarray, p: int) -> np.ndarray:
    """Values of an F_p polynomial on the rows of an int64 array, reduced mod p."""
    if points.shape[1] != poly.nvars:
        raise DomainError(f"points have {points.shape[1]} coordinates for {poly.nvars} variables")
    powers: Dict[Tuple[int, int], np.ndarray] = {}

    def power(i: int, e: int) -> np.ndarray:
        if (i, e) not in powers:
            powers[(i, e)] = points[:, i] % p if e == 1 else power(i, e - 1) * points[:, i] % p
        return powers[(i, e)]

    total = np.zeros(points.shape[0], dtype=np.int64)
    for exps, c in poly.terms.items():
        term = np.full(points.shape[0], int(c) % p, dtype=np.int64)
        for i, e in enumerate(exps):
            if e:
                term = term * power(i, e) % p
        total = (total + term) % p
    return total


def common_zeros(polys: Sequence[MultiPoly], points: np.ndarray, p: int) -> np.ndarray:
    """Rows on which every polynomial vanishes, filtering one polynomial at a time."""
    for poly in polys:
        if not len(points):
            break
        points = points[evaluate_array(poly, points, p) == 0]
    return points


def scan_projective(polys: Sequence[MultiPoly], p: int, budget: Optional[int] = None) -> np.ndarray:
    """All points of P^n(F_p) on the common zero set, strata merged in order."""
    n = polys[0].nvars - 1
    size = projective_size(n, p)
    budget = budget or Verify.SCAN_BUDGET
    if size > budget:
        raise ResourceBudgetError(f"P^{n}(F_{p}) has {size} points, over the scan budget {budget}")
    parts: List[np.ndarray] = map_ordered(lambda j: common_zeros(polys, stratum(n, p, j), p), range(n + 1))
    return np.concatenate(parts) if parts else np.zeros((0, n + 1), dtype=np.int64)


def normalize_point(point: Sequence[int], p: int) -> Tuple[int, ...]:
    pivot = next(x for x in point if x % p)
    inv = pow(int(pivot), -1, p)
    return tuple(int(x) * inv % p for x in point)


# ---------------- quadratic extension ----------------
# elements of F_{p^2} = F_p[w]/(w^2 - n) are pairs (a, b) meaning a + b w
Fp2 = Tuple[int, int]


def fp2_mul(x, y, p: int, n: int):
    """Product of F_{p^2} elements given as pairs of ints or of int64 arrays."""
    return (x[0] * y[0] + n * (x[1] * y[1] % p)) % p, (x[0] * y[1] + x[1] * y[0]) % p


def fp2_inv(x: Fp2, p: int, n: int) -> Fp2:
    norm = (x[0] * x[0] - n * x[1] * x[1]) % p
    if not norm:
        raise DomainError("zero has no inverse in F_{p^2}")
    inv = pow(norm, -1, p)
    return x[0] * inv % p, -x[1] * inv % p


def evaluate_fp2(poly: MultiPoly, coords: Sequence[Tuple[np.ndarray, np.ndarray]], p: int, n: int):
    """Values of an F_p polynomial at F_{p^2} points, one (re, im) array pair per coordinate."""
    size = len(coords[0][0])
    powers: Dict[Tuple[int, int], Tuple[np.ndarray, np.ndarray]] = {}

    def power(i: int, e: int):
        if (i, e) not in powers:
            powers[(i, e)] = coords[i] if e == 1 else fp2_mul(power(i, e - 1), coords[i], p, n)
        return powers[(i, e)]

    re, im = np.zeros(size, dtype=np.int64), np.zeros(size, dtype=np.int64)
    for exps, c in poly.terms.items():
        term = (np.full(size, int(c) % p, dtype=np.int64), np.zeros(size, dtype=np.int64))
        for i, e in enumerate(exps):
            if e:
                term = fp2_mul(term, power(i, e), p, n)
        re, im = (re + term[0]) % p, (im + term[1]) % p
    return re, im


def fp2_roots(expr, gen, p: int, n: int) -> List[Fp2]:
    """Roots in F_{p^2} of a univariate polynomial over F_p; factors of degree above 2 are dropped."""
    roots: List[Fp2] = []
    half = pow(2, -1, p)
    for factor, _ in sp.Poly(expr, gen, modulus=p).factor_list()[1]:
        coeffs = [int(c) % p for c in factor.all_coeffs()]
        if len(coeffs) == 2:
            roots.append((-coeffs[1] * pow(coeffs[0], -1, p) % p, 0))
        elif len(coeffs) == 3:
            inv = pow(coeffs[0], -1, p)
            b, c = coeffs[1] * inv % p, coeffs[2] * inv % p
            # irreducible, so the discriminant is n times a square
            s = sqrt_mod((b * b - 4 * c) * pow(n, -1, p) % p, p)
            roots.extend((-b * half % p, sign * s * half % p) for sign in (1, -1))
    return roots


def fp2_rank(rows: Sequence[Sequence[Fp2]], p: int, n: int) -> int:
    rows = [list(r) for r in rows]
    rank = 0
    for col in range(len(rows[0]) if rows else 0):
        pivot = next((i for i in range(rank, len(rows)) if rows[i][col] != (0, 0)), None)
        if pivot is None:
            continue
        rows[rank], rows[pivot] = rows[pivot], rows[rank]
        inv = fp2_inv(rows[rank][col], p, n)
        for i in range(len(rows)):
            if i != rank and rows[i][col] != (0, 0):
                factor = fp2_mul(rows[i][col], inv, p, n)
                scaled = [fp2_mul(factor, b, p, n) for b in rows[rank]]
                rows[i] = [((a[0] - s[0]) % p, (a[1] - s[1]) % p) for a, s in zip(rows[i], scaled)]
        rank += 1
    return rank


class ConjugatePoint(NamedTuple):
    """A singular point over F_{p^2}, first nonzero coordinate 1, with the rank of its Hessian."""
    coords: Tuple[Fp2, ...]
    hessian_rank: int

    @property
    def rational(self) -> bool:
        return all(b == 0 for _, b in self.coords)


def singular_points_fp2(form: MultiPoly, p: int, budget: Optional[int] = None) -> List[ConjugatePoint]:
    """
    Singular points of a projective hypersurface over F_p with coordinates in F_{p^2}.

    Each stratum x_j = 1, x_i = 0 (i < j) gives a system in the free coordinates.
    A lex Groebner basis mod p with one free coordinate last yields its eliminant,
    and the F_{p^2} roots of the eliminants bound every coordinate; the candidate
    tuples are then tested directly.
    """
    n = nonresidue(p)
    budget = budget or Verify.SCAN_BUDGET
    nv = form.nvars
    polys = [form] + form.gradient()
    hessian = [g.gradient() for g in form.gradient()]
    out: List[ConjugatePoint] = []
    for j in range(nv):
        free = nv - 1 - j
        if free:
            local_gens = MultiPoly.gens(free, form.domain)
            images = ([MultiPoly.constant(free, 0, form.domain)] * j + [MultiPoly.constant(free, 1, form.domain)]
                      + local_gens)
            local = [f.substitute(images) for f in polys]
            local = [f for f in local if not f.is_zero()]
            if not local:
                raise ProfileMismatchError(f"a whole stratum x{j} = 1 is singular mod {p}")
            symbols = sp.symbols(f"y0:{free}")
            exprs = [f.to_sympy(symbols) for f in local]
            candidates = []
            for k in range(free):
                ranking = [s for i, s in enumerate(symbols) if i != k] + [symbols[k]]
                basis = sp.groebner(exprs, *ranking, order="lex", modulus=p)
                if any(e.is_Number for e in basis.exprs):
                    break
                if not basis.is_zero_dimensional:
                    raise ProfileMismatchError(f"the singular locus mod {p} is not finite")
                eliminant = next(e for e in basis.exprs if e.free_symbols <= {symbols[k]})
                candidates.append(fp2_roots(eliminant, symbols[k], p, n))
            if len(candidates) < free:
                continue
            combos = list(product(*candidates))
        else:
            combos = [()]
        if len(combos) > budget:
            raise ResourceBudgetError(f"{len(combos)} candidate points over F_{p}^2, over the scan budget {budget}")
        if not combos:
            continue
        size = len(combos)
        zero = np.zeros(size, dtype=np.int64)
        coords = [(zero, zero)] * j + [(np.ones(size, dtype=np.int64), zero)]
        for k in range(len(combos[0])):
            coords.append((np.array([c[k][0] for c in combos], dtype=np.int64),
                           np.array([c[k][1] for c in combos], dtype=np.int64)))
        mask = np.ones(size, dtype=bool)
        for f in polys:
            re, im = evaluate_fp2(f, coords, p, n)
            mask &= (re == 0) & (im == 0)
        for idx in np.flatnonzero(mask):
            point = tuple((int(c[0][idx]), int(c[1][idx])) for c in coords)
            single = [(np.array([a]), np.array([b])) for a, b in point]
            rows = [[tuple(int(v[0]) for v in evaluate_fp2(h, single, p, n)) for h in row] for row in hessian]
            out.append(ConjugatePoint(point, fp2_rank(rows, p, n)))
    return out
