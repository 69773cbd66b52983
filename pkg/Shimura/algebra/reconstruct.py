"""
Reconstruction of Q(zeta_20) data from images modulo primes p = 1 mod 20.

An element is recovered from its values at the eight roots of Phi_20 in
F_p (a Vandermonde solve), the coefficients are glued across primes by
CRT and lifted by rational reconstruction.
"""

from fractions import Fraction
from math import isqrt
from typing import Dict, List, Optional, Sequence

from sympy.ntheory.modular import crt

from Shimura.algebra.cyclo import CycloElement, phi20_roots, reduce_mod_p
from Shimura.algebra.domains import CYCLO, GF
from Shimura.algebra.multipoly import MultiPoly, _sympy_gcd
from Shimura.helper.exceptions import BadPrimeError, NotDivisibleError, ResourceBudgetError
from Shimura.logger import LOGGER

# primes = 1 mod 20 beyond the configured ones, used when reconstruction needs more modulus
RESERVE_PRIMES = (181, 241, 281, 401, 421, 461, 521, 541, 601, 641, 661, 701, 761, 821, 881, 941, 1021, 1061, 1101, 1181)


def rational_reconstruct(a: int, m: int) -> Optional[Fraction]:
    """Fraction n/d = a mod m with |n|, d <= sqrt(m/2), or None."""
    a %= m
    bound = isqrt(m // 2)
    r0, r1 = m, a
    s0, s1 = 0, 1
    while r1 > bound:
        q = r0 // r1
        r0, r1 = r1, r0 - q * r1
        s0, s1 = s1, s0 - q * s1
    if s1 == 0 or abs(s1) > bound:
        return None
    value = Fraction(r1, s1)
    if (value.numerator - a * value.denominator) % m:
        return None
    return value


def solve_mod_p(matrix: List[List[int]], rhs: List[int], p: int) -> List[int]:
    n = len(matrix)
    aug = [[x % p for x in row] + [rhs[i] % p] for i, row in enumerate(matrix)]
    for col in range(n):
        pivot = next(r for r in range(col, n) if aug[r][col])
        aug[col], aug[pivot] = aug[pivot], aug[col]
        inv = pow(aug[col][col], -1, p)
        aug[col] = [v * inv % p for v in aug[col]]
        for r in range(n):
            if r != col and aug[r][col]:
                f = aug[r][col]
                aug[r] = [(a - f * b) % p for a, b in zip(aug[r], aug[col])]
    return [aug[r][n] for r in range(n)]


def power_basis_mod_p(values: Sequence[int], p: int) -> List[int]:
    """Coefficients c_0..c_7 mod p of the element taking values[k] at the k-th root of Phi_20."""
    roots = phi20_roots(p)
    vandermonde = [[pow(r, i, p) for i in range(8)] for r in roots]
    return solve_mod_p(vandermonde, list(values), p)


def lift_coefficients(residues: Dict[int, List[int]]) -> Optional[CycloElement]:
    primes = sorted(residues)
    coeffs = []
    for i in range(8):
        value, modulus = crt(primes, [residues[p][i] for p in primes])
        lifted = rational_reconstruct(int(value), int(modulus))
        if lifted is None:
            return None
        coeffs.append(lifted)
    return CycloElement(coeffs)


def reduce_poly(f: MultiPoly, p: int, root: int) -> MultiPoly:
    return f.map_coeffs(lambda c: reduce_mod_p(c, p, root), GF(p))


def reconstruct_poly(images: Dict[int, Sequence[MultiPoly]]) -> Optional[MultiPoly]:
    """Glue per-prime, per-root images (same support, same normalisation) into one polynomial over Q(zeta_20)."""
    primes = sorted(images)
    support = set()
    for p in primes:
        for image in images[p]:
            support |= set(image.terms)
    terms = {}
    nvars = images[primes[0]][0].nvars
    for mono in support:
        residues = {}
        for p in primes:
            values = [image.terms.get(mono, 0) for image in images[p]]
            residues[p] = power_basis_mod_p(values, p)
        value = lift_coefficients(residues)
        if value is None:
            return None
        terms[mono] = value
    return MultiPoly(nvars, terms, CYCLO)


def modular_images(func, primes: Sequence[int]) -> Dict[int, List]:
    """func(p, root) for every root of Phi_20 mod each usable prime."""
    out = {}
    for p in primes:
        try:
            out[p] = [func(p, root) for root in phi20_roots(p)]
        except BadPrimeError as err:
            LOGGER.info(f"Skipping prime {p}: {err}")
    return out


def _support_key(poly: MultiPoly):
    return (poly.degree(), poly.leading_monomial() if poly else ())


def vote(images: Dict[int, List[MultiPoly]]) -> Dict[int, List[MultiPoly]]:
    """Keep the primes whose images all share the lowest observed degree and leading monomial."""
    keys = {p: {_support_key(image) for image in group} for p, group in images.items()}
    clean = {p: next(iter(k)) for p, k in keys.items() if len(k) == 1}
    if not clean:
        return {}
    best = min(clean.values(), key=lambda key: key[0])
    return {p: images[p] for p, key in clean.items() if key == best}


def cyclo_gcd(f: MultiPoly, g: MultiPoly, primes: Sequence[int] = (41, 61, 101)) -> MultiPoly:
    pool = list(primes) + [p for p in RESERVE_PRIMES if p not in primes]
    used = 0
    images: Dict[int, List[MultiPoly]] = {}
    while used < len(pool):
        batch = pool[used:used + 3]
        used += len(batch)
        images.update(modular_images(lambda p, r: _sympy_gcd(reduce_poly(f, p, r), reduce_poly(g, p, r)), batch))
        agreed = vote(images)
        if len(agreed) < 2:
            continue
        candidate = reconstruct_poly(agreed)
        if candidate is None:
            continue
        candidate = candidate.monic()
        try:
            f.exact_divide(candidate)
            g.exact_divide(candidate)
        except NotDivisibleError:
            continue
        return candidate
    raise ResourceBudgetError(f"gcd reconstruction exhausted {len(pool)} primes")
