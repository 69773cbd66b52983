"""
Point counts of elliptic surfaces over F_p, fiber by fiber.

For the smooth minimal model, a fiber over t in P^1(F_p) contributes
p + 1 - a_t + p (r_t - 1), with a_t read off the Weierstrass cubic at t and
r_t the number of Frobenius-stable fiber components. The sum splits into
1 + p^2 + p (2 + sum (r_t - 1)) for the trivial lattice and -sum a_t for the
rest of H^2 (transcendental part plus the Mordell-Weil part).
"""

from fractions import Fraction
from typing import Dict, List, NamedTuple, Optional

import numpy as np
import sympy as sp

from Shimura.arithmetic.counting import FqArrays, ReducedModel, local_trace, trace_of_frobenius
from Shimura.arithmetic.function_field import (
    INFINITY, T, FiberConfiguration, LocalFiber, fiber_configuration, places_of, simplify, surface_weight, valuation,
)
from Shimura.arithmetic.weierstrass import E, E_PRIME, WeierstrassCurve
from Shimura.helper.exceptions import BadPrimeError, UnsupportedCaseError
from Shimura.helper.executor import map_ordered
from Shimura.logger import LOGGER


def _mod(value, p: int) -> int:
    value = Fraction(int(value.p), int(value.q)) if isinstance(value, sp.Rational) else Fraction(value)
    if value.denominator % p == 0:
        raise BadPrimeError(f"denominator {value.denominator} divisible by {p}")
    return value.numerator * pow(value.denominator, -1, p) % p


def _coefficients(expr) -> List[Fraction]:
    """Coefficients of a polynomial in t, constant term first."""
    poly = sp.Poly(simplify(expr), T)
    coeffs = [Fraction(int(c.p), int(c.q)) for c in reversed(poly.all_coeffs())]
    return coeffs or [Fraction(0)]


def fiber_model(curve: WeierstrassCurve, p: int, t0, weight: int) -> ReducedModel:
    """The Weierstrass cubic over t0 in F_p, or over infinity through s = 1/t."""
    coeffs = []
    for i, a in zip((1, 2, 3, 4, 6), curve.coefficients):
        poly = _coefficients(a)
        if t0 == INFINITY:
            k = i * weight
            value = poly[k] if k < len(poly) else Fraction(0)
            coeffs.append((_mod(value, p), 0))
        else:
            acc = 0
            for c in reversed(poly):
                acc = (acc * t0 + _mod(c, p)) % p
            coeffs.append((acc, 0))
    return ReducedModel(FqArrays(p), tuple(coeffs))


def is_good_prime(curve: WeierstrassCurve, p: int) -> bool:
    """p > 3, the coefficients reduce, and the places of bad fibers stay distinct mod p."""
    if p <= 3:
        return False
    try:
        for a in curve.coefficients:
            for c in _coefficients(a):
                _mod(c, p)
    except BadPrimeError:
        return False
    num, _ = sp.fraction(simplify(curve.discriminant))
    for part in (num, sp.Mul(*(f for f, _ in sp.factor_list(num, T)[1]))):
        _, integral = sp.Poly(part, T).clear_denoms()
        reduced = sp.Poly(integral.as_expr(), T, modulus=p)
        if reduced.is_zero or reduced.degree() != integral.degree():
            return False
        if part is not num and reduced.degree() > 0 and sp.gcd(reduced, reduced.diff(T)).degree() > 0:
            return False
    return True


def _is_minimal(curve: WeierstrassCurve, place, weight: int) -> bool:
    vals = [valuation(simplify(e), place) for e in (curve.c4, curve.c6, curve.discriminant)]
    if place.poly is None:
        vals = [v + k * weight for v, k in zip(vals, (4, 6, 12))]
    return not (vals[0] >= 4 and vals[1] >= 6 and vals[2] >= 12)


# ---------------- Frobenius-stable components ----------------
def _residue_class(expr, fiber_place, root: Optional[int], p: int, k: int, curve: WeierstrassCurve,
                   weight: int, scale: int) -> int:
    """(expr / pi^k) at the point, times pi'(root)^k, mod p; pi = 1/t at infinity with expr of weight `scale`."""
    if root is None:
        s = sp.Symbol("s")
        local = simplify(s ** (scale * weight) * expr.subs(T, 1 / s) / s ** k)
        num, den = sp.fraction(local)
        value = sp.Rational(num.subs(s, 0)) / sp.Rational(den.subs(s, 0))
        return _mod(value, p)
    place_poly = fiber_place
    local = simplify(expr / place_poly ** k)
    num, den = sp.fraction(local)
    num_p = _eval_mod(num, root, p)
    den_p = _eval_mod(den, root, p)
    derivative = _eval_mod(sp.diff(place_poly, T), root, p)
    if den_p == 0:
        raise BadPrimeError(f"residue at t = {root} has a pole mod {p}")
    return num_p * pow(den_p, -1, p) * pow(derivative, k, p) % p


def _eval_mod(expr, root: int, p: int) -> int:
    acc = 0
    for c in reversed(_coefficients(expr)):
        acc = (acc * root + _mod(c, p)) % p
    return acc


def _is_square(value: int, p: int) -> bool:
    return value % p != 0 and pow(value, (p - 1) // 2, p) == 1


def _cubic_roots(a: int, b: int, p: int) -> int:
    xs = np.arange(p, dtype=np.int64)
    return int(np.count_nonzero((xs * xs % p * xs + a * xs + b) % p == 0))


def stable_components(fiber: LocalFiber, curve: WeierstrassCurve, place_poly, root: Optional[int], p: int,
                      weight: int) -> int:
    """Number of Frobenius-stable components of the fiber over a rational point."""
    kind = fiber.kodaira
    c4, c6 = simplify(curve.c4), simplify(curve.c6)
    symbol = kind.symbol
    if symbol in ("II", "III", "III*", "II*") or kind.components == 1:
        return kind.components
    if symbol in ("IV", "IV*"):
        # the two far arms are defined by y^2 = -6 c6 / pi^k
        k = 2 if symbol == "IV" else 4
        value = -6 * _residue_class(c6, place_poly, root, p, k, curve, weight, 6) % p
        return kind.components if _is_square(value, p) else kind.components - (2 if symbol == "IV" else 4)
    if not symbol.endswith("*"):
        if _is_square(-_residue_class(c6, place_poly, root, p, 0, curve, weight, 6), p):
            return kind.n
        return 1 if kind.n % 2 else 2
    if symbol == "I0*":
        a = -27 * _residue_class(c4, place_poly, root, p, 2, curve, weight, 4) % p
        b = -54 * _residue_class(c6, place_poly, root, p, 3, curve, weight, 6) % p
        return 2 + _cubic_roots(a, b, p)
    # I_n*, n >= 1: the far pair is stable when the untwisted I_n is split
    value = -_residue_class(c6, place_poly, root, p, 3, curve, weight, 6) % p
    return kind.components if _is_square(value, p) else kind.components - 2


def _roots_mod_p(poly, p: int) -> List[int]:
    return [r for r in range(p) if _eval_mod(poly, r, p) == 0]


# ---------------- counting ----------------
class FibrationCount(NamedTuple):
    model: str
    p: int
    traces: Dict[str, int]
    components: Dict[str, int]
    smooth_count: int
    algebraic_trace: int
    residual: int

    @property
    def weil_ok(self) -> bool:
        return abs(self.residual) <= 22 * self.p


def count_fibration(curve: WeierstrassCurve, p: int, config: Optional[FiberConfiguration] = None) -> FibrationCount:
    """Fiberwise count of the smooth minimal model over F_p."""
    if not is_good_prime(curve, p):
        raise BadPrimeError(f"{p} is bad for {curve.label}")
    weight = surface_weight(curve)
    config = config or fiber_configuration(curve)
    points = list(range(p)) + [INFINITY]
    traces = dict(zip(map(str, points), map_ordered(lambda t0: local_trace(fiber_model(curve, p, t0, weight))[0], points)))

    components: Dict[str, int] = {}
    places = {place.label: place for place in places_of(curve)}
    for fiber in config.fibers:
        place = places[fiber.place]
        if not _is_minimal(curve, place, weight):
            raise UnsupportedCaseError(f"{curve.label} is not minimal at {place.label}")
        if place.poly is None:
            components[INFINITY] = stable_components(fiber, curve, None, None, p, weight)
            continue
        for root in _roots_mod_p(place.poly, p):
            components[str(root)] = stable_components(fiber, curve, place.poly, root, p, weight)

    algebraic = 2 + sum(r - 1 for r in components.values())
    residual = -sum(traces.values())
    smooth = 1 + p * p + p * algebraic + residual
    LOGGER.debug(f"{curve.label} over F_{p}: {smooth} points, algebraic {algebraic}, residual {residual}")
    return FibrationCount(curve.label, p, traces, components, smooth, algebraic, residual)


def constant_fibration(curve: WeierstrassCurve) -> WeierstrassCurve:
    """E x P^1 as a Weierstrass model over Q(t)."""
    return WeierstrassCurve(*(sp.Rational(Fraction(a).numerator, Fraction(a).denominator) for a in curve.coefficients),
                            base="Q(t)", label=f"{curve.label} x P1")


# ---------------- the Kummer surface of E x E' ----------------
def two_torsion_count(curve: WeierstrassCurve, p: int) -> int:
    """#E[2](F_p) for y^2 = x^3 + a2 x^2 + a4 x."""
    a2, a4 = _mod(curve.a2, p), _mod(curve.a4, p)
    return 1 + _cubic_roots_general(1, a2, a4, 0, p)


def _cubic_roots_general(c3: int, c2: int, c1: int, c0: int, p: int) -> int:
    xs = np.arange(p, dtype=np.int64)
    values = ((c3 * xs % p + c2) % p * xs % p + c1) % p * xs % p + c0
    return int(np.count_nonzero(values % p == 0))


class KummerCheck(NamedTuple):
    p: int
    counted: int
    expected: int
    a_e: int
    a_e_prime: int

    @property
    def passed(self) -> bool:
        return self.counted == self.expected


def kummer_check(kummer: WeierstrassCurve, p: int) -> KummerCheck:
    """#Km(E x E')(F_p) = 1 + p^2 + p (2 + #E[2] #E'[2]) + a_p(E) a_p(E')."""
    count = count_fibration(kummer, p)
    a, a_prime = trace_of_frobenius(E, p), trace_of_frobenius(E_PRIME, p)
    expected = 1 + p * p + p * (2 + two_torsion_count(E, p) * two_torsion_count(E_PRIME, p)) + a * a_prime
    return KummerCheck(p, count.smooth_count, expected, a, a_prime)


def kummer_fiber_types(kummer: WeierstrassCurve) -> Dict[str, str]:
    config = fiber_configuration(kummer)
    return {**config.reducible, "euler": str(config.euler_sum)}


def transcendental_match(curve: WeierstrassCurve, p: int) -> Dict[str, int]:
    """The residual of a fibration with trivial Mordell-Weil rank against a_p(E)^2 - p."""
    a = trace_of_frobenius(E, p)
    return {"residual": count_fibration(curve, p).residual, "sym2": a * a - p}
