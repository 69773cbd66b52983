"""
Elliptic curves over Q(t): Kodaira fibers by Tate's algorithm over the local
rings of P^1 (residue characteristic 0, so the valuations of c4, c6 and the
discriminant of a minimal model decide the type), reduction of a plane cubic
with a rational point to Weierstrass form, and admissible isomorphisms.
"""

from math import ceil
from typing import Dict, List, NamedTuple, Optional, Sequence, Tuple

import sympy as sp

from Shimura.arithmetic.weierstrass import WeierstrassCurve, short_form
from Shimura.helper.exceptions import DomainError, ProfileMismatchError, ResourceBudgetError
from Shimura.logger import LOGGER

T = sp.Symbol("t")
INFINITY = "inf"


def curve_over_qt(a1=0, a2=0, a3=0, a4=0, a6=0, variable: sp.Symbol = T, label: str = "") -> WeierstrassCurve:
    coeffs = [sp.sympify(a) for a in (a1, a2, a3, a4, a6)]
    if variable != T:
        coeffs = [c.subs(variable, T) for c in coeffs]
    return WeierstrassCurve(*coeffs, base="Q(t)", label=label)


def simplify(expr):
    return sp.cancel(sp.together(expr))


def base_change(curve: WeierstrassCurve, image) -> WeierstrassCurve:
    """Pull back along t -> image(t)."""
    return WeierstrassCurve(*(simplify(sp.sympify(a).subs(T, image)) for a in curve.coefficients),
                            base="Q(t)", label=f"{curve.label}|t->{image}")


# ---------------- places and valuations ----------------
class Place(NamedTuple):
    label: str
    poly: Optional[sp.Expr]
    degree: int

    @classmethod
    def at(cls, t0) -> "Place":
        if t0 == INFINITY:
            return cls(INFINITY, None, 1)
        return cls(str(t0), T - sp.sympify(t0), 1)


def _multiplicity(poly: sp.Poly, factor: sp.Poly) -> int:
    if poly.is_zero:
        return 10 ** 9
    v = 0
    while True:
        q, r = sp.div(poly, factor)
        if not r.is_zero:
            return v
        poly, v = q, v + 1


def valuation(expr, place: Place) -> int:
    expr = simplify(expr)
    if expr == 0:
        return 10 ** 9
    num, den = sp.fraction(expr)
    num, den = sp.Poly(num, T), sp.Poly(den, T)
    if place.poly is None:
        return den.degree() - num.degree()
    factor = sp.Poly(place.poly, T)
    return _multiplicity(num, factor) - _multiplicity(den, factor)


def surface_weight(curve: WeierstrassCurve) -> int:
    """Smallest N with deg a_i <= i N: 0 for a constant family, 1 for rational elliptic surfaces, 2 for K3."""
    weight = 0
    for i, a in zip((1, 2, 3, 4, 6), curve.coefficients):
        a = simplify(a)
        if a != 0:
            num, den = sp.fraction(a)
            if sp.Poly(den, T).degree() > 0:
                raise DomainError(f"a{i} = {a} is not a polynomial in t")
            weight = max(weight, ceil(sp.Poly(num, T).degree() / i))
    return weight


# ---------------- Kodaira types ----------------
class KodairaType(NamedTuple):
    symbol: str
    n: int
    components: int
    euler: int

    def __str__(self):
        return self.symbol


def kodaira(symbol: str, n: int = 0) -> KodairaType:
    if symbol == "I":
        return KodairaType(f"I{n}", n, max(n, 1), n)
    if symbol == "I*":
        return KodairaType(f"I{n}*", n, n + 5, n + 6)
    table = {"II": (1, 2), "III": (2, 3), "IV": (3, 4), "IV*": (7, 8), "III*": (8, 9), "II*": (9, 10)}
    components, euler = table[symbol]
    return KodairaType(symbol, 0, components, euler)


def type_from_valuations(vc4: int, vc6: int, vd: int) -> KodairaType:
    while vc4 >= 4 and vc6 >= 6 and vd >= 12:
        vc4, vc6, vd = vc4 - 4, vc6 - 6, vd - 12
    if vd == 0:
        return kodaira("I", 0)
    if vc4 == 0:
        return kodaira("I", vd)
    if vc4 == 2 and vc6 == 3 and vd > 6:
        return kodaira("I*", vd - 6)
    additive = {2: "II", 3: "III", 4: "IV", 8: "IV*", 9: "III*", 10: "II*"}
    if vd == 6:
        return kodaira("I*", 0)
    if vd in additive:
        return kodaira(additive[vd])
    raise ProfileMismatchError(f"valuations (c4, c6, disc) = ({vc4}, {vc6}, {vd}) fit no Kodaira type")


class LocalFiber(NamedTuple):
    place: str
    degree: int
    kodaira: KodairaType
    split: Optional[bool]


def tate_kodaira(curve: WeierstrassCurve, place, weight: Optional[int] = None) -> LocalFiber:
    """Kodaira type at t = t0 or at infinity; the latter reads the model in s = 1/t with weights i N."""
    place = place if isinstance(place, Place) else Place.at(place)
    c4, c6, disc = simplify(curve.c4), simplify(curve.c6), simplify(curve.discriminant)
    if disc == 0:
        raise DomainError(f"{curve.label} is singular over Q(t)")
    vc4, vc6, vd = valuation(c4, place), valuation(c6, place), valuation(disc, place)
    if place.poly is None:
        n = weight or surface_weight(curve)
        vc4, vc6, vd = vc4 + 4 * n, vc6 + 6 * n, vd + 12 * n
    fiber = type_from_valuations(vc4, vc6, vd)
    split = None
    if fiber.symbol.startswith("I") and not fiber.symbol.endswith("*") and fiber.n > 0 and place.degree == 1:
        split = _split_at(c6, place, vc6)
    return LocalFiber(place.label, place.degree, fiber, split)


def _split_at(c6, place: Place, vc6: int) -> bool:
    """Multiplicative fiber is split iff -c6 has a square leading coefficient at the place."""
    if place.poly is None:
        num, den = sp.fraction(c6)
        lead = sp.LC(num, T) / sp.LC(den, T)
    else:
        t0 = sp.solve(place.poly, T)[0]
        lead = simplify(c6 / place.poly ** vc6).subs(T, t0)
    value = sp.Rational(-lead)
    return value > 0 and all(e % 2 == 0 for e in sp.factorint(value).values())


def places_of(curve: WeierstrassCurve) -> List[Place]:
    disc = simplify(curve.discriminant)
    num, den = sp.fraction(disc)
    places = []
    for part in (num, den):
        _, factors = sp.factor_list(part, T)
        for factor, _ in factors:
            if sp.degree(factor, T) == 1:
                root = sp.solve(factor, T)[0]
                places.append(Place(str(root), T - root, 1))
            elif sp.degree(factor, T) > 1:
                places.append(Place(str(factor), factor, sp.degree(factor, T)))
    places.append(Place(INFINITY, None, 1))
    return places


class FiberConfiguration(NamedTuple):
    label: str
    weight: int
    fibers: List[LocalFiber]

    @property
    def euler_sum(self) -> int:
        return sum(f.degree * f.kodaira.euler for f in self.fibers)

    @property
    def reducible(self) -> Dict[str, str]:
        return {f.place: f.kodaira.symbol for f in self.fibers if f.kodaira.components > 1}

    def nodal_count(self) -> int:
        return sum(f.degree for f in self.fibers if f.kodaira.symbol == "I1")

    def trivial_lattice_rank(self) -> int:
        return 2 + sum(f.degree * (f.kodaira.components - 1) for f in self.fibers)


def fiber_configuration(curve: WeierstrassCurve) -> FiberConfiguration:
    weight = surface_weight(curve)
    fibers = [tate_kodaira(curve, place, weight) for place in places_of(curve)]
    fibers = [f for f in fibers if f.kodaira.symbol != "I0"]
    config = FiberConfiguration(curve.label, weight, fibers)
    LOGGER.info(f"{curve.label}: fibers {config.reducible}, {config.nodal_count()} I1, Euler sum {config.euler_sum}")
    return config


# ---------------- plane cubics ----------------
def nagell_weierstrass(cubic, x: sp.Symbol, y: sp.Symbol, base_point: Tuple = (0, 0)) -> WeierstrassCurve:
    """Weierstrass model over Q(t) of an affine plane cubic with a smooth rational point.

    The tangent at the base point O meets the cubic again at O'. Lines through
    O' cut two further points; the discriminant of that quadratic is a quartic
    in the slope with a root at the tangent slope, which goes to infinity.
    """
    X, Y, m, s = sp.symbols("X Y m s")
    F = sp.expand(sp.sympify(cubic).subs({x: X + base_point[0], y: Y + base_point[1]}, simultaneous=True))
    gx, gy = (simplify(sp.diff(F, v).subs({X: 0, Y: 0})) for v in (X, Y))
    if gx == 0 and gy == 0:
        raise DomainError(f"base point {base_point} is singular")
    on_tangent = sp.Poly(sp.expand(F.subs({X: gy * s, Y: -gx * s}, simultaneous=True)), s)
    c3, c2 = on_tangent.coeff_monomial(s ** 3), on_tangent.coeff_monomial(s ** 2)
    if simplify(c3) == 0:
        raise DomainError("the tangent at the base point meets the cubic at infinity")
    s0 = simplify(-c2 / c3)
    third = (simplify(gy * s0), simplify(-gx * s0))
    vertical = simplify(gy) == 0
    r = sp.Symbol("r")
    direction = (m, 1) if vertical else (1, m)
    G = sp.Poly(sp.expand(F.subs({X: third[0] + r * direction[0], Y: third[1] + r * direction[1]}, simultaneous=True)), r)
    A, B, C = (simplify(G.coeff_monomial(r ** k)) for k in (3, 2, 1))
    disc = sp.expand(simplify(B * B - 4 * A * C))
    slope = simplify(gy / -gx) if vertical else simplify(-gx / gy)
    z = sp.Symbol("z")
    quartic = sp.Poly(sp.expand(simplify(disc.subs(m, slope + 1 / z) * z ** 4)), z)
    if quartic.degree() > 3:
        raise DomainError("the tangent slope is not a root of the discriminant")
    e3, e2, e1, e0 = (simplify(quartic.coeff_monomial(z ** k)) for k in (3, 2, 1, 0))
    if e3 == 0:
        raise DomainError("degenerate discriminant quartic")
    return WeierstrassCurve(0, simplify(e2), 0, simplify(e1 * e3), simplify(e0 * e3 * e3), base="Q(t)",
                            label="nagell")


# ---------------- admissible isomorphisms ----------------
def _rational_root(expr, k: int):
    """An element r of Q(t) with r^k = expr, or None."""
    expr = simplify(expr)
    if expr == 0:
        return sp.Integer(0)
    num, den = sp.fraction(expr)
    root = sp.Integer(1)
    for part, sign in ((num, 1), (den, -1)):
        content, factors = sp.factor_list(part, T)
        for factor, e in factors:
            if e % k:
                return None
            root *= factor ** (sign * (e // k))
        content = sp.Rational(content)
        if content < 0 and k % 2 == 0:
            return None
        p, p_exact = sp.integer_nthroot(abs(content.p), k)
        q, q_exact = sp.integer_nthroot(content.q, k)
        if not (p_exact and q_exact):
            return None
        value = sp.Rational(p, q) * (-1 if content < 0 else 1)
        root *= value ** sign
    return simplify(root)


def compose(first: Tuple, second: Tuple) -> Tuple:
    u1, r1, s1, t1 = first
    u2, r2, s2, t2 = second
    return (simplify(u1 * u2), simplify(r1 + u1 ** 2 * r2), simplify(s1 + u1 * s2),
            simplify(t1 + u1 ** 3 * t2 + s1 * u1 ** 2 * r2))


def invert(change: Tuple) -> Tuple:
    u, r, s, t = change
    return (simplify(1 / u), simplify(-r / u ** 2), simplify(-s / u), simplify((r * s - t) / u ** 3))


def weierstrass_polynomial(curve: WeierstrassCurve, x, y):
    a1, a2, a3, a4, a6 = curve.coefficients
    return y ** 2 + a1 * x * y + a3 * y - x ** 3 - a2 * x ** 2 - a4 * x - a6


def substitution_holds(model_a: WeierstrassCurve, model_b: WeierstrassCurve, change: Tuple) -> bool:
    u, r, s, t = change
    X, Y = sp.symbols("X Y")
    lhs = weierstrass_polynomial(model_a, u ** 2 * X + r, u ** 3 * Y + s * u ** 2 * X + t)
    return simplify(lhs - u ** 6 * weierstrass_polynomial(model_b, X, Y)) == 0


def _degree(expr) -> int:
    num, den = sp.fraction(simplify(expr))
    return max(sp.degree(num, T) if num != 0 else 0, sp.degree(den, T))


def weierstrass_equiv_search(model_a: WeierstrassCurve, model_b: WeierstrassCurve,
                             degree_bound: int = 12) -> Optional[Tuple]:
    """(u, r, s, t) with x_A = u^2 x_B + r, y_A = u^3 y_B + s u^2 x_B + t, or None if the models are not isomorphic over Q(t)."""
    c4a, c6a = simplify(model_a.c4), simplify(model_a.c6)
    c4b, c6b = simplify(model_b.c4), simplify(model_b.c6)
    if simplify(c4a ** 3 * model_b.discriminant - c4b ** 3 * model_a.discriminant) != 0:
        return None
    if c4a != 0 and c6a != 0:
        u = _rational_root(simplify(c6a * c4b / (c6b * c4a)), 2)
    elif c6a == 0:
        u = _rational_root(simplify(c4a / c4b), 4)
    else:
        u = _rational_root(simplify(c6a / c6b), 6)
    if u is None:
        return None
    if simplify(c4a - u ** 4 * c4b) != 0 or simplify(c6a - u ** 6 * c6b) != 0:
        return None
    _, to_short_a = short_form(model_a)
    _, to_short_b = short_form(model_b)
    change = compose(compose(to_short_a, (u, 0, 0, 0)), invert(to_short_b))
    if any(_degree(part) > degree_bound for part in change):
        raise ResourceBudgetError(f"transformation {change} exceeds the degree bound {degree_bound}")
    if not substitution_holds(model_a, model_b, change):
        raise DomainError("transformation fails the substitution check")
    return change


# ---------------- Shioda-Tate ----------------
class ShiodaTate(NamedTuple):
    label: str
    trivial_rank: int
    mordell_weil_rank: int
    declared_rank: int

    @property
    def total(self) -> int:
        return self.trivial_rank + self.mordell_weil_rank

    @property
    def holds(self) -> bool:
        return self.total == self.declared_rank


def shioda_tate_check(config: FiberConfiguration, mordell_weil_rank: int, declared_rank: int) -> ShiodaTate:
    """rho = 2 + sum (m_v - 1) + rank MW; torsion sections add nothing to the rank."""
    result = ShiodaTate(config.label, config.trivial_lattice_rank(), mordell_weil_rank, declared_rank)
    if not result.holds:
        LOGGER.warning(f"{config.label}: {result.trivial_rank} + {mordell_weil_rank} != {declared_rank}")
    return result


# root lattices by rank, for NS(X') = U + A3 + E6 + E8 and T(X') = U + <12>
LATTICE_RANKS = {"U": 2, "A3": 3, "E6": 6, "E8": 8, "<12>": 1}


def lattice_rank(summands: Sequence[str]) -> int:
    return sum(LATTICE_RANKS[s] for s in summands)
