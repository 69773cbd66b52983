"""
Weierstrass models y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6.

Coefficients are any exact field elements with Python arithmetic: Fraction
over Q, QuadInt over Q(sqrt 5), sympy expressions over Q(t). Points are
(x, y) tuples with None for the point at infinity.
"""

from fractions import Fraction
from typing import List, NamedTuple, Optional, Sequence, Tuple

from Shimura.algebra.quadint import QuadInt
from Shimura.helper.exceptions import DomainError
from Shimura.logger import LOGGER

Point = Optional[Tuple]


class Invariants(NamedTuple):
    c4: object
    c6: object
    discriminant: object
    j: object


class WeierstrassCurve:
    __slots__ = ("a1", "a2", "a3", "a4", "a6", "base", "label")

    def __init__(self, a1=0, a2=0, a3=0, a4=0, a6=0, base: str = "QQ", label: str = ""):
        if base == "QQ":
            a1, a2, a3, a4, a6 = (Fraction(a) for a in (a1, a2, a3, a4, a6))
        elif base == "Q(sqrt5)":
            a1, a2, a3, a4, a6 = (QuadInt.coerce(a) for a in (a1, a2, a3, a4, a6))
        self.a1, self.a2, self.a3, self.a4, self.a6 = a1, a2, a3, a4, a6
        self.base = base
        self.label = label

    @classmethod
    def short(cls, a4, a6, base: str = "QQ", label: str = "") -> "WeierstrassCurve":
        return cls(0, 0, 0, a4, a6, base, label)

    @property
    def coefficients(self) -> Tuple:
        return self.a1, self.a2, self.a3, self.a4, self.a6

    # ---------------- invariants ----------------
    @property
    def b2(self):
        return self.a1 * self.a1 + 4 * self.a2

    @property
    def b4(self):
        return 2 * self.a4 + self.a1 * self.a3

    @property
    def b6(self):
        return self.a3 * self.a3 + 4 * self.a6

    @property
    def b8(self):
        a1, a2, a3, a4, a6 = self.coefficients
        return a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4

    @property
    def c4(self):
        return self.b2 * self.b2 - 24 * self.b4

    @property
    def c6(self):
        b2 = self.b2
        return -b2 * b2 * b2 + 36 * b2 * self.b4 - 216 * self.b6

    @property
    def discriminant(self):
        b2, b4, b6, b8 = self.b2, self.b4, self.b6, self.b8
        return -b2 * b2 * b8 - 8 * b4 * b4 * b4 - 27 * b6 * b6 + 9 * b2 * b4 * b6

    @property
    def j(self):
        disc = self.discriminant
        if not disc:
            raise DomainError(f"singular model {self}")
        c4 = self.c4
        return c4 * c4 * c4 / disc

    def __repr__(self):
        return f"WeierstrassCurve{list(map(str, self.coefficients))} over {self.base}"

    def __eq__(self, other):
        return isinstance(other, WeierstrassCurve) and self.coefficients == other.coefficients

    def __hash__(self):
        return hash(tuple(str(a) for a in self.coefficients))

    # ---------------- group law ----------------
    def contains(self, point: Point) -> bool:
        if point is None:
            return True
        x, y = point
        a1, a2, a3, a4, a6 = self.coefficients
        return y * y + a1 * x * y + a3 * y - (x * x * x + a2 * x * x + a4 * x + a6) == 0

    def negate(self, point: Point) -> Point:
        if point is None:
            return None
        x, y = point
        return x, -y - self.a1 * x - self.a3

    def add(self, p: Point, q: Point) -> Point:
        if p is None:
            return q
        if q is None:
            return p
        a1, a2, a3, a4, a6 = self.coefficients
        x1, y1 = p
        x2, y2 = q
        if x1 == x2:
            if y1 + y2 + a1 * x2 + a3 == 0:
                return None
            slope = (3 * x1 * x1 + 2 * a2 * x1 + a4 - a1 * y1) / (2 * y1 + a1 * x1 + a3)
            intercept = (-x1 * x1 * x1 + a4 * x1 + 2 * a6 - a3 * y1) / (2 * y1 + a1 * x1 + a3)
        else:
            slope = (y2 - y1) / (x2 - x1)
            intercept = (y1 * x2 - y2 * x1) / (x2 - x1)
        x3 = slope * slope + a1 * slope - a2 - x1 - x2
        y3 = -(slope + a1) * x3 - intercept - a3
        return x3, y3

    def multiply(self, n: int, point: Point) -> Point:
        if n < 0:
            return self.multiply(-n, self.negate(point))
        result, base = None, point
        while n:
            if n & 1:
                result = self.add(result, base)
            base = self.add(base, base)
            n >>= 1
        return result

    def multiples(self, point: Point, bound: int) -> List[Point]:
        """P, 2P, ... up to the first return to infinity or `bound` terms."""
        out, current = [], point
        while current is not None and len(out) < bound:
            out.append(current)
            current = self.add(current, point)
        return out


def invariants(curve: WeierstrassCurve) -> Invariants:
    disc = curve.discriminant
    c4 = curve.c4
    return Invariants(c4, curve.c6, disc, c4 * c4 * c4 / disc if disc else None)


def point_order(curve: WeierstrassCurve, point: Point, bound: int = 100):
    """Exact order of a point, or the string '>=bound' when none is found below the bound."""
    if not curve.contains(point):
        raise DomainError(f"{point} is not on {curve}")
    if point is None:
        return 1
    # multiples stops before infinity, so an order n point gives n - 1 terms
    multiples = curve.multiples(point, bound)
    if len(multiples) < bound:
        return len(multiples) + 1
    return f">={bound}"


def legendre_j(lam):
    """j of y^2 = x(x - 1)(x - lam)."""
    if lam == 0 or lam == 1:
        raise DomainError(f"degenerate Legendre parameter {lam}")
    s = lam * lam - lam + 1
    return 256 * s * s * s / (lam * lam * (lam - 1) * (lam - 1))


def short_form(curve: WeierstrassCurve) -> Tuple[WeierstrassCurve, Tuple]:
    """y^2 = x^3 - c4/48 x - c6/864 and the change (1, r, s, t) reaching it."""
    r = -curve.b2 / 12
    s = -curve.a1 / 2
    t = -(curve.a1 * r + curve.a3) / 2
    short = WeierstrassCurve.short(-curve.c4 / 48, -curve.c6 / 864, curve.base, curve.label)
    return short, (1, r, s, t)


def quadratic_twist(curve: WeierstrassCurve, d) -> WeierstrassCurve:
    """y^2 = x^3 - 27 c4 d^2 x - 54 c6 d^3."""
    if d == 0:
        raise DomainError("twist by zero")
    return WeierstrassCurve.short(-27 * curve.c4 * d * d, -54 * curve.c6 * d * d * d, curve.base,
                                  f"{curve.label}^({d})")


def with_j(j, base: str = "QQ", label: str = "") -> WeierstrassCurve:
    """y^2 = x^3 + 3jk x + 2jk^2 with k = 1728 - j; needs j != 0, 1728."""
    if j == 0 or j == 1728:
        raise DomainError(f"j = {j} needs its own model")
    k = 1728 - j
    return WeierstrassCurve.short(3 * j * k, 2 * j * k * k, base, label)


# ---------------- Velu ----------------
class Isogeny(NamedTuple):
    domain: WeierstrassCurve
    codomain: WeierstrassCurve
    degree: int
    kernel: List[Point]

    def image(self, point: Point) -> Point:
        return velu_image(self.domain, self.kernel, point)


def _velu_terms(curve: WeierstrassCurve, kernel: Sequence[Point]):
    a1, a2, a3, a4, _ = curve.coefficients
    chosen, seen = [], set()
    for q in kernel:
        if q is None or q in seen:
            continue
        neg = curve.negate(q)
        seen.update({q, neg})
        xq, yq = q
        gx = 3 * xq * xq + 2 * a2 * xq + a4 - a1 * yq
        gy = -2 * yq - a1 * xq - a3
        tq = gx if neg == q else 2 * gx - a1 * gy
        chosen.append((xq, yq, gx, gy, tq, gy * gy))
    return chosen


def velu_isogeny(curve: WeierstrassCurve, generator: Point, bound: int = 100) -> Isogeny:
    """Isogeny with kernel generated by a point of finite order, codomain by Velu's formulas."""
    order = point_order(curve, generator, bound)
    if isinstance(order, str):
        raise DomainError(f"{generator} has no small finite order")
    kernel = [None] + curve.multiples(generator, order)
    terms = _velu_terms(curve, kernel)
    t = sum((tq for *_, tq, _ in terms), 0 * curve.a4)
    w = sum((uq + xq * tq for xq, _, _, _, tq, uq in terms), 0 * curve.a4)
    codomain = WeierstrassCurve(curve.a1, curve.a2, curve.a3, curve.a4 - 5 * t, curve.a6 - curve.b2 * t - 7 * w,
                                curve.base, f"{curve.label}/<{generator}>")
    return Isogeny(curve, codomain, order, kernel)


def velu_image(curve: WeierstrassCurve, kernel: Sequence[Point], point: Point) -> Point:
    if point is None or point in kernel:
        return None
    a1, a3 = curve.a1, curve.a3
    x, y = point
    X, Y = x, y
    for xq, yq, gx, gy, tq, uq in _velu_terms(curve, kernel):
        d = x - xq
        X = X + tq / d + uq / (d * d)
        Y = Y - (uq * (2 * y + a1 * x + a3) / (d * d * d) + tq * (a1 * d + y - yq) / (d * d)
                 + (a1 * uq - gx * gy) / (d * d))
    return X, Y


def velu_chain(curve: WeierstrassCurve, generator: Point, steps: Sequence[int], bound: int = 100) -> List[Isogeny]:
    """Factor <P> into prime-order steps in the given order, pushing P through each step."""
    order = point_order(curve, generator, bound)
    if isinstance(order, str):
        raise DomainError(f"{generator} has no small finite order")
    remaining = order
    chain = []
    current, point = curve, generator
    for ell in steps:
        if remaining % ell:
            raise DomainError(f"step {ell} does not divide the remaining order {remaining}")
        remaining //= ell
        step = velu_isogeny(current, current.multiply(remaining, point), bound)
        chain.append(step)
        current, point = step.codomain, step.image(point)
    if remaining != 1:
        raise DomainError(f"steps {list(steps)} leave order {remaining}")
    LOGGER.debug(f"Velu chain {list(steps)} from {curve.label}: j = {current.j}")
    return chain


# ---------------- the curves of the Shimura curve covers ----------------
E = WeierstrassCurve(0, 1, 0, -1, 0, label="E")
E_PRIME = WeierstrassCurve(0, 22, 0, 125, 0, label="E'")
E_TORSION_POINT = (Fraction(-1), Fraction(1))
J_E = Fraction(16384, 5)
J_E_PRIME = Fraction(-2 ** 4 * 109 ** 3, 5 ** 6)
