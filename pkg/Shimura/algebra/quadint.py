"""Elements of Q(phi), phi = (1 + sqrt 5)/2, and the splitting of primes in Z[phi]."""

from fractions import Fraction
from typing import List, NamedTuple, Optional

from sympy.ntheory import sqrt_mod

from Shimura.algebra.cyclo import PHI, CycloElement
from Shimura.helper.exceptions import BadPrimeError, DomainError


class QuadInt:
    """a + b*phi with rational parts; integral (in Z[phi]) when both parts are integers."""

    __slots__ = ("a", "b")

    def __init__(self, a=0, b=0):
        self.a = Fraction(a)
        self.b = Fraction(b)

    @classmethod
    def coerce(cls, value) -> "QuadInt":
        return value if isinstance(value, QuadInt) else cls(value)

    @classmethod
    def from_sqrt5(cls, x, y) -> "QuadInt":
        """x + y*sqrt(5), using sqrt(5) = 2*phi - 1."""
        return cls(Fraction(x) - Fraction(y), 2 * Fraction(y))

    def is_integral(self) -> bool:
        return self.a.denominator == 1 and self.b.denominator == 1

    def is_rational(self) -> bool:
        return self.b == 0

    def norm(self) -> Fraction:
        return self.a * self.a + self.a * self.b - self.b * self.b

    def trace(self) -> Fraction:
        return 2 * self.a + self.b

    def conjugate(self) -> "QuadInt":
        # phi -> 1 - phi
        return QuadInt(self.a + self.b, -self.b)

    def __add__(self, other):
        other = QuadInt.coerce(other)
        return QuadInt(self.a + other.a, self.b + other.b)

    __radd__ = __add__

    def __neg__(self):
        return QuadInt(-self.a, -self.b)

    def __sub__(self, other):
        return self + (-QuadInt.coerce(other))

    def __rsub__(self, other):
        return QuadInt.coerce(other) - self

    def __mul__(self, other):
        other = QuadInt.coerce(other)
        bd = self.b * other.b
        return QuadInt(self.a * other.a + bd, self.a * other.b + self.b * other.a + bd)

    __rmul__ = __mul__

    def inverse(self) -> "QuadInt":
        n = self.norm()
        if n == 0:
            raise DomainError("inverse of zero in Q(sqrt 5)")
        conj = self.conjugate()
        return QuadInt(conj.a / n, conj.b / n)

    def __truediv__(self, other):
        return self * QuadInt.coerce(other).inverse()

    def __rtruediv__(self, other):
        return QuadInt.coerce(other) * self.inverse()

    def __pow__(self, exponent: int):
        if exponent < 0:
            return self.inverse() ** (-exponent)
        result, base = QuadInt(1), self
        while exponent:
            if exponent & 1:
                result = result * base
            base = base * base
            exponent >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = QuadInt(other)
        if not isinstance(other, QuadInt):
            return NotImplemented
        return self.a == other.a and self.b == other.b

    def __hash__(self):
        return hash((self.a, self.b))

    def __bool__(self):
        return bool(self.a) or bool(self.b)

    def __repr__(self):
        return f"QuadInt({self.a}, {self.b})"

    def __str__(self):
        if not self.b:
            return str(self.a)
        return f"{self.a} + {self.b}*phi".replace("+ -", "- ")

    def denominator(self) -> int:
        return self.a.denominator * self.b.denominator // _gcd(self.a.denominator, self.b.denominator)

    def to_cyclo(self) -> CycloElement:
        return PHI * self.b + self.a

    def real_embeddings(self) -> tuple:
        """Values under phi -> (1 + sqrt 5)/2 and phi -> (1 - sqrt 5)/2."""
        root5 = 5 ** 0.5
        return (float(self.a) + float(self.b) * (1 + root5) / 2,
                float(self.a) + float(self.b) * (1 - root5) / 2)


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return a


class PrimeIdeal(NamedTuple):
    p: int
    norm: int
    # image of phi in F_p for degree-one primes, None for inert primes
    phi: Optional[int]
    kind: str


def quad_splitting(p: int) -> List[PrimeIdeal]:
    """Prime ideals of Z[phi] above p, via the factorisation of x^2 - x - 1 mod p."""
    if p == 5:
        return [PrimeIdeal(5, 5, 3, "ramified")]
    if p == 2:
        return [PrimeIdeal(2, 4, None, "inert")]
    if p % 5 in (1, 4):
        # x^2 - x - 1 = 0  <=>  (2x - 1)^2 = 5
        roots = sorted(sqrt_mod(5, p, all_roots=True))
        phis = sorted((1 + r) * pow(2, -1, p) % p for r in roots)
        return [PrimeIdeal(p, p, phi, "split") for phi in phis]
    return [PrimeIdeal(p, p * p, None, "inert")]


def splitting_type(p: int) -> str:
    return quad_splitting(p)[0].kind


def reduce_quad(value: QuadInt, ideal: PrimeIdeal):
    """Residue of value modulo a prime ideal: an int for degree-one primes, an (x, y) pair x + y*phi otherwise."""
    den = value.denominator()
    if den % ideal.p == 0:
        raise BadPrimeError(f"denominator {den} divisible by {ideal.p}")
    p = ideal.p
    a = value.a.numerator * pow(value.a.denominator, -1, p) % p
    b = value.b.numerator * pow(value.b.denominator, -1, p) % p
    if ideal.phi is not None:
        return (a + b * ideal.phi) % p
    return (a, b)


def prime_ideals_up_to(bound: int) -> List[PrimeIdeal]:
    from sympy import primerange

    ideals = []
    for p in primerange(2, bound + 1):
        for ideal in quad_splitting(p):
            if ideal.norm <= bound:
                ideals.append(ideal)
    return sorted(ideals, key=lambda ideal: (ideal.norm, ideal.phi if ideal.phi is not None else -1))
