"""Coefficient domains plugged into MultiPoly, univariate helpers and ExactMatrix."""

from fractions import Fraction
from typing import Any

from Shimura.algebra.cyclo import ONE, ZERO, CycloElement, cyclo, reduce_mod_p
from Shimura.algebra.finite import FiniteField
from Shimura.helper.exceptions import DomainError


class Domain:
    name = "domain"
    characteristic = 0

    def convert(self, value) -> Any:
        raise NotImplementedError

    @property
    def zero(self):
        return self.convert(0)

    @property
    def one(self):
        return self.convert(1)

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def neg(self, a):
        return -a

    def inv(self, a):
        if self.is_zero(a):
            raise DomainError(f"inverse of zero in {self.name}")
        return 1 / a

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def is_zero(self, a) -> bool:
        return not a

    def to_str(self, a) -> str:
        return str(a)

    def __repr__(self):
        return self.name

    def __eq__(self, other):
        return isinstance(other, Domain) and self.name == other.name

    def __hash__(self):
        return hash(self.name)


class RationalField(Domain):
    name = "QQ"

    def convert(self, value) -> Fraction:
        if isinstance(value, CycloElement):
            if not value.is_rational():
                raise DomainError(f"{value} is not rational")
            return value.coeffs[0]
        return Fraction(value)

    def inv(self, a):
        if not a:
            raise DomainError("inverse of zero in QQ")
        return 1 / Fraction(a)


class PrimeField(Domain):
    def __init__(self, p: int):
        self.p = p
        self.characteristic = p
        self.name = f"GF({p})"

    def convert(self, value) -> int:
        if isinstance(value, Fraction):
            if value.denominator % self.p == 0:
                raise DomainError(f"{value} has a denominator divisible by {self.p}")
            return value.numerator * pow(value.denominator, -1, self.p) % self.p
        return int(value) % self.p

    def add(self, a, b):
        return (a + b) % self.p

    def sub(self, a, b):
        return (a - b) % self.p

    def mul(self, a, b):
        return a * b % self.p

    def neg(self, a):
        return -a % self.p

    def inv(self, a):
        if a % self.p == 0:
            raise DomainError(f"inverse of zero in {self.name}")
        return pow(a, -1, self.p)


class CycloField(Domain):
    name = "QQ(zeta20)"

    def convert(self, value) -> CycloElement:
        return cyclo(value)

    @property
    def zero(self):
        return ZERO

    @property
    def one(self):
        return ONE

    def inv(self, a):
        return a.inverse()

    def reducer(self, p: int, root: int):
        return lambda a: reduce_mod_p(a, p, root)


class ExtensionField(Domain):
    def __init__(self, base: FiniteField):
        self.base = base
        self.characteristic = base.p
        self.name = f"GF({base.p}^{base.k})"

    def convert(self, value):
        return self.base(value)

    def inv(self, a):
        return a.inverse()


QQ = RationalField()
CYCLO = CycloField()


def GF(p: int) -> PrimeField:
    return PrimeField(p)
