"""
Exact arithmetic in Q(zeta_20).

Elements are kept in the power basis 1, z, ..., z^7 modulo
Phi_20 = z^8 - z^6 + z^4 - z^2 + 1, as integer numerators over one
positive common denominator.
"""

from fractions import Fraction
from functools import lru_cache
from math import gcd
from typing import Iterable, List, Sequence

import mpmath
from sympy.ntheory import primitive_root

from Shimura.helper.exceptions import BadPrimeError, DomainError

DEGREE = 8
UNITS_MOD_20 = (1, 3, 7, 9, 11, 13, 17, 19)


def _reduce(raw: List[int]) -> List[int]:
    # z^8 = z^6 - z^4 + z^2 - 1
    for d in range(len(raw) - 1, DEGREE - 1, -1):
        c = raw[d]
        if c:
            raw[d - 2] += c
            raw[d - 4] -= c
            raw[d - 6] += c
            raw[d - 8] -= c
        raw[d] = 0
    return raw[:DEGREE]


class CycloElement:
    __slots__ = ("num", "den")

    def __init__(self, coeffs: Iterable = (), den: int = 1):
        values = [Fraction(c) / den for c in coeffs]
        if len(values) > DEGREE:
            values = _fraction_reduce(values)
        values += [Fraction(0)] * (DEGREE - len(values))
        common = 1
        for v in values:
            common = common * v.denominator // gcd(common, v.denominator)
        self._set([int(v * common) for v in values], common)

    def _set(self, num: Sequence[int], den: int):
        if den < 0:
            num, den = [-c for c in num], -den
        g = den
        for c in num:
            g = gcd(g, c)
            if g == 1:
                break
        if g > 1:
            num, den = [c // g for c in num], den // g
        self.num = tuple(num)
        self.den = den

    @classmethod
    def _raw(cls, num: Sequence[int], den: int = 1) -> "CycloElement":
        obj = cls.__new__(cls)
        obj._set(list(num), den)
        return obj

    @classmethod
    def from_int(cls, value) -> "CycloElement":
        value = Fraction(value)
        return cls._raw([value.numerator] + [0] * (DEGREE - 1), value.denominator)

    # ---------------- basic protocol ----------------
    @property
    def coeffs(self) -> List[Fraction]:
        return [Fraction(c, self.den) for c in self.num]

    def is_zero(self) -> bool:
        return not any(self.num)

    def is_rational(self) -> bool:
        return not any(self.num[1:])

    def __bool__(self):
        return not self.is_zero()

    def __eq__(self, other):
        if not isinstance(other, CycloElement):
            try:
                other = CycloElement.from_int(other)
            except (TypeError, ValueError):
                return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        return hash((self.num, self.den))

    def __repr__(self):
        return f"CycloElement({self})"

    def __str__(self):
        parts = []
        for i, c in enumerate(self.coeffs):
            if not c:
                continue
            mono = "" if i == 0 else ("z" if i == 1 else f"z^{i}")
            if not mono:
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append(f"-{mono}")
            else:
                parts.append(f"{c}*{mono}")
        return " + ".join(parts).replace("+ -", "- ") if parts else "0"

    # ---------------- arithmetic ----------------
    @staticmethod
    def _coerce(other) -> "CycloElement":
        if isinstance(other, CycloElement):
            return other
        return CycloElement.from_int(other)

    def __add__(self, other):
        other = self._coerce(other)
        den = self.den * other.den // gcd(self.den, other.den)
        ma, mb = den // self.den, den // other.den
        return CycloElement._raw([a * ma + b * mb for a, b in zip(self.num, other.num)], den)

    __radd__ = __add__

    def __neg__(self):
        return CycloElement._raw([-a for a in self.num], self.den)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Fraction(other)
            return CycloElement._raw([a * other.numerator for a in self.num], self.den * other.denominator)
        other = self._coerce(other)
        raw = [0] * (2 * DEGREE - 1)
        for i, a in enumerate(self.num):
            if a:
                for j, b in enumerate(other.num):
                    if b:
                        raw[i + j] += a * b
        return CycloElement._raw(_reduce(raw), self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        return self * self._coerce(other).inverse()

    def __rtruediv__(self, other):
        return self._coerce(other) * self.inverse()

    def __pow__(self, exponent: int):
        if exponent < 0:
            return self.inverse() ** (-exponent)
        result, base = ONE, self
        while exponent:
            if exponent & 1:
                result = result * base
            base = base * base
            exponent >>= 1
        return result

    def multiplication_matrix(self) -> List[List[Fraction]]:
        """Columns are the coordinates of self * z^j."""
        columns = []
        for j in range(DEGREE):
            columns.append((self * zeta20(j)).coeffs)
        return [[columns[j][i] for j in range(DEGREE)] for i in range(DEGREE)]

    def inverse(self) -> "CycloElement":
        if self.is_zero():
            raise DomainError("inverse of zero in Q(zeta_20)")
        if self.is_rational():
            return CycloElement.from_int(1 / self.coeffs[0])
        matrix = self.multiplication_matrix()
        rhs = [Fraction(1)] + [Fraction(0)] * (DEGREE - 1)
        return CycloElement(_solve_fraction(matrix, rhs))

    # ---------------- automorphisms ----------------
    def galois(self, k: int) -> "CycloElement":
        """Image under z -> z^k, k a unit mod 20."""
        if gcd(k, 20) != 1:
            raise DomainError(f"{k} is not a unit mod 20")
        result = ZERO
        for i, c in enumerate(self.coeffs):
            if c:
                result = result + zeta20(i * k) * c
        return result

    def conjugate(self) -> "CycloElement":
        return self.galois(19)

    # ---------------- maps out ----------------
    def embed_complex(self, precision: int = 53) -> complex:
        return embed_complex(self, precision)

    def reduce_mod_p(self, p: int, root: int) -> int:
        return reduce_mod_p(self, p, root)


def _fraction_reduce(values: List[Fraction]) -> List[Fraction]:
    common = 1
    for v in values:
        common = common * v.denominator // gcd(common, v.denominator)
    raw = _reduce([int(v * common) for v in values])
    return [Fraction(c, common) for c in raw]


def _solve_fraction(matrix: List[List[Fraction]], rhs: List[Fraction]) -> List[Fraction]:
    n = len(matrix)
    aug = [row[:] + [rhs[i]] for i, row in enumerate(matrix)]
    for col in range(n):
        pivot = next(r for r in range(col, n) if aug[r][col] != 0)
        aug[col], aug[pivot] = aug[pivot], aug[col]
        inv = 1 / aug[col][col]
        aug[col] = [v * inv for v in aug[col]]
        for r in range(n):
            if r != col and aug[r][col] != 0:
                factor = aug[r][col]
                aug[r] = [a - factor * b for a, b in zip(aug[r], aug[col])]
    return [aug[r][n] for r in range(n)]


@lru_cache(maxsize=None)
def zeta20(k: int) -> CycloElement:
    k %= 20
    sign = 1
    if k >= 10:
        k, sign = k - 10, -1
    raw = [0] * 10
    raw[k] = sign
    return CycloElement._raw(_reduce(raw), 1)


ZERO = CycloElement._raw([0] * DEGREE, 1)
ONE = CycloElement.from_int(1)
ZETA = zeta20(1)
I = zeta20(5)
ZETA5 = zeta20(4)
ETA = ZETA5 + ZETA5 ** 4
DELTA = ZETA5 - ZETA5 ** 4
SQRT5 = 2 * ETA + 1
PHI = (1 + SQRT5) / 2
ALPHA = ZETA5 ** 3 + ZETA5 ** 2 - 1


def cyclo(value) -> CycloElement:
    if isinstance(value, CycloElement):
        return value
    return CycloElement.from_int(value)


def gaussian(re, im) -> CycloElement:
    return cyclo(re) + I * Fraction(im)


def embed_complex(a: CycloElement, precision: int = 53) -> complex:
    """Complex value under z -> exp(pi i / 10), accurate to 2^-precision."""
    with mpmath.workprec(precision + 16):
        root = mpmath.expjpi(mpmath.mpf(1) / 10)
        value = mpmath.mpc(0)
        power = mpmath.mpc(1)
        for c in a.coeffs:
            if c:
                value += mpmath.mpf(c.numerator) / c.denominator * power
            power *= root
        return complex(value)


@lru_cache(maxsize=None)
def phi20_roots(p: int) -> tuple:
    """Roots of Phi_20 in F_p for p = 1 mod 20, listed as r^k for the units k mod 20."""
    if p % 20 != 1:
        raise BadPrimeError(f"{p} is not 1 mod 20")
    r = pow(primitive_root(p), (p - 1) // 20, p)
    return tuple(pow(r, k, p) for k in UNITS_MOD_20)


def reduce_mod_p(a: CycloElement, p: int, root: int) -> int:
    if a.den % p == 0:
        raise BadPrimeError(f"denominator {a.den} divisible by {p}")
    value, power = 0, 1
    for c in a.num:
        value = (value + c * power) % p
        power = power * root % p
    return value * pow(a.den, -1, p) % p
