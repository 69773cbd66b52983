"""
Finite fields F_p and F_{p^k}.

F_p values are plain ints in [0, p). Extension elements are residue
polynomials modulo a monic irreducible fixed per (p, k) for the process
lifetime; the polynomial arithmetic is sympy's galoistools.
"""

from functools import lru_cache
from itertools import product
from typing import Iterator, Optional, Sequence, Tuple

import numpy as np
from sympy.ntheory import legendre_symbol, sqrt_mod
from sympy.polys.domains import ZZ
from sympy.polys.galoistools import (
    gf_add, gf_from_int_poly, gf_gcdex, gf_irreducible_p, gf_mul, gf_neg,
    gf_pow_mod, gf_rem, gf_strip, gf_sub,
)

from Shimura.helper.exceptions import DomainError, UnsupportedCaseError


def legendre(a: int, p: int) -> int:
    a %= p
    return 0 if a == 0 else legendre_symbol(a, p)


def sqrt_fp(a: int, p: int) -> Optional[int]:
    a %= p
    if a == 0:
        return 0
    root = sqrt_mod(a, p)
    return None if root is None else min(root, p - root)


@lru_cache(maxsize=None)
def character_table(p: int) -> np.ndarray:
    """Quadratic character of F_p as an int64 array indexed by residue."""
    if p == 2:
        raise UnsupportedCaseError("quadratic character needs an odd prime")
    table = -np.ones(p, dtype=np.int64)
    table[0] = 0
    table[(np.arange(1, p, dtype=np.int64) ** 2) % p] = 1
    return table


@lru_cache(maxsize=None)
def nonresidue(p: int) -> int:
    return next(n for n in range(2, p) if legendre(n, p) == -1)


@lru_cache(maxsize=None)
def fixed_modulus(p: int, k: int) -> Tuple[int, ...]:
    """First monic irreducible of degree k over F_p in lexicographic order (high to low)."""
    if k == 2 and p % 2:
        return (1, 0, p - nonresidue(p))
    for tail in product(range(p), repeat=k):
        poly = [1] + list(tail)
        if tail[-1] and gf_irreducible_p(poly, p, ZZ):
            return tuple(poly)
    raise DomainError(f"no irreducible of degree {k} over F_{p}")


class FiniteField:
    """F_{p^k} for a fixed monic irreducible modulus."""

    def __init__(self, p: int, k: int = 1, modulus: Optional[Sequence[int]] = None):
        self.p = p
        self.k = k
        self.modulus = list(modulus) if modulus is not None else list(fixed_modulus(p, k))
        if len(self.modulus) != k + 1 or not gf_irreducible_p(self.modulus, p, ZZ):
            raise DomainError(f"modulus {self.modulus} is not irreducible of degree {k} over F_{p}")
        self.q = p ** k

    def __repr__(self):
        return f"FiniteField({self.p}^{self.k})"

    def __eq__(self, other):
        return isinstance(other, FiniteField) and (self.p, self.modulus) == (other.p, other.modulus)

    def __hash__(self):
        return hash((self.p, tuple(self.modulus)))

    def __call__(self, value) -> "FqElement":
        if isinstance(value, FqElement):
            return value
        if isinstance(value, (list, tuple)):
            # coefficients low to high
            return FqElement(self, gf_from_int_poly(list(reversed(value)), self.p))
        return FqElement(self, gf_from_int_poly([int(value)], self.p))

    @property
    def zero(self) -> "FqElement":
        return FqElement(self, [])

    @property
    def one(self) -> "FqElement":
        return FqElement(self, [1])

    @property
    def gen(self) -> "FqElement":
        return self([0, 1]) if self.k > 1 else self(1)

    def elements(self) -> Iterator["FqElement"]:
        for coeffs in product(range(self.p), repeat=self.k):
            yield self(list(reversed(coeffs)))

    def primitive_element(self) -> "FqElement":
        from sympy import factorint

        order = self.q - 1
        factors = list(factorint(order))
        for a in self.elements():
            if a.is_zero():
                continue
            if all(a ** (order // f) != self.one for f in factors):
                return a
        raise DomainError("no primitive element")


class FqElement:
    __slots__ = ("field", "poly")

    def __init__(self, field: FiniteField, poly):
        self.field = field
        self.poly = tuple(gf_rem(gf_strip(list(poly)), field.modulus, field.p, ZZ))

    @property
    def coeffs(self) -> Tuple[int, ...]:
        """Coefficients low to high, padded to length k."""
        low = tuple(reversed(self.poly))
        return low + (0,) * (self.field.k - len(low))

    def is_zero(self) -> bool:
        return not self.poly

    def __bool__(self):
        return not self.is_zero()

    def _coerce(self, other) -> "FqElement":
        return other if isinstance(other, FqElement) else self.field(other)

    def __add__(self, other):
        return FqElement(self.field, gf_add(list(self.poly), list(self._coerce(other).poly), self.field.p, ZZ))

    __radd__ = __add__

    def __sub__(self, other):
        return FqElement(self.field, gf_sub(list(self.poly), list(self._coerce(other).poly), self.field.p, ZZ))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __neg__(self):
        return FqElement(self.field, gf_neg(list(self.poly), self.field.p, ZZ))

    def __mul__(self, other):
        product_ = gf_mul(list(self.poly), list(self._coerce(other).poly), self.field.p, ZZ)
        return FqElement(self.field, product_)

    __rmul__ = __mul__

    def inverse(self) -> "FqElement":
        if self.is_zero():
            raise DomainError(f"inverse of zero in {self.field}")
        s, _, h = gf_gcdex(list(self.poly), self.field.modulus, self.field.p, ZZ)
        # h is the monic gcd, a nonzero constant here
        scale = pow(int(h[-1]), -1, self.field.p)
        return FqElement(self.field, [c * scale for c in s])

    def __truediv__(self, other):
        return self * self._coerce(other).inverse()

    def __rtruediv__(self, other):
        return self._coerce(other) * self.inverse()

    def __pow__(self, exponent: int):
        if exponent < 0:
            return self.inverse() ** (-exponent)
        return FqElement(self.field, gf_pow_mod(list(self.poly), exponent, self.field.modulus, self.field.p, ZZ))

    def frobenius(self) -> "FqElement":
        return self ** self.field.p

    def is_square(self) -> bool:
        return self.is_zero() or self ** ((self.field.q - 1) // 2) == self.field.one

    def chi(self) -> int:
        if self.is_zero():
            return 0
        return 1 if self.is_square() else -1

    def sqrt(self) -> Optional["FqElement"]:
        if self.is_zero():
            return self
        if not self.is_square():
            return None
        for candidate in self.field.elements():
            if candidate * candidate == self:
                return candidate
        return None

    def __eq__(self, other):
        if isinstance(other, int):
            other = self.field(other)
        if not isinstance(other, FqElement):
            return NotImplemented
        return self.field == other.field and self.poly == other.poly

    def __hash__(self):
        return hash((self.field.p, self.poly))

    def __repr__(self):
        return f"FqElement({list(self.coeffs)} in {self.field})"

    def to_int(self) -> int:
        if len(self.poly) > 1:
            raise DomainError(f"{self} does not lie in the prime field")
        return int(self.poly[0]) if self.poly else 0


@lru_cache(maxsize=None)
def field(p: int, k: int = 1) -> FiniteField:
    return FiniteField(p, k)


def quadratic_extension_arrays(p: int) -> Tuple[np.ndarray, np.ndarray, int]:
    """All elements of F_{p^2} = F_p[w]/(w^2 - n) as (a, b) int64 arrays with the nonresidue n."""
    a, b = np.meshgrid(np.arange(p, dtype=np.int64), np.arange(p, dtype=np.int64), indexing="ij")
    return a.ravel(), b.ravel(), nonresidue(p)


def fq2_mul(a0, a1, b0, b1, n: int, p: int):
    """(a0 + a1 w)(b0 + b1 w) with w^2 = n, vectorised over numpy arrays."""
    return (a0 * b0 + n * (a1 * b1 % p)) % p, (a0 * b1 + a1 * b0) % p
