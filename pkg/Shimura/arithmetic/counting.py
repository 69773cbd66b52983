"""
Frobenius traces of Weierstrass models over F_p and F_{p^2}.

Good reduction: a = -sum_x chi(4x^3 + b2 x^2 + 2 b4 x + b6), cross-checked by
enumerating the affine model. Multiplicative reduction: +1 or -1 as the
tangent cone at the node splits or not. Additive reduction: 0.
"""

from fractions import Fraction
from typing import Dict, List, NamedTuple, Optional, Sequence, Tuple

import numpy as np
from sympy import factorint, integer_nthroot, isprime

from Shimura.algebra.finite import character_table, nonresidue
from Shimura.algebra.quadint import PrimeIdeal, QuadInt, quad_splitting, reduce_quad
from Shimura.arithmetic.weierstrass import WeierstrassCurve
from Shimura.helper.exceptions import BadPrimeError, DomainError, UnsupportedCaseError
from Shimura.helper.executor import map_ordered
from Shimura.helper.modal import TraceTableModel


class FqArrays:
    """F_p (k = 1) or F_p[w]/(w^2 - n) (k = 2) with elements as pairs of int64 arrays."""

    def __init__(self, p: int, k: int = 1, n: Optional[int] = None):
        if p == 2:
            raise UnsupportedCaseError("point counts in characteristic 2")
        if k not in (1, 2):
            raise DomainError(f"F_{p}^{k} is not supported")
        self.p, self.k = p, k
        self.q = p ** k
        self.n = (n if n is not None else nonresidue(p)) % p
        self.chars = character_table(p)

    def elements(self) -> Tuple[np.ndarray, np.ndarray]:
        if self.k == 1:
            return np.arange(self.p, dtype=np.int64), np.zeros(self.p, dtype=np.int64)
        a, b = np.meshgrid(np.arange(self.p, dtype=np.int64), np.arange(self.p, dtype=np.int64), indexing="ij")
        return a.ravel(), b.ravel()

    def constant(self, value: Tuple[int, int], size: int):
        return np.full(size, value[0] % self.p, dtype=np.int64), np.full(size, value[1] % self.p, dtype=np.int64)

    def mul(self, x, y):
        p = self.p
        return (x[0] * y[0] + self.n * (x[1] * y[1] % p)) % p, (x[0] * y[1] + x[1] * y[0]) % p

    def add(self, x, y):
        return (x[0] + y[0]) % self.p, (x[1] + y[1]) % self.p

    def chi(self, x) -> np.ndarray:
        """Quadratic character; on F_{p^2} an element is a square iff its norm is a square in F_p."""
        if self.k == 1:
            return self.chars[x[0] % self.p]
        norm = (x[0] * x[0] - self.n * (x[1] * x[1] % self.p)) % self.p
        return self.chars[norm]

    def is_zero(self, x) -> np.ndarray:
        return (x[0] == 0) & (x[1] == 0)


class ReducedModel(NamedTuple):
    """Coefficients a1..a6 as (x, y) pairs x + y w in F_q."""
    field: FqArrays
    coeffs: Tuple[Tuple[int, int], ...]

    def b_values(self) -> Tuple[Tuple[int, int], ...]:
        f = self.field
        one = lambda c: (np.array([c[0]]), np.array([c[1]]))
        a1, a2, a3, a4, a6 = (one(c) for c in self.coeffs)
        b2 = f.add(f.mul(a1, a1), f.mul(one((4, 0)), a2))
        b4 = f.add(f.mul(one((2, 0)), a4), f.mul(a1, a3))
        b6 = f.add(f.mul(a3, a3), f.mul(one((4, 0)), a6))
        return tuple((int(b[0][0]), int(b[1][0])) for b in (b2, b4, b6))

    def cubic_values(self, x):
        """4x^3 + b2 x^2 + 2 b4 x + b6 on an element array."""
        f = self.field
        size = len(x[0])
        b2, b4, b6 = self.b_values()
        value = f.constant((4, 0), size)
        value = f.add(f.mul(value, x), f.constant(b2, size))
        value = f.add(f.mul(value, x), f.constant((2 * b4[0], 2 * b4[1]), size))
        return f.add(f.mul(value, x), f.constant(b6, size))

    def cubic_derivative(self, x):
        f = self.field
        size = len(x[0])
        b2, b4, _ = self.b_values()
        value = f.constant((12, 0), size)
        value = f.add(f.mul(value, x), f.constant((2 * b2[0], 2 * b2[1]), size))
        return f.add(f.mul(value, x), f.constant((2 * b4[0], 2 * b4[1]), size))


def _to_pair(value, p: int) -> Tuple[int, int]:
    if isinstance(value, tuple):
        return value
    return (int(value) % p, 0)


def reduce_curve(curve: WeierstrassCurve, p: int, k: int = 1) -> ReducedModel:
    """Reduce a curve over Q modulo p, read in F_p or in F_{p^2}."""
    f = FqArrays(p, k)
    coeffs = []
    for a in curve.coefficients:
        a = Fraction(a)
        if a.denominator % p == 0:
            raise BadPrimeError(f"{curve.label} has a denominator divisible by {p}")
        coeffs.append(_to_pair(a.numerator * pow(a.denominator, -1, p), p))
    return ReducedModel(f, tuple(coeffs))


def reduce_curve_at(curve: WeierstrassCurve, ideal: PrimeIdeal) -> ReducedModel:
    """Reduce a curve over Q(sqrt 5) at a prime of Z[phi]; inert residue fields use w = sqrt 5."""
    if ideal.kind == "inert":
        if ideal.p == 2:
            raise UnsupportedCaseError("point counts at the prime above 2")
        f = FqArrays(ideal.p, 2, 5)
        half = pow(2, -1, ideal.p)
        coeffs = []
        for a in curve.coefficients:
            x, y = reduce_quad(QuadInt.coerce(a), ideal)
            # x + y phi = x + y/2 + (y/2) sqrt 5
            coeffs.append(((x + y * half) % ideal.p, y * half % ideal.p))
        return ReducedModel(f, tuple(coeffs))
    f = FqArrays(ideal.p, 1)
    return ReducedModel(f, tuple((reduce_quad(QuadInt.coerce(a), ideal), 0) for a in curve.coefficients))


def reduction_type(model: ReducedModel) -> str:
    """'good', 'split', 'nonsplit' or 'additive'."""
    f = model.field
    x = f.elements()
    double = f.is_zero(model.cubic_values(x)) & f.is_zero(model.cubic_derivative(x))
    if not np.any(double):
        return "good"
    idx = int(np.flatnonzero(double)[0])
    x0 = (np.array([x[0][idx]]), np.array([x[1][idx]]))
    b2, _, _ = model.b_values()
    # node tangents y'^2 = (3 x0 + b2/4) X^2, tested on 12 x0 + b2
    kappa = f.add(f.mul(f.constant((12, 0), 1), x0), f.constant(b2, 1))
    if f.is_zero(kappa)[0]:
        return "additive"
    return "split" if f.chi(kappa)[0] == 1 else "nonsplit"


def character_sum_trace(model: ReducedModel) -> int:
    f = model.field
    return -int(f.chi(model.cubic_values(f.elements())).sum())


def enumerate_points(model: ReducedModel) -> int:
    """#E(F_p) by scanning the affine plane; F_p only."""
    f = model.field
    if f.k != 1:
        raise UnsupportedCaseError("plane enumeration is only done over F_p")
    p = f.p
    a1, a2, a3, a4, a6 = (c[0] for c in model.coeffs)
    x, y = np.meshgrid(np.arange(p, dtype=np.int64), np.arange(p, dtype=np.int64), indexing="ij")
    lhs = (y * y + a1 * (x * y % p) + a3 * y) % p
    rhs = (x * x % p * x + a2 * (x * x % p) + a4 * x + a6) % p
    return int(np.count_nonzero(lhs == rhs)) + 1


def local_trace(model: ReducedModel) -> Tuple[int, str]:
    kind = reduction_type(model)
    if kind == "good":
        return character_sum_trace(model), kind
    return {"split": 1, "nonsplit": -1, "additive": 0}[kind], kind


def trace_of_frobenius(curve: WeierstrassCurve, q: int, cross_check: bool = True) -> int:
    """a_q for a curve over Q at q = p or p^2."""
    p, k = (q, 1) if isprime(q) else (_prime_root(q), 2)
    model = reduce_curve(curve, p, k)
    trace, kind = local_trace(model)
    if cross_check and kind == "good" and k == 1:
        counted = p + 1 - enumerate_points(model)
        if counted != trace:
            raise DomainError(f"character sum {trace} and enumeration {counted} disagree at p={p}")
    return trace


def _prime_root(q: int) -> int:
    root, exact = integer_nthroot(q, 2)
    if not exact or not isprime(root):
        raise DomainError(f"{q} is neither a prime nor the square of one")
    return int(root)


def trace_at_ideal(curve: WeierstrassCurve, ideal: PrimeIdeal) -> Tuple[int, str]:
    return local_trace(reduce_curve_at(curve, ideal))


def trace_table(curve: WeierstrassCurve, primes: Sequence[int]) -> Dict[int, Tuple[int, str]]:
    """a_p and the reduction type at each odd prime, computed per prime on the worker pool."""
    def one(p: int):
        try:
            return local_trace(reduce_curve(curve, p))
        except BadPrimeError:
            return 0, "bad-model"
    return dict(zip(primes, map_ordered(one, list(primes))))


def weil_bound_holds(table: Dict[int, Tuple[int, str]]) -> bool:
    return all(kind != "good" or trace * trace <= 4 * p for p, (trace, kind) in table.items())


def to_model(label: str, table: Dict[int, Tuple[int, str]]) -> TraceTableModel:
    return TraceTableModel(
        label=label,
        traces={str(p): trace for p, (trace, _) in sorted(table.items())},
        bad=[str(p) for p, (_, kind) in sorted(table.items()) if kind != "good"],
    )


def ideal_label(ideal: PrimeIdeal) -> str:
    return f"N{ideal.norm}" + (f"[phi={ideal.phi}]" if ideal.kind == "split" else "")


def ideals_of_norm(norms: Sequence[int]) -> List[PrimeIdeal]:
    out = []
    for norm in norms:
        (p, _), = factorint(norm).items()
        out.extend(ideal for ideal in quad_splitting(p) if ideal.norm == norm)
    return out
