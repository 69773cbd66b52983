"""
Newform coefficient tables extended by Hecke multiplicativity, and the
twist search that matches the rational curves of the cover table to them.
"""

from fractions import Fraction
from itertools import combinations
from typing import Dict, List, NamedTuple, Optional, Sequence

from sympy import factorint, primerange

from Shimura.arithmetic.counting import FqArrays, ReducedModel, local_trace, trace_table
from Shimura.arithmetic.weierstrass import WeierstrassCurve, with_j
from Shimura.helper.exceptions import ProfileMismatchError, ResourceBudgetError
from Shimura.logger import LOGGER


class Newform(NamedTuple):
    label: str
    level: int
    listed: Dict[int, int]
    precision: int

    @property
    def bad_primes(self) -> List[int]:
        return sorted(factorint(self.level))

    def seeds(self) -> Dict[int, int]:
        return {p: self.listed.get(p, 0) for p in primerange(2, self.precision)}

    def coefficient(self, n: int) -> int:
        return newform_table(self.seeds(), self.bad_primes, n)[n]


# q-expansions up to O(q^25); unlisted coefficients are zero
F20 = Newform("f", 20, {1: 1, 3: -2, 5: -1, 7: 2, 9: 1, 13: 2, 15: 2, 17: -6, 19: -4, 21: -4, 23: 6}, 25)
G40 = Newform("g", 40, {1: 1, 5: 1, 7: -4, 9: -3, 11: 4, 13: -2, 17: 2, 19: 4, 23: 4}, 25)


def chi4(n: int) -> int:
    return 0 if n % 2 == 0 else (1 if n % 4 == 1 else -1)


def newform_table(seeds: Dict[int, int], bad: Sequence[int], bound: int) -> Dict[int, int]:
    """a_n for 1 <= n <= bound from the prime coefficients."""
    table = {1: 1}
    for n in range(2, bound + 1):
        factors = factorint(n)
        if len(factors) > 1:
            p, e = next(iter(factors.items()))
            pe = p ** e
            table[n] = table[pe] * table[n // pe]
            continue
        (p, e), = factors.items()
        if p not in seeds:
            raise ProfileMismatchError(f"no seed coefficient for p={p}")
        if e == 1:
            table[n] = seeds[p]
        elif p in bad:
            table[n] = seeds[p] * table[n // p]
        else:
            table[n] = seeds[p] * table[n // p] - p * table[n // (p * p)]
    return table


def check_listed(form: Newform) -> Dict[int, int]:
    """Extend the listed prime coefficients and compare with every listed index."""
    table = newform_table(form.seeds(), form.bad_primes, form.precision - 1)
    for n in range(1, form.precision):
        if table[n] != form.listed.get(n, 0):
            raise ProfileMismatchError(f"{form.label}: a_{n} = {table[n]} from the recursion, listed {form.listed.get(n, 0)}")
    return table


# ---------------- twists of the cover-table curves ----------------
COVER_TABLE = (
    (Fraction(2 ** 11 * 3 ** 3, 5), G40, False),
    (Fraction(2 ** 14 * 31 ** 3, 5 ** 3), F20, True),
    (Fraction(2 ** 4 * 3 ** 3 * 7 ** 3, 5 ** 2), G40, False),
)
TEST_PRIMES = (7, 11, 13, 17, 19, 23)


def valuation(value: Fraction, p: int) -> int:
    if value == 0:
        return 10 ** 9
    v = 0
    num, den = value.numerator, value.denominator
    while num % p == 0:
        num //= p
        v += 1
    while den % p == 0:
        den //= p
        v -= 1
    return v


def minimal_at(a4: Fraction, a6: Fraction, p: int):
    """Scale y^2 = x^3 + a4 x + a6 by p until it is minimal at p (p >= 5)."""
    while valuation(a4, p) >= 4 and valuation(a6, p) >= 6:
        a4, a6 = a4 / p ** 4, a6 / p ** 6
    while valuation(a4, p) < 0 or valuation(a6, p) < 0:
        a4, a6 = a4 * p ** 4, a6 * p ** 6
    return a4, a6


def local_short_trace(a4: Fraction, a6: Fraction, p: int) -> int:
    a4, a6 = minimal_at(a4, a6, p)
    coeffs = ((0, 0), (0, 0), (0, 0),
              (a4.numerator * pow(a4.denominator, -1, p) % p, 0),
              (a6.numerator * pow(a6.denominator, -1, p) % p, 0))
    trace, _ = local_trace(ReducedModel(FqArrays(p), coeffs))
    return trace


def twist_generators(j: Fraction) -> List[int]:
    primes = set()
    for value in (j, j - 1728):
        primes.update(factorint(value.numerator))
        primes.update(factorint(value.denominator))
    return [-1, 2, 3] + sorted(p for p in primes if p >= 5)


class TwistMatch(NamedTuple):
    j: str
    form: str
    twist: Optional[int]
    traces: Dict[int, int]
    target: Dict[int, int]

    @property
    def passed(self) -> bool:
        return self.twist is not None and self.traces == self.target


def target_traces(form: Newform, twisted_by_chi4: bool, primes: Sequence[int]) -> Dict[int, int]:
    return {p: form.coefficient(p) * (chi4(p) if twisted_by_chi4 else 1) for p in primes}


def twist_search(j: Fraction, target: Dict[int, int], max_factors: Optional[int] = None) -> Optional[int]:
    base = with_j(j)
    gens = twist_generators(j)
    max_factors = max_factors or len(gens)
    for size in range(max_factors + 1):
        for subset in combinations(gens, size):
            d = 1
            for g in subset:
                d *= g
            a4, a6 = base.a4 * d * d, base.a6 * d * d * d
            if all(local_short_trace(a4, a6, p) == a for p, a in target.items()):
                return d
    return None


def covers_table_match(primes: Sequence[int] = TEST_PRIMES) -> List[TwistMatch]:
    """For each rational j of the cover table, a quadratic twist whose traces equal the named form's."""
    out = []
    for j, form, twisted in COVER_TABLE:
        target = target_traces(form, twisted, primes)
        d = twist_search(j, target)
        traces = {}
        if d is not None:
            base = with_j(j)
            traces = {p: local_short_trace(base.a4 * d * d, base.a6 * d ** 3, p) for p in primes}
        label = f"{form.label}" + ("(x)chi4" if twisted else "")
        LOGGER.info(f"j = {j}: twist {d} against {label}")
        out.append(TwistMatch(str(j), label, d, traces, target))
    return out


def modular_match(curve: WeierstrassCurve, form: Newform, primes: Sequence[int]) -> Dict[int, tuple]:
    """(a_p of the curve, a_p of the form) at each prime below the form's precision."""
    primes = [p for p in primes if p < form.precision and p != 2]
    if not primes:
        raise ResourceBudgetError(f"no primes below the precision {form.precision} of {form.label}")
    table = trace_table(curve, primes)
    return {p: (table[p][0], form.coefficient(p)) for p in primes}