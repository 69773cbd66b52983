"""
Curves over Q(sqrt 5) with a prescribed j and the twist whose Frobenius
traces at the primes of Z[phi] reproduce a table of Hecke eigenvalues.
"""

from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from math import lcm
from typing import Dict, List, NamedTuple, Optional, Sequence, Tuple

from sympy import factorint

from Shimura.algebra.quadint import PrimeIdeal, QuadInt, quad_splitting, reduce_quad
from Shimura.arithmetic.counting import ideal_label, ideals_of_norm, local_trace, reduce_curve_at
from Shimura.arithmetic.modular import chi4
from Shimura.arithmetic.weierstrass import WeierstrassCurve, with_j
from Shimura.config import Verify
from Shimura.helper.exceptions import DomainError, UnsupportedCaseError
from Shimura.logger import LOGGER

# eigenvalues by the norm of the prime; pairs belong to the two primes above a split p
H_TABLE: Dict[int, Tuple[int, ...]] = {
    4: (0,), 5: (0,), 9: (-2,), 11: (4, -4), 19: (4, 4), 29: (-6, 10),
    31: (8, 0), 41: (10, -6), 49: (6,), 59: (-4, 12),
}
J_H = QuadInt.from_sqrt5(Fraction(2 ** 7 * 25, 5), Fraction(-2 ** 7 * 11, 5))
J_H_CHI4 = QuadInt.from_sqrt5(Fraction(8 * 8903, 5), Fraction(8 * 3333, 5))
UNITS = (QuadInt(1), QuadInt(-1), QuadInt(0, 1), QuadInt(0, -1))


# ---------------- valuations at primes of Z[phi] ----------------
@lru_cache(maxsize=None)
def uniformizer(ideal: PrimeIdeal) -> QuadInt:
    if ideal.kind == "inert":
        return QuadInt(ideal.p)
    if ideal.kind == "ramified":
        return QuadInt(-1, 2)
    for size in range(1, 4 * ideal.p):
        for a in range(-size, size + 1):
            for b in (size, -size):
                pi = QuadInt(a, b)
                if abs(pi.norm()) == ideal.p and (a + b * ideal.phi) % ideal.p == 0:
                    return pi
    raise DomainError(f"no generator found for {ideal_label(ideal)}")


def in_ideal(z: QuadInt, ideal: PrimeIdeal) -> bool:
    residue = reduce_quad(z, ideal)
    return residue == (0, 0) if isinstance(residue, tuple) else residue == 0


def valuation(z: QuadInt, ideal: PrimeIdeal, pi: Optional[QuadInt] = None) -> int:
    """v_P(z) for z in Z[phi]."""
    if not z:
        return 10 ** 9
    if not z.is_integral():
        raise DomainError(f"{z} is not integral")
    pi = pi or uniformizer(ideal)
    v = 0
    while in_ideal(z, ideal):
        z = z / pi
        v += 1
    return v


def integral_model(a4: QuadInt, a6: QuadInt) -> Tuple[QuadInt, QuadInt]:
    den = lcm(a4.denominator(), a6.denominator())
    return a4 * den ** 4, a6 * den ** 6


def minimal_at_ideal(a4: QuadInt, a6: QuadInt, ideal: PrimeIdeal) -> Tuple[QuadInt, QuadInt]:
    pi = uniformizer(ideal)
    while valuation(a4, ideal, pi) >= 4 and valuation(a6, ideal, pi) >= 6:
        a4, a6 = a4 / pi ** 4, a6 / pi ** 6
    return a4, a6


def shifted_model(a4: QuadInt, a6: QuadInt, ideal: PrimeIdeal) -> Optional[WeierstrassCurve]:
    """x = pi^2 x' + r, y = pi^3 y' keeping the model integral at a prime above 3."""
    pi = uniformizer(ideal)
    residues = range(27)
    for a in residues:
        for b in residues:
            r = QuadInt(3 * a, 3 * b)
            a2 = 3 * r / pi ** 2
            b4 = (3 * r * r + a4) / pi ** 4
            b6 = (r * r * r + a4 * r + a6) / pi ** 6
            if all(c.is_integral() for c in (a2, b4, b6)):
                return WeierstrassCurve(0, a2, 0, b4, b6, "Q(sqrt5)")
    return None


def trace_above_two(a4: QuadInt, a6: QuadInt, ideal: PrimeIdeal) -> Tuple[Optional[int], str]:
    """a = 0 when j is integral at 2 and v(disc) is not 0 mod 12.

    A change of model moves v(disc) by multiples of 12, so no model has a unit
    discriminant, and integral j rules out multiplicative reduction.
    """
    cube = 4 * a4 * a4 * a4
    disc = -16 * (cube + 27 * a6 * a6)
    if not disc:
        raise DomainError("singular model")
    j = 1728 * cube / (cube + 27 * a6 * a6)
    if j.denominator() % 2 == 0:
        return None, "potentially multiplicative"
    if valuation(disc, ideal) % 12:
        return 0, "additive"
    return None, "undetermined"


def local_trace_at(a4: QuadInt, a6: QuadInt, ideal: PrimeIdeal, allow_shift: bool = True) -> Tuple[Optional[int], str]:
    if ideal.p == 2:
        return trace_above_two(a4, a6, ideal)
    m4, m6 = minimal_at_ideal(a4, a6, ideal)
    trace, kind = local_trace(reduce_curve_at(WeierstrassCurve.short(m4, m6, "Q(sqrt5)"), ideal))
    if kind == "additive" and ideal.p == 3:
        if not allow_shift:
            return None, "undetermined"
        shifted = shifted_model(m4, m6, ideal)
        if shifted is None:
            return trace, kind
        trace, kind = local_trace(reduce_curve_at(shifted, ideal))
    return trace, kind


# ---------------- twist search ----------------
def prime_generators(j: QuadInt) -> List[QuadInt]:
    """2, sqrt 5, 3 and generators of the primes dividing the numerators of j and j - 1728.

    The model y^2 = x^3 + 3jk x + 2jk^2 is additive at 3 for every twist prime
    to 3, so 3 is always a candidate factor.
    """
    gens = [QuadInt(2), QuadInt(-1, 2), QuadInt(3)]
    for value in (j, j - 1728):
        numerator = value * value.denominator()
        for p in sorted(factorint(abs(int(numerator.norm().numerator)))):
            if p in (2, 3, 5):
                continue
            for ideal in quad_splitting(p):
                pi = uniformizer(ideal)
                if in_ideal(numerator, ideal) and pi not in gens:
                    gens.append(pi)
    return gens


def target_for(table: Dict[int, Tuple[int, ...]], twisted_by_chi4: bool) -> Dict[int, Tuple[int, ...]]:
    if not twisted_by_chi4:
        return dict(table)
    return {norm: tuple(a * chi4(norm) for a in values) for norm, values in table.items()}


def traces_by_norm(a4: QuadInt, a6: QuadInt, norms: Sequence[int], allow_shift: bool) -> Dict[int, Tuple[Optional[int], ...]]:
    out = {}
    for norm in norms:
        out[norm] = tuple(local_trace_at(a4, a6, ideal, allow_shift)[0] for ideal in ideals_of_norm([norm]))
    return out


def candidate_twists(gens: Sequence[QuadInt], bound: int):
    for size in range(bound + 1):
        for subset in combinations(gens, size):
            for unit in UNITS:
                d = unit
                for g in subset:
                    d = d * g
                yield d


def _agrees(computed: Dict[int, Tuple], target: Dict[int, Tuple], strict: bool = True) -> bool:
    """Multiset agreement per norm; a missing trace is a miss unless `strict` is off."""
    for norm, values in target.items():
        got = computed.get(norm)
        if got is None or None in got:
            if strict:
                return False
            continue
        if sorted(got) != sorted(values):
            return False
    return True


def missing_norms(computed: Dict[int, Tuple], target: Dict[int, Tuple]) -> List[int]:
    return [norm for norm in sorted(target) if computed.get(norm) is None or None in computed[norm]]


class HilbertMatch(NamedTuple):
    j: str
    twist: Optional[QuadInt]
    computed: Dict[int, Tuple]
    target: Dict[int, Tuple]
    alignment: Dict[int, str]
    compared: int
    skipped: List[int]

    @property
    def passed(self) -> bool:
        return self.twist is not None and _agrees(self.computed, self.target)


def hilbert_trace_match(j: QuadInt = J_H, table: Optional[Dict[int, Tuple[int, ...]]] = None,
                        twisted_by_chi4: bool = False, bound: Optional[int] = None) -> HilbertMatch:
    """Search twists d = unit * product of small primes of Z[phi] until the traces match the table."""
    if j == 0 or j == 1728:
        raise UnsupportedCaseError(f"j = {j}")
    target = target_for(table or H_TABLE, twisted_by_chi4)
    bound = bound or Verify.TWIST_BOUND
    base = with_j(j, "Q(sqrt5)")
    norms = sorted(target)
    gens = prime_generators(j)
    LOGGER.debug(f"j = {j}: twisting by products of {[str(g) for g in gens]}")
    found = None
    for d in candidate_twists(gens, bound):
        a4, a6 = integral_model(base.a4 * d * d, base.a6 * d * d * d)
        # the shift search above 3 is the slow part, so filter on the other norms first
        if not _agrees(traces_by_norm(a4, a6, norms, allow_shift=False), target, strict=False):
            continue
        full = traces_by_norm(a4, a6, norms, allow_shift=True)
        if _agrees(full, target):
            found = (d, full)
            break
    if not found:
        LOGGER.warning(f"No twist of j = {j} within {bound} prime factors matches the table")
        return HilbertMatch(str(j), None, {}, target, {}, 0, norms)
    d, computed = found
    alignment = {
        norm: ("aligned" if computed[norm] == target[norm] else "swapped")
        for norm in norms if len(target[norm]) == 2
    }
    compared = sum(len(v) for v in computed.values() if None not in v)
    LOGGER.info(f"j = {j}: twist {d} matches {compared} eigenvalues")
    return HilbertMatch(str(j), d, computed, target, alignment, compared, missing_norms(computed, target))


def conjugate_pattern(match: HilbertMatch) -> Dict[int, Tuple]:
    """The pattern expected for the Galois-conjugate j: the two values above each split prime trade places."""
    return {norm: tuple(reversed(values)) for norm, values in match.computed.items()}


def conjugate_match(j: QuadInt = J_H, twist: Optional[QuadInt] = None) -> Dict[int, Tuple]:
    base = with_j(j.conjugate(), "Q(sqrt5)")
    d = twist.conjugate() if twist is not None else QuadInt(1)
    a4, a6 = integral_model(base.a4 * d * d, base.a6 * d * d * d)
    return traces_by_norm(a4, a6, sorted(H_TABLE), allow_shift=True)
