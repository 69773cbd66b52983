"""
Cyclic covers v^n = prod (u - b_i)^{a_i} of P^1: genus, eigenbases of
regular 1-forms, limit covers at colliding branch points, and the genus 4
quintic families.

A form h(u) du / v^d is an eigenform for v -> zeta v with eigenvalue
zeta^{-d}; eigenvalues are stored as exponents of zeta_n.
"""

from collections import Counter
from math import ceil, floor, gcd
from typing import Dict, List, NamedTuple, Sequence, Tuple

import sympy as sp

from Shimura.algebra.domains import QQ
from Shimura.algebra.multipoly import MultiPoly
from Shimura.helper.exceptions import DomainError, UnsupportedCaseError
from Shimura.logger import LOGGER
from Shimura.moduli.sextic import quadratic_rank

INF = "inf"


class EigenForm(NamedTuple):
    """prod (u - b_i)^{c_i} * u^extra du / v^d."""
    factors: Tuple[Tuple[str, int], ...]
    extra: int
    d: int
    eigenvalue: int

    def label(self) -> str:
        parts = [("u" if b == "0" else f"(u-{b})") + (f"^{c}" if c > 1 else "") for b, c in self.factors if c]
        if self.extra:
            parts.append("u" + (f"^{self.extra}" if self.extra > 1 else ""))
        return f"{''.join(parts)} du/v^{self.d}" if parts else f"du/v^{self.d}"


class SuperellipticCurve(NamedTuple):
    n: int
    branch: Tuple[Tuple[str, int], ...]
    name: str = ""

    @property
    def total(self) -> int:
        return sum(a for _, a in self.branch)

    @property
    def exponent_at_infinity(self) -> int:
        return -self.total % self.n

    def all_branch_points(self) -> List[Tuple[str, int]]:
        points = list(self.branch)
        if self.exponent_at_infinity:
            points.append((INF, self.exponent_at_infinity))
        return points

    def exponent(self, label: str) -> int:
        if label == INF:
            return self.exponent_at_infinity
        return dict(self.branch)[label]

    def equation(self) -> str:
        rhs = "".join(("u" if b == "0" else f"(u-{b})") + (f"^{a}" if a > 1 else "") for b, a in self.branch)
        return f"v^{self.n} = {rhs}"


def check_curve(curve: SuperellipticCurve):
    if curve.n < 2:
        raise DomainError(f"cover degree {curve.n} < 2")
    labels = [b for b, _ in curve.branch]
    if len(set(labels)) != len(labels) or INF in labels:
        raise DomainError(f"branch labels {labels} repeat or name infinity")
    if any(not 1 <= a < curve.n for _, a in curve.branch):
        raise DomainError(f"exponents {[a for _, a in curve.branch]} outside 1..{curve.n - 1}")


def genus(curve: SuperellipticCurve) -> int:
    """Riemann-Hurwitz: g = 1 - n + (1/2) sum over branch points of (n - gcd(a_P, n))."""
    check_curve(curve)
    n = curve.n
    twice = 2 - 2 * n + sum(n - gcd(a, n) for _, a in curve.all_branch_points())
    if twice % 2:
        raise DomainError(f"odd ramification total for {curve.equation()}")
    return twice // 2


def regular_forms(curve: SuperellipticCurve) -> List[EigenForm]:
    """Basis of regular 1-forms h(u) du/v^d, from the local valuations at branch points and infinity."""
    check_curve(curve)
    n = curve.n
    a_inf_total = curve.total
    g_inf = gcd(a_inf_total, n)
    e_inf = n // g_inf
    forms = []
    for d in range(1, n):
        orders = []
        for b, a in curve.branch:
            g = gcd(a, n)
            e = n // g
            # ord of (u - b)^c du / v^d above b is e c + e - 1 - d a / g
            orders.append((b, max(0, ceil((d * a / g - e + 1) / e))))
        # above infinity: -N e_inf - e_inf - 1 + d A / g_inf >= 0
        top = floor((d * a_inf_total / g_inf - e_inf - 1) / e_inf)
        free = top - sum(c for _, c in orders)
        for j in range(free + 1):
            forms.append(EigenForm(tuple(orders), j, d, -d % n))
    return forms


def eigenvalues(curve: SuperellipticCurve) -> List[int]:
    return sorted(form.eigenvalue for form in regular_forms(curve))


def limit_cover(n: int, a: int, b: int) -> SuperellipticCurve:
    if gcd(a, n) != 1 or gcd(b, n) != 1 or gcd(a + b, n) != 1:
        raise UnsupportedCaseError(f"limit cover t^{n} = r^{a}(r-1)^{b} needs (a,n) = (b,n) = (a+b,n) = 1")
    return SuperellipticCurve(n, (("0", a % n), ("1", b % n)), f"t^{n}=r^{a}(r-1)^{b}")


# ---------------- the genus 4 quintic families ----------------
FAMILIES: Dict[str, SuperellipticCurve] = {
    "C": SuperellipticCurve(5, (("0", 1), ("1", 1), ("lambda", 1)), "C"),
    "C'": SuperellipticCurve(5, (("0", 4), ("r+", 1), ("r-", 1)), "C'"),
    "C''": SuperellipticCurve(5, (("0", 3), ("1", 2), ("lambda", 1)), "C''"),
}

# (family, boundary point) -> (fixed branch point, moving branch point)
COLLISIONS = {
    ("C", "0"): ("0", "lambda"),
    ("C", "1"): ("1", "lambda"),
    ("C", INF): (INF, "lambda"),
    ("C''", "0"): ("0", "lambda"),
}


def phi_type(k: int, n: int = 5) -> List[int]:
    return sorted(x % n for x in (1, 2, k, 2 * k))


def matching_types(exponents: Sequence[int], n: int = 5) -> List[int]:
    """k with the multiset equal to the type of phi_k up to a Galois relabelling zeta -> zeta^j."""
    out = []
    for k in range(1, n):
        target = phi_type(k, n)
        if any(sorted(e * j % n for e in exponents) == target for j in range(1, n)):
            out.append(k)
    return out


def deformation_dim(k: int, n: int = 5) -> int:
    """Number of pairs i <= j among the eigenvalues (zeta, zeta^2, zeta^k, zeta^2k) with product 1."""
    if k not in range(1, n):
        raise DomainError(f"k={k} outside 1..{n - 1}")
    exps = [1, 2, k % n, 2 * k % n]
    return sum(1 for i in range(4) for j in range(i, 4) if (exps[i] + exps[j]) % n == 0)


def degenerate_curve(curve: SuperellipticCurve, fixed: str, moving: str) -> SuperellipticCurve:
    n = curve.n
    rest = [(b, a) for b, a in curve.branch if b != moving]
    if fixed != INF:
        merged = (curve.exponent(fixed) + curve.exponent(moving)) % n
        rest = [(b, merged if b == fixed else a) for b, a in rest if b != fixed or merged]
    return SuperellipticCurve(n, tuple(rest), f"{curve.name}_0")


class DegenerationReport(NamedTuple):
    family: str
    point: str
    degenerate: SuperellipticCurve
    surviving: List[EigenForm]
    limit: SuperellipticCurve
    limit_eigenvalues: List[int]
    automorphism_types: List[int]
    genus_adds_up: bool

    @property
    def combined(self) -> List[int]:
        return sorted([f.eigenvalue for f in self.surviving] + self.limit_eigenvalues)


def degeneration_report(family: str, point: str) -> DegenerationReport:
    if family == "C'" and point == "0":
        return hyperelliptic_limit()
    if (family, point) not in COLLISIONS:
        raise UnsupportedCaseError(f"no degeneration recorded for {family} at {point}")
    curve = FAMILIES[family]
    fixed, moving = COLLISIONS[(family, point)]
    degenerate = degenerate_curve(curve, fixed, moving)
    limit = limit_cover(curve.n, curve.exponent(fixed), curve.exponent(moving))
    surviving = regular_forms(degenerate)
    limit_eigen = eigenvalues(limit)
    combined = sorted([f.eigenvalue for f in surviving] + limit_eigen)
    report = DegenerationReport(
        family, point, degenerate, surviving, limit, limit_eigen, matching_types(combined, curve.n),
        genus(degenerate) + genus(limit) == genus(curve),
    )
    LOGGER.info(f"{family} at {point}: {degenerate.equation()} + {limit.name}, eigenvalues {combined}, phi_k for k in {report.automorphism_types}")
    return report


def hyperelliptic_limit(n: int = 5) -> DegenerationReport:
    """C'_mu: y^2 = (x^n - 1)(x^n - mu) at mu -> 0, eigenvalues for x -> zeta x.

    On C'_0 write y = x^m y' with y'^2 = x (x^n - 1), m = (n - 1)/2; x^i dx/y
    survives when x^{i-m} dx/y' is regular. Near x ~ mu^{1/n} the limit is
    t^2 = r^n - 1 with the forms r^i dr/t.
    """
    g = n - 1
    m = (n - 1) // 2
    reduced_genus = n // 2
    surviving = [
        EigenForm((("0", i),), 0, 1, (i + 1) % n)
        for i in range(g) if 0 <= i - m < reduced_genus
    ]
    limit_genus = (n - 1) // 2
    limit_eigen = sorted((i + 1) % n for i in range(limit_genus))
    combined = sorted([f.eigenvalue for f in surviving] + limit_eigen)
    # no branch data for the hyperelliptic models beyond the labels used in reports
    degenerate = SuperellipticCurve(2, (("0", 1), ("roots of x^5-1", 1)), "y'^2=x(x^5-1)")
    limit = SuperellipticCurve(2, (("roots of r^5-1", 1),), "t^2=r^5-1")
    return DegenerationReport(
        "C'", "0", degenerate, surviving, limit, limit_eigen, matching_types(combined, n),
        reduced_genus + limit_genus == g,
    )


# ---------------- classification ----------------
def exponent_pattern(curve: SuperellipticCurve) -> Tuple[int, ...]:
    return tuple(sorted(a for _, a in curve.all_branch_points()))


def _canonical_pattern(pattern: Sequence[int], n: int) -> Tuple[int, ...]:
    return min(tuple(sorted(a * c % n for a in pattern)) for c in range(1, n))


def quintic_classes(points: int = 4, n: int = 5) -> Dict[Tuple[int, ...], List[Tuple[int, ...]]]:
    """Exponent multisets on `points` branch points with genus 4, up to scaling by units."""
    classes: Dict[Tuple[int, ...], List[Tuple[int, ...]]] = {}
    for pattern in sorted({tuple(sorted(p)) for p in _patterns(points, n)}):
        if sum(pattern) % n:
            continue
        curve = SuperellipticCurve(n, tuple((str(i), a) for i, a in enumerate(pattern[:-1])))
        if curve.exponent_at_infinity != pattern[-1] or genus(curve) != 4:
            continue
        classes.setdefault(_canonical_pattern(pattern, n), []).append(pattern)
    return classes


def _patterns(points: int, n: int):
    if points == 0:
        yield ()
        return
    for rest in _patterns(points - 1, n):
        for a in range(1, n):
            yield rest + (a,)


def involution_preserves(k: int) -> bool:
    """Whether (u, v) -> (1/u, v/u^k) maps v^5 = u^4 (u^2 + lam u + 1) to itself after clearing u^(5k)."""
    u, v, lam = sp.symbols("u v lam")
    curve = v ** 5 - u ** 4 * (u ** 2 + lam * u + 1)
    moved = sp.expand(sp.cancel(curve.subs({u: 1 / u, v: v / u ** k}, simultaneous=True) * u ** (5 * k)))
    return sp.expand(moved - curve) == 0


def canonical_quadric() -> Tuple[bool, int]:
    """C_lambda's canonical coordinates (1 : x : y : y^2) from its forms, and the rank 3 quadric X_2^2 = X_0 X_3."""
    x, y = sp.symbols("x y")
    coords = []
    for form in sorted(regular_forms(FAMILIES["C"]), key=lambda f: (-f.d, f.extra)):
        # h(x) dx/y^d = h(x) y^(4-d) dx/y^4
        coords.append(x ** form.extra * y ** (4 - form.d))
    relation = coords[2] ** 2 - coords[0] * coords[3]
    X = MultiPoly.gens(4, QQ)
    quadric = X[2] ** 2 - X[0] * X[3]
    return sp.expand(relation) == 0, quadratic_rank(quadric)


class QuinticClassification(NamedTuple):
    classes: Dict[str, List[str]]
    family_of_class: Dict[str, str]
    signatures: Dict[str, List[int]]
    printed_involution: bool
    corrected_involution: bool
    canonical_relation: bool
    canonical_quadric_rank: int

    @property
    def passed(self) -> bool:
        return (len(self.classes) == 3 and sorted(self.family_of_class.values()) == sorted(FAMILIES)
                and self.corrected_involution and self.canonical_relation and self.canonical_quadric_rank == 3)


def classify_genus4_quintics() -> QuinticClassification:
    classes = quintic_classes()
    family_of = {}
    for name, curve in FAMILIES.items():
        key = _canonical_pattern(exponent_pattern(curve), curve.n)
        family_of[str(key)] = name
    relation, rank = canonical_quadric()
    report = QuinticClassification(
        {str(k): [str(p) for p in v] for k, v in classes.items()},
        family_of,
        {name: eigenvalues(curve) for name, curve in FAMILIES.items()},
        involution_preserves(5),
        involution_preserves(2),
        relation,
        rank,
    )
    LOGGER.info(f"Genus 4 quintic covers: {len(classes)} classes, families {family_of}")
    return report


def signature_counts(curve: SuperellipticCurve) -> Dict[int, int]:
    return dict(sorted(Counter(eigenvalues(curve)).items()))
