"""
The Shimura conic: parametrisation from a chart unit point, the twelve
special points cut out by the 27 restricted quadrics, their pairing and the
projective match with {0, oo} u {zeta^k, alpha zeta^k}.

Multiplicity profiles are computed exactly over Q(zeta_20). Point level
claims (pairing, coverage) are checked modulo one prime p = 1 mod 20, where
all twelve points are rational; the Moebius match is repeated at every
embedding of Q(zeta_20) into F_p for the configured primes.
"""

from collections import Counter
from functools import lru_cache
from itertools import permutations
from typing import Dict, FrozenSet, Iterator, List, NamedTuple, Optional, Tuple

from Shimura.algebra import upoly
from Shimura.algebra.cyclo import ALPHA, ZETA5, phi20_roots, reduce_mod_p
from Shimura.algebra.domains import CYCLO, GF
from Shimura.algebra.multipoly import MultiPoly
from Shimura.config import Verify
from Shimura.helper.exceptions import BadPrimeError, UnsupportedCaseError
from Shimura.logger import LOGGER
from Shimura.moduli.charts import QuadricCensus, eigenspace_chart, restrict_quadrics
from Shimura.moduli.models import DerivedModel, derive_model

INFINITY = "inf"


class ConicParametrization(NamedTuple):
    base: int
    images: Tuple[MultiPoly, MultiPoly, MultiPoly]

    def pullback(self, form: MultiPoly) -> MultiPoly:
        return form.substitute(list(self.images))


def parametrize_conic(conic: MultiPoly) -> ConicParametrization:
    """(u:v) -> (-Q(u,v) : u L(u,v) : v L(u,v)) around a unit point of the chart lying on the conic."""
    base = next((i for i in range(3) if not conic.coeff(tuple(2 if j == i else 0 for j in range(3)))), None)
    if base is None:
        raise UnsupportedCaseError("no chart unit point on the conic; a quadratic extension would be needed")
    others = [j for j in range(3) if j != base]
    u, v = MultiPoly.gens(2, CYCLO)
    lin = MultiPoly(2, {}, CYCLO)
    quad = MultiPoly(2, {}, CYCLO)
    # C = y_base * L(y_others) + Q(y_others)
    for exps, c in conic.terms.items():
        mono = MultiPoly(2, {tuple(exps[j] for j in others): 1}, CYCLO)
        if exps[base] == 1:
            lin = lin + mono.scale(c)
        else:
            quad = quad + mono.scale(c)
    images = [None, None, None]
    images[base] = -quad
    images[others[0]] = u * lin
    images[others[1]] = v * lin
    return ConicParametrization(base, tuple(images))


def squarefree_part(f: list, dom) -> list:
    out = [dom.one]
    for factor, _ in upoly.squarefree_decomposition(f, dom):
        out = upoly.mul(out, factor, dom)
    return out


def distinct_point_count(forms: List[MultiPoly]) -> int:
    """Number of distinct points of P^1 on which some form vanishes, from the lcm of squarefree parts."""
    dom = CYCLO
    lcm = [dom.one]
    at_infinity = False
    for form in forms:
        f, inf = upoly.binary_to_univariate(form)
        at_infinity = at_infinity or inf > 0
        if upoly.degree(f) <= 0:
            continue
        s = squarefree_part(f, dom)
        g = upoly.gcd(lcm, s, dom)
        lcm = upoly.mul(lcm, upoly.exact_quotient(s, g, dom), dom)
    return upoly.degree(lcm) + int(at_infinity)


def points_mod_p(form: MultiPoly, p: int, root: int) -> Counter:
    """Roots of a binary form in P^1(F_p) with multiplicity; infinity is (1:0)."""
    reduced = form.map_coeffs(lambda c: reduce_mod_p(c, p, root), GF(p))
    f, inf = upoly.binary_to_univariate(reduced)
    roots = upoly.roots_mod_p(f, p) if upoly.degree(f) > 0 else Counter()
    if inf:
        roots[INFINITY] += inf
    return roots


# ---------------- Moebius matching ----------------
def _vec(point, p: int) -> Tuple[int, int]:
    return (1, 0) if point == INFINITY else (point % p, 1)


def _normalize(vec: Tuple[int, int], p: int):
    x, y = vec[0] % p, vec[1] % p
    if y == 0:
        return INFINITY
    return x * pow(y, -1, p) % p


def _frame(s1, s2, s3, p: int):
    """Matrix sending (1:0), (0:1), (1:1) to s1, s2, s3."""
    (a1, b1), (a2, b2), (a3, b3) = _vec(s1, p), _vec(s2, p), _vec(s3, p)
    det = (a1 * b2 - a2 * b1) % p
    if det == 0:
        return None
    inv = pow(det, -1, p)
    x = (a3 * b2 - a2 * b3) * inv % p
    y = (a1 * b3 - a3 * b1) * inv % p
    if x == 0 or y == 0:
        return None
    return ((a1 * x % p, a2 * y % p), (b1 * x % p, b2 * y % p))


def _inverse(m, p: int):
    (a, b), (c, d) = m
    det = (a * d - b * c) % p
    inv = pow(det, -1, p)
    return ((d * inv % p, -b * inv % p), (-c * inv % p, a * inv % p))


def _compose(m, n, p: int):
    return tuple(tuple(sum(m[i][k] * n[k][j] for k in range(2)) % p for j in range(2)) for i in range(2))


def apply_mobius(m, point, p: int):
    x, y = _vec(point, p)
    return _normalize((m[0][0] * x + m[0][1] * y, m[1][0] * x + m[1][1] * y), p)


def target_labels(p: int, root: int) -> Dict[str, object]:
    """{0, oo} and {zeta^k, alpha zeta^k} mod p under their exact names."""
    z = reduce_mod_p(ZETA5, p, root)
    a = reduce_mod_p(ALPHA, p, root)
    out: Dict[str, object] = {"0": 0, "inf": INFINITY}
    for k in range(5):
        zk = pow(z, k, p)
        out[f"z{k}"] = zk
        out[f"az{k}"] = a * zk % p
    return out


def target_configuration(p: int, root: int) -> Tuple[List, List[Tuple]]:
    """The target points mod p, with their pairs."""
    named = target_labels(p, root)
    pairs = [frozenset((named["0"], named["inf"]))]
    pairs += [frozenset((named[f"z{k}"], named[f"az{k}"])) for k in range(5)]
    return list(named.values()), pairs


def mobius_maps(source: List, target: List, p: int) -> Iterator:
    """Every Moebius map of P^1(F_p) carrying the source set onto the target set, fixed by three points."""
    targets = set(target)
    frame_s = _frame(*source[:3], p)
    if frame_s is None:
        return
    back = _inverse(frame_s, p)
    for t1, t2, t3 in permutations(target, 3):
        frame_t = _frame(t1, t2, t3, p)
        if frame_t is None:
            continue
        m = _compose(frame_t, back, p)
        if {apply_mobius(m, s, p) for s in source} == targets:
            yield m


def find_mobius(source: List, target: List, p: int):
    return next(mobius_maps(source, target, p), None)


def labelled_points(roots2: List[Counter]) -> Optional[Dict[str, object]]:
    """Each special point named by the first reducible class having it as the triple root."""
    names: Dict[object, str] = {}
    for i, r in enumerate(roots2):
        for x, m in r.items():
            if m == 3:
                names.setdefault(x, f"T{i}")
    if len(names) != 12:
        return None
    return {name: x for x, name in names.items()}


def label_maps(source: Dict[str, object], target: Dict[str, object], p: int) -> FrozenSet[Tuple]:
    """The assignments source name -> target name realised by Moebius maps over F_p."""
    names = {x: name for name, x in target.items()}
    if len(names) != len(target):
        return frozenset()
    keys = sorted(source)
    found = set()
    for m in mobius_maps([source[k] for k in keys], list(target.values()), p):
        found.add(tuple((k, names[apply_mobius(m, source[k], p)]) for k in keys))
    return frozenset(found)


class MobiusAcrossEmbeddings(NamedTuple):
    embeddings: int
    assignments: int
    consistent: bool


def mobius_across_embeddings(forms2: List[MultiPoly], primes) -> MobiusAcrossEmbeddings:
    """
    Moebius matches at every embedding of Q(zeta_20) into F_p for the given primes.

    A map defined over Q(zeta_20) reduces at every embedding to a map with the
    same assignment of named points, and the assignments at distinct
    embeddings only agree by accident when no such map exists. Primes that
    are not 1 mod 20 or divide a denominator are skipped.
    """
    seen: List[FrozenSet] = []
    for p in primes:
        if p % 20 != 1:
            continue
        for root in phi20_roots(p):
            try:
                roots2 = [points_mod_p(f, p, root) for f in forms2]
            except BadPrimeError as e:
                LOGGER.warning(f"Moebius match skips p={p}: {e}")
                break
            source = labelled_points(roots2)
            seen.append(label_maps(source, target_labels(p, root), p) if source else frozenset())
    consistent = bool(seen) and bool(seen[0]) and all(s == seen[0] for s in seen)
    return MobiusAcrossEmbeddings(len(seen), len(seen[0]) if seen else 0, consistent)


# ---------------- configuration ----------------
class ConicConfiguration(NamedTuple):
    distinct_points: int
    rank2_profiles: List[List[int]]
    rank3_profiles: List[List[int]]
    prime: int
    points: List
    pairing: Dict
    pairing_is_matching: bool
    rank3_pair_splits: bool
    pair_coverage: Dict[str, int]
    pairs_of_pairs: int
    vanishing: Dict[str, int]
    vanishing_split: Dict[str, List[int]]
    mobius_found: bool
    mobius_preserves_pairs: bool
    mobius_embeddings: int = 0
    mobius_assignments: int = 0
    mobius_consistent: bool = False


def _pair_key(pair) -> str:
    return "{" + ",".join(sorted(str(x) for x in pair)) + "}"


def _point_data(classes, param: ConicParametrization, p: int, root: int):
    return [points_mod_p(param.pullback(c.poly()), p, root) for c in classes]


@lru_cache(maxsize=None)
def conic_configuration(seed: int = Verify.SEED, prime: Optional[int] = None) -> ConicConfiguration:
    model: DerivedModel = derive_model(2, seed)
    census: QuadricCensus = restrict_quadrics(eigenspace_chart(2))
    param = parametrize_conic(model.poly)
    rank2 = census.of_tag("conic-reducible")
    rank3 = census.of_tag("conic-irreducible")

    forms2 = [param.pullback(c.poly()) for c in rank2]
    forms3 = [param.pullback(c.poly()) for c in rank3]
    profiles2 = [upoly.form_profile(f) for f in forms2]
    profiles3 = [upoly.form_profile(f) for f in forms3]
    distinct = distinct_point_count(forms2 + forms3)

    p = prime or Verify.MODULAR_PRIMES[0]
    root = phi20_roots(p)[0]
    roots2 = _point_data(rank2, param, p, root)
    roots3 = _point_data(rank3, param, p, root)
    points = sorted({x for r in roots2 + roots3 for x in r}, key=str)

    pairing = {}
    for r in roots2:
        triple = [x for x, m in r.items() if m == 3]
        simple = [x for x, m in r.items() if m == 1]
        if len(triple) == 1 and len(simple) == 1:
            pairing[triple[0]] = simple[0]
    matching = (
        len(pairing) == len(points) == 12
        and all(pairing.get(pairing[x]) == x and pairing[x] != x for x in pairing)
    )
    pairs = {frozenset((x, y)) for x, y in pairing.items()}

    coverage = Counter()
    splits = True
    quadruples = set()
    for r in roots3:
        support = frozenset(r)
        quadruples.add(support)
        inside = [pair for pair in pairs if pair <= support]
        splits = splits and len(support) == 4 and len(inside) == 2
        for pair in inside:
            coverage[_pair_key(pair)] += 1

    vanishing, split = {}, {}
    zero = len(census.zero_members)
    for x in points:
        on2 = [c.multiplicity for c, r in zip(rank2, roots2) if x in r]
        on3 = [c.multiplicity for c, r in zip(rank3, roots3) if x in r]
        vanishing[str(x)] = zero + sum(on2) + sum(on3)
        split[str(x)] = [zero] + on2 + [sum(on3)]

    targets, target_pairs = target_configuration(p, root)
    m = find_mobius(points, targets, p) if len(points) == 12 else None
    preserves = False
    if m is not None:
        mapped = {frozenset(apply_mobius(m, x, p) for x in pair) for pair in pairs}
        preserves = mapped == set(target_pairs)
    across = mobius_across_embeddings(forms2, Verify.MODULAR_PRIMES)
    LOGGER.info(f"Conic: {distinct} distinct points, matching={matching}, Moebius found={m is not None} at p={p}")
    return ConicConfiguration(
        distinct, profiles2, profiles3, p, [str(x) for x in points], {str(k): str(v) for k, v in pairing.items()},
        matching, splits, dict(coverage), len(quadruples), vanishing, split, m is not None, preserves,
        across.embeddings, across.assignments, across.consistent,
    )
