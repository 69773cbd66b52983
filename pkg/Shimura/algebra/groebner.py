"""
Budgeted Buchberger over F_p with graded reverse lexicographic order.

The pair bookkeeping follows Becker and Weispfenning's GROEBNERNEWS2 on
sympy's sparse PolyRing; the only addition is a step budget that turns a
runaway computation into a ResourceBudgetError.
"""

import random
from itertools import combinations, product
from typing import List, NamedTuple, Optional, Sequence

from sympy.polys.domains import GF as SymGF
from sympy.polys.orderings import grevlex
from sympy.polys.rings import ring

from Shimura.algebra.domains import PrimeField
from Shimura.algebra.multipoly import MultiPoly
from Shimura.config import Verify
from Shimura.helper.exceptions import DomainError, ResourceBudgetError


class GroebnerResult(NamedTuple):
    basis: List[MultiPoly]
    leading_monomials: List[tuple]
    dimension: int
    degree: Optional[int]
    steps: int


def _to_ring(polys: Sequence[MultiPoly]):
    p = polys[0].domain.p
    nvars = polys[0].nvars
    R, *_ = ring(",".join(f"x{i}" for i in range(nvars)), SymGF(p), grevlex)
    base = R.domain
    return R, [R({k: base(int(v)) for k, v in f.terms.items()}) for f in polys]


def _from_ring(g, nvars: int, dom: PrimeField) -> MultiPoly:
    return MultiPoly(nvars, {tuple(k): int(dom.p + int(v)) % dom.p for k, v in g.terms()}, dom)


def _spoly(p1, p2, R):
    lcm = R.monomial_lcm(p1.LM, p2.LM)
    return p1.mul_monom(R.monomial_div(lcm, p1.LM)) - p2.mul_monom(R.monomial_div(lcm, p2.LM))


def _buchberger(f: list, R, budget: int):
    order = R.order
    monomial_mul, monomial_div, monomial_lcm = R.monomial_mul, R.monomial_div, R.monomial_lcm
    steps = 0

    def tick():
        nonlocal steps
        steps += 1
        if steps > budget:
            raise ResourceBudgetError(f"Groebner step budget {budget} exhausted")

    def normal(g, J):
        tick()
        h = g.rem([f[j] for j in J])
        if not h:
            return None
        h = h.monic()
        if h not in index:
            index[h] = len(f)
            f.append(h)
        return h.LM, index[h]

    def update(G, B, ih):
        h = f[ih]
        mh = h.LM
        C, D = G.copy(), set()
        while C:
            ig = C.pop()
            mg = f[ig].LM
            lcm_hg = monomial_lcm(mh, mg)

            def lcm_divides(ip):
                return monomial_div(lcm_hg, monomial_lcm(mh, f[ip].LM))

            if monomial_mul(mh, mg) == lcm_hg or (
                not any(lcm_divides(ipx) for ipx in C) and not any(lcm_divides(pr[1]) for pr in D)
            ):
                D.add((ih, ig))
        E = set()
        while D:
            ih_, ig = D.pop()
            mg = f[ig].LM
            if monomial_mul(mh, mg) != monomial_lcm(mh, mg):
                E.add((ih_, ig))
        B_new = set()
        while B:
            ig1, ig2 = B.pop()
            mg1, mg2 = f[ig1].LM, f[ig2].LM
            lcm12 = monomial_lcm(mg1, mg2)
            if not monomial_div(lcm12, mh) or monomial_lcm(mg1, mh) == lcm12 or monomial_lcm(mg2, mh) == lcm12:
                B_new.add((ig1, ig2))
        B_new |= E
        G_new = {ig for ig in G if not monomial_div(f[ig].LM, mh)}
        G_new.add(ih)
        return G_new, B_new

    f1 = [g for g in f if g]
    while True:
        f = f1[:]
        f1 = []
        for i, g in enumerate(f):
            tick()
            r = g.rem(f[:i])
            if r:
                f1.append(r.monic())
        if f == f1:
            break
    if not f:
        return [], steps

    index = {h: i for i, h in enumerate(f)}
    F = set(range(len(f)))
    G, CP = set(), set()
    while F:
        ih = index[min((f[x] for x in F), key=lambda g: order(g.LM))]
        F.remove(ih)
        G, CP = update(G, CP, ih)

    while CP:
        pair = min(CP, key=lambda pr: order(monomial_lcm(f[pr[0]].LM, f[pr[1]].LM)))
        CP.remove(pair)
        h = _spoly(f[pair[0]], f[pair[1]], R)
        ht = normal(h, sorted(G, key=lambda g: order(f[g].LM)))
        if ht:
            G, CP = update(G, CP, ht[1])

    reduced = set()
    for ig in G:
        ht = normal(f[ig], G - {ig})
        if ht:
            reduced.add(ht[1])
    return sorted((f[ig] for ig in reduced), key=lambda g: order(g.LM), reverse=True), steps


def staircase_dimension(leading: Sequence[tuple], nvars: int) -> int:
    """Largest set of variables containing no leading monomial's support."""
    if any(not any(m) for m in leading):
        return -1
    supports = [frozenset(i for i, e in enumerate(m) if e) for m in leading]
    for size in range(nvars, -1, -1):
        for subset in combinations(range(nvars), size):
            chosen = frozenset(subset)
            if not any(s <= chosen for s in supports):
                return size
    return 0


def standard_monomial_count(leading: Sequence[tuple], nvars: int) -> int:
    bounds = []
    for i in range(nvars):
        pure = [m[i] for m in leading if m[i] and all(e == 0 for j, e in enumerate(m) if j != i)]
        bounds.append(min(pure))
    count = 0
    for exps in product(*(range(b) for b in bounds)):
        if not any(all(a >= b for a, b in zip(exps, m)) for m in leading):
            count += 1
    return count


def groebner_fp(gens: Sequence[MultiPoly], budget: Optional[int] = None) -> GroebnerResult:
    gens = [g for g in gens if g]
    if not gens:
        raise DomainError("empty ideal")
    dom = gens[0].domain
    if not isinstance(dom, PrimeField):
        raise DomainError("groebner_fp works over a prime field")
    nvars = gens[0].nvars
    if nvars > 6:
        raise DomainError(f"{nvars} variables exceeds the desk-scale limit of 6")
    R, polys = _to_ring(gens)
    basis, steps = _buchberger(polys, R, budget or Verify.STEP_BUDGET)
    leading = [tuple(g.LM) for g in basis]
    dimension = staircase_dimension(leading, nvars)
    degree = standard_monomial_count(leading, nvars) if dimension == 0 else None
    return GroebnerResult([_from_ring(g, nvars, dom) for g in basis], leading, dimension, degree, steps)


def projective_dimension(gens: Sequence[MultiPoly], budget: Optional[int] = None) -> int:
    """Dimension of the projective zero set of homogeneous generators (-1 when empty)."""
    if not all(g.is_homogeneous() for g in gens):
        raise DomainError("projective dimension needs homogeneous generators")
    return groebner_fp(gens, budget).dimension - 1


def projective_degree(gens: Sequence[MultiPoly], seed: int, budget: Optional[int] = None) -> int:
    """Length of a finite projective zero set, by slicing the cone with a random affine hyperplane."""
    dom = gens[0].domain
    rng = random.Random(seed)
    nvars = gens[0].nvars
    xs = MultiPoly.gens(nvars, dom)
    hyperplane = MultiPoly.constant(nvars, -1, dom)
    for x in xs:
        hyperplane = hyperplane + x.scale(rng.randrange(1, dom.p))
    result = groebner_fp(list(gens) + [hyperplane], budget)
    if result.dimension != 0:
        raise DomainError(f"zero set is not finite (affine slice has dimension {result.dimension})")
    return result.degree
