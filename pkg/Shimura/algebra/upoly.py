"""Dense univariate polynomials (coefficient lists, low degree first) over a Domain."""

from collections import Counter
from typing import List, Sequence, Tuple

from Shimura.algebra.domains import Domain, PrimeField
from Shimura.algebra.multipoly import MultiPoly
from Shimura.helper.exceptions import DomainError

UPoly = List


def trim(f: Sequence, dom: Domain) -> UPoly:
    f = list(f)
    while f and dom.is_zero(f[-1]):
        f.pop()
    return f


def degree(f: Sequence) -> int:
    return len(f) - 1


def add(f, g, dom: Domain) -> UPoly:
    n = max(len(f), len(g))
    out = []
    for i in range(n):
        a = f[i] if i < len(f) else dom.zero
        b = g[i] if i < len(g) else dom.zero
        out.append(dom.add(a, b))
    return trim(out, dom)


def sub(f, g, dom: Domain) -> UPoly:
    return add(f, [dom.neg(c) for c in g], dom)


def mul(f, g, dom: Domain) -> UPoly:
    if not f or not g:
        return []
    out = [dom.zero] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        if dom.is_zero(a):
            continue
        for j, b in enumerate(g):
            out[i + j] = dom.add(out[i + j], dom.mul(a, b))
    return trim(out, dom)


def scale(f, c, dom: Domain) -> UPoly:
    return trim([dom.mul(a, c) for a in f], dom)


def divmod_(f, g, dom: Domain) -> Tuple[UPoly, UPoly]:
    g = trim(g, dom)
    if not g:
        raise DomainError("division by the zero polynomial")
    r = trim(f, dom)
    q = [dom.zero] * max(len(r) - len(g) + 1, 0)
    inv = dom.inv(g[-1])
    while len(r) >= len(g):
        shift = len(r) - len(g)
        c = dom.mul(r[-1], inv)
        q[shift] = c
        for i, b in enumerate(g):
            r[i + shift] = dom.sub(r[i + shift], dom.mul(c, b))
        r.pop()
        r = trim(r, dom)
    return trim(q, dom), r


def monic(f, dom: Domain) -> UPoly:
    f = trim(f, dom)
    if not f:
        return f
    return scale(f, dom.inv(f[-1]), dom)


def gcd(f, g, dom: Domain) -> UPoly:
    a, b = trim(f, dom), trim(g, dom)
    while b:
        a, b = b, divmod_(a, b, dom)[1]
    return monic(a, dom)


def derivative(f, dom: Domain) -> UPoly:
    return trim([dom.mul(dom.convert(i), c) for i, c in enumerate(f)][1:], dom)


def evaluate(f, x, dom: Domain):
    acc = dom.zero
    for c in reversed(f):
        acc = dom.add(dom.mul(acc, x), c)
    return acc


def exact_quotient(f, g, dom: Domain) -> UPoly:
    q, r = divmod_(f, g, dom)
    if r:
        raise DomainError("polynomial is not divisible")
    return q


def squarefree_decomposition(f, dom: Domain) -> List[Tuple[UPoly, int]]:
    """Yun's algorithm: pairs (P_k, k) with f = c * prod P_k^k, P_k squarefree and coprime."""
    f = trim(f, dom)
    if not f:
        raise DomainError("squarefree decomposition of zero")
    if dom.characteristic and dom.characteristic <= degree(f):
        raise DomainError(f"characteristic {dom.characteristic} may divide an exponent up to {degree(f)}")
    out = []
    a0 = gcd(f, derivative(f, dom), dom)
    b = exact_quotient(f, a0, dom)
    c = exact_quotient(derivative(f, dom), a0, dom)
    d = sub(c, derivative(b, dom), dom)
    k = 1
    while degree(b) > 0:
        a = gcd(b, d, dom)
        if degree(a) > 0:
            out.append((a, k))
        b = exact_quotient(b, a, dom)
        c = exact_quotient(d, a, dom)
        d = sub(c, derivative(b, dom), dom)
        k += 1
    return out


def binary_to_univariate(form: MultiPoly) -> Tuple[UPoly, int]:
    """Dehomogenise a binary form at the second variable; returns (f(t, 1), multiplicity of the root t = infinity)."""
    if form.nvars != 2 or not form.is_homogeneous():
        raise DomainError("expected a binary form")
    dom = form.domain
    n = form.degree()
    coeffs = [dom.zero] * (n + 1)
    for (a, _), c in form.terms.items():
        coeffs[a] = c
    f = trim(coeffs, dom)
    return f, n - degree(f)


def binary_multiplicity_structure(f, dom: Domain = None) -> List[Tuple[str, int]]:
    """Root multiplicities without extracting roots: each entry is (marker, multiplicity), one per root.

    The marker is 'infinity' for the root at infinity of a binary form and
    'deg d' when the root lies in a degree-d squarefree factor.
    """
    at_infinity = 0
    if isinstance(f, MultiPoly):
        dom = f.domain
        f, at_infinity = binary_to_univariate(f)
    return _profile(f, at_infinity, dom)


def _profile(f, at_infinity: int, dom: Domain = None) -> List[Tuple[str, int]]:
    if dom is None:
        from Shimura.algebra.domains import CYCLO

        dom = CYCLO
    out = []
    if degree(f) > 0:
        for factor, k in squarefree_decomposition(f, dom):
            out.extend((f"deg {degree(factor)}", k) for _ in range(degree(factor)))
    if at_infinity:
        out.append(("infinity", at_infinity))
    return sorted(out, key=lambda item: (-item[1], item[0]))


def multiplicity_profile(f, dom: Domain, at_infinity: int = 0) -> List[int]:
    return sorted((k for _, k in _profile(trim(f, dom), at_infinity, dom)), reverse=True)


def form_profile(form: MultiPoly) -> List[int]:
    f, at_inf = binary_to_univariate(form)
    return multiplicity_profile(f, form.domain, at_inf)


def roots_mod_p(f, p: int) -> Counter:
    """Roots in F_p with multiplicities (plain evaluation, then repeated division)."""
    dom = PrimeField(p)
    f = trim([c % p for c in f], dom)
    roots = Counter()
    for x in range(p):
        g = f
        while degree(g) > 0 and evaluate(g, x, dom) == 0:
            roots[x] += 1
            g = divmod_(g, [(-x) % p, 1], dom)[0]
    return roots


def interpolate_mod_p(xs: Sequence[int], ys: Sequence[int], p: int) -> UPoly:
    """Newton interpolation through (xs[i], ys[i]) over F_p."""
    dom = PrimeField(p)
    n = len(xs)
    coef = [y % p for y in ys]
    for j in range(1, n):
        for i in range(n - 1, j - 1, -1):
            coef[i] = (coef[i] - coef[i - 1]) * pow(xs[i] - xs[i - j], -1, p) % p
    poly = [coef[-1]]
    for i in range(n - 2, -1, -1):
        poly = add(mul(poly, [(-xs[i]) % p, 1], dom), [coef[i]], dom)
    return trim(poly, dom)
