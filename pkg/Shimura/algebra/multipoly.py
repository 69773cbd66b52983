"""
Sparse multivariate polynomials over a pluggable coefficient domain.

Terms are a dict from exponent tuples to nonzero coefficients. Iteration
order is graded reverse lexicographic, largest monomial first.
"""

from fractions import Fraction
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Tuple

from Shimura.algebra.domains import QQ, Domain, PrimeField
from Shimura.helper.exceptions import DomainError, NotDivisibleError

Monomial = Tuple[int, ...]


def grevlex_key(exps: Monomial):
    return (sum(exps), tuple(-e for e in reversed(exps)))


def _divides(a: Monomial, b: Monomial) -> bool:
    return all(x <= y for x, y in zip(a, b))


class MultiPoly:
    __slots__ = ("nvars", "terms", "domain")

    def __init__(self, nvars: int, terms: Optional[Dict[Monomial, object]] = None, domain: Domain = QQ, clean: bool = True):
        self.nvars = nvars
        self.domain = domain
        if terms is None:
            terms = {}
        if clean:
            terms = {tuple(k): domain.convert(v) for k, v in terms.items()}
            terms = {k: v for k, v in terms.items() if not domain.is_zero(v)}
        self.terms = terms

    # ---------------- constructors ----------------
    @classmethod
    def gens(cls, nvars: int, domain: Domain = QQ) -> List["MultiPoly"]:
        out = []
        for i in range(nvars):
            exps = [0] * nvars
            exps[i] = 1
            out.append(cls(nvars, {tuple(exps): domain.one}, domain, clean=False))
        return out

    @classmethod
    def constant(cls, nvars: int, value, domain: Domain = QQ) -> "MultiPoly":
        return cls(nvars, {(0,) * nvars: value}, domain)

    def _new(self, terms, clean=False) -> "MultiPoly":
        return MultiPoly(self.nvars, terms, self.domain, clean=clean)

    def _lift(self, other) -> "MultiPoly":
        if isinstance(other, MultiPoly):
            if other.nvars != self.nvars:
                raise DomainError(f"variable count mismatch {self.nvars} != {other.nvars}")
            return other
        return MultiPoly.constant(self.nvars, other, self.domain)

    # ---------------- inspection ----------------
    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def degree(self) -> int:
        return max((sum(k) for k in self.terms), default=-1)

    def degree_in(self, i: int) -> int:
        return max((k[i] for k in self.terms), default=-1)

    def is_homogeneous(self) -> bool:
        return len({sum(k) for k in self.terms}) <= 1

    def monomials(self) -> List[Monomial]:
        return sorted(self.terms, key=grevlex_key, reverse=True)

    def items(self) -> List[Tuple[Monomial, object]]:
        return [(m, self.terms[m]) for m in self.monomials()]

    def leading_monomial(self) -> Monomial:
        return max(self.terms, key=grevlex_key)

    def leading_coeff(self):
        return self.terms[self.leading_monomial()]

    def coeff(self, exps: Sequence[int]):
        return self.terms.get(tuple(exps), self.domain.zero)

    def homogeneous_part(self, d: int) -> "MultiPoly":
        return self._new({k: v for k, v in self.terms.items() if sum(k) == d})

    def lowest_degree(self) -> int:
        return min((sum(k) for k in self.terms), default=-1)

    def __len__(self):
        return len(self.terms)

    # ---------------- arithmetic ----------------
    def __add__(self, other):
        other = self._lift(other)
        dom = self.domain
        terms = dict(self.terms)
        for k, v in other.terms.items():
            if k in terms:
                s = dom.add(terms[k], v)
                if dom.is_zero(s):
                    del terms[k]
                else:
                    terms[k] = s
            else:
                terms[k] = v
        return self._new(terms)

    __radd__ = __add__

    def __neg__(self):
        return self._new({k: self.domain.neg(v) for k, v in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def scale(self, c) -> "MultiPoly":
        c = self.domain.convert(c)
        if self.domain.is_zero(c):
            return self._new({})
        return self._new({k: self.domain.mul(v, c) for k, v in self.terms.items()})

    def __mul__(self, other):
        if not isinstance(other, MultiPoly):
            return self.scale(other)
        other = self._lift(other)
        if isinstance(self.domain, PrimeField):
            return self._mul_mod(other)
        dom = self.domain
        acc: Dict[Monomial, object] = {}
        for ka, va in self.terms.items():
            for kb, vb in other.terms.items():
                k = tuple(x + y for x, y in zip(ka, kb))
                prod = dom.mul(va, vb)
                acc[k] = dom.add(acc[k], prod) if k in acc else prod
        return self._new({k: v for k, v in acc.items() if not dom.is_zero(v)})

    __rmul__ = __mul__

    def _mul_mod(self, other: "MultiPoly") -> "MultiPoly":
        p = self.domain.p
        acc: Dict[Monomial, int] = {}
        get = acc.get
        for ka, va in self.terms.items():
            for kb, vb in other.terms.items():
                k = tuple(x + y for x, y in zip(ka, kb))
                acc[k] = get(k, 0) + va * vb
        return self._new({k: v % p for k, v in acc.items() if v % p})

    def __pow__(self, exponent: int):
        if exponent < 0:
            raise DomainError("negative power of a polynomial")
        result = MultiPoly.constant(self.nvars, 1, self.domain)
        base = self
        while exponent:
            if exponent & 1:
                result = result * base
            exponent >>= 1
            if exponent:
                base = base * base
        return result

    def __eq__(self, other):
        if not isinstance(other, MultiPoly):
            other = self._lift(other)
        return self.nvars == other.nvars and self.terms == other.terms

    def __hash__(self):
        return hash((self.nvars, frozenset(self.terms.items())))

    def monic(self) -> "MultiPoly":
        if self.is_zero():
            return self
        return self.scale(self.domain.inv(self.leading_coeff()))

    def is_proportional(self, other: "MultiPoly") -> bool:
        if self.is_zero() or other.is_zero():
            return self.is_zero() and other.is_zero()
        return self.monic() == other.monic()

    def exact_divide(self, divisor: "MultiPoly") -> "MultiPoly":
        if divisor.is_zero():
            raise DomainError("division by the zero polynomial")
        dom = self.domain
        lm_d = divisor.leading_monomial()
        inv_lc = dom.inv(divisor.terms[lm_d])
        remainder = self
        quotient: Dict[Monomial, object] = {}
        while remainder:
            lm = remainder.leading_monomial()
            if not _divides(lm_d, lm):
                raise NotDivisibleError(
                    f"leading term {remainder.domain.to_str(remainder.terms[lm])}*{format_monomial(lm)} survives",
                    leading_term=(lm, remainder.terms[lm]),
                )
            shift = tuple(a - b for a, b in zip(lm, lm_d))
            c = dom.mul(remainder.terms[lm], inv_lc)
            quotient[shift] = c
            remainder = remainder - divisor.shift(shift, c)
        return self._new(quotient, clean=True)

    def divides(self, other: "MultiPoly") -> bool:
        try:
            other.exact_divide(self)
        except NotDivisibleError:
            return False
        return True

    def shift(self, exps: Monomial, c) -> "MultiPoly":
        dom = self.domain
        return self._new({tuple(a + b for a, b in zip(k, exps)): dom.mul(v, c) for k, v in self.terms.items()}, clean=True)

    # ---------------- calculus and substitution ----------------
    def diff(self, i: int) -> "MultiPoly":
        dom = self.domain
        terms = {}
        for k, v in self.terms.items():
            if k[i]:
                nk = list(k)
                nk[i] -= 1
                terms[tuple(nk)] = dom.mul(v, dom.convert(k[i]))
        return self._new(terms, clean=True)

    def gradient(self) -> List["MultiPoly"]:
        return [self.diff(i) for i in range(self.nvars)]

    def evaluate(self, point: Sequence):
        """Value at a point whose entries live in the coefficient domain (or any ring the coefficients act on)."""
        if len(point) != self.nvars:
            raise DomainError(f"point of length {len(point)} for {self.nvars} variables")
        if isinstance(self.domain, PrimeField):
            p = self.domain.p
            total = 0
            for k, v in self.terms.items():
                term = v
                for x, e in zip(point, k):
                    if e:
                        term = term * pow(int(x), e, p) % p
                total += term
            return total % p
        total = None
        powers: Dict[Tuple[int, int], object] = {}
        for k, v in self.terms.items():
            term = v
            for i, e in enumerate(k):
                if e:
                    key = (i, e)
                    if key not in powers:
                        powers[key] = point[i] ** e
                    term = term * powers[key]
            total = term if total is None else total + term
        return self.domain.zero if total is None else total

    def substitute(self, images: Sequence["MultiPoly"]) -> "MultiPoly":
        """Compose with images[i] in place of variable i; images share one target ring."""
        if len(images) != self.nvars:
            raise DomainError(f"{len(images)} images for {self.nvars} variables")
        target = images[0]
        result = MultiPoly(target.nvars, {}, target.domain)
        cache: Dict[Tuple[int, int], MultiPoly] = {}

        def power(i, e):
            if (i, e) not in cache:
                cache[(i, e)] = images[i] if e == 1 else power(i, e - 1) * images[i]
            return cache[(i, e)]

        for k, v in self.terms.items():
            term = MultiPoly.constant(target.nvars, v, target.domain)
            for i, e in enumerate(k):
                if e:
                    term = term * power(i, e)
            result = result + term
        return result

    def map_coeffs(self, func: Callable, domain: Domain) -> "MultiPoly":
        return MultiPoly(self.nvars, {k: func(v) for k, v in self.terms.items()}, domain)

    def rename(self, nvars: int, positions: Sequence[int]) -> "MultiPoly":
        """Embed into nvars variables, variable i going to positions[i]."""
        terms = {}
        for k, v in self.terms.items():
            nk = [0] * nvars
            for i, e in enumerate(k):
                nk[positions[i]] += e
            terms[tuple(nk)] = v
        return MultiPoly(nvars, terms, self.domain, clean=False)

    # ---------------- text form ----------------
    def to_text(self, names: Optional[Sequence[str]] = None) -> str:
        if not self.terms:
            return "0"
        names = names or [f"x{i + 1}" for i in range(self.nvars)]
        pieces = []
        for k, v in self.items():
            pieces.append(f"{self.domain.to_str(v)} * {format_monomial(k, names)}" if any(k) else self.domain.to_str(v))
        return " + ".join(pieces)

    def __repr__(self):
        return f"MultiPoly({self.to_text()})"

    def to_sympy(self, symbols):
        from sympy import Integer, Rational

        expr = Integer(0)
        for k, v in self.terms.items():
            c = Rational(v.numerator, v.denominator) if isinstance(v, Fraction) else Integer(int(v))
            mono = Integer(1)
            for s, e in zip(symbols, k):
                mono *= s ** e
            expr += c * mono
        return expr


def format_monomial(exps: Monomial, names: Optional[Sequence[str]] = None) -> str:
    names = names or [f"x{i + 1}" for i in range(len(exps))]
    parts = [names[i] if e == 1 else f"{names[i]}^{e}" for i, e in enumerate(exps) if e]
    return "*".join(parts) if parts else "1"


def from_sympy(expr, symbols, domain: Domain = QQ) -> MultiPoly:
    from sympy import Poly

    poly = Poly(expr, *symbols, domain="QQ")
    terms = {tuple(monom): Fraction(int(c.p), int(c.q)) for monom, c in poly.terms()}
    rational = MultiPoly(len(symbols), terms, QQ)
    return rational if domain == QQ else rational.map_coeffs(domain.convert, domain)


def multivariate_gcd(f: MultiPoly, g: MultiPoly) -> MultiPoly:
    """Monic gcd; over QQ or GF(p) through sympy's sparse rings, over Q(zeta_20) through modular images."""
    if f.is_zero() or g.is_zero():
        raise DomainError("gcd with the zero polynomial")
    if isinstance(f.domain, PrimeField) or f.domain == QQ:
        return _sympy_gcd(f, g)
    from Shimura.algebra.reconstruct import cyclo_gcd

    return cyclo_gcd(f, g)


def _sympy_gcd(f: MultiPoly, g: MultiPoly) -> MultiPoly:
    from sympy.polys.domains import GF as SymGF, QQ as SymQQ
    from sympy.polys.orderings import grevlex
    from sympy.polys.rings import ring

    if isinstance(f.domain, PrimeField):
        base = SymGF(f.domain.p)
        convert = lambda c: base(int(c))
        back = lambda c: int(base.to_int(c)) % f.domain.p
    else:
        base = SymQQ
        convert = lambda c: base(c.numerator, c.denominator)
        back = lambda c: Fraction(int(base.numer(c)), int(base.denom(c)))
    names = ",".join(f"x{i}" for i in range(f.nvars))
    R, *_ = ring(names, base, grevlex)
    sf = R({k: convert(v) for k, v in f.terms.items()})
    sg = R({k: convert(v) for k, v in g.terms.items()})
    h = sf.gcd(sg)
    return MultiPoly(f.nvars, {tuple(k): back(v) for k, v in h.terms()}, f.domain).monic()


def elementary_power_sums(xs: Iterable[MultiPoly], k: int) -> MultiPoly:
    total = None
    for x in xs:
        total = x ** k if total is None else total + x ** k
    return total


def elementary_symmetric(xs: Sequence[MultiPoly], k: int) -> MultiPoly:
    """e_k of the given polynomials, by the product expansion of prod(1 + x_i T)."""
    n = xs[0].nvars
    dom = xs[0].domain
    coeffs = [MultiPoly.constant(n, 1, dom)] + [MultiPoly(n, {}, dom) for _ in range(k)]
    for x in xs:
        for j in range(k, 0, -1):
            coeffs[j] = coeffs[j] + coeffs[j - 1] * x
    return coeffs[k]
