"""Theta characteristics, F_2 index bookkeeping and the quadrics Q[eps; eps']."""

from functools import lru_cache
from itertools import product
from typing import List, NamedTuple, Tuple

from Shimura.algebra.domains import QQ, Domain
from Shimura.algebra.multipoly import MultiPoly
from Shimura.helper.exceptions import DomainError

Bits = Tuple[int, ...]


class Characteristic(NamedTuple):
    eps: Bits
    eps_p: Bits

    @property
    def genus(self) -> int:
        return len(self.eps)

    @property
    def parity(self) -> int:
        return dot(self.eps, self.eps_p)

    @property
    def is_even(self) -> bool:
        return self.parity == 0

    def label(self) -> str:
        return f"[{''.join(map(str, self.eps))};{''.join(map(str, self.eps_p))}]"

    @classmethod
    def parse(cls, text: str) -> "Characteristic":
        left, right = text.strip("[]").split(";")
        return cls(tuple(int(c) for c in left), tuple(int(c) for c in right))


def dot(x: Bits, y: Bits) -> int:
    return sum(a * b for a, b in zip(x, y)) % 2


def add_bits(x: Bits, y: Bits) -> Bits:
    return tuple((a + b) % 2 for a, b in zip(x, y))


def index_of(sigma: Bits) -> int:
    """Position of sigma in the 2^g coordinate vector; the first bit is the most significant."""
    idx = 0
    for bit in sigma:
        idx = 2 * idx + bit
    return idx


def bits_of(idx: int, g: int) -> Bits:
    return tuple((idx >> (g - 1 - i)) & 1 for i in range(g))


@lru_cache(maxsize=None)
def all_bits(g: int) -> Tuple[Bits, ...]:
    return tuple(product((0, 1), repeat=g))


def split_index(idx: int, g_left: int, g_right: int) -> Tuple[int, int]:
    """Block indices (sigma_a, sigma_b) of a coordinate of the product space."""
    return idx >> g_right, idx & ((1 << g_right) - 1)


@lru_cache(maxsize=None)
def even_characteristics(g: int) -> Tuple[Characteristic, ...]:
    if g < 1:
        raise DomainError(f"genus {g} < 1")
    chars = tuple(Characteristic(e, ep) for e in all_bits(g) for ep in all_bits(g) if dot(e, ep) == 0)
    assert len(chars) == 2 ** (g - 1) * (2 ** g + 1)
    return chars


@lru_cache(maxsize=None)
def odd_characteristics(g: int) -> Tuple[Characteristic, ...]:
    return tuple(Characteristic(e, ep) for e in all_bits(g) for ep in all_bits(g) if dot(e, ep) == 1)


def quadric_terms(c: Characteristic) -> List[Tuple[int, int, int]]:
    """(sign, index of X_sigma, index of X_{sigma+eps}) for every sigma."""
    if not c.is_even:
        raise DomainError(f"odd characteristic {c.label()}")
    return [
        (-1 if dot(sigma, c.eps_p) else 1, index_of(sigma), index_of(add_bits(sigma, c.eps)))
        for sigma in all_bits(c.genus)
    ]


def quadric_poly(c: Characteristic, domain: Domain = QQ) -> MultiPoly:
    """sum_sigma (-1)^(sigma.eps') X_sigma X_(sigma+eps) in the 2^g coordinates."""
    n = 2 ** c.genus
    terms = {}
    for sign, i, j in quadric_terms(c):
        exps = [0] * n
        exps[i] += 1
        exps[j] += 1
        key = tuple(exps)
        terms[key] = terms.get(key, 0) + sign
    return MultiPoly(n, terms, domain)


def embed_genus2(c: Characteristic, a: int, b: int) -> Characteristic:
    """Genus four characteristic [00 eps; a b eps'] built from a genus two one."""
    return Characteristic((0, 0) + c.eps, (a, b) + c.eps_p)


def block_characteristic(left: Characteristic, right: Characteristic) -> Characteristic:
    return Characteristic(left.eps + right.eps, left.eps_p + right.eps_p)
