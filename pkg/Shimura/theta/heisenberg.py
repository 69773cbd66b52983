"""
Heisenberg group, transvections and their lifts to the theta representation.

Vectors of F_2^(2g) are written v = (a, b): a translates the coordinates
X_sigma, b twists them by a character. The Schroedinger matrix is

    U_(a,b) e_x = i * i^(a.b) * (-1)^(b.x) e_(x+a)

and the transvection t_v lifts to M_Theta = (1 - i)/2 (U_v + I). The integral
lift used for the Siegel action pairs the character part with the first
block of tau, so it reduces to the transvection of (b, a).
"""

from fractions import Fraction
from functools import lru_cache
from itertools import product
from typing import Dict, List, NamedTuple, Optional, Sequence, Tuple

import numpy as np

from Shimura.algebra.cyclo import I, ONE, ZERO, ZETA5, CycloElement
from Shimura.algebra.domains import CYCLO
from Shimura.algebra.linalg import ExactMatrix
from Shimura.helper.exceptions import ConventionError, DomainError
from Shimura.logger import LOGGER
from Shimura.theta.characteristics import Bits, add_bits, all_bits, bits_of, dot, index_of
from Shimura.theta.series import projective_distance, theta_map
from Shimura.theta.siegel import SiegelMatrix, siegel_action, symplectic_form

HALF_ONE_MINUS_I = (ONE - I) * Fraction(1, 2)


class SympVec(NamedTuple):
    a: Bits
    b: Bits

    @property
    def genus(self) -> int:
        return len(self.a)

    def is_zero(self) -> bool:
        return not any(self.a) and not any(self.b)

    def flat(self) -> Tuple[int, ...]:
        return tuple(self.a) + tuple(self.b)

    def swapped(self) -> "SympVec":
        return SympVec(self.b, self.a)

    def __add__(self, other: "SympVec") -> "SympVec":
        return SympVec(add_bits(self.a, other.a), add_bits(self.b, other.b))

    @classmethod
    def from_index(cls, idx: int, g: int) -> "SympVec":
        bits = bits_of(idx, 2 * g)
        return cls(bits[:g], bits[g:])

    def label(self) -> str:
        return f"({''.join(map(str, self.a))},{''.join(map(str, self.b))})"


def pairing(v: SympVec, w: SympVec) -> int:
    return (dot(v.a, w.b) + dot(w.a, v.b)) % 2


def nonzero_vectors(g: int) -> List[SympVec]:
    return [SympVec.from_index(idx, g) for idx in range(1, 4 ** g)]


def _require_nonzero(v: SympVec):
    if v.is_zero():
        raise DomainError("the zero vector has no transvection")


# ---------------- F_2 side ----------------
def transvection_sp(v: SympVec) -> np.ndarray:
    """Matrix of w -> w + E(w, v) v on column vectors (a, b)."""
    _require_nonzero(v)
    flat = np.array(v.flat(), dtype=np.int64)
    dual = np.array(v.swapped().flat(), dtype=np.int64)
    return (np.eye(2 * v.genus, dtype=np.int64) + np.outer(flat, dual)) % 2


def order_mod2(m: np.ndarray, limit: int = 12) -> Optional[int]:
    eye = np.eye(m.shape[0], dtype=np.int64)
    power = eye
    for k in range(1, limit + 1):
        power = power @ m % 2
        if np.array_equal(power, eye):
            return k
    return None


def word_image(word: Sequence[SympVec]) -> np.ndarray:
    m = np.eye(2 * word[0].genus, dtype=np.int64)
    for v in word:
        m = m @ transvection_sp(v) % 2
    return m


# ---------------- Schroedinger representation ----------------
def identity(n: int) -> ExactMatrix:
    return ExactMatrix([[ONE if i == j else ZERO for j in range(n)] for i in range(n)], CYCLO)


def scaled(m: ExactMatrix, c) -> ExactMatrix:
    return ExactMatrix([[x * c for x in row] for row in m.rows], CYCLO)


def added(m: ExactMatrix, n: ExactMatrix) -> ExactMatrix:
    return ExactMatrix([[x + y for x, y in zip(r, s)] for r, s in zip(m.rows, n.rows)], CYCLO)


def matrix_power(m: ExactMatrix, e: int) -> ExactMatrix:
    result = identity(m.shape[0])
    for _ in range(e):
        result = result * m
    return result


def scalar_of(m: ExactMatrix) -> Optional[CycloElement]:
    """c when m = c I, else None."""
    n = m.shape[0]
    c = m[0, 0]
    for i in range(n):
        for j in range(n):
            if m[i, j] != (c if i == j else ZERO):
                return None
    return c


def trace(m: ExactMatrix) -> CycloElement:
    total = ZERO
    for i in range(m.shape[0]):
        total = total + m[i, i]
    return total


@lru_cache(maxsize=None)
def schrodinger_U(v: SympVec) -> ExactMatrix:
    _require_nonzero(v)
    g = v.genus
    n = 2 ** g
    rows = [[ZERO] * n for _ in range(n)]
    ab = sum(x * y for x, y in zip(v.a, v.b))
    for x in all_bits(g):
        phase = I ** (1 + ab) * (-1) ** dot(v.b, x)
        rows[index_of(add_bits(x, v.a))][index_of(x)] = phase
    return ExactMatrix(rows, CYCLO)


def heisenberg_element(w: SympVec) -> ExactMatrix:
    """U_w, with the identity standing in for w = 0."""
    return identity(2 ** w.genus) if w.is_zero() else schrodinger_U(w)


def commutator_scalar(v: SympVec, w: SympVec) -> Optional[CycloElement]:
    """U_v U_w U_v^-1 U_w^-1 as a scalar; U^-1 = -U."""
    uv, uw = schrodinger_U(v), schrodinger_U(w)
    return scalar_of(uv * uw * uv * uw)


@lru_cache(maxsize=None)
def theta_lift(v: SympVec) -> ExactMatrix:
    n = 2 ** v.genus
    return scaled(added(schrodinger_U(v), identity(n)), HALF_ONE_MINUS_I)


def conjugated_lift(v: SympVec, w: SympVec) -> ExactMatrix:
    """U_w M_Theta U_w^-1, again a lift of t_v."""
    uw = heisenberg_element(w)
    inverse = uw if w.is_zero() else scaled(uw, -ONE)
    return uw * theta_lift(v) * inverse


# ---------------- integral lift ----------------
def symplectic_lift_Z(v: SympVec) -> np.ndarray:
    """M = I - u u^T J with u the 0/1 vector (b, a); symplectic over Z."""
    _require_nonzero(v)
    g = v.genus
    u = np.array(v.swapped().flat(), dtype=np.int64)
    return np.eye(2 * g, dtype=np.int64) - np.outer(u, u) @ symplectic_form(g)


def lift_reduction_matches(v: SympVec) -> bool:
    return bool(np.array_equal(symplectic_lift_Z(v) % 2, transvection_sp(v.swapped())))


class Equivariance(NamedTuple):
    w: SympVec
    residual: float
    inverse_lift: bool


def _complex_matrix(m: ExactMatrix) -> np.ndarray:
    return np.array([[complex(x.embed_complex()) for x in row] for row in m.rows])


def equivariance_check(v: SympVec, point: SiegelMatrix, tol: float) -> Equivariance:
    """Find w with Theta(M tau) = U_w M_Theta U_w^-1 Theta(tau) projectively."""
    g = point.g
    target = theta_map(siegel_action(symplectic_lift_Z(v), point), tol).values
    source = theta_map(point, tol).values
    best = None
    for inverse in (False, True):
        for idx in range(4 ** g):
            w = SympVec.from_index(idx, g)
            lift = _complex_matrix(conjugated_lift(v, w))
            if inverse:
                lift = np.linalg.inv(lift)
            residual = projective_distance(target, lift @ source)
            if best is None or residual < best.residual:
                best = Equivariance(w, residual, inverse)
        if best.residual < 10 * tol + 1e-9:
            break
    if best.residual >= 10 * tol + 1e-9:
        raise ConventionError(f"no Heisenberg conjugate of the lift of {v.label()} matches (residual {best.residual:.2e})")
    if best.inverse_lift:
        LOGGER.warning(f"Lift of {v.label()} matched only through its inverse")
    return best


# ---------------- order five ----------------
class Order5Data(NamedTuple):
    word: Tuple[SympVec, ...]
    w: SympVec
    matrix: ExactMatrix
    c: CycloElement
    lam: CycloElement
    L: ExactMatrix
    charpoly: Tuple[CycloElement, ...]
    eigenvectors: Dict[int, List[CycloElement]]

    def golden(self) -> dict:
        return {
            "word": [v.label() for v in self.word],
            "w": self.w.label(),
            "lambda": str(self.lam),
            "c": str(self.c),
            "eigenvectors": {str(j): [str(x) for x in vec] for j, vec in self.eigenvectors.items()},
        }


def charpoly_newton(m: ExactMatrix) -> Tuple[CycloElement, ...]:
    """Coefficients (e1, ..., en) with charpoly x^n - e1 x^(n-1) + e2 x^(n-2) - ..."""
    n = m.shape[0]
    sums = []
    power = identity(n)
    for _ in range(n):
        power = power * m
        sums.append(trace(power))
    e = [ONE]
    for k in range(1, n + 1):
        acc = ZERO
        for i in range(1, k + 1):
            acc = acc + (-1) ** (i - 1) * e[k - i] * sums[i - 1]
        e.append(acc / k)
    return tuple(e[1:])


PHI5_CHARPOLY = tuple(CycloElement.from_int(x) for x in (-1, 1, -1, 1))


def normalized_kernel_vector(m: ExactMatrix) -> List[CycloElement]:
    kernel = m.kernel()
    if len(kernel) != 1:
        raise ConventionError(f"eigenspace of dimension {len(kernel)}")
    vec = kernel[0]
    pivot = next(x for x in vec if x)
    inv = pivot.inverse()
    return [x * inv for x in vec]


def _candidate(word, w: SympVec) -> Optional[Order5Data]:
    m = identity(4)
    for v in word:
        m = m * theta_lift(v)
    m = m * heisenberg_element(w)
    c = scalar_of(matrix_power(m, 5))
    if c is None:
        return None
    lam = -trace(m)
    if not lam or lam ** 5 != c:
        return None
    L = scaled(m, lam.inverse())
    charpoly = charpoly_newton(L)
    if charpoly != PHI5_CHARPOLY:
        return None
    eigenvectors = {}
    for j in range(1, 5):
        shifted = added(L, scaled(identity(4), -(ZETA5 ** j)))
        eigenvectors[j] = normalized_kernel_vector(shifted)
    return Order5Data(tuple(word), w, m, c, lam, L, charpoly, eigenvectors)


@lru_cache(maxsize=None)
def build_order5() -> Order5Data:
    """First word (v1..v4) in lexicographic order, and first twist U_w, giving a lift with charpoly Phi_5."""
    vectors = nonzero_vectors(2)
    for word in product(vectors, repeat=4):
        if order_mod2(word_image(word)) != 5:
            continue
        for idx in range(16):
            data = _candidate(word, SympVec.from_index(idx, 2))
            if data is not None:
                LOGGER.info(f"Order five lift from word {[v.label() for v in word]} twisted by {data.w.label()}")
                return data
    raise ConventionError("no lift of an order five word has eigenvalues the primitive fifth roots of unity")


def kron_vector(x: Sequence[CycloElement], y: Sequence[CycloElement]) -> List[CycloElement]:
    return [a * b for a in x for b in y]


def kron_matrix(m: ExactMatrix, n: ExactMatrix) -> ExactMatrix:
    rows = []
    for r1 in m.rows:
        for r2 in n.rows:
            rows.append([a * b for a in r1 for b in r2])
    return ExactMatrix(rows, CYCLO)


class Chart(NamedTuple):
    """Linear map P^(d-1) -> P^15 whose columns span an eigenspace of L x L^k."""
    k: int
    pairs: Tuple[Tuple[int, int], ...]
    columns: Tuple[Tuple[CycloElement, ...], ...]

    @property
    def dim(self) -> int:
        return len(self.columns)

    def coordinate(self, sigma: int, column: int) -> CycloElement:
        return self.columns[column][sigma]

    def matrix(self) -> List[List[CycloElement]]:
        """16 x d matrix C with X = C y."""
        return [[col[s] for col in self.columns] for s in range(16)]


def eigen_pairs(k: int) -> Tuple[Tuple[int, int], ...]:
    """(i, j) in {1..4}^2 with i + k j = 1 + k mod 5."""
    return tuple((i, j) for j in range(1, 5) for i in range(1, 5) if (i + k * j - 1 - k) % 5 == 0)


@lru_cache(maxsize=None)
def tensor_eigenspace(k: int) -> Chart:
    if k not in (2, 4):
        raise DomainError(f"no chart for k = {k}")
    data = build_order5()
    pairs = eigen_pairs(k)
    if k == 2:
        pairs = ((1, 1), (2, 3), (4, 2))
        assert set(pairs) == set(eigen_pairs(2))
    columns = tuple(tuple(kron_vector(data.eigenvectors[i], data.eigenvectors[j])) for i, j in pairs)
    return Chart(k, pairs, columns)
