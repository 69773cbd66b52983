"""Exact dense linear algebra: Bareiss determinants, rank, kernels and solves over a Domain."""

from fractions import Fraction
from typing import List, Optional, Sequence

import numpy as np

from Shimura.algebra.domains import QQ, Domain, PrimeField
from Shimura.helper.exceptions import DomainError


class ExactMatrix:
    __slots__ = ("rows", "domain")

    def __init__(self, rows: Sequence[Sequence], domain: Domain = QQ):
        self.domain = domain
        self.rows = [[domain.convert(x) for x in row] for row in rows]
        widths = {len(row) for row in self.rows}
        if len(widths) > 1:
            raise DomainError("ragged matrix")

    @property
    def shape(self):
        return len(self.rows), (len(self.rows[0]) if self.rows else 0)

    def __getitem__(self, idx):
        i, j = idx
        return self.rows[i][j]

    def __eq__(self, other):
        if not isinstance(other, ExactMatrix):
            return NotImplemented
        return self.shape == other.shape and all(a == b for r, s in zip(self.rows, other.rows) for a, b in zip(r, s))

    __hash__ = None

    def transpose(self) -> "ExactMatrix":
        return ExactMatrix([list(col) for col in zip(*self.rows)], self.domain)

    def __mul__(self, other: "ExactMatrix") -> "ExactMatrix":
        dom = self.domain
        cols = list(zip(*other.rows))
        out = []
        for row in self.rows:
            line = []
            for col in cols:
                acc = dom.zero
                for a, b in zip(row, col):
                    if not dom.is_zero(a) and not dom.is_zero(b):
                        acc = dom.add(acc, dom.mul(a, b))
                line.append(acc)
            out.append(line)
        return ExactMatrix(out, dom)

    def apply(self, vector: Sequence) -> List:
        dom = self.domain
        out = []
        for row in self.rows:
            acc = dom.zero
            for a, b in zip(row, vector):
                acc = dom.add(acc, dom.mul(a, b))
            out.append(acc)
        return out

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> "ExactMatrix":
        return ExactMatrix([[self.rows[i][j] for j in cols] for i in rows], self.domain)

    # ---------------- elimination ----------------
    def echelon(self):
        """Reduced row echelon form and pivot columns."""
        dom = self.domain
        m = [row[:] for row in self.rows]
        nrows, ncols = self.shape
        pivots = []
        r = 0
        for c in range(ncols):
            pivot = next((i for i in range(r, nrows) if not dom.is_zero(m[i][c])), None)
            if pivot is None:
                continue
            m[r], m[pivot] = m[pivot], m[r]
            inv = dom.inv(m[r][c])
            m[r] = [dom.mul(x, inv) for x in m[r]]
            for i in range(nrows):
                if i != r and not dom.is_zero(m[i][c]):
                    f = m[i][c]
                    m[i] = [dom.sub(a, dom.mul(f, b)) for a, b in zip(m[i], m[r])]
            pivots.append(c)
            r += 1
            if r == nrows:
                break
        return m, pivots

    def rank(self) -> int:
        if self._is_integral():
            return bareiss_rank([[int(x) for x in row] for row in self.rows])
        return len(self.echelon()[1])

    def kernel(self) -> List[List]:
        dom = self.domain
        m, pivots = self.echelon()
        ncols = self.shape[1]
        free = [c for c in range(ncols) if c not in pivots]
        basis = []
        for f in free:
            v = [dom.zero] * ncols
            v[f] = dom.one
            for r, c in enumerate(pivots):
                v[c] = dom.neg(m[r][f])
            basis.append(v)
        return basis

    def det(self):
        n, ncols = self.shape
        if n != ncols:
            raise DomainError("determinant of a non-square matrix")
        if self._is_integral():
            return Fraction(bareiss_det([[int(x) for x in row] for row in self.rows]))
        dom = self.domain
        m = [row[:] for row in self.rows]
        det = dom.one
        for c in range(n):
            pivot = next((i for i in range(c, n) if not dom.is_zero(m[i][c])), None)
            if pivot is None:
                return dom.zero
            if pivot != c:
                m[c], m[pivot] = m[pivot], m[c]
                det = dom.neg(det)
            det = dom.mul(det, m[c][c])
            inv = dom.inv(m[c][c])
            for i in range(c + 1, n):
                if not dom.is_zero(m[i][c]):
                    f = dom.mul(m[i][c], inv)
                    m[i] = [dom.sub(a, dom.mul(f, b)) for a, b in zip(m[i], m[c])]
        return det

    def solve(self, rhs: Sequence) -> Optional[List]:
        """One solution of self * x = rhs, or None when inconsistent."""
        dom = self.domain
        aug = ExactMatrix([row + [dom.convert(b)] for row, b in zip(self.rows, rhs)], dom)
        m, pivots = aug.echelon()
        ncols = self.shape[1]
        if ncols in pivots:
            return None
        x = [dom.zero] * ncols
        for r, c in enumerate(pivots):
            x[c] = m[r][ncols]
        return x

    def _is_integral(self) -> bool:
        if self.domain != QQ:
            return False
        return all(Fraction(x).denominator == 1 for row in self.rows for x in row)


def bareiss_det(m: List[List[int]]) -> int:
    """Fraction-free determinant of an integer matrix."""
    m = [row[:] for row in m]
    n = len(m)
    sign, prev = 1, 1
    for k in range(n - 1):
        if m[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if m[i][k]), None)
            if swap is None:
                return 0
            m[k], m[swap] = m[swap], m[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
        prev = m[k][k]
    return sign * m[n - 1][n - 1] if n else 1


def bareiss_rank(m: List[List[int]]) -> int:
    m = [row[:] for row in m]
    nrows = len(m)
    ncols = len(m[0]) if m else 0
    rank, prev = 0, 1
    for c in range(ncols):
        pivot = next((i for i in range(rank, nrows) if m[i][c]), None)
        if pivot is None:
            continue
        m[rank], m[pivot] = m[pivot], m[rank]
        for i in range(rank + 1, nrows):
            for j in range(c + 1, ncols):
                m[i][j] = (m[i][j] * m[rank][c] - m[i][c] * m[rank][j]) // prev
            m[i][c] = 0
        prev = m[rank][c]
        rank += 1
        if rank == nrows:
            break
    return rank


def rank_mod_p(rows, p: int) -> int:
    """Rank over F_p of an integer array, with numpy row reduction."""
    m = np.array(rows, dtype=np.int64) % p
    nrows, ncols = m.shape
    rank = 0
    for c in range(ncols):
        nz = np.nonzero(m[rank:, c])[0]
        if nz.size == 0:
            continue
        pivot = rank + nz[0]
        m[[rank, pivot]] = m[[pivot, rank]]
        m[rank] = m[rank] * pow(int(m[rank, c]), -1, p) % p
        factors = m[:, c].copy()
        factors[rank] = 0
        m = (m - np.outer(factors, m[rank])) % p
        rank += 1
        if rank == nrows:
            break
    return rank


def float_rank(rows) -> int:
    """Floating-point rank, used only to screen candidates before exact certification."""
    return int(np.linalg.matrix_rank(np.array(rows, dtype=float)))


def kernel_mod_p(rows, p: int) -> List[List[int]]:
    return ExactMatrix(rows, PrimeField(p)).kernel()
