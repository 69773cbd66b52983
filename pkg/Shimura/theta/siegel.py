"""Points of the Siegel upper half space and the action of Sp(2g, Z) on them."""

import numpy as np

from Shimura.helper.exceptions import DomainError


class SiegelMatrix:
    """Complex symmetric g x g matrix with positive definite imaginary part."""

    __slots__ = ("tau", "g")

    def __init__(self, tau):
        tau = np.array(tau, dtype=complex)
        if tau.ndim != 2 or tau.shape[0] != tau.shape[1]:
            raise DomainError(f"period matrix of shape {tau.shape}")
        if not np.allclose(tau, tau.T, atol=1e-13):
            raise DomainError("period matrix is not symmetric")
        try:
            np.linalg.cholesky(tau.imag)
        except np.linalg.LinAlgError:
            raise DomainError("imaginary part is not positive definite")
        self.tau = (tau + tau.T) / 2
        self.g = tau.shape[0]

    @property
    def min_eigenvalue(self) -> float:
        return float(np.linalg.eigvalsh(self.tau.imag)[0])

    def __repr__(self):
        return f"SiegelMatrix(g={self.g})"

    @classmethod
    def diagonal(cls, *entries) -> "SiegelMatrix":
        return cls(np.diag(np.array(entries, dtype=complex)))


def random_siegel(g: int, rng: np.random.Generator) -> SiegelMatrix:
    """A + iB with A uniform symmetric in [-1, 1] and B = C^T C + 0.8 I."""
    a = rng.uniform(-1, 1, (g, g))
    c = rng.uniform(-0.5, 0.5, (g, g))
    b = c.T @ c + 0.8 * np.eye(g)
    return SiegelMatrix((a + a.T) / 2 + 1j * b)


def block_diagonal(*blocks: SiegelMatrix) -> SiegelMatrix:
    g = sum(block.g for block in blocks)
    tau = np.zeros((g, g), dtype=complex)
    start = 0
    for block in blocks:
        tau[start:start + block.g, start:start + block.g] = block.tau
        start += block.g
    return SiegelMatrix(tau)


def symplectic_form(g: int) -> np.ndarray:
    eye = np.eye(g, dtype=np.int64)
    zero = np.zeros((g, g), dtype=np.int64)
    return np.block([[zero, eye], [-eye, zero]])


def is_symplectic(m) -> bool:
    m = np.array(m, dtype=np.int64)
    g = m.shape[0] // 2
    j = symplectic_form(g)
    return bool(np.array_equal(m.T @ j @ m, j))


def siegel_action(m, point: SiegelMatrix) -> SiegelMatrix:
    """(A tau + B)(C tau + D)^-1 for M = [[A, B], [C, D]] in Sp(2g, Z)."""
    m = np.array(m, dtype=np.int64)
    g = point.g
    if m.shape != (2 * g, 2 * g) or not is_symplectic(m):
        raise DomainError("matrix is not integral symplectic of the right size")
    a, b, c, d = m[:g, :g], m[:g, g:], m[g:, :g], m[g:, g:]
    tau = point.tau
    numerator = a @ tau + b
    denominator = c @ tau + d
    return SiegelMatrix(np.linalg.solve(denominator.T, numerator.T).T)


def random_symplectic(g: int, rng: np.random.Generator, length: int = 6) -> np.ndarray:
    """Word in the standard generators [[I, S], [0, I]] and the involution J."""
    eye = np.eye(g, dtype=np.int64)
    zero = np.zeros((g, g), dtype=np.int64)
    m = np.eye(2 * g, dtype=np.int64)
    for _ in range(length):
        s = rng.integers(-1, 2, (g, g))
        s = np.triu(s) + np.triu(s, 1).T
        m = m @ np.block([[eye, s], [zero, eye]])
        if rng.random() < 0.5:
            m = m @ symplectic_form(g)
    return m
