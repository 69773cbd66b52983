"""
Truncated theta series.

Both kinds of theta constant are sums over a parity class n = sigma mod 2 of
an integer lattice:

    Theta[sigma](tau)        = sum exp(pi i n.tau.n / 2)
    theta[eps; eps'](tau)    = sum exp(pi i n.tau.n / 4) i^(n.eps')

so a single box summation serves both. The box radius comes from a Gaussian
tail bound on the terms outside it.
"""

from math import exp, pi, sqrt
from typing import List, NamedTuple, Sequence

import numpy as np

from Shimura.helper.exceptions import DomainError
from Shimura.theta.characteristics import (
    Bits, Characteristic, add_bits, all_bits, dot, even_characteristics, index_of,
)
from Shimura.theta.siegel import SiegelMatrix


class ThetaPoint(NamedTuple):
    g: int
    values: np.ndarray
    radius: int
    error_bound: float

    def pivot(self) -> int:
        return int(np.argmax(np.abs(self.values)))

    def normalized(self) -> np.ndarray:
        return self.values / self.values[self.pivot()]


def tail_bound(decay: float, radius: int, g: int) -> float:
    """Bound on sum over |n|_inf > radius of exp(-decay |n|^2), using shells of the box."""
    total = 0.0
    for k in range(radius + 1, radius + 60):
        term = 2 * g * (2 * k + 1) ** (g - 1) * exp(-decay * k * k)
        total += term
        if term < 1e-300:
            break
    return total


def truncation_radius(decay: float, g: int, tol: float, policy: str = "gaussian-tail") -> int:
    if decay <= 0:
        raise DomainError("imaginary part is not positive definite")
    radius = max(1, int(sqrt(1 / decay)))
    while tail_bound(decay, radius, g) >= tol:
        radius += 1
    return 2 * radius if policy == "doubled" else radius


def _parity_grid(sigma: Bits, radius: int) -> np.ndarray:
    span = np.arange(-radius, radius + 1)
    axes = [span[(span - s) % 2 == 0] for s in sigma]
    mesh = np.meshgrid(*axes, indexing="ij")
    return np.stack([m.ravel() for m in mesh], axis=1)


_POWERS_OF_I = np.array([1, 1j, -1, -1j])


def _box_sum(point: SiegelMatrix, sigma: Bits, scale: float, twist: Bits, radius: int) -> complex:
    n = _parity_grid(sigma, radius)
    quad = np.einsum("ki,ij,kj->k", n, point.tau, n)
    phase = np.exp(1j * pi * scale * quad)
    if any(twist):
        phase = phase * _POWERS_OF_I[n @ np.array(twist, dtype=np.int64) % 4]
    return complex(phase.sum())


def theta_second_kind(sigma: Sequence[int], point: SiegelMatrix, tol: float, policy: str = "gaussian-tail") -> complex:
    sigma = tuple(sigma)
    if len(sigma) != point.g:
        raise DomainError(f"characteristic of length {len(sigma)} for genus {point.g}")
    # |term| <= exp(-(pi/2) lambda |n|^2)
    radius = truncation_radius(pi / 2 * point.min_eigenvalue, point.g, tol, policy)
    return _box_sum(point, sigma, 0.5, (0,) * point.g, radius)


def theta_with_char(c: Characteristic, point: SiegelMatrix, tol: float, policy: str = "gaussian-tail") -> complex:
    if c.genus != point.g:
        raise DomainError(f"characteristic of genus {c.genus} for genus {point.g}")
    radius = truncation_radius(pi / 4 * point.min_eigenvalue, point.g, tol, policy)
    return _box_sum(point, c.eps, 0.25, c.eps_p, radius)


def theta_map(point: SiegelMatrix, tol: float, policy: str = "gaussian-tail") -> ThetaPoint:
    decay = pi / 2 * point.min_eigenvalue
    radius = truncation_radius(decay, point.g, tol, policy)
    values = np.array([_box_sum(point, sigma, 0.5, (0,) * point.g, radius) for sigma in all_bits(point.g)])
    return ThetaPoint(point.g, values, radius, tail_bound(decay, radius, point.g))


def thetanulls(point: SiegelMatrix, tol: float, characteristics=None, policy: str = "gaussian-tail") -> np.ndarray:
    chars = characteristics if characteristics is not None else even_characteristics(point.g)
    radius = truncation_radius(pi / 4 * point.min_eigenvalue, point.g, tol, policy)
    return np.array([_box_sum(point, c.eps, 0.25, c.eps_p, radius) for c in chars])


def square_identity_check(c: Characteristic, point: SiegelMatrix, tol: float) -> float:
    """Relative residual of theta[c]^2 = sum_sigma (-1)^(sigma.eps') Theta[sigma] Theta[sigma+eps]."""
    if not c.is_even:
        raise DomainError(f"odd characteristic {c.label()}")
    lhs = theta_with_char(c, point, tol) ** 2
    second = theta_map(point, tol).values
    rhs = sum(
        (-1) ** dot(sigma, c.eps_p) * second[index_of(sigma)] * second[index_of(add_bits(sigma, c.eps))]
        for sigma in all_bits(point.g)
    )
    return abs(lhs - rhs) / max(abs(lhs), 1.0)


def vanishing_count(point: SiegelMatrix, tol: float) -> int:
    """Even thetanulls below tol times the median modulus."""
    if point.g != 4:
        raise DomainError("vanishing counts are taken in genus 4")
    moduli = np.abs(thetanulls(point, tol * 1e-3))
    median = float(np.median(moduli))
    if median < tol:
        raise DomainError(f"median thetanull {median:.2e} below tolerance; period matrix ill-conditioned")
    return int(np.sum(moduli < tol * median))


def schottky_value(point: SiegelMatrix, tol: float) -> complex:
    """J = 2^4 sum theta^16 - (sum theta^8)^2 over the even characteristics of genus 4."""
    if point.g != 4:
        raise DomainError("the Schottky form lives in genus 4")
    values = thetanulls(point, tol)
    return complex(16 * np.sum(values ** 16) - np.sum(values ** 8) ** 2)


def projective_distance(x: np.ndarray, y: np.ndarray) -> float:
    """Distance of two points of P^n after scaling both to 1 at the largest coordinate of x."""
    k = int(np.argmax(np.abs(x)))
    if abs(y[k]) < 1e-300:
        return float("inf")
    return float(np.max(np.abs(x / x[k] - y / y[k])))


def outer_structure(values: np.ndarray, g_left: int, g_right: int) -> List[List[complex]]:
    return np.reshape(values, (2 ** g_left, 2 ** g_right)).tolist()
