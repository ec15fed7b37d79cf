"""Orthonormal polynomial families and Gaussian quadrature for probability measures.

Two families are supported:

* probabilists' Hermite polynomials, orthogonal under the standard normal
  measure on the real line, and
* Legendre polynomials, orthogonal under the uniform probability measure
  on [-1, 1].

All rules are normalized so the weights sum to one, i.e. a weighted sum of
function values is directly an expectation under the family's measure.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np
from scipy.linalg import eigvalsh_tridiagonal

__all__ = [
    "Family",
    "PolynomialFamily",
    "QuadratureRule",
    "recurrence_coefficients",
    "gauss_rule",
    "eval_orthonormal",
    "eval_orthonormal_table",
    "quadrature_moment",
    "analytic_moment",
]


class Family(str, Enum):
    """Supported polynomial families, named by their probability measure."""

    HERMITE = "hermite"  # probabilists' Hermite, standard normal measure
    LEGENDRE = "legendre"  # Legendre, uniform probability measure on [-1, 1]


@dataclass(frozen=True)
class PolynomialFamily:
    """Three-term recurrence data a_k, b_k for a monic orthogonal family.

    The monic polynomials satisfy p_{k+1}(x) = (x - a_k) p_k(x) - b_k p_{k-1}(x)
    with b_0 holding the total mass of the measure (1 for probability measures).
    """

    kind: Family
    a: np.ndarray
    b: np.ndarray

    def __post_init__(self):
        if len(self.a) != len(self.b):
            raise ValueError("recurrence arrays a and b must have equal length")
        if np.any(self.b[1:] <= 0):
            raise ValueError("b_k must be positive for k >= 1")

    @property
    def size(self) -> int:
        return len(self.a)


@dataclass(frozen=True)
class QuadratureRule:
    """Nodes and weights of a 1-D Gaussian rule for a probability measure."""

    kind: Family
    nodes: np.ndarray
    weights: np.ndarray

    def __post_init__(self):
        if len(self.nodes) != len(self.weights):
            raise ValueError("nodes and weights must have equal length")
        if np.any(self.weights <= 0):
            raise ValueError("quadrature weights must be strictly positive")
        if np.any(np.diff(self.nodes) <= 0):
            raise ValueError("quadrature nodes must be strictly increasing")
        if abs(self.weights.sum() - 1.0) > 1e-12:
            raise ValueError("weights of a probability rule must sum to 1")

    def __len__(self) -> int:
        return len(self.nodes)


def recurrence_coefficients(kind: Family | str, n: int) -> PolynomialFamily:
    """Return the first ``n`` recurrence coefficients of the chosen family.

    Hermite (probabilists'): a_k = 0, b_k = k.
    Legendre on [-1, 1] with the uniform probability measure:
    a_k = 0, b_k = k^2 / (4k^2 - 1).
    """
    kind = Family(kind)
    if n < 1:
        raise ValueError(f"need at least one coefficient, got n={n}")
    k = np.arange(n, dtype=float)
    a = np.zeros(n)
    if kind is Family.HERMITE:
        b = k.copy()
    elif kind is Family.LEGENDRE:
        b = np.zeros(n)
        b[1:] = k[1:] ** 2 / (4.0 * k[1:] ** 2 - 1.0)
    else:  # pragma: no cover - Enum() already rejects unknown kinds
        raise ValueError(f"unsupported polynomial family: {kind}")
    b[0] = 1.0  # total mass of the probability measure
    return PolynomialFamily(kind=kind, a=a, b=b)


def gauss_rule(family: PolynomialFamily, n: int) -> QuadratureRule:
    """n-point Gaussian rule for the family's measure (Golub-Welsch).

    Eigenvalues of the symmetric tridiagonal Jacobi matrix give the nodes.
    Weights come from the equivalent Christoffel-function identity
    w_i = 1 / sum_{k<n} phi_k(xi_i)^2, which (unlike squaring the first
    eigenvector component) cannot underflow to zero at extreme nodes. The
    rule is exact for polynomials of degree <= 2n - 1.
    """
    if n < 1:
        raise ValueError(f"need at least one node, got n={n}")
    if family.size < n:
        family = recurrence_coefficients(family.kind, n)
    try:
        nodes = eigvalsh_tridiagonal(family.a[:n], np.sqrt(family.b[1:n]))
    except np.linalg.LinAlgError as exc:  # pragma: no cover - defensive
        raise RuntimeError(f"Jacobi eigen-decomposition failed for n={n}") from exc
    # Both supported measures are symmetric about 0 (a_k = 0); enforce the
    # symmetry exactly so mirrored nodes/weights match to the last bit.
    nodes = 0.5 * (nodes - nodes[::-1])
    table = eval_orthonormal_table(family, n - 1, nodes)
    weights = 1.0 / (table**2).sum(axis=0)
    weights = 0.5 * (weights + weights[::-1])
    weights /= weights.sum()
    return QuadratureRule(kind=family.kind, nodes=nodes, weights=weights)


def quadrature_moment(rule: QuadratureRule, k: int) -> float:
    """Estimate the k-th raw moment sum_i w_i xi_i^k of the rule's measure.

    Terms are formed as sign(xi)^k * |xi|^k so mirrored nodes of a symmetric
    rule contribute exact negations for odd k, and accumulated with
    math.fsum; otherwise huge odd-degree terms would bury the (zero) result
    in cancellation noise.
    """
    import math

    signs = np.where(rule.nodes < 0, -1.0, 1.0) ** k
    terms = rule.weights * signs * np.abs(rule.nodes) ** k
    return math.fsum(terms)


def analytic_moment(kind: Family | str, k: int) -> float:
    """k-th raw moment of the family's probability measure.

    Standard normal: 0 for odd k, (k-1)!! for even k.
    Uniform on [-1, 1]: 0 for odd k, 1/(k+1) for even k.
    """
    kind = Family(kind)
    if k % 2 == 1:
        return 0.0
    if kind is Family.HERMITE:
        return float(np.prod(np.arange(k - 1, 0, -2, dtype=float))) if k else 1.0
    return 1.0 / (k + 1)


def eval_orthonormal(family: PolynomialFamily, degree: int, x) -> np.ndarray | float:
    """Evaluate the orthonormal (unit-norm) polynomial of the given degree.

    Uses the normalized recurrence
    sqrt(b_{k+1}) phi_{k+1}(x) = (x - a_k) phi_k(x) - sqrt(b_k) phi_{k-1}(x)
    with phi_0 = 1 under the family's probability measure.
    """
    if degree < 0:
        raise ValueError(f"degree must be non-negative, got {degree}")
    table = eval_orthonormal_table(family, degree, x)
    out = table[degree]
    return out if np.ndim(x) else float(out[()])


def eval_orthonormal_table(family: PolynomialFamily, max_degree: int, x) -> np.ndarray:
    """Table of phi_0(x) .. phi_max_degree(x), shape (max_degree + 1,) + x.shape."""
    if max_degree < 0:
        raise ValueError(f"max_degree must be non-negative, got {max_degree}")
    if family.size < max_degree + 1:
        family = recurrence_coefficients(family.kind, max_degree + 1)
    xv = np.asarray(x, dtype=float)
    table = np.empty((max_degree + 1,) + xv.shape)
    table[0] = 1.0
    if max_degree >= 1:
        sqrt_b = np.sqrt(family.b)
        table[1] = (xv - family.a[0]) / sqrt_b[1]
        for k in range(1, max_degree):
            table[k + 1] = (
                (xv - family.a[k]) * table[k] - sqrt_b[k] * table[k - 1]
            ) / sqrt_b[k + 1]
    return table
