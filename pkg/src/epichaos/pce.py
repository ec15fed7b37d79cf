"""Tensor-grid polynomial chaos expansions of black-box model outputs.

A model is evaluated once on the nodes of a tensor-product Gaussian
quadrature grid; spectral projection of the resulting output matrix yields
expansion coefficients from which mean, variance, covariance and Sobol
indices follow without further model evaluations.

Basis polynomials are always evaluated in the standard variable of each
dimension (the untransformed quadrature nodes), where they are orthonormal;
model inputs live in parameter space via the per-dimension transforms.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field

import numpy as np

from .distributions import DistributionSpec, to_parameter_nodes
from .orthopoly import (
    Family,
    QuadratureRule,
    eval_orthonormal_table,
    gauss_rule,
    recurrence_coefficients,
)

__all__ = [
    "MultiIndexSet",
    "TensorGrid",
    "PceExpansion",
    "tensor_index_set",
    "build_tensor_grid",
    "grid_from_rules",
    "project",
    "mean",
    "variance",
    "covariance_matrix",
    "evaluate",
    "expansion_to_dict",
    "expansion_to_json",
]


@dataclass(frozen=True)
class MultiIndexSet:
    """Deterministically ordered multi-indices of a tensor-degree box.

    Traversal is graded lexicographic: ascending total degree, ties broken
    by lexicographic comparison of the index tuples; the zero multi-index
    is therefore always first.
    """

    dim: int
    indices: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if not self.indices or any(len(a) != self.dim for a in self.indices):
            raise ValueError("indices must be non-empty tuples of length dim")
        if any(self.indices[0]):
            raise ValueError("first multi-index must be zero")
        if len(set(self.indices)) != len(self.indices):
            raise ValueError("duplicate multi-indices")

    def __len__(self) -> int:
        return len(self.indices)

    @property
    def array(self) -> np.ndarray:
        return np.asarray(self.indices, dtype=int)

    @property
    def max_degrees(self) -> tuple[int, ...]:
        return tuple(int(d) for d in self.array.max(axis=0))


def tensor_index_set(dim: int, degrees: int | tuple[int, ...]) -> MultiIndexSet:
    """Full tensor box of multi-indices with per-dimension maximum degrees."""
    if isinstance(degrees, int):
        degrees = (degrees,) * dim
    if len(degrees) != dim or any(d < 0 for d in degrees):
        raise ValueError(f"need {dim} non-negative degrees, got {degrees}")
    box = itertools.product(*(range(d + 1) for d in degrees))
    ordered = sorted(box, key=lambda a: (sum(a), a))
    return MultiIndexSet(dim=dim, indices=tuple(ordered))


@dataclass(frozen=True)
class TensorGrid:
    """Cartesian product of 1-D rules with parameter-space node transforms.

    Flattened arrays enumerate nodes with the first dimension slowest
    (C order). ``std_nodes`` hold the untransformed standard variables used
    for basis evaluation; ``nodes`` hold model inputs.
    """

    rules: tuple[QuadratureRule, ...]
    nodes: np.ndarray  # (N, dim) parameter space
    std_nodes: np.ndarray  # (N, dim) standard variables
    weights: np.ndarray  # (N,)
    dim_indices: np.ndarray = field(repr=False)  # (N, dim) per-dim node index

    def __post_init__(self):
        n_expected = int(np.prod([len(r) for r in self.rules]))
        if len(self.weights) != n_expected or self.nodes.shape != (
            n_expected,
            len(self.rules),
        ):
            raise ValueError("flattened grid size must equal the product of rule sizes")
        if abs(self.weights.sum() - 1.0) > 1e-12:
            raise ValueError("tensor weights must sum to 1")

    def __len__(self) -> int:
        return len(self.weights)

    @property
    def dim(self) -> int:
        return len(self.rules)

    @property
    def orders(self) -> tuple[int, ...]:
        return tuple(len(r) for r in self.rules)


def grid_from_rules(
    rules: list[QuadratureRule] | tuple[QuadratureRule, ...],
    param_nodes_1d: list[np.ndarray] | None = None,
) -> TensorGrid:
    """Assemble a tensor grid from per-dimension rules and node transforms."""
    rules = tuple(rules)
    if not rules:
        raise ValueError("need at least one dimension")
    if param_nodes_1d is None:
        param_nodes_1d = [r.nodes for r in rules]
    if len(param_nodes_1d) != len(rules) or any(
        len(x) != len(r) for x, r in zip(param_nodes_1d, rules)
    ):
        raise ValueError("one transformed node array per rule is required")
    shape = [len(r) for r in rules]
    dim_indices = (
        np.stack(np.meshgrid(*[np.arange(q) for q in shape], indexing="ij"), axis=-1)
        .reshape(-1, len(rules))
        .astype(int)
    )
    std_cols = [rules[d].nodes[dim_indices[:, d]] for d in range(len(rules))]
    par_cols = [
        np.asarray(param_nodes_1d[d], dtype=float)[dim_indices[:, d]]
        for d in range(len(rules))
    ]
    weights = np.ones(len(dim_indices))
    for d, r in enumerate(rules):
        weights *= r.weights[dim_indices[:, d]]
    weights /= weights.sum()
    return TensorGrid(
        rules=rules,
        nodes=np.column_stack(par_cols),
        std_nodes=np.column_stack(std_cols),
        weights=weights,
        dim_indices=dim_indices,
    )


def build_tensor_grid(specs: list[DistributionSpec], order: int) -> TensorGrid:
    """Tensor grid with an ``order``-point Hermite rule per input distribution."""
    if order < 1:
        raise ValueError(f"quadrature order must be >= 1, got {order}")
    if not specs:
        raise ValueError("need at least one input distribution")
    rule = gauss_rule(recurrence_coefficients(Family.HERMITE, order), order)
    rules = [rule] * len(specs)
    param_nodes = [to_parameter_nodes(spec, rule) for spec in specs]
    return grid_from_rules(rules, param_nodes)


@dataclass(frozen=True)
class PceExpansion:
    """Coefficients of one or more scalar outputs in a shared basis."""

    index_set: MultiIndexSet
    coefficients: np.ndarray  # (n_outputs, len(index_set))
    labels: tuple[str, ...]
    families: tuple[Family, ...]

    def __post_init__(self):
        k, n_terms = self.coefficients.shape
        if n_terms != len(self.index_set) or k != len(self.labels):
            raise ValueError("coefficient matrix shape must match index set and labels")
        if len(self.families) != self.index_set.dim:
            raise ValueError("one polynomial family per dimension is required")
        if not np.isfinite(self.coefficients).all():
            raise ValueError("non-finite expansion coefficients")

    @property
    def n_outputs(self) -> int:
        return self.coefficients.shape[0]

    def output_index(self, output: int | str) -> int:
        if isinstance(output, str):
            return self.labels.index(output)
        return output


def basis_matrix(grid: TensorGrid, index_set: MultiIndexSet) -> np.ndarray:
    """Matrix Phi[j, a] = phi_alpha(std node j) for projection and evaluation."""
    alphas = index_set.array
    out = np.ones((len(grid), len(index_set)))
    for d, rule in enumerate(grid.rules):
        max_deg = int(alphas[:, d].max())
        fam = recurrence_coefficients(rule.kind, max_deg + 1)
        table = eval_orthonormal_table(fam, max_deg, rule.nodes)
        out *= table[alphas[:, d]][:, grid.dim_indices[:, d]].T
    return out


def project(
    model_outputs: np.ndarray,
    grid: TensorGrid,
    index_set: MultiIndexSet,
    labels: tuple[str, ...] | None = None,
) -> PceExpansion:
    """Spectral projection: c_{i,alpha} = sum_j w_j f_i(x_j) phi_alpha(xi_j).

    ``model_outputs`` rows follow grid node order, one column per output
    quantity (a 1-D array is treated as a single output). Degrees are
    limited to order-1 per dimension so projection integrands are within
    the rules' exactness range.
    """
    outputs = np.atleast_2d(np.asarray(model_outputs, dtype=float))
    if outputs.shape[0] == 1 and len(grid) == outputs.shape[1] and np.ndim(model_outputs) == 1:
        outputs = outputs.T
    if outputs.shape[0] != len(grid):
        raise ValueError(
            f"got {outputs.shape[0]} output rows for {len(grid)} grid nodes"
        )
    if index_set.dim != grid.dim:
        raise ValueError("index set and grid dimensions differ")
    for d, (deg, q) in enumerate(zip(index_set.max_degrees, grid.orders)):
        if deg > q - 1:
            raise ValueError(
                f"dimension {d}: degree {deg} exceeds exactness of a {q}-point rule"
            )
    if labels is None:
        labels = tuple(f"y{i}" for i in range(outputs.shape[1]))
    phi = basis_matrix(grid, index_set)
    coeffs = (outputs * grid.weights[:, None]).T @ phi
    return PceExpansion(
        index_set=index_set,
        coefficients=coeffs,
        labels=tuple(labels),
        families=tuple(r.kind for r in grid.rules),
    )


def mean(expansion: PceExpansion) -> np.ndarray:
    """Per-output mean: the coefficient of the constant basis function."""
    return expansion.coefficients[:, 0].copy()


def variance(expansion: PceExpansion) -> np.ndarray:
    """Per-output variance: sum of squared non-constant coefficients."""
    return (expansion.coefficients[:, 1:] ** 2).sum(axis=1)


def covariance_matrix(expansion: PceExpansion) -> np.ndarray:
    """Output covariance Q Q^T with the constant column removed."""
    q = expansion.coefficients[:, 1:]
    return q @ q.T


def evaluate(expansion: PceExpansion, std_points: np.ndarray) -> np.ndarray:
    """Evaluate the truncated expansion at standard-variable points (M, dim)."""
    pts = np.atleast_2d(np.asarray(std_points, dtype=float))
    if pts.shape[1] != expansion.index_set.dim:
        raise ValueError("points must have one column per expansion dimension")
    alphas = expansion.index_set.array
    phi = np.ones((pts.shape[0], len(expansion.index_set)))
    for d, kind in enumerate(expansion.families):
        max_deg = int(alphas[:, d].max())
        fam = recurrence_coefficients(kind, max_deg + 1)
        table = eval_orthonormal_table(fam, max_deg, pts[:, d])
        phi *= table[alphas[:, d], :].T
    return phi @ expansion.coefficients.T


def expansion_to_dict(expansion: PceExpansion) -> dict:
    return {
        "labels": list(expansion.labels),
        "dim": expansion.index_set.dim,
        "order": [d + 1 for d in expansion.index_set.max_degrees],
        "families": [f.value for f in expansion.families],
        "indices": [list(a) for a in expansion.index_set.indices],
        "coefficients": expansion.coefficients.tolist(),
    }


def expansion_to_json(expansion: PceExpansion) -> str:
    return json.dumps(expansion_to_dict(expansion), indent=2)
