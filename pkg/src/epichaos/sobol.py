"""Variance-based (Sobol) sensitivity indices from expansion coefficients.

Each non-constant basis function contributes its squared coefficient to the
variance share of exactly one parameter subset: the set of dimensions where
its multi-index is nonzero. Partial variances are therefore direct sums
over coefficient supports, with no subtractive recursion needed.

Subsets are encoded as bitmasks over the parameter dimensions; parameter
``i`` is bit ``1 << i``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .pce import PceExpansion, variance

__all__ = [
    "SobolIndices",
    "sobol_indices",
    "sobol_time_series",
    "first_order_and_total",
    "subset_label",
    "subset_labels",
    "ordered_subsets",
]


@dataclass(frozen=True)
class SobolIndices:
    """Variance fractions S_u for every non-empty parameter subset u.

    ``values[mask]`` is the index of the subset encoded by ``mask``;
    entry 0 (the empty set) is unused and kept at 0. When the output has
    (numerically) no variance the result is flagged degenerate and every
    index is 0 rather than 0/0.
    """

    n_params: int
    values: np.ndarray  # (2**n_params,)
    total_variance: float
    degenerate: bool = False

    def __post_init__(self):
        if len(self.values) != 2**self.n_params:
            raise ValueError("need one entry per subset bitmask")

    def subset(self, params: tuple[int, ...] | list[int]) -> float:
        """Index of the subset given as parameter positions (0-based)."""
        if not params:
            raise ValueError("Sobol indices are defined for non-empty subsets")
        mask = 0
        for p in params:
            if not 0 <= p < self.n_params:
                raise ValueError(f"parameter {p} out of range")
            mask |= 1 << p
        return float(self.values[mask])

    def as_dict(self) -> dict[tuple[int, ...], float]:
        out = {}
        for mask in range(1, 2**self.n_params):
            members = tuple(i for i in range(self.n_params) if mask >> i & 1)
            out[members] = float(self.values[mask])
        return out


def support_masks(expansion: PceExpansion) -> np.ndarray:
    """Bitmask of the nonzero dimensions of each multi-index."""
    alphas = expansion.index_set.array
    bits = (alphas > 0).astype(np.int64)
    return bits @ (1 << np.arange(expansion.index_set.dim, dtype=np.int64))


def partial_variances(expansion: PceExpansion, output: int | str) -> np.ndarray:
    """V[f_u] for every subset mask, summing squared coefficients by support."""
    i = expansion.output_index(output)
    masks = support_masks(expansion)
    out = np.zeros(2**expansion.index_set.dim)
    np.add.at(out, masks, expansion.coefficients[i] ** 2)
    out[0] = 0.0  # the mean does not contribute to variance
    return out


def sobol_indices(
    expansion: PceExpansion, output: int | str = 0, variance_floor: float | None = None
) -> SobolIndices:
    """Sobol indices of every non-empty parameter subset for one output.

    ``variance_floor`` is the total variance below which the result is
    flagged degenerate (deterministic output) instead of dividing by ~0.
    By default it is set just above the round-off variance a constant
    output picks up in projection, relative to the coefficient scale.
    """
    n = expansion.index_set.dim
    if n > 16:
        raise ValueError("subset enumeration is limited to 16 parameters")
    parts = partial_variances(expansion, output)
    total = float(parts.sum())
    if variance_floor is None:
        scale = float(np.abs(expansion.coefficients[expansion.output_index(output)]).max())
        variance_floor = (1e-13 * scale) ** 2
    if total <= max(variance_floor, 0.0):
        return SobolIndices(
            n_params=n, values=np.zeros(2**n), total_variance=total, degenerate=True
        )
    return SobolIndices(n_params=n, values=parts / total, total_variance=total)


def sobol_time_series(
    expansions: list[PceExpansion],
    output: int | str = 0,
    rel_floor: float = 1e-14,
) -> list[SobolIndices]:
    """Per-time-point Sobol indices over expansions sharing one index set.

    Time points whose total variance falls below ``rel_floor`` times the
    maximum variance over the series are flagged degenerate.
    """
    if not expansions:
        return []
    ref = expansions[0].index_set
    for e in expansions[1:]:
        if e.index_set.indices != ref.indices:
            raise ValueError("all expansions must share one multi-index set")
    idx = [e.output_index(output) for e in expansions]
    peak = max(float(variance(e)[i]) for e, i in zip(expansions, idx))
    floor = rel_floor * peak
    return [sobol_indices(e, output, variance_floor=floor) for e in expansions]


def first_order_and_total(indices: SobolIndices, param: int) -> tuple[float, float]:
    """First-order index of one parameter and its total over all subsets."""
    if not 0 <= param < indices.n_params:
        raise ValueError(f"parameter {param} out of range")
    bit = 1 << param
    first = float(indices.values[bit])
    masks = np.arange(2**indices.n_params)
    total = float(indices.values[(masks & bit) > 0].sum())
    return first, total


def subset_label(members: tuple[int, ...], names: list[str] | tuple[str, ...]) -> str:
    """Concatenated parameter names of a subset, e.g. (0, 2) -> 'c1c3'."""
    return "".join(names[i] for i in sorted(members))


def ordered_subsets(n_params: int) -> list[tuple[int, ...]]:
    """Non-empty subsets ordered by size then members: singles, pairs, ..."""
    subsets = []
    for mask in range(1, 2**n_params):
        subsets.append(tuple(i for i in range(n_params) if mask >> i & 1))
    return sorted(subsets, key=lambda s: (len(s), s))


def subset_labels(n_params: int, names: list[str] | tuple[str, ...]) -> list[str]:
    """Labels for all non-empty subsets, singles first then interactions."""
    return [subset_label(s, names) for s in ordered_subsets(n_params)]
