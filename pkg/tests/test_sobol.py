import itertools

import numpy as np
import pytest

from epichaos.distributions import DistributionSpec, Kind
from epichaos.pce import (
    MultiIndexSet,
    PceExpansion,
    build_tensor_grid,
    project,
    tensor_index_set,
)
from epichaos.sobol import (
    first_order_and_total,
    ordered_subsets,
    sobol_indices,
    sobol_time_series,
    subset_labels,
)

STD_NORMAL = DistributionSpec(Kind.NORMAL, 0.0, 1.0)


def expand(f, specs, order=3, degree=None):
    grid = build_tensor_grid(specs, order)
    iset = tensor_index_set(len(specs), order - 1 if degree is None else degree)
    return project(f(grid.nodes), grid, iset)


def recursive_partial_variances(expansion, output=0):
    """Test oracle: hierarchical marginal-variance recursion.

    V[f_u] = V[E_{U\\u'}[f]] - sum over strict subsets, with the marginal
    variance summing squared coefficients whose support lies inside u.
    """
    alphas = expansion.index_set.array
    coeffs = expansion.coefficients[output]
    n = expansion.index_set.dim
    out = {}
    for size in range(1, n + 1):
        for u in itertools.combinations(range(n), size):
            inside = np.ones(len(alphas), dtype=bool)
            for d in range(n):
                if d not in u:
                    inside &= alphas[:, d] == 0
            inside[alphas.sum(axis=1) == 0] = False
            marginal = float((coeffs[inside] ** 2).sum())
            out[u] = marginal - sum(
                out[v]
                for k in range(1, size)
                for v in itertools.combinations(u, k)
                if set(v) < set(u)
            )
    return out


def test_additive_model_matches_analytic_indices():
    # Y = X1 + X2 with X1 ~ N(0, a^2), X2 ~ N(0, b^2), (a, b) = (2, 1)
    specs = [DistributionSpec(Kind.NORMAL, 0.0, 4.0), STD_NORMAL]
    e = expand(lambda x: x[:, 0] + x[:, 1], specs)
    s = sobol_indices(e)
    assert s.subset((0,)) == pytest.approx(0.8, abs=1e-10)
    assert s.subset((1,)) == pytest.approx(0.2, abs=1e-10)
    assert s.subset((0, 1)) == pytest.approx(0.0, abs=1e-10)


def test_product_model_is_pure_interaction():
    specs = [STD_NORMAL, STD_NORMAL]
    s = sobol_indices(expand(lambda x: x[:, 0] * x[:, 1], specs))
    assert s.subset((0,)) == pytest.approx(0.0, abs=1e-10)
    assert s.subset((1,)) == pytest.approx(0.0, abs=1e-10)
    assert s.subset((0, 1)) == pytest.approx(1.0, abs=1e-10)


def test_single_variable_dependence():
    specs = [STD_NORMAL, STD_NORMAL]
    s = sobol_indices(expand(lambda x: np.sin(x[:, 0]), specs, order=5))
    assert s.subset((0,)) == pytest.approx(1.0, abs=1e-10)
    assert s.subset((1,)) == pytest.approx(0.0, abs=1e-10)
    assert s.subset((0, 1)) == pytest.approx(0.0, abs=1e-10)


def test_indices_sum_to_one():
    specs = [STD_NORMAL] * 3
    s = sobol_indices(
        expand(lambda x: np.exp(0.3 * x[:, 0]) * (1 + x[:, 1]) + x[:, 2] ** 2, specs, 5)
    )
    assert s.values.sum() == pytest.approx(1.0, abs=1e-8)
    assert (s.values >= -1e-9).all() and (s.values <= 1 + 1e-9).all()


def test_zero_variance_is_flagged_degenerate():
    specs = [STD_NORMAL, STD_NORMAL]
    s = sobol_indices(expand(lambda x: np.full(len(x), 3.0), specs))
    assert s.degenerate
    assert (s.values == 0).all()


def test_support_partition_identity():
    # sum over subsets of partial variances equals the full coefficient-square sum
    rng = np.random.default_rng(7)
    specs = [STD_NORMAL] * 3
    grid = build_tensor_grid(specs, 4)
    f = rng.normal(size=len(grid))
    e = project(f, grid, tensor_index_set(3, 3))
    s = sobol_indices(e)
    coeff_sq = float((e.coefficients[0, 1:] ** 2).sum())
    assert s.total_variance == pytest.approx(coeff_sq, rel=1e-14)


@pytest.mark.parametrize("n,seed", [(2, 0), (3, 1), (4, 2)])
def test_recursion_oracle_agrees_with_support_sums(n, seed):
    rng = np.random.default_rng(seed)
    iset = tensor_index_set(n, 2)
    coeffs = rng.normal(size=(1, len(iset)))
    e = PceExpansion(
        index_set=iset,
        coefficients=coeffs,
        labels=("y",),
        families=tuple(["hermite"] * n),
    )
    s = sobol_indices(e)
    oracle = recursive_partial_variances(e)
    for u, v_u in oracle.items():
        assert s.subset(u) * s.total_variance == pytest.approx(v_u, abs=1e-12)


def test_scale_invariance():
    specs = [STD_NORMAL, STD_NORMAL]
    base = sobol_indices(expand(lambda x: x[:, 0] * x[:, 1] + x[:, 0], specs))
    scaled = sobol_indices(expand(lambda x: -17.3 * (x[:, 0] * x[:, 1] + x[:, 0]), specs))
    assert np.abs(base.values - scaled.values).max() < 1e-12


def test_first_order_and_total():
    specs = [STD_NORMAL, STD_NORMAL]
    additive = sobol_indices(expand(lambda x: x[:, 0] + x[:, 1], specs))
    first, total = first_order_and_total(additive, 0)
    assert total == pytest.approx(first)
    product = sobol_indices(expand(lambda x: x[:, 0] * x[:, 1], specs))
    first, total = first_order_and_total(product, 0)
    assert first == pytest.approx(0.0, abs=1e-12)
    assert total == pytest.approx(1.0)


def test_single_parameter_model_first_and_total_are_one():
    s = sobol_indices(expand(lambda x: np.cos(x[:, 0]), [STD_NORMAL], order=6))
    assert first_order_and_total(s, 0) == pytest.approx((1.0, 1.0))


def test_time_series_degenerate_flagging_and_sums():
    specs = [STD_NORMAL, STD_NORMAL]
    grid = build_tensor_grid(specs, 3)
    iset = tensor_index_set(2, 2)
    # t = 0: constant initial condition; later times develop variance
    outputs = [np.full(len(grid), 5.0)] + [
        t * grid.nodes[:, 0] + 0.3 * t * grid.nodes[:, 1] for t in (1.0, 2.0)
    ]
    expansions = [project(f, grid, iset) for f in outputs]
    series = sobol_time_series(expansions)
    assert series[0].degenerate
    for s in series[1:]:
        assert not s.degenerate
        assert s.values.sum() == pytest.approx(1.0, abs=1e-8)


def test_time_series_rejects_mismatched_index_sets():
    grid = build_tensor_grid([STD_NORMAL, STD_NORMAL], 3)
    e1 = project(grid.nodes[:, 0], grid, tensor_index_set(2, 2))
    e2 = project(grid.nodes[:, 0], grid, tensor_index_set(2, 1))
    with pytest.raises(ValueError):
        sobol_time_series([e1, e2])


def test_pick_freeze_monte_carlo_cross_check():
    # smooth 2-D test function; MC pick-freeze estimator is the oracle
    rng = np.random.default_rng(123)
    specs = [STD_NORMAL, STD_NORMAL]

    def f(x):
        return np.sin(x[:, 0]) + 0.5 * x[:, 1] ** 2 + 0.2 * x[:, 0] * x[:, 1]

    s = sobol_indices(expand(f, specs, order=9))
    n = 200_000
    a = rng.normal(size=(n, 2))
    b = rng.normal(size=(n, 2))
    fa = f(a)
    var = fa.var()
    f0 = fa.mean()
    for i in range(2):
        c = b.copy()
        c[:, i] = a[:, i]
        prod = fa * f(c)
        est = (prod.mean() - f0**2) / var
        se = prod.std() / np.sqrt(n) / var
        assert abs(s.subset((i,)) - est) < 3 * se + 1e-3


def test_subset_labels_order():
    assert subset_labels(3, ["c1", "c2", "c3"]) == [
        "c1",
        "c2",
        "c3",
        "c1c2",
        "c1c3",
        "c2c3",
        "c1c2c3",
    ]
    assert ordered_subsets(2) == [(0,), (1,), (0, 1)]
