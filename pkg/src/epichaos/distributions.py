"""Input parameter distributions and moment-based output distribution fits.

Normal and log-normal inputs are mapped onto standard-normal (Hermite)
quadrature nodes; truncated normals summarize positive output quantities.
Log-normal specs are parameterized by the mean and variance of the variable
itself (natural scale), not of its underlying normal.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np
from scipy.special import ndtr, ndtri

from .orthopoly import Family, QuadratureRule

__all__ = [
    "Kind",
    "DistributionSpec",
    "to_parameter_nodes",
    "fit_lognormal_from_moments",
    "lognormal_underlying",
    "truncated_normal_interval",
]


class Kind(str, Enum):
    NORMAL = "normal"
    LOGNORMAL = "lognormal"
    TRUNCATED_NORMAL = "truncated_normal"


@dataclass(frozen=True)
class DistributionSpec:
    """A named 1-D distribution with natural-scale moment parameters.

    For TRUNCATED_NORMAL, ``mean``/``variance`` parameterize the underlying
    normal and ``lower``/``upper`` clip its support (defaults [0, +inf),
    matching positivity-constrained model outputs).
    """

    kind: Kind
    mean: float
    variance: float
    lower: float | None = None
    upper: float | None = None

    def __post_init__(self):
        kind = Kind(self.kind)
        object.__setattr__(self, "kind", kind)
        if not self.variance > 0:
            raise ValueError(f"variance must be positive, got {self.variance}")
        if kind is Kind.LOGNORMAL and not self.mean > 0:
            raise ValueError(f"log-normal mean must be positive, got {self.mean}")
        if kind is Kind.TRUNCATED_NORMAL:
            if self.lower is None:
                object.__setattr__(self, "lower", 0.0)
            if self.bounds[0] >= self.bounds[1]:
                raise ValueError(f"empty truncation interval {self.bounds}")
        elif self.lower is not None or self.upper is not None:
            raise ValueError("bounds are only meaningful for truncated normals")

    @property
    def std(self) -> float:
        return math.sqrt(self.variance)

    @property
    def bounds(self) -> tuple[float, float]:
        lo = -math.inf if self.lower is None else self.lower
        hi = math.inf if self.upper is None else self.upper
        return lo, hi


def to_parameter_nodes(spec: DistributionSpec, rule: QuadratureRule) -> np.ndarray:
    """Map standard quadrature nodes into the parameter space of ``spec``.

    Normal(mu, sigma^2): mu + sigma * xi. LogNormal: exp(m + s * xi) with
    (m, s) the underlying-normal parameters matching the requested natural
    moments. Weights are untouched: the transforms are the inverse-CDF maps
    of the target through the standard normal.
    """
    if spec.kind in (Kind.NORMAL, Kind.LOGNORMAL):
        if rule.kind is not Family.HERMITE:
            raise ValueError(
                f"{spec.kind.value} inputs need a standard-normal rule, got {rule.kind.value}"
            )
        if spec.kind is Kind.NORMAL:
            return spec.mean + spec.std * rule.nodes
        m, s = lognormal_underlying(spec.mean, spec.variance)
        return np.exp(m + s * rule.nodes)
    raise ValueError(f"{spec.kind.value} is not supported as an expansion input")


def lognormal_underlying(mean: float, variance: float) -> tuple[float, float]:
    """Underlying-normal (m, s) of a log-normal with the given natural moments."""
    if not mean > 0 or not variance > 0:
        raise ValueError(f"need positive mean and variance, got ({mean}, {variance})")
    s2 = math.log1p(variance / mean**2)
    m = math.log(mean) - 0.5 * s2
    return m, math.sqrt(s2)


def fit_lognormal_from_moments(mean: float, variance: float) -> DistributionSpec:
    """Log-normal spec whose first two natural moments equal the inputs."""
    lognormal_underlying(mean, variance)  # validates representability
    return DistributionSpec(kind=Kind.LOGNORMAL, mean=mean, variance=variance)


def truncated_normal_interval(
    spec: DistributionSpec, coverage: float
) -> tuple[float, float]:
    """Central ``coverage`` interval of a (possibly truncated) normal.

    Equal tail mass is left outside on both sides, computed from the
    truncated CDF. Plain normal specs are treated as untruncated.
    """
    if not 0 < coverage < 1:
        raise ValueError(f"coverage must be in (0, 1), got {coverage}")
    if spec.kind is Kind.LOGNORMAL:
        raise ValueError("interval summaries are defined for (truncated) normals")
    lo, hi = spec.bounds if spec.kind is Kind.TRUNCATED_NORMAL else (-math.inf, math.inf)
    mu, sigma = spec.mean, spec.std
    cdf_lo = float(ndtr((lo - mu) / sigma)) if math.isfinite(lo) else 0.0
    cdf_hi = float(ndtr((hi - mu) / sigma)) if math.isfinite(hi) else 1.0
    mass = cdf_hi - cdf_lo
    if mass <= 1e-300:
        raise ValueError(f"no probability mass inside bounds ({lo}, {hi})")

    def quantile(p: float) -> float:
        return mu + sigma * float(ndtri(cdf_lo + p * mass))

    half_tail = 0.5 * (1.0 - coverage)
    return quantile(half_tail), quantile(1.0 - half_tail)
