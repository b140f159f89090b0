"""Numerical-integration oracle: the independent cross-check for the
closed-form measures.

Membership integrals are estimated either by Monte Carlo over a finite
bounding box (uniform samples, unbiased, with a standard error) or by a
deterministic tensor-grid midpoint rule.  The bounding box comes from
the cutoff construction: outside the box every membership is below the
cutoff, and the mass possibly missed that way is bounded in closed form
and reported alongside the estimate.

Sampling uses counter-based Philox streams, one jumped substream per
fixed-size chunk, reduced in chunk order; results are therefore
bit-identical for a given seed no matter how many worker threads run.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Mapping, Sequence

import numpy as np

from .concepts import Concept, membership_array
from .errors import DegenerateDomainError, DimensionMismatchError, UnboundedCuboidError
from .geometry import WeightSet
from .measure import DEFAULT_LIMITS, Limits, concept_measure_with_params, concept_tail_mass

#: samples drawn per Philox substream
CHUNK_SIZE = 1 << 16

MIN_MONTE_CARLO_SAMPLES = 10_000


@dataclass(frozen=True)
class OracleSettings:
    """Knobs shared by the oracle-backed computations and the CLI."""

    seed: int = 0
    samples: int = 1_000_000
    cutoff: float = 1e-6
    method: str = "monte-carlo"
    threads: int = 1
    se_target: float = 1e-4
    max_samples: int = 16_000_000


DEFAULT_SETTINGS = OracleSettings()


@dataclass(frozen=True)
class IntegrationSpec:
    """A box integral to estimate.

    ``integrand`` maps an (N, k) coordinate array (columns ordered like
    ``bounds``) to N values.  ``truncated_mass_bound`` is carried through
    to the estimate; it is the caller's bound on whatever mass lives
    outside the box.
    """

    integrand: Callable[[np.ndarray], np.ndarray]
    bounds: tuple[tuple[float, float], ...]
    sample_count: int
    seed: int = 0
    method: str = "monte-carlo"
    truncated_mass_bound: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "bounds", tuple((float(a), float(b)) for a, b in self.bounds))
        if self.method not in ("monte-carlo", "tensor-grid"):
            raise ValueError(f"unknown method {self.method!r}")
        for lo, hi in self.bounds:
            if not (math.isfinite(lo) and math.isfinite(hi)):
                raise ValueError(f"bounding box must be finite, got [{lo}, {hi}]")
        if self.method == "monte-carlo" and self.sample_count < MIN_MONTE_CARLO_SAMPLES:
            raise ValueError(
                f"monte-carlo needs at least {MIN_MONTE_CARLO_SAMPLES} samples, "
                f"got {self.sample_count}")
        if self.sample_count <= 0:
            raise ValueError("sample_count must be positive")


@dataclass(frozen=True)
class IntegralEstimate:
    value: float
    standard_error: float
    truncated_mass_bound: float


def _box_volume(bounds: Sequence[tuple[float, float]]) -> float:
    vol = 1.0
    for lo, hi in bounds:
        if hi <= lo:
            raise DegenerateDomainError(
                f"integration box side [{lo}, {hi}] has no volume")
        vol *= hi - lo
    return vol


def _mc_chunk(spec: IntegrationSpec, index: int, count: int) -> tuple[float, float]:
    rng = np.random.Generator(np.random.Philox(spec.seed).jumped(index))
    lo = np.array([b[0] for b in spec.bounds])
    hi = np.array([b[1] for b in spec.bounds])
    x = lo + rng.random((count, len(spec.bounds))) * (hi - lo)
    f = np.asarray(spec.integrand(x), dtype=float)
    return float(np.sum(f)), float(np.sum(f * f))


def integrate(spec: IntegrationSpec, threads: int = 1) -> IntegralEstimate:
    """Estimate the integral of the integrand over the bounding box.

    Monte Carlo returns the sample-mean estimator with its standard
    error; the tensor-grid midpoint rule is deterministic and reports a
    standard error of zero.  Identical specs give bit-identical results.
    """
    volume = _box_volume(spec.bounds)
    if spec.method == "tensor-grid":
        return _integrate_grid(spec, volume)
    n = spec.sample_count
    chunks = [(i, min(CHUNK_SIZE, n - i * CHUNK_SIZE))
              for i in range((n + CHUNK_SIZE - 1) // CHUNK_SIZE)]
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(lambda ic: _mc_chunk(spec, *ic), chunks))
    else:
        results = [_mc_chunk(spec, i, cnt) for i, cnt in chunks]
    total = math.fsum(r[0] for r in results)
    total_sq = math.fsum(r[1] for r in results)
    mean = total / n
    variance = max(0.0, (total_sq - total * total / n) / (n - 1))
    return IntegralEstimate(
        value=volume * mean,
        standard_error=volume * math.sqrt(variance / n),
        truncated_mass_bound=spec.truncated_mass_bound,
    )


def _integrate_grid(spec: IntegrationSpec, volume: float) -> IntegralEstimate:
    k = len(spec.bounds)
    per_dim = max(2, int(round(spec.sample_count ** (1.0 / k))))
    axes = [
        lo + (np.arange(per_dim) + 0.5) * (hi - lo) / per_dim
        for lo, hi in spec.bounds
    ]
    mesh = np.meshgrid(*axes, indexing="ij")
    points = np.stack([m.ravel() for m in mesh], axis=1)
    values = np.asarray(spec.integrand(points), dtype=float)
    return IntegralEstimate(
        value=volume * float(np.mean(values)),
        standard_error=0.0,
        truncated_mass_bound=spec.truncated_mass_bound,
    )


def _epsilon(concept: Concept, cutoff: float, c_eff: float) -> float:
    if not cutoff > 0:
        raise ValueError(f"cutoff must be positive, got {cutoff}")
    return max(0.0, -math.log(min(1.0, cutoff / concept.mu0)) / c_eff)


def _expanded_box(concept: Concept, cutoff: float, c_eff: float,
                  w_eff: WeightSet) -> dict[str, tuple[float, float]]:
    """Per-dimension hull of the core, expanded so that every excluded
    point has membership below the cutoff under the given parameters."""
    eps = _epsilon(concept, cutoff, c_eff)
    sub = concept.domain_structure
    box: dict[str, tuple[float, float]] = {}
    for name, dims in sub.domains:
        for d in dims:
            lo = min(cub.lower[d] for cub in concept.core.cuboids)
            hi = max(cub.upper[d] for cub in concept.core.cuboids)
            if not (math.isfinite(lo) and math.isfinite(hi)):
                raise UnboundedCuboidError(
                    f"dimension {d!r} is unbounded; no finite bounding box exists")
            reach = eps / (w_eff.domain_weights[name]
                           * math.sqrt(w_eff.dimension_weights[d]))
            box[d] = (lo - reach, hi + reach)
    return box


def bounding_box_for(concepts: Sequence[Concept],
                     epsilon_cutoff: float) -> dict[str, tuple[float, float]]:
    """Union of the concepts' cutoff-expanded boxes, per dimension.

    Each concept is expanded with its own sensitivity and weights; every
    point excluded from the box has membership below the cutoff in every
    concept (on the dimensions where that concept is defined).
    """
    if not concepts:
        raise ValueError("at least one concept is required")
    merged: dict[str, tuple[float, float]] = {}
    for concept in concepts:
        box = _expanded_box(concept, epsilon_cutoff, concept.c, concept.weights)
        for d, (lo, hi) in box.items():
            if d in merged:
                merged[d] = (min(merged[d][0], lo), max(merged[d][1], hi))
            else:
                merged[d] = (lo, hi)
    return merged


def _ordered_bounds(concept: Concept, box: Mapping[str, tuple[float, float]]
                    ) -> tuple[tuple[str, ...], tuple[tuple[float, float], ...]]:
    dims = concept.domain_structure.dimension_ids
    return dims, tuple(box[d] for d in dims)


def estimate_concept_measure(concept: Concept, *,
                             c: float | None = None,
                             weights: WeightSet | None = None,
                             settings: OracleSettings = DEFAULT_SETTINGS,
                             limits: Limits = DEFAULT_LIMITS) -> IntegralEstimate:
    """Oracle estimate of the membership integral of a single concept."""
    c_eff = concept.c if c is None else c
    w_eff = concept.weights if weights is None else weights
    box = _expanded_box(concept, settings.cutoff, c_eff, w_eff)
    dims, bounds = _ordered_bounds(concept, box)
    tail = concept_tail_mass(concept, settings.cutoff, c=c_eff, weights=w_eff,
                             limits=limits)
    spec = IntegrationSpec(
        integrand=lambda x: membership_array(concept, x, dims, c=c, weights=weights),
        bounds=bounds,
        sample_count=settings.samples,
        seed=settings.seed,
        method=settings.method,
        truncated_mass_bound=tail,
    )
    return integrate(spec, threads=settings.threads)


def estimate_min_measure(s1: Concept, s2: Concept, *,
                         c: float | None = None,
                         weights: WeightSet | None = None,
                         settings: OracleSettings = DEFAULT_SETTINGS,
                         limits: Limits = DEFAULT_LIMITS) -> IntegralEstimate:
    """Oracle estimate of the integral of min(mu_1, mu_2).

    Both concepts must live on the same domains; both memberships are
    evaluated under the same (possibly overridden) parameters.  The
    integration box is the intersection of the two cutoff-expanded boxes:
    outside it at least one membership, hence the min, is below the
    cutoff, which the reported mass bound accounts for.
    """
    if set(s1.domains) != set(s2.domains):
        raise DimensionMismatchError(
            f"min-membership integral needs matching domains, got "
            f"{list(s1.domains)!r} and {list(s2.domains)!r}")
    c1_eff = s1.c if c is None else c
    c2_eff = s2.c if c is None else c
    w1_eff = s1.weights if weights is None else weights
    w2_eff = s2.weights if weights is None else weights
    box1 = _expanded_box(s1, settings.cutoff, c1_eff, w1_eff)
    box2 = _expanded_box(s2, settings.cutoff, c2_eff, w2_eff)
    dims = s1.domain_structure.dimension_ids
    inter = []
    for d in dims:
        lo = max(box1[d][0], box2[d][0])
        hi = min(box1[d][1], box2[d][1])
        inter.append((lo, hi))

    def tail_bound(concept: Concept, c_eff: float, w_eff: WeightSet,
                   own_box: Mapping[str, tuple[float, float]],
                   inter_volume: float) -> float:
        own_volume = math.prod(hi - lo for lo, hi in own_box.values())
        tail = concept_tail_mass(concept, settings.cutoff, c=c_eff, weights=w_eff,
                                 limits=limits)
        return tail + settings.cutoff * max(0.0, own_volume - inter_volume)

    if any(hi <= lo for lo, hi in inter):
        bound = min(tail_bound(s1, c1_eff, w1_eff, box1, 0.0),
                    tail_bound(s2, c2_eff, w2_eff, box2, 0.0))
        return IntegralEstimate(0.0, 0.0, bound)

    inter_volume = math.prod(hi - lo for lo, hi in inter)
    bound = min(tail_bound(s1, c1_eff, w1_eff, box1, inter_volume),
                tail_bound(s2, c2_eff, w2_eff, box2, inter_volume))

    def integrand(x: np.ndarray) -> np.ndarray:
        m1 = membership_array(s1, x, dims, c=c, weights=weights)
        m2 = membership_array(s2, x, dims, c=c, weights=weights)
        return np.minimum(m1, m2)

    spec = IntegrationSpec(
        integrand=integrand,
        bounds=tuple(inter),
        sample_count=settings.samples,
        seed=settings.seed,
        method=settings.method,
        truncated_mass_bound=bound,
    )
    return integrate(spec, threads=settings.threads)


@dataclass(frozen=True)
class DiscrepancyReport:
    """Closed form vs. oracle for one concept's measure.

    For a single-cuboid core the closed form is exact, so the gap should
    sit within sampling noise ("exact regime"); for genuine multi-cuboid
    cores the inclusion-exclusion identification of intersections can
    deviate from the pointwise maximum, and the gap is reported without
    a pass/fail judgement.
    """

    closed_form: float
    estimate: IntegralEstimate
    abs_gap: float
    rel_gap: float
    sigma_distance: float
    exact_regime: bool


def discrepancy_report(concept: Concept, *,
                       settings: OracleSettings = DEFAULT_SETTINGS,
                       limits: Limits = DEFAULT_LIMITS) -> DiscrepancyReport:
    """Compare the closed-form measure with the oracle estimate."""
    closed = concept_measure_with_params(concept, limits=limits)
    est = estimate_concept_measure(concept, settings=settings, limits=limits)
    gap = est.value - closed
    sigma = abs(gap) / est.standard_error if est.standard_error > 0 else math.inf
    if gap == 0.0:
        sigma = 0.0
    distinct = len(set(concept.core.cuboids))
    return DiscrepancyReport(
        closed_form=closed,
        estimate=est,
        abs_gap=abs(gap),
        rel_gap=abs(gap) / abs(closed) if closed != 0 else math.inf,
        sigma_distance=sigma,
        exact_regime=distinct == 1,
    )
