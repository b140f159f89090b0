"""Closed-form concept size.

The size of a fuzzy concept is the integral of its membership function,
or equivalently the integral of its alpha-cut volumes over alpha.  Every
alpha-cut of a fuzzified cuboid is the cuboid's epsilon-neighborhood
under the combined metric with

    epsilon = -(1/c) * ln(alpha / mu0),

so its volume decomposes over the subsets of dimensions on which a point
can stick out of the box: each subset contributes the volume of a
weighted hyperball over those dimensions, extruded by the box widths of
the remaining ones.  Integrating in closed form yields the fuzzified
cuboid measure; unions of cuboids combine by inclusion-exclusion over
their (crisply intersected, then fuzzified) intersection boxes.

Subset sums are enumerated directly, so dimension and cuboid counts are
capped (configurable via :class:`Limits`).
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import lru_cache

from .concepts import Concept, Cuboid
from .errors import LimitExceededError, UnboundedCuboidError
from .geometry import DomainStructure, WeightSet, validate_weights


@dataclass(frozen=True)
class Limits:
    """Caps for the exponential subset enumerations."""

    max_dimensions: int = 12
    max_cuboids: int = 10


DEFAULT_LIMITS = Limits()


def _check_dimension_limit(n: int, limits: Limits) -> None:
    if n > limits.max_dimensions:
        raise LimitExceededError(
            f"{n} dimensions exceed the enumeration cap of "
            f"{limits.max_dimensions}; raise Limits.max_dimensions explicitly "
            f"if the 2^n subset sum is really wanted")


def _check_cuboid_limit(m: int, limits: Limits) -> None:
    if m > limits.max_cuboids:
        raise LimitExceededError(
            f"{m} cuboids exceed the inclusion-exclusion cap of "
            f"{limits.max_cuboids}")


@lru_cache(maxsize=None)
def _gamma_half(twice_x: int) -> float:
    """Gamma(twice_x / 2) via the exact half-integer recurrence."""
    if twice_x == 1:
        return math.sqrt(math.pi)
    if twice_x == 2:
        return 1.0
    return (twice_x - 2) / 2.0 * _gamma_half(twice_x - 2)


@lru_cache(maxsize=None)
def _unit_ball_factor(k: int) -> float:
    """k! * pi^(k/2) / Gamma(k/2 + 1), the per-domain hyperball factor."""
    return math.factorial(k) * math.pi ** (k / 2.0) / _gamma_half(k + 2)


def hyperball_volume(r: float, structure: DomainStructure, weights: WeightSet) -> float:
    """Volume of a combined-metric ball of radius r over the given structure.

    The ball is Euclidean within each domain, a cross-domain Manhattan
    diamond between them, stretched per dimension by the weights.  The
    zero-dimensional structure has volume 1 by convention (a point), which
    makes the alpha-cut decomposition's empty-subset term come out right.
    """
    if r < 0:
        raise ValueError(f"radius must be non-negative, got {r}")
    n = structure.n
    if n == 0:
        return 1.0
    if r == 0.0:
        return 0.0
    denom = 1.0
    shape = 1.0
    for name, dims in structure.domains:
        denom *= weights.domain_weights[name]
        for d in dims:
            denom *= math.sqrt(weights.dimension_weights[d])
        shape *= _unit_ball_factor(len(dims))
    return (1.0 / denom) * (r ** n / math.factorial(n)) * shape


def _cuboid_widths(cuboid: Cuboid, structure: DomainStructure) -> dict[str, float]:
    widths = {}
    for d in structure.dimension_ids:
        w = cuboid.width(d)
        if not math.isfinite(w):
            raise UnboundedCuboidError(
                f"cuboid is unbounded on dimension {d!r}; restrict the "
                f"computation to the domains on which it is bounded")
        widths[d] = w
    return widths


def alpha_cut_volume(cuboid: Cuboid, alpha: float, mu0: float, c: float,
                     structure: DomainStructure, weights: WeightSet,
                     limits: Limits = DEFAULT_LIMITS) -> float:
    """Volume of the fuzzified cuboid's alpha-cut.

    Sums, over every subset of dimensions, the hyperball volume of radius
    -(1/c)*ln(alpha/mu0) on that subset times the box widths of the
    complementary dimensions.  At alpha equal to mu0 only the empty
    subset survives and the result is the crisp box volume.
    """
    if not 0 < alpha <= mu0:
        raise ValueError(f"alpha must lie in (0, mu0={mu0}], got {alpha}")
    dims = structure.dimension_ids
    _check_dimension_limit(len(dims), limits)
    widths = _cuboid_widths(cuboid, structure)
    radius = max(0.0, -math.log(alpha / mu0) / c)
    terms = []
    for i in range(len(dims) + 1):
        for subset in itertools.combinations(dims, i):
            outside = math.prod(widths[d] for d in dims if d not in subset)
            ball = hyperball_volume(radius, structure.restrict_dimensions(subset), weights)
            terms.append(outside * ball)
    return math.fsum(terms)


def _prefactor_and_subset_sums(cuboid: Cuboid, c: float,
                               structure: DomainStructure, weights: WeightSet,
                               limits: Limits) -> tuple[float, list[float]]:
    """Shared core of the closed-form measure and its truncation tail.

    Returns ``pref`` = 1 / (c^n * prod_d w_domain(d) * sqrt(w_d)) and the
    per-subset-size sums T_i of (prod of a_d outside the subset) times the
    per-domain unit-ball factors inside it, with a_d the width b_d scaled
    by c and the dimension's weights.
    """
    dims = structure.dimension_ids
    n = len(dims)
    _check_dimension_limit(n, limits)
    widths = _cuboid_widths(cuboid, structure)
    domain_of = {d: name for name, ds in structure.domains for d in ds}
    w_line = {
        d: weights.domain_weights[domain_of[d]] * math.sqrt(weights.dimension_weights[d])
        for d in dims
    }
    a = {d: w_line[d] * widths[d] * c for d in dims}
    pref = 1.0 / (c ** n * math.prod(w_line[d] for d in dims))
    sums: list[float] = []
    for i in range(n + 1):
        terms = []
        for subset in itertools.combinations(dims, i):
            outside = math.prod(a[d] for d in dims if d not in subset)
            counts: dict[str, int] = {}
            for d in subset:
                counts[domain_of[d]] = counts.get(domain_of[d], 0) + 1
            shape = math.prod(_unit_ball_factor(k) for k in counts.values())
            terms.append(outside * shape)
        sums.append(math.fsum(terms))
    return pref, sums


def fuzzified_cuboid_measure(cuboid: Cuboid, mu0: float, c: float,
                             structure: DomainStructure, weights: WeightSet,
                             limits: Limits = DEFAULT_LIMITS) -> float:
    """Closed-form integral of the fuzzified cuboid's membership function.

    Equals the integral of :func:`alpha_cut_volume` over alpha in
    (0, mu0]; the log integrals collapse to factorials, leaving the plain
    sum of the subset terms times mu0 and the weight/sensitivity prefactor.
    """
    if not 0 < mu0 <= 1:
        raise ValueError(f"mu0 must lie in (0, 1], got {mu0}")
    if not c > 0:
        raise ValueError(f"sensitivity c must be positive, got {c}")
    pref, sums = _prefactor_and_subset_sums(cuboid, c, structure, weights, limits)
    return mu0 * pref * math.fsum(sums)


def cuboid_tail_mass(cuboid: Cuboid, cutoff: float, mu0: float, c: float,
                     structure: DomainStructure, weights: WeightSet,
                     limits: Limits = DEFAULT_LIMITS) -> float:
    """Mass of the fuzzified cuboid carried by memberships below ``cutoff``.

    This is the integral of the alpha-cut volume over alpha in (0, cutoff];
    with u = cutoff/mu0 and L = -ln(u) it evaluates to

        mu0 * pref * u * sum_i T_i * sum_{k<=i} L^k / k!

    It bounds the membership mass outside the cutoff's epsilon-box, and
    at cutoff = mu0 it recovers the full measure.
    """
    if not 0 < cutoff:
        raise ValueError(f"cutoff must be positive, got {cutoff}")
    u = min(1.0, cutoff / mu0)
    ell = -math.log(u)
    pref, sums = _prefactor_and_subset_sums(cuboid, c, structure, weights, limits)
    partial = 0.0
    power = 1.0
    total = []
    for i, t_i in enumerate(sums):
        if i > 0:
            power *= ell / i
        partial += power
        total.append(t_i * partial)
    return mu0 * pref * u * math.fsum(total)


def _intersection_boxes(concept: Concept, limits: Limits) -> list[tuple[int, Cuboid]]:
    """(sign, box) terms of the inclusion-exclusion over the core's cuboids."""
    cuboids = concept.core.cuboids
    _check_cuboid_limit(len(cuboids), limits)
    terms: list[tuple[int, Cuboid]] = []
    for size in range(1, len(cuboids) + 1):
        sign = 1 if size % 2 == 1 else -1
        for combo in itertools.combinations(range(len(cuboids)), size):
            box = cuboids[combo[0]]
            for j in combo[1:]:
                box = box.intersect(cuboids[j])
                # non-empty by the core invariant: every subset contains P
                assert box is not None
            terms.append((sign, box))
    return terms


def concept_measure_with_params(concept: Concept, c: float | None = None,
                                weights: WeightSet | None = None,
                                limits: Limits = DEFAULT_LIMITS) -> float:
    """Concept measure with substituted sensitivity and/or weights.

    Used by the context-sensitive relations, which evaluate one concept
    under another's parameters.  The override weights must cover the
    concept's domains.
    """
    sub = concept.domain_structure
    c_eff = concept.c if c is None else c
    if not c_eff > 0:
        raise ValueError(f"sensitivity c must be positive, got {c_eff}")
    w_eff = concept.weights if weights is None else weights
    if weights is not None:
        validate_weights(w_eff, sub)
    signed = [
        sign * fuzzified_cuboid_measure(box, concept.mu0, c_eff, sub, w_eff, limits)
        for sign, box in _intersection_boxes(concept, limits)
    ]
    return math.fsum(signed)


def concept_measure(concept: Concept, limits: Limits = DEFAULT_LIMITS) -> float:
    """Size of the concept: inclusion-exclusion over its fuzzified cuboids,
    computed on the concept's own domains."""
    return concept_measure_with_params(concept, limits=limits)


def concept_alpha_cut_volume(concept: Concept, alpha: float,
                             limits: Limits = DEFAULT_LIMITS) -> float:
    """Alpha-cut volume of the whole concept via the same inclusion-exclusion."""
    sub = concept.domain_structure
    signed = [
        sign * alpha_cut_volume(box, alpha, concept.mu0, concept.c, sub,
                                concept.weights, limits)
        for sign, box in _intersection_boxes(concept, limits)
    ]
    return math.fsum(signed)


def concept_tail_mass(concept: Concept, cutoff: float, c: float | None = None,
                      weights: WeightSet | None = None,
                      limits: Limits = DEFAULT_LIMITS) -> float:
    """Upper bound on the concept's membership mass below ``cutoff``.

    Union bound: the sum of the per-cuboid tails, ignoring overlaps.
    """
    sub = concept.domain_structure
    c_eff = concept.c if c is None else c
    w_eff = concept.weights if weights is None else weights
    return math.fsum(
        cuboid_tail_mass(cub, cutoff, concept.mu0, c_eff, sub, w_eff, limits)
        for cub in concept.core.cuboids
    )
