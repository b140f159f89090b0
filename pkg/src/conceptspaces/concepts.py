"""Cuboids, cores, and fuzzy concepts.

A core is a union of axis-parallel cuboids that share a non-empty
central region; it is star-shaped with respect to that region under the
combined metric.  A concept attaches a peak membership ``mu0``, a decay
rate ``c``, and a weight set to a core.  Membership of a point is

    mu(x) = mu0 * exp(-c * min_over_cuboids(distance(x, cuboid)))

where the distance from a point to an axis-parallel cuboid under the
combined metric is attained at the per-dimension clamp of the point onto
the cuboid's bounds.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import (
    DimensionMismatchError,
    InvalidCoreError,
    MidpointUndefinedError,
)
from .geometry import (
    DomainStructure,
    Point,
    WeightSet,
    _weighted_distance,
    restrict_weights,
    validate_weights,
)

INF = float("inf")


@dataclass(frozen=True)
class Cuboid:
    """Axis-parallel box: finite bounds on the dimensions of its domains,
    unbounded (-inf/+inf) everywhere else."""

    defined_domains: tuple[str, ...]
    lower: Mapping[str, float]
    upper: Mapping[str, float]

    def __post_init__(self):
        object.__setattr__(self, "defined_domains", tuple(self.defined_domains))
        object.__setattr__(self, "lower", {k: float(v) for k, v in self.lower.items()})
        object.__setattr__(self, "upper", {k: float(v) for k, v in self.upper.items()})

    @classmethod
    def create(cls, structure: DomainStructure, domains: Iterable[str],
               lower: Mapping[str, float], upper: Mapping[str, float]) -> "Cuboid":
        """Validated constructor.

        ``lower``/``upper`` give bounds for the dimensions of ``domains``;
        dimensions of other domains may be omitted or explicitly unbounded.
        """
        domains = tuple(name for name in structure.domain_ids if name in set(domains))
        inside = {d for name in domains for d in structure.dimensions_of(name)}
        lo: dict[str, float] = {}
        hi: dict[str, float] = {}
        for d in structure.dimension_ids:
            l = float(lower.get(d, -INF))
            u = float(upper.get(d, INF))
            if d in inside:
                if not (math.isfinite(l) and math.isfinite(u)):
                    raise DimensionMismatchError(
                        f"dimension {d!r} lies in a defined domain but has "
                        f"non-finite bounds [{l}, {u}]")
                if l > u:
                    raise DimensionMismatchError(
                        f"dimension {d!r} has lower bound {l} above upper bound {u}")
            else:
                if l != -INF or u != INF:
                    raise DimensionMismatchError(
                        f"dimension {d!r} lies outside the defined domains and "
                        f"must be unbounded, got [{l}, {u}]")
            lo[d] = l
            hi[d] = u
        return cls(domains, lo, hi)

    def contains(self, point: Point) -> bool:
        return all(self.lower[d] <= point.coords[d] <= self.upper[d] for d in self.lower)

    def width(self, dimension_id: str) -> float:
        return self.upper[dimension_id] - self.lower[dimension_id]

    def is_bounded_on(self, dimension_ids: Iterable[str]) -> bool:
        return all(
            math.isfinite(self.lower[d]) and math.isfinite(self.upper[d])
            for d in dimension_ids
        )

    def is_contained_in(self, other: "Cuboid") -> bool:
        return all(
            other.lower[d] <= self.lower[d] and self.upper[d] <= other.upper[d]
            for d in self.lower
        )

    def intersect(self, other: "Cuboid") -> "Cuboid | None":
        """Per-dimension intersection box, or None when empty."""
        lo = {d: max(self.lower[d], other.lower[d]) for d in self.lower}
        hi = {d: min(self.upper[d], other.upper[d]) for d in self.upper}
        if any(lo[d] > hi[d] for d in lo):
            return None
        merged = list(self.defined_domains)
        merged += [name for name in other.defined_domains if name not in merged]
        return Cuboid(tuple(merged), lo, hi)


@dataclass(frozen=True)
class Core:
    """Non-empty list of cuboids on the same domains with a non-empty
    common intersection (the central region)."""

    domains: tuple[str, ...]
    cuboids: tuple[Cuboid, ...]
    central_region: Cuboid


def validate_core(cuboids: Sequence[Cuboid], structure: DomainStructure) -> Core:
    """Check the core invariants and return the core with its central region.

    All cuboids must be defined on the same domains, and their common
    intersection must be non-empty on every dimension.
    """
    if not cuboids:
        raise InvalidCoreError("a core needs at least one cuboid")
    domains = cuboids[0].defined_domains
    for c in cuboids[1:]:
        if c.defined_domains != domains:
            raise InvalidCoreError(
                f"all cuboids must share the same domains; got {domains!r} "
                f"and {c.defined_domains!r}")
    lo = {d: max(c.lower[d] for c in cuboids) for d in cuboids[0].lower}
    hi = {d: min(c.upper[d] for c in cuboids) for d in cuboids[0].upper}
    for d in structure.dimension_ids:
        if lo[d] > hi[d]:
            raise InvalidCoreError(
                f"central region is empty on dimension {d!r}: "
                f"max lower {lo[d]} exceeds min upper {hi[d]}")
    central = Cuboid(domains, lo, hi)
    return Core(domains, tuple(cuboids), central)


@dataclass(frozen=True)
class Concept:
    """Fuzzy star-shaped concept: core, peak membership, decay rate, weights."""

    structure: DomainStructure
    core: Core
    mu0: float
    c: float
    weights: WeightSet
    _sub: DomainStructure = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if not 0 < self.mu0 <= 1:
            raise ValueError(f"mu0 must lie in (0, 1], got {self.mu0}")
        if not self.c > 0:
            raise ValueError(f"sensitivity c must be positive, got {self.c}")
        sub = self.structure.restrict(self.core.domains)
        validate_weights(self.weights, sub)
        object.__setattr__(self, "_sub", sub)

    @property
    def domains(self) -> tuple[str, ...]:
        return self.core.domains

    @property
    def domain_structure(self) -> DomainStructure:
        """The structure restricted to the concept's domains."""
        return self._sub

    def distance_to_core(self, x: Point) -> float:
        """Combined-metric distance to the nearest core cuboid."""
        xr = _restrict_point(x, self._sub)
        return min(
            distance_to_cuboid(xr, c, self._sub, self.weights)
            for c in self.core.cuboids
        )

    def membership(self, x: Point) -> float:
        """mu0 * exp(-c * distance to the core); equals mu0 inside the core."""
        return self.mu0 * math.exp(-self.c * self.distance_to_core(x))


def _restrict_point(x: Point, sub: DomainStructure) -> Point:
    try:
        return x.restrict(sub.dimension_ids)
    except KeyError as exc:
        raise DimensionMismatchError(f"point is missing dimension {exc.args[0]!r}") from None


def distance_to_cuboid(x: Point, cuboid: Cuboid, structure: DomainStructure,
                       weights: WeightSet) -> float:
    """min over y in the cuboid of the combined distance d(x, y).

    The minimizer clamps each coordinate into the cuboid's bounds, which
    is exact for axis-parallel boxes because the combined metric is
    monotone in every per-dimension difference.
    """
    clamped = {
        d: min(max(x.coords[d], cuboid.lower[d]), cuboid.upper[d])
        for d in structure.dimension_ids
    }
    return _weighted_distance(x.coords, clamped, structure,
                              weights.domain_weights, weights.dimension_weights)


def membership_array(concept: Concept, coords: np.ndarray,
                     dimension_ids: Sequence[str], *,
                     c: float | None = None,
                     weights: WeightSet | None = None) -> np.ndarray:
    """Vectorized membership for an (N, k) array of coordinates.

    ``dimension_ids`` names the columns of ``coords`` and must cover the
    concept's dimensions.  ``c``/``weights`` substitute the concept's own
    parameters (used by context-sensitive relations).
    """
    sub = concept.domain_structure
    c_eff = concept.c if c is None else c
    w_eff = concept.weights if weights is None else weights
    col = {d: i for i, d in enumerate(dimension_ids)}
    missing = set(sub.dimension_ids) - set(col)
    if missing:
        raise DimensionMismatchError(f"coordinate array is missing {sorted(missing)!r}")
    coords = np.asarray(coords, dtype=float)
    dist = None
    for cub in concept.core.cuboids:
        per_domain = []
        for name, dims in sub.domains:
            sq = np.zeros(coords.shape[0])
            for d in dims:
                x = coords[:, col[d]]
                diff = x - np.clip(x, cub.lower[d], cub.upper[d])
                sq += w_eff.dimension_weights[d] * diff * diff
            per_domain.append(w_eff.domain_weights[name] * np.sqrt(sq))
        d_cub = np.sum(per_domain, axis=0)
        dist = d_cub if dist is None else np.minimum(dist, d_cub)
    return concept.mu0 * np.exp(-c_eff * dist)


def project_concept(concept: Concept, keep_domains: Iterable[str]) -> Concept:
    """Project onto a subset of the concept's domains.

    Cuboid bounds outside the kept domains become unbounded, dimension
    weights are untouched, and the kept domain weights are rescaled by a
    common factor so they sum to the number of kept domains.  Projection
    preserves the non-empty central region, so the result is always valid.
    """
    keep = set(keep_domains)
    if not keep:
        raise ValueError("keep_domains must not be empty")
    extra = keep - set(concept.domains)
    if extra:
        raise ValueError(
            f"cannot project onto {sorted(extra)!r}: not among the concept's "
            f"domains {list(concept.domains)!r}")
    sub = concept.domain_structure
    new_cuboids = tuple(
        Cuboid.create(
            concept.structure,
            keep,
            {d: cub.lower[d] for name in keep for d in sub.dimensions_of(name)},
            {d: cub.upper[d] for name in keep for d in sub.dimensions_of(name)},
        )
        for cub in concept.core.cuboids
    )
    new_core = validate_core(new_cuboids, concept.structure)
    new_weights = restrict_weights(concept.weights, sub, keep, renormalize=True)
    return Concept(concept.structure, new_core, concept.mu0, concept.c, new_weights)


def central_midpoint(concept: Concept, on_domains: Iterable[str] | None = None) -> Point:
    """Midpoint of the central region, restricted to ``on_domains``."""
    domains = tuple(on_domains) if on_domains is not None else concept.domains
    extra = set(domains) - set(concept.domains)
    if extra:
        raise ValueError(
            f"domains {sorted(extra)!r} are not among the concept's domains")
    p = concept.core.central_region
    coords = {}
    for name in domains:
        for d in concept.domain_structure.dimensions_of(name):
            lo, hi = p.lower[d], p.upper[d]
            if not (math.isfinite(lo) and math.isfinite(hi)):
                raise MidpointUndefinedError(
                    f"central region is unbounded on dimension {d!r}")
            coords[d] = 0.5 * (lo + hi)
    return Point(coords)
