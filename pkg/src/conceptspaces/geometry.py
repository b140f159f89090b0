"""Domain structures, weights, points, and the point-level metric primitives.

A space is a list of named domains, each grouping one or more named
dimensions.  Distance within a domain is weighted Euclidean, distances
across domains combine as a weighted Manhattan sum:

    d(x, y) = sum_over_domains( w_domain * sqrt(sum_over_dims(w_dim * (x_d - y_d)**2)) )

Similarity of points is exp(-c * d).  A point y is between x and z when
the per-domain restrictions of y lie on the Euclidean segments between
the restrictions of x and z; this is equivalent to the additive
condition d(x,y) + d(y,z) = d(x,z) for every strictly positive weight
assignment, so the predicate is weight-free.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import DimensionMismatchError, WeightNormalizationError

#: relative tolerance for weight normalization checks
WEIGHT_SUM_RTOL = 1e-9

#: default absolute tolerance on per-domain collinearity residuals
DEFAULT_BETWEENNESS_TOL = 1e-9


@dataclass(frozen=True)
class DomainStructure:
    """Ordered collection of domains, each an ordered tuple of dimension ids.

    The concatenation of the per-domain dimension tuples fixes the
    canonical coordinate layout used for vectors and file formats.
    """

    domains: tuple[tuple[str, tuple[str, ...]], ...]

    def __post_init__(self):
        object.__setattr__(self, "domains", tuple(
            (name, tuple(dims)) for name, dims in self.domains
        ))
        seen_domains: set[str] = set()
        seen_dims: set[str] = set()
        for name, dims in self.domains:
            if name in seen_domains:
                raise DimensionMismatchError(f"duplicate domain {name!r}")
            seen_domains.add(name)
            if not dims:
                raise DimensionMismatchError(f"domain {name!r} has no dimensions")
            for d in dims:
                if d in seen_dims:
                    raise DimensionMismatchError(
                        f"dimension {d!r} belongs to more than one domain")
                seen_dims.add(d)

    @property
    def n(self) -> int:
        """Total number of dimensions."""
        return sum(len(dims) for _, dims in self.domains)

    @property
    def domain_ids(self) -> tuple[str, ...]:
        return tuple(name for name, _ in self.domains)

    @property
    def dimension_ids(self) -> tuple[str, ...]:
        """All dimension ids in canonical order."""
        return tuple(d for _, dims in self.domains for d in dims)

    def dimensions_of(self, domain_id: str) -> tuple[str, ...]:
        for name, dims in self.domains:
            if name == domain_id:
                return dims
        raise DimensionMismatchError(f"unknown domain {domain_id!r}")

    def domain_of(self, dimension_id: str) -> str:
        for name, dims in self.domains:
            if dimension_id in dims:
                return name
        raise DimensionMismatchError(f"unknown dimension {dimension_id!r}")

    def restrict(self, domain_ids: Iterable[str]) -> "DomainStructure":
        """Sub-structure keeping only the given domains, in canonical order."""
        keep = set(domain_ids)
        unknown = keep - set(self.domain_ids)
        if unknown:
            raise DimensionMismatchError(f"unknown domains {sorted(unknown)!r}")
        return DomainStructure(tuple(
            (name, dims) for name, dims in self.domains if name in keep
        ))

    def restrict_dimensions(self, dimension_ids: Iterable[str]) -> "DomainStructure":
        """Sub-structure keeping only the given dimensions; empty domains drop out."""
        keep = set(dimension_ids)
        unknown = keep - set(self.dimension_ids)
        if unknown:
            raise DimensionMismatchError(f"unknown dimensions {sorted(unknown)!r}")
        kept = tuple(
            (name, tuple(d for d in dims if d in keep))
            for name, dims in self.domains
        )
        return DomainStructure(tuple((n, ds) for n, ds in kept if ds))


@dataclass(frozen=True)
class WeightSet:
    """Positive domain weights plus per-domain dimension weights.

    Domain weights must sum to the number of covered domains; the
    dimension weights of every covered domain must sum to one.  The
    second constraint needs the domain grouping, so it is enforced by
    :func:`validate_weights` against a structure; the constructor checks
    positivity and the domain-weight sum.
    """

    domain_weights: Mapping[str, float]
    dimension_weights: Mapping[str, float]

    def __post_init__(self):
        object.__setattr__(self, "domain_weights", dict(self.domain_weights))
        object.__setattr__(self, "dimension_weights", dict(self.dimension_weights))
        for name, w in self.domain_weights.items():
            if not w > 0:
                raise WeightNormalizationError(f"domain weight {name!r} = {w} is not positive")
        for name, w in self.dimension_weights.items():
            if not w > 0:
                raise WeightNormalizationError(f"dimension weight {name!r} = {w} is not positive")
        total = math.fsum(self.domain_weights.values())
        target = float(len(self.domain_weights))
        if abs(total - target) > WEIGHT_SUM_RTOL * max(1.0, target):
            raise WeightNormalizationError(
                f"domain weights sum to {total}, expected {target}")

    @property
    def domain_ids(self) -> tuple[str, ...]:
        return tuple(self.domain_weights)

    @classmethod
    def uniform(cls, structure: DomainStructure) -> "WeightSet":
        """Equal domain weights; equal dimension weights within each domain."""
        dom = {name: 1.0 for name in structure.domain_ids}
        dim = {}
        for name, dims in structure.domains:
            for d in dims:
                dim[d] = 1.0 / len(dims)
        return cls(dom, dim)


def validate_weights(weights: WeightSet, structure: DomainStructure) -> None:
    """Check that ``weights`` covers ``structure`` and satisfies all sum constraints."""
    missing = set(structure.domain_ids) - set(weights.domain_weights)
    if missing:
        raise WeightNormalizationError(f"missing domain weights for {sorted(missing)!r}")
    for name, dims in structure.domains:
        missing_d = set(dims) - set(weights.dimension_weights)
        if missing_d:
            raise WeightNormalizationError(
                f"missing dimension weights for {sorted(missing_d)!r}")
        s = math.fsum(weights.dimension_weights[d] for d in dims)
        if abs(s - 1.0) > WEIGHT_SUM_RTOL:
            raise WeightNormalizationError(
                f"dimension weights of domain {name!r} sum to {s}, expected 1.0")
    total = math.fsum(weights.domain_weights[name] for name in structure.domain_ids)
    target = float(len(structure.domain_ids))
    if abs(total - target) > WEIGHT_SUM_RTOL * max(1.0, target):
        raise WeightNormalizationError(
            f"domain weights over {list(structure.domain_ids)!r} sum to {total}, "
            f"expected {target}")


def restrict_weights(weights: WeightSet, structure: DomainStructure,
                     keep_domains: Iterable[str], renormalize: bool = True) -> WeightSet:
    """Weights for a sub-structure.

    With ``renormalize`` the kept domain weights are rescaled by a common
    factor so they sum to the number of kept domains (dimension weights
    are untouched).  Without it the raw restricted weights are returned;
    their sum invariant is then deliberately not enforced, since callers
    such as the similarity relation use raw restricted weights.
    """
    keep = [name for name in structure.domain_ids if name in set(keep_domains)]
    if not keep:
        raise ValueError("keep_domains must name at least one domain")
    dom = {name: weights.domain_weights[name] for name in keep}
    dims = {}
    for name in keep:
        for d in structure.dimensions_of(name):
            dims[d] = weights.dimension_weights[d]
    if renormalize:
        if set(keep) == set(weights.domain_weights):
            return WeightSet(dom, dims)
        factor = len(dom) / math.fsum(dom.values())
        return WeightSet({name: w * factor for name, w in dom.items()}, dims)
    ws = object.__new__(WeightSet)
    object.__setattr__(ws, "domain_weights", dom)
    object.__setattr__(ws, "dimension_weights", dims)
    return ws


@dataclass(frozen=True)
class Point:
    """Coordinates keyed by dimension id."""

    coords: Mapping[str, float]

    def __post_init__(self):
        object.__setattr__(self, "coords", {k: float(v) for k, v in self.coords.items()})

    @classmethod
    def from_values(cls, structure: DomainStructure, values: Sequence[float]) -> "Point":
        """Build a point from coordinates in the structure's canonical order."""
        dims = structure.dimension_ids
        if len(values) != len(dims):
            raise DimensionMismatchError(
                f"expected {len(dims)} coordinates {list(dims)!r}, got {len(values)}")
        return cls(dict(zip(dims, values)))

    def restrict(self, dimension_ids: Iterable[str]) -> "Point":
        return Point({d: self.coords[d] for d in dimension_ids})

    def __getitem__(self, dimension_id: str) -> float:
        return self.coords[dimension_id]


def _require_dims(point: Point, structure: DomainStructure) -> None:
    missing = set(structure.dimension_ids) - set(point.coords)
    if missing:
        raise DimensionMismatchError(
            f"point is missing dimensions {sorted(missing)!r}")


def _weighted_distance(x: Mapping[str, float], y: Mapping[str, float],
                       structure: DomainStructure,
                       domain_w: Mapping[str, float],
                       dim_w: Mapping[str, float]) -> float:
    """Weighted Manhattan-of-Euclidean combined distance over raw weight maps."""
    per_domain = []
    for name, dims in structure.domains:
        sq = math.fsum(dim_w[d] * (x[d] - y[d]) ** 2 for d in dims)
        per_domain.append(domain_w[name] * math.sqrt(sq))
    return math.fsum(per_domain)


def combined_distance(x: Point, y: Point, structure: DomainStructure,
                      weights: WeightSet) -> float:
    """Combined metric: weighted Euclidean within domains, weighted Manhattan across."""
    _require_dims(x, structure)
    _require_dims(y, structure)
    return _weighted_distance(x.coords, y.coords, structure,
                              weights.domain_weights, weights.dimension_weights)


def point_similarity(x: Point, y: Point, structure: DomainStructure,
                     weights: WeightSet, c: float) -> float:
    """exp(-c * distance); 1 exactly when the points coincide."""
    if not c > 0:
        raise ValueError(f"sensitivity c must be positive, got {c}")
    return math.exp(-c * combined_distance(x, y, structure, weights))


def between_points(x: Point, y: Point, z: Point, structure: DomainStructure,
                   tol: float = DEFAULT_BETWEENNESS_TOL) -> bool:
    """True when y lies between x and z under the combined metric.

    Checked per domain as Euclidean segment membership: the residual of y
    against its orthogonal projection onto the segment [x, z] (restricted
    to the domain's dimensions) must not exceed ``tol`` in any coordinate.
    Weight-free: within-domain collinearity does not depend on strictly
    positive weights, and the cross-domain Manhattan sum attains equality
    exactly when every domain does.
    """
    if tol < 0:
        raise ValueError(f"tolerance must be non-negative, got {tol}")
    for p in (x, y, z):
        _require_dims(p, structure)
    for _, dims in structure.domains:
        u = np.array([x.coords[d] for d in dims], dtype=float)
        v = np.array([y.coords[d] for d in dims], dtype=float)
        w = np.array([z.coords[d] for d in dims], dtype=float)
        seg = w - u
        denom = float(seg @ seg)
        if denom == 0.0:
            residual = v - u
        else:
            t = float(np.clip((v - u) @ seg / denom, 0.0, 1.0))
            residual = v - (u + t * seg)
        if float(np.max(np.abs(residual))) > tol:
            return False
    return True
