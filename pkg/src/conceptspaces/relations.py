"""Concept-level relations: subsethood, implication, similarity, betweenness.

Subsethood of S1 in S2 is the measure of the pointwise minimum of the
two memberships divided by the measure of S1.  The second concept sets
the context: both measures are taken under its sensitivity and weights
(restricted to the shared domains, domain weights renormalized), which
guarantees the ratio stays in [0, 1].  When one core's cuboid union
contains the other's, the minimum collapses to the smaller concept's
membership and the numerator has a closed form; otherwise it is
estimated by the seeded integration oracle.

Similarity and betweenness act on the midpoints of the concepts'
central regions over the shared domains.  Similarity again takes the
second concept's sensitivity and weights, but restricted *without*
renormalization; betweenness is weight-free.
"""

from __future__ import annotations

import math

from .concepts import Concept, central_midpoint, project_concept
from .errors import DimensionMismatchError, NoCommonDomainsError
from .geometry import _weighted_distance, between_points, restrict_weights
from .measure import DEFAULT_LIMITS, Limits, concept_measure_with_params
from .oracle import DEFAULT_SETTINGS, OracleSettings, estimate_min_measure


def _shared_domains(*concepts: Concept) -> tuple[str, ...]:
    first = concepts[0]
    for other in concepts[1:]:
        if other.structure != first.structure:
            raise DimensionMismatchError(
                "concepts live in different domain structures")
    shared = set(first.domains)
    for other in concepts[1:]:
        shared &= set(other.domains)
    if not shared:
        raise NoCommonDomainsError(
            "concepts share no domains: " +
            "; ".join(str(list(c.domains)) for c in concepts))
    return tuple(name for name in first.structure.domain_ids if name in shared)


def _project(concept: Concept, domains: tuple[str, ...]) -> Concept:
    if set(domains) == set(concept.domains):
        return concept
    return project_concept(concept, domains)


def _union_contained(inner: Concept, outer: Concept) -> bool:
    """Sufficient containment check: every cuboid of ``inner`` sits inside
    some cuboid of ``outer`` (same domains assumed)."""
    return all(
        any(ci.is_contained_in(co) for co in outer.core.cuboids)
        for ci in inner.core.cuboids
    )


def subsethood(s1: Concept, s2: Concept, *,
               settings: OracleSettings = DEFAULT_SETTINGS,
               limits: Limits = DEFAULT_LIMITS) -> float:
    """Degree to which s1 is contained in s2, in [0, 1].

    Both concepts are projected onto their shared domains and evaluated
    under s2's sensitivity and (renormalized) weights.  The numerator's
    oracle estimate escalates its sample count until the standard error
    meets ``settings.se_target`` or ``settings.max_samples`` is reached.
    """
    shared = _shared_domains(s1, s2)
    p1 = _project(s1, shared)
    p2 = _project(s2, shared)
    ctx_c = s2.c
    ctx_w = restrict_weights(s2.weights, s2.domain_structure, shared,
                             renormalize=True)
    denominator = concept_measure_with_params(p1, c=ctx_c, weights=ctx_w,
                                              limits=limits)
    if _union_contained(p1, p2) and p1.mu0 <= p2.mu0:
        return 1.0
    if _union_contained(p2, p1) and p2.mu0 <= p1.mu0:
        numerator = concept_measure_with_params(p2, c=ctx_c, weights=ctx_w,
                                                limits=limits)
        return numerator / denominator
    samples = settings.samples
    while True:
        run = OracleSettings(seed=settings.seed, samples=samples,
                             cutoff=settings.cutoff, method=settings.method,
                             threads=settings.threads,
                             se_target=settings.se_target,
                             max_samples=settings.max_samples)
        est = estimate_min_measure(p1, p2, c=ctx_c, weights=ctx_w,
                                   settings=run, limits=limits)
        if est.standard_error <= settings.se_target or samples >= settings.max_samples:
            break
        samples = min(settings.max_samples, samples * 2)
    return est.value / denominator


def implication(s1: Concept, s2: Concept, *,
                settings: OracleSettings = DEFAULT_SETTINGS,
                limits: Limits = DEFAULT_LIMITS) -> float:
    """Degree to which membership in s1 entails membership in s2;
    identified with subsethood."""
    return subsethood(s1, s2, settings=settings, limits=limits)


def concept_similarity(s1: Concept, s2: Concept) -> float:
    """exp(-c2 * distance of the central-region midpoints).

    Computed on the shared domains with s2's sensitivity and s2's weights
    restricted to those domains without renormalization.
    """
    shared = _shared_domains(s1, s2)
    mid1 = central_midpoint(s1, shared)
    mid2 = central_midpoint(s2, shared)
    sub = s1.structure.restrict(shared)
    w = restrict_weights(s2.weights, s2.domain_structure, shared,
                         renormalize=False)
    d = _weighted_distance(mid1.coords, mid2.coords, sub,
                           w.domain_weights, w.dimension_weights)
    return math.exp(-s2.c * d)


def concept_between(s1: Concept, s2: Concept, s3: Concept,
                    tol: float = 1e-9) -> bool:
    """True when s2's central midpoint lies between s1's and s3's on the
    concepts' shared domains.  Weight-free like point betweenness."""
    shared = _shared_domains(s1, s2, s3)
    sub = s1.structure.restrict(shared)
    return between_points(
        central_midpoint(s1, shared),
        central_midpoint(s2, shared),
        central_midpoint(s3, shared),
        sub,
        tol,
    )
