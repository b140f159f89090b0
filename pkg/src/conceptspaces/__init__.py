"""Conceptual-space modeling: concepts as fuzzy unions of axis-parallel
cuboids over weighted domains, with exact size, subsethood, implication,
similarity, and betweenness computations plus a Monte-Carlo cross-check
oracle."""

from .concepts import (
    Concept,
    Core,
    Cuboid,
    central_midpoint,
    distance_to_cuboid,
    membership_array,
    project_concept,
    validate_core,
)
from .errors import (
    ConceptSpaceError,
    DegenerateDomainError,
    DimensionMismatchError,
    InvalidCoreError,
    LimitExceededError,
    MidpointUndefinedError,
    NoCommonDomainsError,
    SpaceFileError,
    UnboundedCuboidError,
    UnknownConceptError,
    WeightNormalizationError,
)
from .geometry import (
    DomainStructure,
    Point,
    WeightSet,
    between_points,
    combined_distance,
    point_similarity,
    restrict_weights,
    validate_weights,
)
from .measure import (
    DEFAULT_LIMITS,
    Limits,
    alpha_cut_volume,
    concept_alpha_cut_volume,
    concept_measure,
    concept_measure_with_params,
    concept_tail_mass,
    cuboid_tail_mass,
    fuzzified_cuboid_measure,
    hyperball_volume,
)
from .oracle import (
    IntegralEstimate,
    IntegrationSpec,
    OracleSettings,
    bounding_box_for,
    discrepancy_report,
    estimate_concept_measure,
    integrate,
)
from .relations import (
    concept_between,
    concept_similarity,
    implication,
    subsethood,
)
from .spacefile import ConceptSpace, load_space, loads_space, serialize_space

__all__ = [name for name in dir() if not name.startswith("_")]

__version__ = "0.1.0"
