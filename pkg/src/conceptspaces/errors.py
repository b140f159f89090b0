"""Exception hierarchy for the conceptspaces library.

The CLI maps these onto exit codes: parse/usage problems exit 1,
model validation problems exit 2, exceeded numerical limits exit 3.
"""


class ConceptSpaceError(Exception):
    """Base class for all library errors."""


class DimensionMismatchError(ConceptSpaceError):
    """A point or weight set does not match the domain structure it is used with."""


class WeightNormalizationError(ConceptSpaceError):
    """Domain or dimension weights violate their normalization constraints."""


class InvalidCoreError(ConceptSpaceError):
    """The cuboids of a core have an empty common intersection."""


class UnboundedCuboidError(ConceptSpaceError):
    """A measure was requested for a cuboid that is unbounded on a relevant dimension."""


class MidpointUndefinedError(ConceptSpaceError):
    """The central region is unbounded on a dimension, so its midpoint is undefined."""


class NoCommonDomainsError(ConceptSpaceError):
    """Two concepts share no domains, so the requested relation is undefined."""


class DegenerateDomainError(ConceptSpaceError):
    """An integration region has zero volume."""


class LimitExceededError(ConceptSpaceError):
    """Dimension or cuboid count exceeds the configured enumeration limits."""


class SpaceFileError(ConceptSpaceError):
    """A concept-space file failed to parse or validate.

    ``location`` points at the offending entry (file path plus a
    dotted path into the document).
    """

    def __init__(self, message: str, location: str | None = None):
        self.location = location
        if location:
            message = f"{location}: {message}"
        super().__init__(message)


class SpaceParseError(SpaceFileError):
    """The file is not syntactically valid (as opposed to semantically)."""


class UnknownConceptError(ConceptSpaceError):
    """A concept name is not present in the loaded registry."""

    def __init__(self, name: str, suggestions: tuple[str, ...] = ()):
        self.name = name
        self.suggestions = suggestions
        message = f"unknown concept {name!r}"
        if suggestions:
            message += "; did you mean: " + ", ".join(suggestions)
        super().__init__(message)
