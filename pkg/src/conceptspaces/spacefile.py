"""Declarative concept-space files.

A space file is a JSON document:

    {
      "schema_version": 1,
      "space": {
        "domains": [
          {"name": "color", "dimensions": ["hue"]},
          ...
        ]
      },
      "concepts": {
        "red": {
          "domains": ["color"],
          "cuboids": [{"lower": {"hue": 0.9, "round": "-inf", ...},
                       "upper": {"hue": 1.0, "round": "+inf", ...}}],
          "mu0": 1.0,
          "c": 20.0,
          "domain_weights": {"color": 1.0},
          "dimension_weights": {"hue": 1.0}
        },
        ...
      }
    }

The literal tokens "-inf" and "+inf" denote unbounded cuboid sides;
bounds for dimensions outside a concept's domains may also simply be
omitted.  Loading validates everything (unique names, declared
dimensions, weight normalization, non-empty central regions) and
reports violations with their location in the document.  Serialization
is canonical - concepts sorted by name, bounds written for every
dimension - so load -> serialize -> load is the identity.
"""

from __future__ import annotations

import difflib
import json
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Mapping

from .concepts import Concept, Cuboid, validate_core
from .errors import (
    ConceptSpaceError,
    SpaceFileError,
    SpaceParseError,
    UnknownConceptError,
)
from .geometry import DomainStructure, WeightSet

SCHEMA_VERSION = 1

INF = float("inf")


@dataclass(frozen=True)
class ConceptSpace:
    """A domain structure together with its named concepts."""

    structure: DomainStructure
    concepts: Mapping[str, Concept]

    def __post_init__(self):
        object.__setattr__(self, "concepts", dict(self.concepts))

    def get(self, name: str) -> Concept:
        try:
            return self.concepts[name]
        except KeyError:
            suggestions = difflib.get_close_matches(name, self.concepts, n=3, cutoff=0.4)
            raise UnknownConceptError(name, tuple(suggestions)) from None

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(self.concepts)


def _fail(message: str, location: str) -> SpaceFileError:
    return SpaceFileError(message, location)


def _expect(mapping: Any, key: str, kind: type, location: str) -> Any:
    if not isinstance(mapping, dict):
        raise _fail(f"expected an object, got {type(mapping).__name__}", location)
    if key not in mapping:
        raise _fail(f"missing required key {key!r}", location)
    value = mapping[key]
    if kind is float:
        if not isinstance(value, (int, float)) or isinstance(value, bool):
            raise _fail(f"{key!r} must be a number", f"{location}.{key}")
        return float(value)
    if not isinstance(value, kind):
        raise _fail(f"{key!r} must be of type {kind.__name__}", f"{location}.{key}")
    return value


def _check_known_keys(mapping: Any, allowed: set[str], location: str) -> None:
    if not isinstance(mapping, dict):
        raise _fail(f"expected an object, got {type(mapping).__name__}", location)
    unknown = set(mapping) - allowed
    if unknown:
        raise _fail(f"unknown keys {sorted(unknown)!r}", location)


def _parse_bound(value: Any, location: str) -> float:
    if value == "-inf":
        return -INF
    if value == "+inf":
        return INF
    if isinstance(value, (int, float)) and not isinstance(value, bool):
        return float(value)
    raise _fail(
        f"bounds must be numbers or the tokens '-inf'/'+inf', got {value!r}", location)


def _parse_weights(entry: dict, key: str, location: str) -> dict[str, float]:
    raw = _expect(entry, key, dict, location)
    out = {}
    for name, value in raw.items():
        if not isinstance(value, (int, float)) or isinstance(value, bool):
            raise _fail(f"weight {name!r} must be a number", f"{location}.{key}")
        out[str(name)] = float(value)
    return out


def loads_space(text: str, source: str = "<string>") -> ConceptSpace:
    """Parse and fully validate a space document from a string."""
    try:
        doc = json.loads(text, object_pairs_hook=_reject_duplicate_keys)
    except json.JSONDecodeError as exc:
        raise SpaceParseError(f"invalid JSON: {exc}", source) from None
    except _DuplicateKey as exc:
        raise SpaceParseError(f"duplicate key {exc.args[0]!r}", source) from None
    if not isinstance(doc, dict):
        raise _fail("top level must be an object", source)
    _check_known_keys(doc, {"schema_version", "space", "concepts"}, source)
    version = _expect(doc, "schema_version", int, source)
    if version != SCHEMA_VERSION:
        raise _fail(f"unsupported schema_version {version}", f"{source}.schema_version")

    space = _expect(doc, "space", dict, source)
    _check_known_keys(space, {"domains"}, f"{source}.space")
    raw_domains = _expect(space, "domains", list, f"{source}.space")
    domains = []
    for i, entry in enumerate(raw_domains):
        loc = f"{source}.space.domains[{i}]"
        name = _expect(entry, "name", str, loc)
        _check_known_keys(entry, {"name", "dimensions"}, loc)
        dims = _expect(entry, "dimensions", list, loc)
        if not all(isinstance(d, str) for d in dims):
            raise _fail("dimensions must be strings", loc)
        domains.append((name, tuple(dims)))
    try:
        structure = DomainStructure(tuple(domains))
    except ConceptSpaceError as exc:
        raise _fail(str(exc), f"{source}.space.domains") from exc

    raw_concepts = _expect(doc, "concepts", dict, source)
    concepts: dict[str, Concept] = {}
    for name, entry in raw_concepts.items():
        loc = f"{source}.concepts.{name}"
        _check_known_keys(entry, {"domains", "cuboids", "mu0", "c",
                                  "domain_weights", "dimension_weights"}, loc)
        concept_domains = _expect(entry, "domains", list, loc)
        unknown = set(concept_domains) - set(structure.domain_ids)
        if unknown:
            raise _fail(f"unknown domains {sorted(unknown)!r}", f"{loc}.domains")
        declared_dims = set(structure.dimension_ids)
        raw_cuboids = _expect(entry, "cuboids", list, loc)
        if not raw_cuboids:
            raise _fail("a concept needs at least one cuboid", f"{loc}.cuboids")
        cuboids = []
        for i, raw_cub in enumerate(raw_cuboids):
            cloc = f"{loc}.cuboids[{i}]"
            _check_known_keys(raw_cub, {"lower", "upper"}, cloc)
            lower = _expect(raw_cub, "lower", dict, cloc)
            upper = _expect(raw_cub, "upper", dict, cloc)
            for side, bounds in (("lower", lower), ("upper", upper)):
                undeclared = set(bounds) - declared_dims
                if undeclared:
                    raise _fail(f"unknown dimensions {sorted(undeclared)!r}",
                                f"{cloc}.{side}")
            try:
                cuboids.append(Cuboid.create(
                    structure, concept_domains,
                    {d: _parse_bound(v, f"{cloc}.lower.{d}") for d, v in lower.items()},
                    {d: _parse_bound(v, f"{cloc}.upper.{d}") for d, v in upper.items()},
                ))
            except ConceptSpaceError as exc:
                raise _fail(str(exc), cloc) from exc
        mu0 = _expect(entry, "mu0", float, loc)
        c = _expect(entry, "c", float, loc)
        weights_raw = (_parse_weights(entry, "domain_weights", loc),
                       _parse_weights(entry, "dimension_weights", loc))
        try:
            weights = WeightSet(*weights_raw)
            core = validate_core(cuboids, structure)
            concepts[name] = Concept(structure, core, mu0, c, weights)
        except (ConceptSpaceError, ValueError) as exc:
            raise _fail(str(exc), loc) from exc
    return ConceptSpace(structure, concepts)


def load_space(path: str | Path) -> ConceptSpace:
    """Load and validate a concept-space file."""
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise SpaceFileError(f"cannot read file: {exc}", str(path)) from None
    return loads_space(text, source=str(path))


def _bound_token(value: float) -> Any:
    if value == -INF:
        return "-inf"
    if value == INF:
        return "+inf"
    return value


def serialize_space(space: ConceptSpace) -> str:
    """Canonical JSON text: concepts sorted by name, every dimension's
    bounds written explicitly (unbounded sides as tokens)."""
    dims = space.structure.dimension_ids
    doc = {
        "schema_version": SCHEMA_VERSION,
        "space": {
            "domains": [
                {"name": name, "dimensions": list(ds)}
                for name, ds in space.structure.domains
            ],
        },
        "concepts": {
            name: {
                "domains": list(concept.domains),
                "cuboids": [
                    {
                        "lower": {d: _bound_token(cub.lower[d]) for d in dims},
                        "upper": {d: _bound_token(cub.upper[d]) for d in dims},
                    }
                    for cub in concept.core.cuboids
                ],
                "mu0": concept.mu0,
                "c": concept.c,
                "domain_weights": dict(concept.weights.domain_weights),
                "dimension_weights": dict(concept.weights.dimension_weights),
            }
            for name, concept in sorted(space.concepts.items())
        },
    }
    return json.dumps(doc, indent=2) + "\n"


def dump_space(space: ConceptSpace, path: str | Path) -> None:
    Path(path).write_text(serialize_space(space), encoding="utf-8")


class _DuplicateKey(Exception):
    pass


def _reject_duplicate_keys(pairs):
    seen = set()
    out = {}
    for key, value in pairs:
        if key in seen:
            raise _DuplicateKey(key)
        seen.add(key)
        out[key] = value
    return out
