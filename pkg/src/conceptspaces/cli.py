"""Command-line interface.

Subcommands operate on a concept-space file (the bundled fruit space by
default):

    measure <concept>                 closed-form concept size
    subsethood <s1> <s2>              degree of containment (context = s2)
    implication <s1> <s2>             alias for subsethood
    similarity <s1> <s2>              midpoint similarity (context = s2)
    between <s1> <s2> <s3>            midpoint betweenness
    membership <concept> <point>      membership of a comma-separated point
    alpha-volume <concept> <alpha>    alpha-cut volume of the concept
    reproduce-tables                  the fruit space's relation tables
    oracle-check <concept>            closed form vs Monte-Carlo estimate
    export-grid <concept> <domains> <resolution>   membership grid as CSV

Exit codes: 0 success, 1 usage or parse error, 2 validation error,
3 numerical limits exceeded.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from importlib import resources

import numpy as np

from .concepts import Concept, membership_array, project_concept
from .errors import ConceptSpaceError, LimitExceededError, SpaceParseError
from .geometry import Point
from .measure import concept_alpha_cut_volume, concept_measure
from .oracle import OracleSettings, bounding_box_for, discrepancy_report
from .relations import concept_between, concept_similarity, implication, subsethood
from .spacefile import ConceptSpace, load_space, loads_space

#: the fixture rows rendered by reproduce-tables
TABLE_PAIRS = (
    ("granny_smith", "apple"),
    ("orange", "apple"),
    ("lemon", "apple"),
    ("red", "apple"),
)
TABLE_TRIPLES = (
    ("lemon", "apple", "orange"),
    ("lemon", "granny_smith", "orange"),
    ("granny_smith", "apple", "orange"),
)
#: subsethood cells whose reference values depend on an intersection
#: construction external to this library; everything else is HARD
SOFT_SUBSETHOOD = {
    ("orange", "apple"),
    ("apple", "orange"),
    ("lemon", "apple"),
    ("apple", "lemon"),
    ("apple", "granny_smith"),
}


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(message)


def _build_parser() -> _Parser:
    parser = _Parser(prog="cspaces", description="concept-space computations")
    parser.add_argument("--space", metavar="PATH",
                        help="concept-space file (default: bundled fruit space)")
    parser.add_argument("--seed", type=int, default=0, help="oracle RNG seed")
    parser.add_argument("--samples", type=int, default=1_000_000,
                        help="Monte-Carlo sample count")
    parser.add_argument("--cutoff", type=float, default=1e-6,
                        help="membership cutoff for bounding boxes")
    parser.add_argument("--tolerance", type=float, default=1e-9,
                        help="betweenness residual tolerance")
    parser.add_argument("--format", dest="fmt", default="text",
                        choices=["text", "csv", "json-lines"])
    parser.add_argument("--digits", type=int, default=6,
                        help="fractional digits in printed numbers")
    parser.add_argument("--threads", type=int, default=1,
                        help="oracle worker threads (results are identical)")
    sub = parser.add_subparsers(dest="command", metavar="COMMAND")
    sub.required = True

    p = sub.add_parser("measure", help="closed-form concept size")
    p.add_argument("concept")
    p = sub.add_parser("subsethood", help="degree to which s1 is contained in s2")
    p.add_argument("s1")
    p.add_argument("s2")
    p = sub.add_parser("implication", help="degree to which s1 implies s2")
    p.add_argument("s1")
    p.add_argument("s2")
    p = sub.add_parser("similarity", help="midpoint similarity under s2's context")
    p.add_argument("s1")
    p.add_argument("s2")
    p = sub.add_parser("between", help="is s2 between s1 and s3")
    p.add_argument("s1")
    p.add_argument("s2")
    p.add_argument("s3")
    p = sub.add_parser("membership", help="membership of a point")
    p.add_argument("concept")
    p.add_argument("point", help="comma-separated coordinates in dimension order")
    p = sub.add_parser("alpha-volume", help="volume of the concept's alpha-cut")
    p.add_argument("concept")
    p.add_argument("alpha", type=float)
    sub.add_parser("reproduce-tables", help="relation tables for the fruit space")
    p = sub.add_parser("oracle-check", help="closed form vs oracle estimate")
    p.add_argument("concept")
    p = sub.add_parser("export-grid", help="membership grid as CSV")
    p.add_argument("concept")
    p.add_argument("domains", help="comma-separated domain names (1 or 2 dimensions)")
    p.add_argument("resolution", type=int)
    return parser


def _load(args) -> ConceptSpace:
    if args.space is not None:
        return load_space(args.space)
    text = resources.files("conceptspaces").joinpath("data/fruit_space.json").read_text()
    return loads_space(text, source="fruit_space.json (bundled)")


def _settings(args) -> OracleSettings:
    return OracleSettings(
        seed=args.seed,
        samples=args.samples,
        cutoff=args.cutoff,
        threads=args.threads,
        max_samples=max(args.samples, OracleSettings.max_samples),
    )


def _fmt(value: float, digits: int) -> str:
    return f"{value:.{digits}f}"


def _emit(records: list[dict], text_lines: list[str], args) -> None:
    if args.fmt == "text":
        for line in text_lines:
            print(line)
    elif args.fmt == "csv":
        out = io.StringIO()
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(records[0].keys())
        for record in records:
            writer.writerow(_csv_cell(v, args.digits) for v in record.values())
        sys.stdout.write(out.getvalue())
    else:
        for record in records:
            print(json.dumps({k: _json_cell(v, args.digits) for k, v in record.items()}))


def _csv_cell(value, digits: int) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return _fmt(value, digits)
    return str(value)


def _json_cell(value, digits: int):
    if isinstance(value, float):
        return round(value, digits)
    return value


def _scalar(args, record: dict, value: float) -> int:
    record["value"] = value
    _emit([record], [_fmt(value, args.digits)], args)
    return 0


def _parse_point(space: ConceptSpace, concept: Concept, text: str) -> Point:
    try:
        values = [float(token) for token in text.split(",")]
    except ValueError:
        raise _UsageError(f"cannot parse point {text!r}: expected comma-separated numbers")
    space_dims = space.structure.dimension_ids
    concept_dims = concept.domain_structure.dimension_ids
    if len(values) == len(space_dims):
        return Point(dict(zip(space_dims, values)))
    if len(values) == len(concept_dims):
        return Point(dict(zip(concept_dims, values)))
    raise ConceptSpaceError(
        f"point has {len(values)} coordinates; expected {len(space_dims)} "
        f"(space order {list(space_dims)}) or {len(concept_dims)} "
        f"(concept order {list(concept_dims)})")


def _run_export_grid(args, space: ConceptSpace) -> int:
    concept = space.get(args.concept)
    domains = [d for d in args.domains.split(",") if d]
    if args.resolution < 2:
        raise ConceptSpaceError(f"resolution must be at least 2, got {args.resolution}")
    projected = (concept if set(domains) == set(concept.domains)
                 else project_concept(concept, domains))
    dims = projected.domain_structure.dimension_ids
    if len(dims) > 2:
        raise ConceptSpaceError(
            f"grid export supports 1 or 2 dimensions, {list(dims)} has {len(dims)}")
    box = bounding_box_for([projected], args.cutoff)
    axes = [np.linspace(box[d][0], box[d][1], args.resolution) for d in dims]
    if len(dims) == 1:
        points = axes[0][:, None]
        header = "coord1,membership"
    else:
        g1, g2 = np.meshgrid(axes[0], axes[1], indexing="ij")
        points = np.stack([g1.ravel(), g2.ravel()], axis=1)
        header = "coord1,coord2,membership"
    values = membership_array(projected, points, dims)
    print(header)
    for row, value in zip(points, values):
        coords = ",".join(_fmt(v, args.digits) for v in row)
        print(f"{coords},{_fmt(value, args.digits)}")
    return 0


def _run_oracle_check(args, space: ConceptSpace) -> int:
    concept = space.get(args.concept)
    report = discrepancy_report(concept, settings=_settings(args))
    record = {
        "command": "oracle-check",
        "concept": args.concept,
        "closed_form": report.closed_form,
        "oracle_estimate": report.estimate.value,
        "standard_error": report.estimate.standard_error,
        "abs_gap": report.abs_gap,
        "rel_gap": report.rel_gap,
        "sigma_distance": report.sigma_distance,
        "truncated_mass_bound": report.estimate.truncated_mass_bound,
        "regime": "exact" if report.exact_regime else "diagnostic",
    }
    d = args.digits
    text = [
        f"closed_form           {_fmt(report.closed_form, d)}",
        f"oracle_estimate       {_fmt(report.estimate.value, d)}",
        f"standard_error        {report.estimate.standard_error:.3e}",
        f"abs_gap               {report.abs_gap:.3e}",
        f"rel_gap               {report.rel_gap:.3e}",
        f"sigma_distance        {report.sigma_distance:.2f}",
        f"truncated_mass_bound  {report.estimate.truncated_mass_bound:.3e}",
        f"regime                {record['regime']}",
    ]
    _emit([record], text, args)
    return 0


def _render_table(header: list[str], rows: list[list[str]]) -> list[str]:
    widths = [max(len(header[i]), *(len(r[i]) for r in rows)) for i in range(len(header))]
    lines = ["  ".join(h.ljust(w) for h, w in zip(header, widths)).rstrip()]
    for row in rows:
        lines.append("  ".join(c.ljust(w) for c, w in zip(row, widths)).rstrip())
    return lines


def _run_reproduce_tables(args, space: ConceptSpace) -> int:
    needed = {name for pair in TABLE_PAIRS for name in pair}
    needed |= {name for triple in TABLE_TRIPLES for name in triple}
    missing = needed - set(space.names)
    if missing:
        raise ConceptSpaceError(
            f"reproduce-tables needs the fruit-space concepts; missing "
            f"{sorted(missing)!r}")
    settings = _settings(args)

    def sub_cell(a: str, b: str) -> tuple[str, float, str]:
        value = subsethood(space.get(a), space.get(b), settings=settings)
        label = "SOFT" if (a, b) in SOFT_SUBSETHOOD else "HARD"
        return f"{value:.4f} {label}", value, label

    records = []
    rows = []
    for s1, s2 in TABLE_PAIRS:
        m1 = concept_measure(space.get(s1))
        m2 = concept_measure(space.get(s2))
        sub12_cell, sub12, sub12_label = sub_cell(s1, s2)
        sub21_cell, sub21, sub21_label = sub_cell(s2, s1)
        sim12 = concept_similarity(space.get(s1), space.get(s2))
        sim21 = concept_similarity(space.get(s2), space.get(s1))
        rows.append([
            s1, s2,
            f"{m1:.4f} HARD", f"{m2:.4f} HARD",
            sub12_cell, sub21_cell,
            f"{sim12:.4f} HARD", f"{sim21:.4f} HARD",
        ])
        records.append({
            "table": "relations", "s1": s1, "s2": s2,
            "m_s1": round(m1, 4), "m_s1_label": "HARD",
            "m_s2": round(m2, 4), "m_s2_label": "HARD",
            "sub_s1_s2": round(sub12, 4), "sub_s1_s2_label": sub12_label,
            "sub_s2_s1": round(sub21, 4), "sub_s2_s1_label": sub21_label,
            "sim_s1_s2": round(sim12, 4), "sim_s1_s2_label": "HARD",
            "sim_s2_s1": round(sim21, 4), "sim_s2_s1_label": "HARD",
        })
    text = ["concept relations (context = s2)"]
    text += _render_table(
        ["s1", "s2", "M(s1)", "M(s2)", "Sub(s1,s2)", "Sub(s2,s1)",
         "Sim(s1,s2)", "Sim(s2,s1)"],
        rows)
    text.append("")
    text.append("concept betweenness")
    brows = []
    for s1, s2, s3 in TABLE_TRIPLES:
        b = concept_between(space.get(s1), space.get(s2), space.get(s3),
                            tol=args.tolerance)
        brows.append([s1, s2, s3, f"{'true' if b else 'false'} HARD"])
        records.append({
            "table": "betweenness", "s1": s1, "s2": s2, "s3": s3,
            "between": b, "between_label": "HARD",
        })
    text += _render_table(["s1", "s2", "s3", "B(s1,s2,s3)"], brows)

    if args.fmt == "text":
        for line in text:
            print(line)
        return 0
    if args.fmt == "csv":
        out = io.StringIO()
        writer = csv.writer(out, lineterminator="\n")
        for record in records:
            writer.writerow(record.keys())
            writer.writerow(_csv_cell(v, 4) for v in record.values())
        sys.stdout.write(out.getvalue())
        return 0
    for record in records:
        print(json.dumps({k: _json_cell(v, 4) for k, v in record.items()}))
    return 0


def _dispatch(args) -> int:
    space = _load(args)
    cmd = args.command
    if cmd == "measure":
        return _scalar(args, {"command": cmd, "concept": args.concept},
                       concept_measure(space.get(args.concept)))
    if cmd in ("subsethood", "implication"):
        fn = subsethood if cmd == "subsethood" else implication
        value = fn(space.get(args.s1), space.get(args.s2), settings=_settings(args))
        return _scalar(args, {"command": cmd, "s1": args.s1, "s2": args.s2}, value)
    if cmd == "similarity":
        value = concept_similarity(space.get(args.s1), space.get(args.s2))
        return _scalar(args, {"command": cmd, "s1": args.s1, "s2": args.s2}, value)
    if cmd == "between":
        value = concept_between(space.get(args.s1), space.get(args.s2),
                                space.get(args.s3), tol=args.tolerance)
        record = {"command": cmd, "s1": args.s1, "s2": args.s2, "s3": args.s3,
                  "value": value}
        _emit([record], ["true" if value else "false"], args)
        return 0
    if cmd == "membership":
        concept = space.get(args.concept)
        point = _parse_point(space, concept, args.point)
        return _scalar(args, {"command": cmd, "concept": args.concept,
                              "point": args.point}, concept.membership(point))
    if cmd == "alpha-volume":
        concept = space.get(args.concept)
        value = concept_alpha_cut_volume(concept, args.alpha)
        return _scalar(args, {"command": cmd, "concept": args.concept,
                              "alpha": args.alpha}, value)
    if cmd == "reproduce-tables":
        return _run_reproduce_tables(args, space)
    if cmd == "oracle-check":
        return _run_oracle_check(args, space)
    if cmd == "export-grid":
        return _run_export_grid(args, space)
    raise _UsageError(f"unknown command {cmd!r}")


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        return _dispatch(args)
    except _UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except SpaceParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except LimitExceededError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except (ConceptSpaceError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def console_main() -> None:
    sys.exit(main())


if __name__ == "__main__":
    console_main()
