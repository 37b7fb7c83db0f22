import argparse
import json
import logging
import sys

from engine import config
from engine.bounds import bounds_report
from engine.cohomology import h_hirzebruch, h_quadric
from engine.errors import CensusError, UnsupportedInput
from engine.report import generate_markdown_analysis, generate_markdown_table, generate_report
from engine.service import CensusService
from engine.surfaces import (
    del_pezzo_classes,
    elliptic_cone_classes,
    rational_cone_classes,
    scroll_classes,
)
from engine.zeroscheme import ideal_cohomology, scheme_from_json

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_MISMATCH = 2


def parse_g_range(text: str) -> tuple[int, int]:
    lo, sep, hi = text.partition("..")
    try:
        g_lo, g_hi = int(lo), int(hi if sep else lo)
    except ValueError:
        raise UnsupportedInput(f"genus range must look like 10..18, got {text!r}") from None
    if g_lo > g_hi:
        raise UnsupportedInput(f"empty genus range {text!r}")
    return g_lo, g_hi


def print_debug(row: dict):
    """Print the decision trace behind one classification row."""
    print(f"\n{'='*60}", file=sys.stderr)
    print(f"  DEBUG TRACE: d={row['d']}, g={row['g']}, r={row['r']}", file=sys.stderr)
    print(f"{'='*60}", file=sys.stderr)
    print(f"  Verdict:        {row['verdict']} ({row['verdict_source']})", file=sys.stderr)
    print(f"  Engine verdict: {row['engine_verdict']} ({row['engine_count']} component(s))", file=sys.stderr)

    for c in row["components"]:
        print(f"\n  {c['label']}:", file=sys.stderr)
        print(f"    family_dim: {c['family_dim']}  expected: {c['expected_dim']}", file=sys.stderr)
        print(f"    gonality:   {c['gonality']}  ({c['gonality_source']})", file=sys.stderr)
        if c["acm"] is not None:
            print(f"    acm:        {c['acm']}  ({c['acm_source']})", file=sys.stderr)
        for note in c["notes"]:
            print(f"    - {note}", file=sys.stderr)

    for a in row["absorbed"]:
        print(f"  [absorbed] {a['label']}: {a['reason']}", file=sys.stderr)
    for x in row["dual_checks"]:
        print(f"  [dual] {x['surface']} {x['class']}: {x['outcome']}  {x['detail']}", file=sys.stderr)
    for note in row["notes"]:
        print(f"  [note] {note}", file=sys.stderr)
    print(f"{'='*60}\n", file=sys.stderr)


def _markdown_list(data) -> str:
    if isinstance(data, list):
        return "\n".join(f"- {item.get('label', item)}: genus {item.get('genus')}, degree {item.get('degree')}"
                         if isinstance(item, dict) else f"- {item}" for item in data) + "\n"
    return "\n".join(f"- {k}: {v}" for k, v in sorted(data.items())) + "\n"


def emit(data, fmt: str, markdown=None):
    if fmt == "md":
        print((markdown or _markdown_list)(data), end="")
    else:
        print(generate_report(data))


# ---- Subcommands ----

def cmd_bounds(args) -> int:
    emit(bounds_report(args.d, args.r, args.g).to_dict(), args.format)
    return EXIT_OK


def cmd_cohom(args) -> int:
    if args.surface == "hirzebruch":
        h0, h1, h2 = h_hirzebruch(args.e, args.a, args.b)
    else:
        h0, h1, h2 = h_quadric(args.a, args.b)
    emit({"h0": h0, "h1": h1, "h2": h2, "chi": h0 - h1 + h2}, args.format)
    return EXIT_OK


def cmd_classes(args) -> int:
    if args.surface == "scroll":
        if args.g is None:
            raise UnsupportedInput("scroll classes need --g")
        found = scroll_classes(args.d, args.g, args.r)
    elif args.surface == "delpezzo":
        g_lo = args.g_lo if args.g_lo is not None else args.g
        g_hi = args.g_hi if args.g_hi is not None else args.g
        if g_lo is None or g_hi is None:
            raise UnsupportedInput("del Pezzo classes need --g or --g-lo/--g-hi")
        found = del_pezzo_classes(args.d, g_lo, g_hi, args.r)
    else:
        enumerate_ = rational_cone_classes if args.surface == "cone" else elliptic_cone_classes
        found = [s for s in enumerate_(args.d, args.r) if args.g is None or s.genus == args.g]
    emit([s.to_dict() for s in found], args.format)
    return EXIT_OK


def cmd_analyze(args) -> int:
    row = CensusService().analyze(args.d, args.g, args.r)
    if args.debug:
        print_debug(row)
    emit(row, args.format, generate_markdown_analysis)
    return EXIT_OK


def cmd_table(args) -> int:
    g_lo, g_hi = parse_g_range(args.g_range)
    result = CensusService().table(args.d, args.r, g_lo, g_hi, pdf_path=args.pdf)
    if args.debug:
        for g in sorted(result["rows"], key=int):
            print_debug(result["rows"][g])
    emit(result, args.format, generate_markdown_table)
    return EXIT_OK


def cmd_zscheme(args) -> int:
    with open(args.points, "r") as f:
        data = json.load(f)
    points = data["points"] if isinstance(data, dict) else data
    emit(ideal_cohomology(scheme_from_json(points), args.t).to_dict(), args.format)
    return EXIT_OK


def cmd_selftest(args) -> int:
    result = CensusService().selftest(args.fixtures)
    if args.format == "json":
        print(generate_report(result))
    else:
        for group in result["groups"]:
            for case in group["results"]:
                if args.debug or case["status"] != "PASS":
                    print(f"{case['status']:5} {group['group']}:{case['op']} [{case['tag']}] {case['decision_trace']}")
                else:
                    print(f"{case['status']:5} {group['group']}:{case['op']} [{case['tag']}]")
        s = result["summary"]
        print(f"\n{s['cases']} case(s) in {s['groups']} group(s), {s['failed']} failed, "
              f"{s['paper_cases']} published value(s) replayed")
    return EXIT_MISMATCH if result["summary"]["failed"] else EXIT_OK


# ---- Parser ----

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=["json", "md"], default="json", help="Output format")
    common.add_argument("--debug", action="store_true", default=config.DEBUG_MODE,
                        help="Print decision traces")

    parser = argparse.ArgumentParser(description="Hilbert schemes of curves: bounds, classes and components")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("bounds", parents=[common], help="Castelnuovo and Brill-Noether numbers")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--g", type=int)
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("cohom", parents=[common], help="Line bundle cohomology")
    p.add_argument("surface", choices=["hirzebruch", "quadric"])
    p.add_argument("--e", type=int, default=0)
    p.add_argument("--a", type=int, required=True)
    p.add_argument("--b", type=int, required=True)
    p.set_defaults(func=cmd_cohom)

    p = sub.add_parser("classes", parents=[common], help="Divisor classes of given degree and genus")
    p.add_argument("--surface", choices=["scroll", "cone", "elliptic-cone", "delpezzo"], required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--g", type=int)
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--g-lo", type=int)
    p.add_argument("--g-hi", type=int)
    p.set_defaults(func=cmd_classes)

    p = sub.add_parser("analyze", parents=[common], help="Candidate components for one (d, g, r)")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--g", type=int, required=True)
    p.add_argument("--r", type=int, required=True)
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("table", parents=[common], help="Classification table over a genus range")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--g-range", required=True, help="e.g. 10..18")
    p.add_argument("--pdf", help="Also write a PDF report to this path")
    p.set_defaults(func=cmd_table)

    p = sub.add_parser("zscheme", parents=[common], help="Cohomology of ideals of fat points in P^2")
    p.add_argument("action", choices=["h"])
    p.add_argument("--points", required=True, help="JSON file of points and multiplicities")
    p.add_argument("--t", type=int, required=True)
    p.set_defaults(func=cmd_zscheme)

    p = sub.add_parser("selftest", parents=[common], help="Replay the fixture corpus")
    p.add_argument("--fixtures", help=f"Fixture directory (default {config.FIXTURES_DIR})")
    p.set_defaults(func=cmd_selftest, format="text")

    return parser


def run(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_INPUT

    logging.basicConfig(level=logging.DEBUG if args.debug else config.LOG_LEVEL)

    try:
        return args.func(args)
    except CensusError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
