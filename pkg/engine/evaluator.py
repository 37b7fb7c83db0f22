"""Replay of golden fixture cases.

A case is {"op": name, "args": {...}, "expect": value, "tag": "PAPER|DERIVED|TRIVIAL"}.
Each op maps JSON arguments onto an engine call and returns a JSON-comparable
value. Expected dicts are matched as subsets, so a case can pin only the
fields it cares about.
"""

import logging
import re

from engine import bounds, cohomology, hilbert, surfaces, zeroscheme
from engine.errors import CensusError, FixtureError
from engine.lattice import (
    BlowupClass,
    arithmetic_genus,
    blown_plane,
    del_pezzo,
    degree,
    elliptic_cone,
    format_class,
    hirzebruch,
    intersect,
    neg_one_curves,
    parse_class,
    quadric,
    rational_cone,
    scroll,
    scroll_to_hirzebruch,
    short_label,
)

logger = logging.getLogger(__name__)

_SURFACE_RE = re.compile(r"^(F|BP|delpezzo|scroll|cone|elliptic-cone)\[(\d+)\]$")


def surface_from_text(text: str):
    """Surface names used in fixtures: F[e], Q, BP[s], delpezzo[r], scroll[r], cone[r], elliptic-cone[r]."""
    if text == "Q":
        return quadric()
    m = _SURFACE_RE.match(text)
    if not m:
        raise FixtureError(f"unknown surface {text!r}")
    kind, n = m[1], int(m[2])
    factory = {
        "F": hirzebruch,
        "BP": blown_plane,
        "delpezzo": del_pezzo,
        "scroll": scroll,
        "cone": rational_cone,
        "elliptic-cone": elliptic_cone,
    }[kind]
    return factory(n)


def _label(c) -> str:
    return short_label(c) if isinstance(c, BlowupClass) else format_class(c)


def _cone_triples(solutions) -> list[list[int]]:
    return [[s.divisor.a, s.vertex_multiplicity, s.genus] for s in solutions]


def _analyze_summary(args: dict) -> dict:
    row = hilbert.analyze(args["d"], args["g"], args["r"], workers=1)
    return {
        "verdict": row.verdict_text,
        "verdict_source": row.verdict_source,
        "engine_verdict": row.engine_verdict,
        "engine_count": row.engine_count,
        "chi": row.bounds["chi"],
        "family_dims": sorted(c.family_dim for c in row.components),
        "components": {c.label: _component_summary(c) for c in row.components},
        "absorbed": sorted(a["label"] for a in row.absorbed),
        "dual_checks": {f"{x['surface']}:{x['class']}": x["outcome"] for x in row.dual_checks},
    }


def _component_summary(c) -> dict:
    return {
        "family_dim": c.family_dim,
        "gonality": c.gonality,
        "acm": c.acm,
        "linearly_normal": c.linearly_normal,
        "h1_ox2": c.h1_ox2,
        "beta": c.beta,
        "moduli_image_dim": c.moduli_image_dim,
        "moduli_codim": c.moduli_codim,
        "small_codim_excess": c.small_codim_excess,
        "strata": {str(s["e"]): s for s in c.strata},
    }


def _verdict(v) -> dict:
    return {"status": v.status, "witness": _label(v.witness) if v.witness is not None else None}


def _pi_1(args: dict) -> dict:
    result = bounds.pi_1(args["d"], args["r"])
    return {"value": result.value, "attained_by": result.attained_by}


# ---- Dispatch table ----

OPS = {
    # lattice
    "intersect": lambda a: intersect(parse_class(a["c1"]), parse_class(a["c2"])),
    "arithmetic_genus": lambda a: arithmetic_genus(surface_from_text(a["surface"]), parse_class(a["class"])),
    "degree": lambda a: degree(surface_from_text(a["surface"]), parse_class(a["class"])),
    "scroll_to_hirzebruch": lambda a: format_class(scroll_to_hirzebruch(parse_class(a["class"]), a["e"])),
    "neg_one_curves": lambda a: [short_label(c) for c in neg_one_curves(a["s"])],
    # cohomology
    "h_hirzebruch": lambda a: list(cohomology.h_hirzebruch(a["e"], a["a"], a["b"])),
    "h_quadric": lambda a: list(cohomology.h_quadric(a["a"], a["b"])),
    "dim_linear_system_scroll": lambda a: cohomology.dim_linear_system_scroll(a["r"], a["a"], a["b"]),
    "expected_dim_blowup": lambda a: cohomology.expected_dim_blowup(parse_class(a["class"])).value,
    "h0_restricted": lambda a: cohomology.h0_restricted(
        surface_from_text(a["surface"]), parse_class(a["M"]), parse_class(a["C"])),
    "scrollar_invariant": lambda a: list(cohomology.scrollar_invariant(a["e"], parse_class(a["class"]))),
    "maroni_invariant": lambda a: cohomology.maroni_invariant(a["e"], parse_class(a["class"])),
    # bounds
    "pi": lambda a: bounds.pi(a["d"], a["r"]),
    "pi_1": _pi_1,
    "rho": lambda a: bounds.rho(a["d"], a["g"], a["r"]),
    "lambda": lambda a: bounds.lambda_(a["d"], a["g"], a["r"]),
    "chi_expected": lambda a: bounds.chi_expected(a["d"], a["g"], a["r"]),
    "castelnuovo_severi": lambda a: bounds.castelnuovo_severi(a["n1"], a["g1"], a["n2"], a["g2"]),
    "max_birational_dim": lambda a: bounds.max_birational_dim(a["d"], a["g"]),
    "residual_series": lambda a: str(bounds.residual_series(bounds.LinearSeries(a["d"], a["r"], a["g"]))),
    "gonality_bn": lambda a: bounds.gonality_bn(a["g"]),
    # surfaces
    "scroll_classes": lambda a: [[s.divisor.a, s.divisor.b] for s in surfaces.scroll_classes(a["d"], a["g"], a["r"])],
    "rational_cone_classes": lambda a: _cone_triples(surfaces.rational_cone_classes(a["d"], a["r"])),
    "elliptic_cone_classes": lambda a: _cone_triples(surfaces.elliptic_cone_classes(a["d"], a["r"])),
    "del_pezzo_classes": lambda a: [short_label(s.divisor) for s in surfaces.del_pezzo_classes(
        a["d"], a["g_lo"], a["g_hi"], a["r"], prune=a.get("prune", True))],
    "fixed_part": lambda a: [format_class(x) for x in surfaces.fixed_part(a["e"], parse_class(a["class"]))],
    "contraction_obstruction": lambda a: _verdict(surfaces.contraction_obstruction(
        a["s"], parse_class(a["C"]), parse_class(a["M"]))),
    "multisecant_fiber_check": lambda a: _verdict(surfaces.multisecant_fiber_check(
        a["e"], parse_class(a["C"]), parse_class(a["M"]))),
    "dual_model_checks": lambda a: {f"{x.surface}:{x.divisor}": x.outcome
                                    for x in surfaces.dual_model_checks(a["d"], a["g"], a["r"])},
    # hilbert
    "family_dim_scroll": lambda a: hilbert.family_dim_scroll(a["r"], a["a"], a["b"]),
    "family_dim_delpezzo": lambda a: hilbert.family_dim_delpezzo(a["r"], parse_class(a["class"])),
    "elliptic_cone_family_dim": lambda a: hilbert.elliptic_cone_family_dim(a["d"], a["r"], a["k"]),
    "severi_family_dim": lambda a: hilbert.severi_family_dim(
        surface_from_text(a["surface"]), parse_class(a["class"]), a["delta"]),
    "analyze": _analyze_summary,
    # zero schemes
    "h_ideal": lambda a: list(zeroscheme.h_ideal(zeroscheme.scheme_from_json(a["points"]), a["t"])),
    "residual_line": lambda a: zeroscheme.residual_line(
        zeroscheme.scheme_from_json(a["points"]), tuple(a["line"])).to_json(),
    "plane_model_genus": lambda a: zeroscheme.plane_model_genus(a["d"], a["mults"]),
    "singular_point_pencils": lambda a: zeroscheme.singular_point_pencils(a["d"], a["mults"]),
    "collinearity_h1_criterion": lambda a: zeroscheme.collinearity_h1_criterion(
        zeroscheme.scheme_from_json(a["points"])),
}


def _matches(expected, actual) -> bool:
    if isinstance(expected, dict):
        return isinstance(actual, dict) and all(
            k in actual and _matches(v, actual[k]) for k, v in expected.items()
        )
    if isinstance(expected, list):
        return isinstance(actual, list) and len(expected) == len(actual) and all(
            _matches(x, y) for x, y in zip(expected, actual)
        )
    return expected == actual


def evaluate_case(case: dict) -> dict:
    """Run one fixture case and return its status with a decision trace.

    Expected values of the form {"error": "ClassName"} assert that the op is
    rejected with that exception.
    """
    op = case["op"]
    expected = case["expect"]
    handler = OPS.get(op)
    if handler is None:
        return {"status": "ERROR", "op": op, "tag": case.get("tag"),
                "decision_trace": f"unknown op {op!r}"}

    wants_error = isinstance(expected, dict) and set(expected) == {"error"}
    try:
        actual = handler(case["args"])
    except CensusError as exc:
        if wants_error and type(exc).__name__ == expected["error"]:
            return {"status": "PASS", "op": op, "tag": case.get("tag"),
                    "decision_trace": f"rejected as expected: {exc}"}
        logger.debug("case %s raised %r", op, exc)
        return {"status": "FAIL", "op": op, "tag": case.get("tag"),
                "decision_trace": f"{type(exc).__name__}: {exc}"}

    if wants_error:
        status, trace = "FAIL", f"expected {expected['error']}, got {actual!r}"
    elif _matches(expected, actual):
        status, trace = "PASS", "matches"
    else:
        status, trace = "FAIL", f"expected {expected!r}, got {actual!r}"
    return {"status": status, "op": op, "tag": case.get("tag"), "decision_trace": trace}


def evaluate_group(name: str, group: dict) -> dict:
    results = [evaluate_case(case) for case in group["cases"]]
    failures = [r for r in results if r["status"] != "PASS"]
    return {
        "group": name,
        "anchor": group.get("anchor", ""),
        "total": len(results),
        "failed": len(failures),
        "results": results,
    }
