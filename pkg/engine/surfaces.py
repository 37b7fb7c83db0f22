"""Divisor class enumerators and very-ampleness obstruction tests.

Enumerators solve degree and genus equations on the surfaces that carry
curves of high genus: rational normal scrolls, cones over rational and
elliptic normal curves, and del Pezzo surfaces. Every solution is checked
back through the lattice module before it is returned.

The obstruction tests only certify the absence of three specific failures
(fixed components, contracted (-1)-curves, multisecant fibres). A
``VeryAmpleCandidate`` verdict is not a proof of very ampleness.
"""

import logging
from dataclasses import dataclass, field
from math import isqrt

from engine.cohomology import h_hirzebruch
from engine.errors import EmptyLinearSystem, InvalidClass, SeriesError, UnsupportedInput
from engine.lattice import (
    BLOWN_PLANE,
    ELLIPTIC_CONE,
    RATIONAL_CONE,
    SCROLL,
    BlowupClass,
    DivisorClass,
    HirzebruchClass,
    ScrollClass,
    SurfaceModel,
    arithmetic_genus,
    balanced_index,
    blown_plane,
    class_to_json,
    cremona_reduce,
    degree,
    del_pezzo,
    elliptic_cone,
    format_class,
    hirzebruch,
    hirzebruch_to_blowup,
    intersect,
    neg_one_curves,
    rational_cone,
    scroll,
    scroll_to_hirzebruch,
    short_label,
)
from engine.zeroscheme import singular_point_pencils

logger = logging.getLogger(__name__)


# ---------------------------------------------------------------------------
# Result types
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ClassSolution:
    surface: SurfaceModel
    divisor: DivisorClass
    degree: int
    genus: int
    vertex_multiplicity: int | None = None
    smooth_candidate: bool = True
    gonality_hint: int | None = None

    def to_dict(self) -> dict:
        return {
            "surface": self.surface.label,
            "class": class_to_json(self.divisor),
            "label": solution_label(self),
            "degree": self.degree,
            "genus": self.genus,
            "vertex_multiplicity": self.vertex_multiplicity,
            "smooth_candidate": self.smooth_candidate,
            "gonality_hint": self.gonality_hint,
        }


VERY_AMPLE_CANDIDATE = "VeryAmpleCandidate"
FIXED_COMPONENT = "FixedComponent"
CONTRACTED_CURVE = "ContractedCurve"
MULTISECANT_FIBER = "MultisecantFiber"


@dataclass(frozen=True)
class ObstructionVerdict:
    status: str
    witness: DivisorClass | None = None
    detail: str = ""

    def __post_init__(self):
        if self.status != VERY_AMPLE_CANDIDATE and self.witness is None:
            raise InvalidClass(f"{self.status} verdict needs a witness class")

    @property
    def obstructed(self) -> bool:
        return self.status != VERY_AMPLE_CANDIDATE

    def to_dict(self) -> dict:
        return {
            "status": self.status,
            "witness": format_class(self.witness) if self.witness is not None else None,
            "detail": self.detail,
        }


def solution_label(s: ClassSolution) -> str:
    c = s.divisor
    if s.surface.kind == SCROLL:
        return f"scroll:{c.a}H{c.b:+d}L"
    if s.surface.kind == RATIONAL_CONE:
        return f"cone:k={c.a},m={s.vertex_multiplicity}"
    if s.surface.kind == ELLIPTIC_CONE:
        return f"elliptic-cone:k={c.a},m={s.vertex_multiplicity}"
    if s.surface.kind == BLOWN_PLANE:
        return f"delpezzo:{short_label(c)}"
    return format_class(c)


def _sort_key(s: ClassSolution):
    c = s.divisor
    if isinstance(c, BlowupClass):
        return (c.a,) + c.b
    return (c.a, c.b)


# ---------------------------------------------------------------------------
# Enumerators
# ---------------------------------------------------------------------------

def scroll_classes(d: int, g: int, r: int) -> list[ClassSolution]:
    """Classes aH + bL of degree d and genus g on a scroll of degree r-1.

    Irreducible curves meet the directrix of the balanced model
    non-negatively, which bounds a by 2d/(r-1).
    """
    if r < 3:
        raise UnsupportedInput(f"scrolls live in P^r with r >= 3, got {r}")
    S = scroll(r)
    e = balanced_index(r)
    directrix = HirzebruchClass(e, 1, 0)

    solutions = []
    for a in range(1, 2 * d // (r - 1) + 1):
        c = ScrollClass(r, a, d - (r - 1) * a)
        if intersect(scroll_to_hirzebruch(c, e), directrix) < 0:
            continue
        if arithmetic_genus(S, c) != g:
            continue
        assert degree(S, c) == d
        solutions.append(ClassSolution(surface=S, divisor=c, degree=d, genus=g, gonality_hint=a))
    return sorted(solutions, key=_sort_key)


def rational_cone_classes(d: int, r: int) -> list[ClassSolution]:
    """Strict transforms kh + df on F_(r-1) of curves of degree d on a rational cone.

    m = d - (r-1)k is the multiplicity at the vertex; only m <= 1 can give a
    smooth curve.
    """
    if r < 3:
        raise UnsupportedInput(f"cones live in P^r with r >= 3, got {r}")
    S = rational_cone(r)
    solutions = []
    k = 1
    while (r - 1) * k <= d:
        c = HirzebruchClass(r - 1, k, d)
        m = intersect(c, HirzebruchClass(r - 1, 1, 0))
        solutions.append(ClassSolution(
            surface=S,
            divisor=c,
            degree=degree(S, c),
            genus=arithmetic_genus(S, c),
            vertex_multiplicity=m,
            smooth_candidate=m <= 1,
            gonality_hint=k,
        ))
        k += 1
    return sorted(solutions, key=_sort_key)


def elliptic_cone_classes(d: int, r: int) -> list[ClassSolution]:
    """Curves kh + df of degree d on the desingularized cone over an elliptic normal curve.

    For k = 1 only the hyperplane section itself (m = 0) is reported.
    """
    if r < 3:
        raise UnsupportedInput(f"cones live in P^r with r >= 3, got {r}")
    S = elliptic_cone(r)
    solutions = []
    k = 1
    while r * k <= d:
        m = d - r * k
        c = HirzebruchClass(r, k, d)
        if k == 1 and m != 0:
            logger.debug("elliptic cone k=1, m=%d skipped: not a hyperplane section", m)
            k += 1
            continue
        try:
            genus = arithmetic_genus(S, c)
        except InvalidClass:
            logger.debug("elliptic cone k=%d, m=%d skipped: non-integral genus", k, m)
            k += 1
            continue
        solutions.append(ClassSolution(
            surface=S,
            divisor=c,
            degree=degree(S, c),
            genus=genus,
            vertex_multiplicity=m,
            smooth_candidate=m <= 1,
            gonality_hint=2 * k,
        ))
        k += 1
    return sorted(solutions, key=_sort_key)


def _partitions(count: int, total: int, squares: int, cap: int):
    """Non-increasing tuples of `count` integers in [0, cap] with given sum and sum of squares."""
    if count == 0:
        if total == 0 and squares == 0:
            yield ()
        return
    top = min(cap, total, isqrt(squares))
    for v in range(top, -1, -1):
        rest_total, rest_squares = total - v, squares - v * v
        if rest_total > (count - 1) * v or rest_squares > (count - 1) * v * v:
            # every remaining entry is at most v
            break
        if rest_total * rest_total > (count - 1) * rest_squares:
            continue
        for tail in _partitions(count - 1, rest_total, rest_squares, v):
            yield (v,) + tail


def _cauchy_schwarz_window(d: int, g: int, r: int) -> range:
    """a-range allowed by (sum b)^2 <= s * sum b^2 with s = 9 - r points."""
    s = 9 - r
    disc = s * (d * d - r * (2 * g - 2 + d))
    if disc < 0:
        return range(0)
    q = isqrt(disc)
    lo = max(1, -((q - 3 * d) // r), -(-d // 3))
    hi = (3 * d + q) // r
    return range(lo, hi + 1)


def _is_nef(c: BlowupClass) -> bool:
    return all(intersect(c, E) >= 0 for E in neg_one_curves(c.s))


def del_pezzo_classes(d: int, g_lo: int, g_hi: int, r: int, prune: bool = True) -> list[ClassSolution]:
    """Nef classes (a; b_1 >= ... >= b_s >= 0) of degree d on the del Pezzo surface of degree r.

    With ``prune`` the line coefficient is confined to the Cauchy-Schwarz
    window for each genus; without it every a in [1, 2d] is scanned.
    """
    if not 4 <= r <= 8:
        raise UnsupportedInput(f"del Pezzo enumeration needs 4 <= r <= 8, got {r}")
    S = del_pezzo(r)
    s = 9 - r

    solutions = []
    for g in range(max(g_lo, 0), g_hi + 1):
        window = _cauchy_schwarz_window(d, g, r) if prune else range(1, 2 * d + 1)
        for a in window:
            total = 3 * a - d
            squares = a * a - (2 * g - 2 + d)
            if total < 0 or squares < 0:
                continue
            for b in _partitions(s, total, squares, a):
                c = BlowupClass(a, b)
                if not _is_nef(c):
                    logger.debug("del Pezzo class %s dropped: not nef", short_label(c))
                    continue
                assert degree(S, c) == d and arithmetic_genus(S, c) == g
                solutions.append(ClassSolution(
                    surface=S,
                    divisor=c,
                    degree=d,
                    genus=g,
                    gonality_hint=plane_model_gonality(cremona_reduce(c)),
                ))
    return sorted(solutions, key=lambda x: (x.genus,) + _sort_key(x))


def plane_model_gonality(c: BlowupClass) -> int:
    """Smallest pencil cut by lines or conics through the singular points of the plane model."""
    mults = [x for x in c.b if x > 0]
    pencils = singular_point_pencils(c.a, mults) if mults else []
    return min(pencils) if pencils else c.a - 1


def cremona_orbits(solutions: list[ClassSolution]) -> dict[str, list[ClassSolution]]:
    """Group del Pezzo solutions by their Cremona-reduced representative."""
    orbits: dict[str, list[ClassSolution]] = {}
    for s in solutions:
        key = short_label(cremona_reduce(s.divisor))
        orbits.setdefault(key, []).append(s)
    return dict(sorted(orbits.items()))


# ---------------------------------------------------------------------------
# Obstructions
# ---------------------------------------------------------------------------

def fixed_part(e: int, c: HirzebruchClass) -> tuple[HirzebruchClass, HirzebruchClass]:
    """Split |c| on F_e into fixed divisor and base-component-free remainder.

    The moving part can still have isolated base points.
    """
    if c.e != e:
        raise InvalidClass(f"{format_class(c)} does not live on F_{e}")

    def h0(x: HirzebruchClass) -> int:
        return h_hirzebruch(e, x.a, x.b)[0]

    if h0(c) == 0:
        raise EmptyLinearSystem(f"|{format_class(c)}| is empty")

    h = HirzebruchClass(e, 1, 0)
    f = HirzebruchClass(e, 0, 1)
    fixed = HirzebruchClass(e, 0, 0)
    moving = c
    changed = True
    while changed:
        changed = False
        for step in (h, f):
            while h0(moving - step) == h0(moving):
                moving = moving - step
                fixed = fixed + step
                changed = True
    return fixed, moving


def contraction_obstruction(s: int, C: BlowupClass, M: BlowupClass) -> ObstructionVerdict:
    """Look for a (-1)-curve that |M| contracts while C meets it twice, or that |M| contains."""
    curves = neg_one_curves(s)
    for E in curves:
        if intersect(M, E) == 0 and intersect(C, E) >= 2:
            return ObstructionVerdict(
                status=CONTRACTED_CURVE,
                witness=E,
                detail=f"{short_label(E)}.M = 0 and {short_label(E)}.C = {intersect(C, E)}: "
                       f"the curve is contracted to a singular point of the image",
            )
    for E in curves:
        if intersect(M, E) < 0:
            return ObstructionVerdict(
                status=FIXED_COMPONENT,
                witness=E,
                detail=f"{short_label(E)}.M = {intersect(M, E)} < 0: E is a fixed component of |M|",
            )
    return ObstructionVerdict(status=VERY_AMPLE_CANDIDATE, detail="no (-1)-curve obstruction")


def multisecant_fiber_check(e: int, C: HirzebruchClass, M: HirzebruchClass) -> ObstructionVerdict:
    """Fibres mapped to lines by |M| that meet the curve in 3 or more points.

    Meant for the adjoint system K + C - H of a dual model, whose image
    curve would then carry a multisecant line.
    """
    f = HirzebruchClass(e, 0, 1)
    m_f, c_f = intersect(M, f), intersect(C, f)
    if m_f == 1 and c_f >= 3:
        return ObstructionVerdict(
            status=MULTISECANT_FIBER,
            witness=f,
            detail=f"f.M = 1, f.C = {c_f}: every fibre maps to a {c_f}-secant line",
        )
    return ObstructionVerdict(status=VERY_AMPLE_CANDIDATE, detail=f"f.M = {m_f}, f.C = {c_f}")


# ---------------------------------------------------------------------------
# Dual models
# ---------------------------------------------------------------------------

CANDIDATE = "candidate"
OBSTRUCTED = "obstructed"
EXCLUDED = "excluded"


@dataclass(frozen=True)
class DualCheck:
    """One surface that could carry the image of the residual series."""

    surface: str
    divisor: str
    arithmetic_genus: int
    nodes: int
    outcome: str
    adjoint: str | None = None
    verdict: ObstructionVerdict | None = None
    detail: str = ""
    ambient_class: str | None = None
    severi: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "surface": self.surface,
            "class": self.divisor,
            "arithmetic_genus": self.arithmetic_genus,
            "nodes": self.nodes,
            "outcome": self.outcome,
            "adjoint": self.adjoint,
            "verdict": self.verdict.to_dict() if self.verdict else None,
            "detail": self.detail,
            "severi": self.severi,
        }


def _trigonal(label: str, p_a: int, nodes: int, genus_text: str) -> DualCheck:
    return DualCheck(
        surface=label,
        divisor=genus_text,
        arithmetic_genus=p_a,
        nodes=nodes,
        outcome=EXCLUDED,
        detail="trigonal via the ruling; then O_X(1) would be compounded with the g^1_3",
    )


def _scroll_checks(g: int, d: int, r: int, top: int) -> list[DualCheck]:
    checks = []
    e = balanced_index(r)
    if e != 1:
        return checks
    H = hirzebruch_to_blowup(scroll_to_hirzebruch(ScrollClass(r, 1, 0), e))
    for p_a in range(g, top + 1):
        for sol in scroll_classes(d, p_a, r):
            c = sol.divisor
            nodes = p_a - g
            text = f"{c.a}H{c.b:+d}L"
            if c.a <= 3:
                checks.append(_trigonal(f"scroll({r})", p_a, nodes, text))
                continue
            on_f1 = scroll_to_hirzebruch(c, e)
            if nodes == 0:
                adjoint = on_f1 + hirzebruch(e).canonical - scroll_to_hirzebruch(ScrollClass(r, 1, 0), e)
                fixed, _ = fixed_part(e, adjoint)
                if not fixed.is_zero():
                    verdict = ObstructionVerdict(
                        status=FIXED_COMPONENT,
                        witness=fixed,
                        detail=f"|{format_class(adjoint)}| has the fixed part {format_class(fixed)}",
                    )
                    checks.append(DualCheck(
                        surface=f"scroll({r})", divisor=text, arithmetic_genus=p_a, nodes=0,
                        outcome=OBSTRUCTED, adjoint=format_class(adjoint), verdict=verdict,
                        detail=verdict.detail,
                    ))
                    continue
            s = 1 + nodes
            if s > 5:
                checks.append(DualCheck(
                    surface=f"scroll({r})", divisor=text, arithmetic_genus=p_a, nodes=nodes,
                    outcome=EXCLUDED, detail=f"{nodes} nodes: beyond the tabulated (-1)-curves",
                ))
                continue
            strict = hirzebruch_to_blowup(on_f1).blow_up(*([2] * nodes))
            M = blown_plane(s).canonical + strict - H.blow_up(*([0] * nodes))
            verdict = contraction_obstruction(s, strict, M)
            checks.append(DualCheck(
                surface=f"scroll({r})",
                divisor=text,
                arithmetic_genus=p_a,
                nodes=nodes,
                outcome=OBSTRUCTED if verdict.obstructed else CANDIDATE,
                adjoint=short_label(M),
                verdict=verdict,
                detail=f"strict transform {short_label(strict)}; {verdict.detail}",
                ambient_class=format_class(on_f1),
            ))
    return checks


def _rational_cone_checks(g: int, d: int, r: int, top: int) -> list[DualCheck]:
    checks = []
    S = rational_cone(r)
    for sol in rational_cone_classes(d, r):
        if not g <= sol.genus <= top:
            continue
        c = sol.divisor
        nodes = sol.genus - g
        text = f"{c.a}h{c.b:+d}f"
        if c.a <= 3:
            checks.append(_trigonal(f"cone({r})", sol.genus, nodes, text))
            continue
        M = S.canonical + c - S.embedding
        verdict = multisecant_fiber_check(r - 1, c, M)
        checks.append(DualCheck(
            surface=f"cone({r})", divisor=text, arithmetic_genus=sol.genus, nodes=nodes,
            outcome=OBSTRUCTED if verdict.obstructed else CANDIDATE,
            adjoint=format_class(M), verdict=verdict, detail=verdict.detail,
        ))
    return checks


def _del_pezzo_checks(g: int, d: int, r: int, top: int) -> list[DualCheck]:
    checks = []
    S = del_pezzo(r)
    for sol in del_pezzo_classes(d, g, top, r):
        c = sol.divisor
        nodes = sol.genus - g
        if nodes:
            checks.append(DualCheck(
                surface=f"delpezzo({r})", divisor=short_label(c), arithmetic_genus=sol.genus,
                nodes=nodes, outcome=EXCLUDED, detail="nodal del Pezzo models are not tabulated",
            ))
            continue
        M = c + S.canonical * 2
        verdict = contraction_obstruction(S.canonical.s, c, M)
        checks.append(DualCheck(
            surface=f"delpezzo({r})", divisor=short_label(c), arithmetic_genus=sol.genus, nodes=0,
            outcome=OBSTRUCTED if verdict.obstructed else CANDIDATE,
            adjoint=short_label(M), verdict=verdict, detail=verdict.detail,
        ))
    return checks


def _elliptic_cone_checks(g: int, d: int, r: int, top: int, d_full: int, r_full: int) -> list[DualCheck]:
    checks = []
    S = elliptic_cone(r)
    for sol in elliptic_cone_classes(d, r):
        if not sol.smooth_candidate or not g <= sol.genus <= top:
            continue
        c = sol.divisor
        M = S.canonical + c - S.embedding
        lifts = [x for x in elliptic_cone_classes(d_full, r_full) if x.genus == g]
        genera = sorted({x.genus for x in elliptic_cone_classes(d_full, r_full)})
        if lifts:
            outcome, detail = CANDIDATE, f"lifts to {[solution_label(x) for x in lifts]}"
        else:
            outcome = EXCLUDED
            detail = (f"|{format_class(M)}| forces an elliptic cone in P^{r_full}, "
                      f"whose degree {d_full} classes have genus {genera}, never {g}")
        checks.append(DualCheck(
            surface=f"elliptic-cone({r})", divisor=f"{c.a}h{c.b:+d}f", arithmetic_genus=sol.genus,
            nodes=sol.genus - g, outcome=outcome, adjoint=format_class(M), detail=detail,
        ))
    return checks


def dual_model_checks(d: int, g: int, r: int) -> list[DualCheck]:
    """Surfaces of degree <= r-1 in P^(r-1) that could carry the image of |K - H|.

    Applies when the residual of the hyperplane series is a g^(r-1) and the
    genus reaches the second Castelnuovo bound for it, so the image lies on a
    scroll, a rational cone, a del Pezzo surface or an elliptic cone.
    Singular del Pezzo surfaces are not covered.
    """
    from engine.bounds import LinearSeries, pi, pi_1, residual_series

    try:
        residual = residual_series(LinearSeries(d=d, r=r, g=g))
    except SeriesError:
        return []
    r2, d2 = residual.r, residual.d
    if r2 != r - 1 or r2 not in (4, 5) or d2 < r2:
        return []
    try:
        bound = pi_1(d2, r2).value
    except UnsupportedInput as exc:
        logger.info("dual models of g^%d_%d skipped: %s", r2, d2, exc)
        return []
    if g < bound:
        return []
    top = pi(d2, r2)

    checks = []
    checks += _scroll_checks(g, d2, r2, top)
    checks += _rational_cone_checks(g, d2, r2, top)
    checks += _del_pezzo_checks(g, d2, r2, top)
    checks += _elliptic_cone_checks(g, d2, r2, top, d, r)
    return checks
