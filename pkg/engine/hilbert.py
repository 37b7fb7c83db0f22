"""Candidate components of the Hilbert scheme of smooth curves of degree d, genus g in P^r.

``analyze`` runs three routes:

1. surface route: curves on scrolls, cones and del Pezzo surfaces, with
   family dimensions compared against the expected dimension;
2. dual models: the image of the residual series |K - H| when it is a
   g^(r-1), with the obstruction tests of the surfaces module;
3. abstract-series route (d >= g): the linearly normal component and the
   projections of curves from P^r' for r < r' <= max birational dimension.

Irreducibility is not decided here. Rows carry the engine's component count
next to the published verdict from ``engine/verdicts.json``.
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from math import comb

from engine import config
from engine.bounds import (
    LinearSeries,
    bounds_report,
    gonality_bn,
    grassmannian_dim,
    hurwitz_dim,
    lambda_,
    max_birational_dim,
    moduli_codim,
    pi,
    residual_series,
    rho,
    small_codim_excess,
)
from engine.cohomology import (
    dim_linear_system_scroll,
    expected_dim_blowup,
    h0_restricted,
    h1_twist_sequence,
    line_bundle_cohomology,
    maroni_invariant,
    scrollar_invariant,
)
from engine.errors import (
    EmptyLinearSystem,
    LatticeMismatch,
    PreconditionFailed,
    SeriesError,
    UnsupportedInput,
)
from engine.lattice import (
    BlowupClass,
    HirzebruchClass,
    ScrollClass,
    SurfaceModel,
    balanced_index,
    cremona_reduce,
    format_class,
    hirzebruch,
    intersect,
    parse_class,
    scroll_to_hirzebruch,
    short_label,
)
from engine.surfaces import (
    CANDIDATE,
    ClassSolution,
    cremona_orbits,
    del_pezzo_classes,
    dual_model_checks,
    elliptic_cone_classes,
    plane_model_gonality,
    rational_cone_classes,
    scroll_classes,
    solution_label,
)
from engine.zeroscheme import singular_point_pencils

logger = logging.getLogger(__name__)


def aut_projective(r: int) -> int:
    return r * r + 2 * r


# ---------------------------------------------------------------------------
# Report types
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class OrbitOnly:
    """Fibres of the moduli map are single Aut(P^r)-orbits."""

    def to_dict(self) -> dict:
        return {"kind": "OrbitOnly"}


@dataclass(frozen=True)
class OrbitTimesGrassmannian:
    """Fibres are Aut(P^r)-orbits times a Grassmannian G(k, n) of projection centres."""

    k: int
    n: int

    def to_dict(self) -> dict:
        return {"kind": "OrbitTimesGrassmannian", "k": self.k, "n": self.n}


@dataclass
class ComponentReport:
    label: str
    surface_kind: str
    divisor: str | None
    family_dim: int
    expected_dim: int
    r: int
    g: int
    gonality: int | None = None
    gonality_source: str | None = None
    linearly_normal: bool = True
    acm: bool | None = None
    acm_source: str | None = None
    h1_ox2: int | None = None
    beta: int | None = None
    fiber: OrbitOnly | OrbitTimesGrassmannian = field(default_factory=OrbitOnly)
    moduli_image_dim: int | None = None
    moduli_codim: int | None = None
    small_codim_excess: bool = False
    strata: list[dict] = field(default_factory=list)
    orbit: list[str] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        data = asdict(self)
        data["fiber"] = self.fiber.to_dict()
        return data


@dataclass
class ClassificationRow:
    d: int
    g: int
    r: int
    verdict: str
    count: int | None
    verdict_source: str
    engine_verdict: str
    engine_count: int
    bounds: dict
    components: list[ComponentReport] = field(default_factory=list)
    absorbed: list[dict] = field(default_factory=list)
    dual_checks: list[dict] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)
    anchor: str | None = None

    @property
    def verdict_text(self) -> str:
        if self.verdict == "Reducible" and self.count is not None:
            return f"Reducible({self.count})"
        return self.verdict

    def to_dict(self) -> dict:
        return {
            "d": self.d,
            "g": self.g,
            "r": self.r,
            "verdict": self.verdict_text,
            "count": self.count,
            "verdict_source": self.verdict_source,
            "engine_verdict": self.engine_verdict,
            "engine_count": self.engine_count,
            "bounds": self.bounds,
            "components": [c.to_dict() for c in self.components],
            "absorbed": self.absorbed,
            "dual_checks": self.dual_checks,
            "notes": self.notes,
            "anchor": self.anchor,
        }


@dataclass
class ClassificationTable:
    d: int
    r: int
    rows: dict[int, ClassificationRow] = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "schema": 1,
            "d": self.d,
            "r": self.r,
            "rows": {str(g): row.to_dict() for g, row in sorted(self.rows.items())},
        }


# ---------------------------------------------------------------------------
# Dimension counts
# ---------------------------------------------------------------------------

def family_dim_scroll(r: int, a: int, b: int) -> int:
    """dim|aH + bL| plus the dimension (r+3)(r-1) - 3 of the family of scrolls."""
    dim = dim_linear_system_scroll(r, a, b)
    if dim < 0:
        raise EmptyLinearSystem(f"|{a}H{b:+d}L| is empty on scrolls in P^{r}")
    return dim + (r + 3) * (r - 1) - 3


def family_dim_delpezzo(r: int, C: BlowupClass) -> int:
    """dim Aut(P^5) + dim|C| on quintic del Pezzo surfaces; no automorphism fixes 4 general points."""
    if r != 5:
        raise UnsupportedInput(f"del Pezzo family dimension is supported for r = 5, got {r}")
    if C.s != 9 - r:
        raise LatticeMismatch(f"{short_label(C)} is not on the plane blown up at {9 - r} points")
    return aut_projective(r) + expected_dim_blowup(C).value


def elliptic_cone_family_dim(d: int, r: int, k: int) -> int:
    """Curves cut on elliptic cones in P^r by degree k hypersurfaces (vertex not on the curve)."""
    if d != r * k:
        raise UnsupportedInput(f"only complete intersections with the cone are counted: d={d} != {r}*{k}")
    cones = r + r * r
    forms = comb(r + k, r)
    # h0 of the cone's ideal in degree k: sum of h0(I_E(j)) for the elliptic normal curve E
    ideal = sum(comb(r - 1 + j, r - 1) - r * j for j in range(1, k + 1))
    return cones + forms - ideal - 1


def linear_system_dim(S: SurfaceModel, M) -> int:
    if isinstance(M, BlowupClass):
        return expected_dim_blowup(M).value
    if isinstance(M, ScrollClass):
        return dim_linear_system_scroll(M.r, M.a, M.b)
    return line_bundle_cohomology(S, M)[0] - 1


def severi_family_dim(ambient: SurfaceModel, M, delta: int) -> dict:
    """Dimension of delta-nodal curves in |M| and of the family modulo Aut of the ambient surface."""
    if delta < 0:
        raise UnsupportedInput(f"number of nodes must be >= 0, got {delta}")
    dim = linear_system_dim(ambient, M)
    if delta > dim:
        raise EmptyLinearSystem(f"{delta} nodes exceed dim|M| = {dim}")
    sigma = dim - delta
    return {"linear_system": dim, "sigma_dim": sigma, "family_dim": sigma - ambient.aut_dim}


def moduli_image_dim(c: ComponentReport) -> int:
    """Dimension of the Aut(P^r)-quotient of the component.

    For OrbitOnly fibres this is the image in M_g; for Grassmannian fibres it
    is the base of the bundle, and curve_moduli_dim removes the Grassmannian.
    """
    return c.family_dim - aut_projective(c.r)


def curve_moduli_dim(c: ComponentReport) -> int:
    image = moduli_image_dim(c)
    if isinstance(c.fiber, OrbitTimesGrassmannian):
        return image - grassmannian_dim(c.fiber.k, c.fiber.n)
    return image


def _attach_moduli(c: ComponentReport) -> ComponentReport:
    c.moduli_image_dim = moduli_image_dim(c)
    image = curve_moduli_dim(c)
    c.moduli_codim = moduli_codim(c.g, image)
    c.small_codim_excess = small_codim_excess(c.family_dim, c.expected_dim, c.g, image)
    return c


# ---------------------------------------------------------------------------
# Surface route
# ---------------------------------------------------------------------------

def _h1_ox2(S: SurfaceModel, H, X, d: int, g: int) -> int | None:
    """h1(O_X(2)) = h0(O_X(2)) - (2d + 1 - g)."""
    try:
        return h0_restricted(S, H * 2, X) - (2 * d + 1 - g)
    except PreconditionFailed:
        return None


def _scroll_strata(sol: ClassSolution, d: int, g: int, r: int, recorded: dict) -> list[dict]:
    strata = []
    c = sol.divisor
    for e in range(balanced_index(r), r - 1, 2):
        S = hirzebruch(e)
        X = scroll_to_hirzebruch(c, e)
        H = scroll_to_hirzebruch(ScrollClass(r, 1, 0), e)
        dim = line_bundle_cohomology(S, X)[0] - 1
        entry = {
            "e": e,
            "class": format_class(X),
            "family_dim": dim + aut_projective(r) - S.aut_dim,
            "moduli_image_dim": dim - S.aut_dim,
            "moduli_source": "engine",
            "h1_ox2": _h1_ox2(S, H, X, d, g),
        }
        fibre_degree = intersect(X, HirzebruchClass(e, 0, 1))
        if fibre_degree == 3:
            entry["maroni"] = maroni_invariant(e, X)
        elif fibre_degree >= 2:
            t, h0 = scrollar_invariant(e, X)
            entry["scrollar"] = {"scrollar": t, "h0": h0}
        published = recorded.get(str(e), {}).get("moduli_image_dim")
        if published is not None and published != entry["moduli_image_dim"]:
            entry["moduli_engine"] = entry["moduli_image_dim"]
            entry["moduli_image_dim"] = published
            entry["moduli_source"] = "paper"
        strata.append(entry)
    return strata


def _scroll_component(sol: ClassSolution, d: int, g: int, r: int, chi: int, meta: dict) -> ComponentReport:
    c = sol.divisor
    label = solution_label(sol)
    e = balanced_index(r)
    S = hirzebruch(e)
    X = scroll_to_hirzebruch(c, e)
    H = scroll_to_hirzebruch(ScrollClass(r, 1, 0), e)
    twists = h1_twist_sequence(S, H, X, range(0, d + 1))
    report = ComponentReport(
        label=label,
        surface_kind="Scroll",
        divisor=format_class(c),
        family_dim=family_dim_scroll(r, c.a, c.b),
        expected_dim=chi,
        r=r,
        g=g,
        gonality=c.a,
        gonality_source="ruling pencil of the scroll",
        acm=not any(twists),
        acm_source="engine: h1(S, tH - X) on the balanced model, S assumed ACM",
        h1_ox2=_h1_ox2(S, H, X, d, g),
        strata=_scroll_strata(sol, d, g, r, meta.get("strata", {})),
    )
    if any(twists):
        first = next(t for t, v in enumerate(twists) if v)
        report.notes.append(f"h1(S, {first}H - X) = {twists[first]}")
    return report


def _delpezzo_components(solutions: list[ClassSolution], d: int, g: int, r: int, chi: int,
                         meta: dict, absorbed: list[dict]) -> list[ComponentReport]:
    components = []
    for key, members in cremona_orbits(solutions).items():
        rep = cremona_reduce(members[0].divisor)
        label = f"delpezzo:{key}"
        try:
            fam = family_dim_delpezzo(r, rep)
        except UnsupportedInput as exc:
            absorbed.append({"label": label, "reason": str(exc)})
            continue
        if fam < chi:
            absorbed.append({"label": label, "family_dim": fam, "reason": f"family dimension {fam} < expected {chi}"})
            continue
        info = meta.get(label, {})
        components.append(ComponentReport(
            label=label,
            surface_kind="DelPezzo",
            divisor=format_class(rep),
            family_dim=fam,
            expected_dim=chi,
            r=r,
            g=g,
            gonality=plane_model_gonality(rep),
            gonality_source="pencils through the singular points of the plane model",
            acm=info.get("acm"),
            acm_source="paper" if "acm" in info else None,
            orbit=[short_label(m.divisor) for m in members],
            notes=["dimension of |C| assumes non-special position of the blown-up points"],
        ))
    return components


def _elliptic_components(solutions: list[ClassSolution], d: int, g: int, r: int, chi: int,
                         hosts: list[ComponentReport], absorbed: list[dict]) -> list[ComponentReport]:
    components = []
    for sol in solutions:
        if sol.genus != g or not sol.smooth_candidate:
            continue
        label = solution_label(sol)
        k = sol.divisor.a
        if sol.vertex_multiplicity != 0:
            absorbed.append({"label": label, "reason": "curves through the vertex are not counted"})
            continue
        fam = elliptic_cone_family_dim(d, r, k)
        host = next((c for c in hosts if c.family_dim > fam), None)
        if host is not None:
            absorbed.append({
                "label": label,
                "family_dim": fam,
                "reason": f"lies in the closure of {host.label} (dimension {host.family_dim})",
            })
            continue
        if fam < chi:
            absorbed.append({"label": label, "family_dim": fam, "reason": f"family dimension {fam} < expected {chi}"})
            continue
        components.append(ComponentReport(
            label=label,
            surface_kind="EllipticCone",
            divisor=format_class(sol.divisor),
            family_dim=fam,
            expected_dim=chi,
            r=r,
            g=g,
            gonality=2 * k,
            gonality_source="k-to-1 projection from the vertex onto the elliptic curve",
        ))
    return components


# ---------------------------------------------------------------------------
# Abstract series route
# ---------------------------------------------------------------------------

def _plane_model(e: int, g: int) -> tuple[int, int] | None:
    """(nodes, moduli dimension) of nodal plane curves of degree e and geometric genus g."""
    delta = comb(e - 1, 2) - g
    if delta < 0:
        return None
    return delta, e * (e + 3) // 2 - delta - 8


def linearly_normal_component(d: int, g: int, r: int) -> tuple[ComponentReport | None, str | None]:
    chi = bounds_report(d, r, g).chi
    if rho(d, g, r) >= 0:
        return ComponentReport(
            label="brill-noether",
            surface_kind="General",
            divisor=None,
            family_dim=chi,
            expected_dim=chi,
            r=r,
            g=g,
            gonality=gonality_bn(g),
            gonality_source="general curve of genus g",
            notes=["dominates M_g"],
        ), None
    try:
        residual = residual_series(LinearSeries(d=d, r=r, g=g))
    except SeriesError as exc:
        return None, f"no residual series: {exc}"
    if residual.r != 2:
        return None, f"rho < 0 and the residual {residual} is not a net"
    model = _plane_model(residual.d, g)
    if model is None:
        return None, f"no plane curve of degree {residual.d} has genus {g}"
    delta, moduli = model
    pencils = singular_point_pencils(residual.d, [2] * delta) if delta else [residual.d - 1]
    return ComponentReport(
        label=f"plane-model:{residual.d}-ic,{delta}-nodal",
        surface_kind="PlaneModel",
        divisor=None,
        family_dim=moduli + aut_projective(r),
        expected_dim=chi,
        r=r,
        g=g,
        gonality=min(pencils),
        gonality_source="pencil of lines through a node",
        notes=[f"residual {residual} maps X birationally onto a {delta}-nodal plane curve",
               "Severi variety of nodal plane curves assumed irreducible of expected dimension"],
    ), None


def non_linearly_normal_candidates(d: int, g: int, r: int) -> tuple[list[ComponentReport], list[dict], list[str]]:
    """Projections to P^r of curves embedded by a complete g^r'_d, r < r'."""
    components, absorbed, notes = [], [], []
    chi = bounds_report(d, r, g).chi
    lam = lambda_(d, g, r)
    alpha = g - d + r
    for r2 in range(r + 1, max_birational_dim(d, g) + 1):
        beta = g - d + r2
        if beta <= alpha:
            continue
        if g > pi(d, r2):
            notes.append(f"P^{r2}: g > pi({d},{r2}) = {pi(d, r2)}")
            continue
        found = []
        if g == pi(d, r2):
            for sol in scroll_classes(d, g, r2):
                a = sol.divisor.a
                found.append((f"extremal:{solution_label(sol)}", hurwitz_dim(g, a), a,
                              f"extremal curve on a scroll in P^{r2}, ruling pencil"))
        else:
            try:
                residual = residual_series(LinearSeries(d=d, r=r2, g=g))
            except SeriesError as exc:
                notes.append(f"P^{r2}: {exc}")
                continue
            if residual.r == 1:
                k = residual.d
                found.append((f"residual-pencil:{residual}", hurwitz_dim(g, k), k, "residual pencil"))
            elif residual.r == 2 and (model := _plane_model(residual.d, g)) is not None:
                delta, moduli = model
                pencils = singular_point_pencils(residual.d, [2] * delta) if delta else [residual.d - 1]
                found.append((f"residual-net:{residual}", moduli, min(pencils), "pencil of lines through a node"))
            else:
                notes.append(f"P^{r2}: residual {residual} is neither a pencil nor a net")
        for name, moduli, gonality, source in found:
            base = moduli + grassmannian_dim(r, r2)
            label = f"projection:P^{r2}:{name}"
            if base <= lam:
                absorbed.append({
                    "label": label,
                    "beta": beta,
                    "base_dim": base,
                    "reason": f"{moduli} + dim G({r},{r2}) = {base} <= lambda = {lam}",
                })
                continue
            components.append(ComponentReport(
                label=label,
                surface_kind="Projection",
                divisor=None,
                family_dim=base + aut_projective(r),
                expected_dim=chi,
                r=r,
                g=g,
                gonality=gonality,
                gonality_source=source,
                linearly_normal=False,
                beta=beta,
                fiber=OrbitTimesGrassmannian(r, r2),
                notes=[f"{moduli} + dim G({r},{r2}) = {base} > lambda = {lam}"],
            ))
    return components, absorbed, notes


# ---------------------------------------------------------------------------
# Pipeline
# ---------------------------------------------------------------------------

def _engine_verdict(count: int) -> str:
    if count == 0:
        return "Empty"
    return "Irreducible" if count == 1 else "Reducible"


def _annotate_dual(check, r: int) -> dict:
    data = check.to_dict()
    if check.outcome == CANDIDATE and check.ambient_class:
        severi = severi_family_dim(hirzebruch(1), parse_class(check.ambient_class), check.nodes)
        severi["curve_family_dim"] = severi["family_dim"] + aut_projective(r)
        data["severi"] = severi
    return data


def analyze(d: int, g: int, r: int, verdicts: dict | None = None, workers: int | None = None) -> ClassificationRow:
    if verdicts is None:
        from engine.loader import load_verdicts

        verdicts = load_verdicts()
    meta = verdicts.get(f"{d},{g},{r}", {})
    workers = workers or config.WORKERS

    notes: list[str] = []
    if (d, r) != (15, 5):
        logger.warning("analyze(%d,%d,%d): only d=15, r=5 is fully supported", d, g, r)
        notes.append("best effort outside d=15, r=5")

    report = bounds_report(d, r, g)
    chi = report.chi
    components: list[ComponentReport] = []
    absorbed: list[dict] = []
    dual: list[dict] = []

    if g > report.pi:
        notes.append(f"g = {g} > pi({d},{r}) = {report.pi}")
    else:
        minimal_only = report.pi1 is not None and g > report.pi1
        if report.pi1 is None:
            notes.append(f"second Castelnuovo bound unavailable for r = {r}")
        elif minimal_only:
            notes.append(f"g > pi_1 = {report.pi1}: only surfaces of minimal degree")

        jobs = {
            "scroll": (scroll_classes, (d, g, r)),
            "cone": (rational_cone_classes, (d, r)),
            "dual": (dual_model_checks, (d, g, r)),
        }
        if not minimal_only:
            jobs["elliptic"] = (elliptic_cone_classes, (d, r))
            if 4 <= r <= 8:
                jobs["delpezzo"] = (del_pezzo_classes, (d, g, g, r))
        logger.info("analyze(%d,%d,%d): running %s", d, g, r, sorted(jobs))
        with ThreadPoolExecutor(max_workers=workers) as pool:
            futures = {name: pool.submit(fn, *args) for name, (fn, args) in jobs.items()}
            found = {name: futures[name].result() for name in sorted(futures)}

        for sol in found["scroll"]:
            try:
                fam = family_dim_scroll(r, sol.divisor.a, sol.divisor.b)
            except EmptyLinearSystem as exc:
                absorbed.append({"label": solution_label(sol), "reason": str(exc)})
                continue
            if fam < chi:
                absorbed.append({"label": solution_label(sol), "family_dim": fam,
                                 "reason": f"family dimension {fam} < expected {chi}"})
                continue
            components.append(_scroll_component(sol, d, g, r, chi, meta.get("components", {}).get(solution_label(sol), {})))

        for sol in found["cone"]:
            if sol.genus == g and sol.smooth_candidate:
                absorbed.append({"label": solution_label(sol), "reason": "rational cone families are not counted"})

        delpezzo = _delpezzo_components(found.get("delpezzo", []), d, g, r, chi,
                                        meta.get("components", {}), absorbed)
        components += _elliptic_components(found.get("elliptic", []), d, g, r, chi, delpezzo, absorbed)
        components += delpezzo

        dual = [_annotate_dual(c, r) for c in found["dual"]]
        if dual:
            notes.append("singular del Pezzo models of the residual image are not examined")

        if d >= g:
            ln, why = linearly_normal_component(d, g, r)
            if ln is not None and ln.family_dim >= chi:
                components.append(ln)
            elif ln is not None:
                absorbed.append({"label": ln.label, "family_dim": ln.family_dim,
                                 "reason": f"family dimension {ln.family_dim} < expected {chi}"})
            if why:
                notes.append(why)
            extra, skipped, extra_notes = non_linearly_normal_candidates(d, g, r)
            components += extra
            absorbed += skipped
            notes += extra_notes

    components = [_attach_moduli(c) for c in components]
    count = len(components)
    engine_verdict = _engine_verdict(count)

    if "verdict" in meta:
        verdict, published, source = meta["verdict"], meta.get("count"), "paper"
        if meta.get("external"):
            notes.append("external citation: components not derived by the engine")
    else:
        verdict, published, source = engine_verdict, count, "engine"

    logger.info("analyze(%d,%d,%d): %d component(s), verdict %s", d, g, r, count, verdict)
    return ClassificationRow(
        d=d,
        g=g,
        r=r,
        verdict=verdict,
        count=published,
        verdict_source=source,
        engine_verdict=engine_verdict,
        engine_count=count,
        bounds=report.to_dict(),
        components=components,
        absorbed=absorbed,
        dual_checks=dual,
        notes=notes + list(meta.get("notes", [])),
        anchor=meta.get("anchor"),
    )


def table(d: int, r: int, g_lo: int, g_hi: int, verdicts: dict | None = None, workers: int | None = None) -> ClassificationTable:
    if verdicts is None:
        from engine.loader import load_verdicts

        verdicts = load_verdicts()
    workers = workers or config.WORKERS
    genera = list(range(g_lo, g_hi + 1))
    with ThreadPoolExecutor(max_workers=workers) as pool:
        rows = list(pool.map(lambda g: analyze(d, g, r, verdicts=verdicts, workers=1), genera))
    return ClassificationTable(d=d, r=r, rows=dict(zip(genera, rows)))
