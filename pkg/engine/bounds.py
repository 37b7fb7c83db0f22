"""Castelnuovo bounds, Brill-Noether counts and residual series arithmetic."""

import logging
from dataclasses import asdict, dataclass, field
from math import comb

from engine.errors import BoundMismatch, SeriesError, UnsupportedInput

logger = logging.getLogger(__name__)

# Published values of the second Castelnuovo bound; the enumeration must agree.
PI1_OVERRIDES = {
    (15, 5): 16,
    (13, 4): 15,
}


@dataclass(frozen=True)
class LinearSeries:
    """A complete g^r_d on a curve of genus g."""

    d: int
    r: int
    g: int

    def __post_init__(self):
        if self.d < 0 or self.g < 0:
            raise SeriesError(f"g^{self.r}_{self.d} on genus {self.g}: negative degree or genus")
        if self.r < 0:
            raise SeriesError(f"g^{self.r}_{self.d}: negative dimension")
        if self.r > self.d and not (self.r == 0 and self.d == 0):
            raise SeriesError(f"g^{self.r}_{self.d}: dimension exceeds degree")

    def __str__(self) -> str:
        return f"g^{self.r}_{self.d}"


def residual_series(L: LinearSeries) -> LinearSeries:
    """|K - D| for a complete g^r_d: a g^(r+g-d-1)_(2g-2-d)."""
    if L.d > 2 * L.g - 2:
        raise SeriesError(f"{L} on genus {L.g}: degree exceeds 2g-2, residual is not effective")
    r = L.r + L.g - L.d - 1
    if r < 0:
        raise SeriesError(f"{L} on genus {L.g}: residual has dimension {r}")
    return LinearSeries(d=2 * L.g - 2 - L.d, r=r, g=L.g)


# ---- Castelnuovo bounds ----

def pi(d: int, r: int) -> int:
    """Castelnuovo's bound for non-degenerate curves of degree d in P^r."""
    if r < 3:
        raise UnsupportedInput(f"Castelnuovo bound needs r >= 3, got r={r}")
    if d < r:
        raise UnsupportedInput(f"degree {d} < {r}: no non-degenerate curve")
    m, eps = divmod(d - 1, r - 1)
    return comb(m, 2) * (r - 1) + m * eps


@dataclass(frozen=True)
class Pi1Result:
    value: int
    attained_by: list[str] = field(default_factory=list)
    source: str = "enumeration"


def pi_1(d: int, r: int) -> Pi1Result:
    """Second Castelnuovo bound, by enumeration over elliptic cones and del Pezzo surfaces.

    Curves not on a surface of minimal degree lie on one of these, so the bound
    is the largest genus of a class of degree d on them.
    """
    # enumerators live in surfaces, which sits above this module
    from engine.surfaces import del_pezzo_classes, elliptic_cone_classes, solution_label

    if r not in (4, 5):
        raise UnsupportedInput(f"second Castelnuovo bound is supported for r in {{4, 5}}, got {r}")

    # k = 1 is the hyperplane section, which spans only a hyperplane of P^r
    candidates = [s for s in elliptic_cone_classes(d, r) if s.divisor.a >= 2 and s.vertex_multiplicity <= 1]
    candidates += del_pezzo_classes(d, 0, pi(d, r), r)
    if not candidates:
        raise UnsupportedInput(f"no elliptic cone or del Pezzo class of degree {d} in P^{r}")

    value = max(s.genus for s in candidates)
    attained = [solution_label(s) for s in candidates if s.genus == value]

    expected = PI1_OVERRIDES.get((d, r))
    if expected is not None and expected != value:
        logger.error("pi_1(%d,%d): enumeration gives %d, table gives %d", d, r, value, expected)
        raise BoundMismatch(f"pi_1({d},{r}) enumerates to {value}, expected {expected}")
    return Pi1Result(value=value, attained_by=attained)


# ---- Brill-Noether ----

def rho(d: int, g: int, r: int) -> int:
    return g - (r + 1) * (g - d + r)


def lambda_(d: int, g: int, r: int) -> int:
    return 3 * g - 3 + rho(d, g, r)


def chi_expected(d: int, g: int, r: int) -> int:
    """Expected Hilbert scheme dimension: lambda + dim Aut(P^r)."""
    return lambda_(d, g, r) + r * r + 2 * r


def castelnuovo_severi(n1: int, g1: int, n2: int, g2: int) -> int:
    """Largest genus of a curve with independent degree n1, n2 maps to genus g1, g2 curves."""
    return n1 * g1 + n2 * g2 + (n1 - 1) * (n2 - 1)


def max_birational_dim(d: int, g: int) -> int:
    """Largest r of a birationally very ample g^r_d with d >= g."""
    if d < g:
        raise UnsupportedInput(f"bound needs d >= g, got d={d}, g={g}")
    return (2 * d - g + 1) // 3


def gonality_bn(g: int) -> int:
    return (g + 3) // 2


def grassmannian_dim(k: int, n: int) -> int:
    """dim G(k, n) of k-planes in P^n."""
    return (k + 1) * (n - k)


def hurwitz_dim(g: int, k: int) -> int:
    """Dimension of the locus of k-gonal curves in M_g."""
    return min(2 * g + 2 * k - 5, 3 * g - 3)


def moduli_codim(g: int, image_dim: int) -> int:
    return 3 * g - 3 - image_dim


def small_codim_excess(family_dim: int, expected: int, g: int, image_dim: int) -> bool:
    """Component of larger than expected dimension whose moduli image has codimension <= g - 4."""
    return family_dim > expected and moduli_codim(g, image_dim) <= g - 4


# ---- Reports ----

@dataclass(frozen=True)
class BoundsReport:
    d: int
    r: int
    pi: int
    pi1: int | None
    g: int | None = None
    rho: int | None = None
    lambda_: int | None = None
    chi: int | None = None
    alpha: int | None = None

    def to_dict(self) -> dict:
        data = asdict(self)
        data["lambda"] = data.pop("lambda_")
        return {k: v for k, v in data.items() if v is not None}


def bounds_report(d: int, r: int, g: int | None = None) -> BoundsReport:
    try:
        pi1 = pi_1(d, r).value
    except UnsupportedInput as exc:
        logger.info("pi_1 unavailable: %s", exc)
        pi1 = None

    if g is None:
        return BoundsReport(d=d, r=r, pi=pi(d, r), pi1=pi1)
    return BoundsReport(
        d=d,
        r=r,
        pi=pi(d, r),
        pi1=pi1,
        g=g,
        rho=rho(d, g, r),
        lambda_=lambda_(d, g, r),
        chi=chi_expected(d, g, r),
        alpha=g - d + r,
    )
