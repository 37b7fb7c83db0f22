"""Zero-dimensional schemes of fat points in P^2 over the rationals.

Conditions imposed by a fat point mp on plane curves of degree t are the
vanishing of all partial derivatives of order < m in an affine chart around
p; there are m(m+1)/2 of them. Ranks are computed exactly with sympy.
"""

import itertools
import logging
import random
from dataclasses import dataclass
from math import comb

import sympy as sp

from engine.errors import ConsistencyError, InvalidClass, UnsupportedInput

logger = logging.getLogger(__name__)


# ---- Points and schemes ----

@dataclass(frozen=True)
class PlanePoint:
    """Point (x:y:z) with exact rational coordinates, first nonzero coordinate 1."""

    coords: tuple

    def __post_init__(self):
        if any(isinstance(c, float) for c in self.coords):
            raise InvalidClass(f"coordinates must be exact integers or rationals, got {self.coords}")
        coords = tuple(sp.Rational(c) for c in self.coords)
        if len(coords) != 3 or not any(coords):
            raise InvalidClass(f"not a point of P^2: {self.coords}")
        lead = next(c for c in coords if c != 0)
        object.__setattr__(self, "coords", tuple(c / lead for c in coords))

    @classmethod
    def of(cls, x, y, z=1) -> "PlanePoint":
        return cls((x, y, z))

    def to_json(self) -> list[str]:
        return [str(c) for c in self.coords]


@dataclass(frozen=True)
class FatPoint:
    point: PlanePoint
    m: int = 1

    def __post_init__(self):
        if self.m < 1:
            raise InvalidClass(f"fat point multiplicity must be >= 1, got {self.m}")

    @property
    def degree(self) -> int:
        return self.m * (self.m + 1) // 2


@dataclass(frozen=True)
class ZeroScheme:
    points: tuple[FatPoint, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "points", tuple(self.points))
        supports = [fp.point for fp in self.points]
        if len(set(supports)) != len(supports):
            raise InvalidClass("fat points must have pairwise distinct supports")

    @property
    def degree(self) -> int:
        return sum(fp.degree for fp in self.points)

    def to_json(self) -> list[dict]:
        return [{"point": fp.point.to_json(), "m": fp.m} for fp in self.points]


def scheme_from_json(data: list[dict]) -> ZeroScheme:
    """Parse [{"point": [x, y, z], "m": 2}, ...] with rationals given as strings or ints."""
    return ZeroScheme(tuple(FatPoint(PlanePoint(tuple(item["point"])), int(item.get("m", 1))) for item in data))


# ---- Conditions ----

def monomials(t: int) -> list[tuple[int, int, int]]:
    """Exponent vectors of degree t, in descending lexicographic order."""
    return [(i, j, t - i - j) for i in range(t, -1, -1) for j in range(t - i, -1, -1)]


def _derivative(exponent: int, order: int, value) -> sp.Rational:
    """order-th derivative of u^exponent at u = value."""
    if order > exponent:
        return sp.Integer(0)
    return sp.ff(exponent, order) * value ** (exponent - order)


def conditions_matrix(Z: ZeroScheme, t: int, chart: int | None = None) -> sp.Matrix:
    """Rows are the vanishing conditions of Z on degree t forms, columns the monomials."""
    if t < 0:
        raise UnsupportedInput(f"degree must be >= 0, got {t}")
    cols = monomials(t)
    rows = []
    for fp in Z.points:
        p = fp.point.coords
        c = chart if chart is not None else next(k for k in range(3) if p[k] != 0)
        if p[c] == 0:
            raise InvalidClass(f"chart {c} misses the point {fp.point.to_json()}")
        u, v = (k for k in range(3) if k != c)
        pu, pv = p[u] / p[c], p[v] / p[c]
        for i in range(fp.m):
            for j in range(fp.m - i):
                rows.append([
                    _derivative(mono[u], i, pu) * _derivative(mono[v], j, pv)
                    for mono in cols
                ])
    if not rows:
        return sp.zeros(0, len(cols))
    return sp.Matrix(rows)


@dataclass(frozen=True)
class IdealCohomology:
    h0: int
    h1: int
    rank: int
    deg: int

    def to_dict(self) -> dict:
        return {"h0": self.h0, "h1": self.h1, "rank": self.rank, "deg": self.deg}


def ideal_cohomology(Z: ZeroScheme, t: int) -> IdealCohomology:
    matrix = conditions_matrix(Z, t)
    rank = matrix.rank() if matrix.rows else 0
    return IdealCohomology(h0=comb(t + 2, 2) - rank, h1=Z.degree - rank, rank=rank, deg=Z.degree)


def h_ideal(Z: ZeroScheme, t: int) -> tuple[int, int]:
    """(h0, h1) of I_Z(t) on P^2."""
    result = ideal_cohomology(Z, t)
    return result.h0, result.h1


# ---- Residual schemes ----

def _on_line(line, p: PlanePoint) -> bool:
    return sum(sp.Rational(a) * x for a, x in zip(line, p.coords)) == 0


def _check_line(line):
    if len(line) != 3 or not any(sp.Rational(a) for a in line):
        raise InvalidClass(f"not a linear form: {line}")


def line_intersection_degree(Z: ZeroScheme, line) -> int:
    """deg(Z cap L): a fat point mp on L meets it in a scheme of length m."""
    _check_line(line)
    return sum(fp.m for fp in Z.points if _on_line(line, fp.point))


def residual_line(Z: ZeroScheme, line) -> ZeroScheme:
    """Res_L(Z): order drops by one at points of L."""
    _check_line(line)
    kept = []
    for fp in Z.points:
        m = fp.m - 1 if _on_line(line, fp.point) else fp.m
        if m > 0:
            kept.append(FatPoint(fp.point, m))
    return ZeroScheme(tuple(kept))


@dataclass(frozen=True)
class LinePair:
    """Reduced conic D1 + D2."""

    first: tuple
    second: tuple

    def __post_init__(self):
        _check_line(self.first)
        _check_line(self.second)
        if sp.Matrix([self.first, self.second]).rank() < 2:
            raise UnsupportedInput("a double line is not a reduced conic")

    def multiplicity(self, p: PlanePoint) -> int:
        return int(_on_line(self.first, p)) + int(_on_line(self.second, p))


@dataclass(frozen=True)
class SmoothConic:
    """Conic given by a symmetric 3x3 matrix of the quadratic form."""

    matrix: tuple

    def __post_init__(self):
        m = sp.Matrix(self.matrix).applyfunc(sp.Rational)
        if m.shape != (3, 3) or m != m.T:
            raise InvalidClass("a conic needs a symmetric 3x3 matrix")
        if m.det() == 0:
            raise UnsupportedInput("singular quadratic form: pass the conic as a LinePair")

    def multiplicity(self, p: PlanePoint) -> int:
        x = sp.Matrix(p.coords)
        return int((x.T * sp.Matrix(self.matrix) * x)[0] == 0)


def residual_conic(Z: ZeroScheme, conic: LinePair | SmoothConic) -> ZeroScheme:
    """Res_D(Z): order drops by the multiplicity of D at each point."""
    kept = []
    for fp in Z.points:
        m = fp.m - conic.multiplicity(fp.point)
        if m > 0:
            kept.append(FatPoint(fp.point, m))
    return ZeroScheme(tuple(kept))


# ---- Plane models ----

def plane_model_genus(d: int, mults: list[int]) -> int:
    """Geometric genus of a plane curve of degree d with ordinary points of the given multiplicities."""
    if d < 1:
        raise InvalidClass(f"plane curve degree must be positive, got {d}")
    for m in mults:
        if not 0 <= m < d:
            raise InvalidClass(f"multiplicity {m} is not in [0, {d})")
    return (d - 1) * (d - 2) // 2 - sum(m * (m - 1) // 2 for m in mults)


def singular_point_pencils(d: int, mults: list[int]) -> list[int]:
    """Degrees of pencils cut by lines through each singular point, then conics through four points."""
    for m in mults:
        if not 0 <= m < d:
            raise InvalidClass(f"multiplicity {m} is not in [0, {d})")
    pencils = [d - m for m in mults if m >= 2]
    if len(mults) == 4:
        pencils.append(2 * d - sum(mults))
    return pencils


def max_line_section(Z: ZeroScheme) -> int:
    """Largest deg(Z cap L) over all lines L."""
    best = max((fp.m for fp in Z.points), default=0)
    for p, q in itertools.combinations(Z.points, 2):
        line = tuple(sp.Matrix(p.point.coords).cross(sp.Matrix(q.point.coords)))
        best = max(best, line_intersection_degree(Z, line))
    return best


def contained_in_line(Z: ZeroScheme) -> bool:
    """Z lies on a line: every fat point is reduced and all supports are collinear."""
    if any(fp.m > 1 for fp in Z.points):
        return False
    return max_line_section(Z) == Z.degree


def collinearity_h1_criterion(Z: ZeroScheme) -> bool:
    """h1(I_Z(4)) > 0 for a degree 6 scheme, checked against the line-section test."""
    if Z.degree != 6:
        raise UnsupportedInput(f"criterion applies to degree 6 schemes, got degree {Z.degree}")
    by_rank = h_ideal(Z, 4)[1] > 0
    by_geometry = max_line_section(Z) >= 6
    if by_rank != by_geometry:
        logger.error("h1 test %s disagrees with line-section test %s", by_rank, by_geometry)
        raise ConsistencyError(f"h1(I_Z(4)) > 0 is {by_rank} but a 6-secant line exists is {by_geometry}")
    return by_rank


# ---- Sampling ----

def _collinear(p: PlanePoint, q: PlanePoint, s: PlanePoint) -> bool:
    return sp.Matrix([p.coords, q.coords, s.coords]).det() == 0


def random_configuration(rng: random.Random, simple: int, fat: list[int] = (), box: int = 10) -> ZeroScheme:
    """Fat points on distinct integer supports with no three supports collinear.

    Multiplicities in ``fat`` come first, then ``simple`` reduced points.
    """
    mults = list(fat) + [1] * simple
    points: list[PlanePoint] = []
    attempts = 0
    while len(points) < len(mults):
        attempts += 1
        if attempts > 10_000:
            raise UnsupportedInput(f"no general configuration of {len(mults)} points in box {box}")
        p = PlanePoint.of(rng.randint(-box, box), rng.randint(-box, box))
        if p in points:
            continue
        if any(_collinear(a, b, p) for a, b in itertools.combinations(points, 2)):
            continue
        points.append(p)
    return ZeroScheme(tuple(FatPoint(p, m) for p, m in zip(points, mults)))


def random_line(rng: random.Random, box: int = 5) -> tuple[int, int, int]:
    while True:
        line = tuple(rng.randint(-box, box) for _ in range(3))
        if any(line):
            return line
