"""Picard lattices of the surfaces used by the census.

Four lattices are supported:

* ``F[e]``     Hirzebruch surface, basis (h, f) with h^2 = -e, h.f = 1, f^2 = 0
* ``Q``        smooth quadric P^1 x P^1, bidegree (a, b)
* ``BP[s]``    plane blown up at s points, basis (l; e_1..e_s), class al - sum b_i e_i
* ``Scroll[r]`` rational normal scroll of degree r-1, basis (H, L) with
               H^2 = r-1, H.L = 1, L^2 = 0

The scroll pairing is reconstructed from the degree formula (r-1)a + b and the
linear-system dimension count; it agrees with the pullback to every F_e with
e = r-1 (mod 2).

Cones are never handled directly: a rational cone is modelled by its
desingularization F_{r-1} and an elliptic cone by the ruled surface over an
elliptic curve, whose numerical lattice is that of F_r.
"""

import itertools
import logging
import re
from dataclasses import dataclass, field
from typing import Union

from engine.errors import (
    InvalidClass,
    LatticeMismatch,
    MissingEmbedding,
    ParityError,
    UnsupportedInput,
)

logger = logging.getLogger(__name__)


# ---------------------------------------------------------------------------
# Divisor classes
# ---------------------------------------------------------------------------

class _Arithmetic:
    """Group operations shared by all class types (coefficient-wise)."""

    def _coeffs(self) -> tuple[int, ...]:
        raise NotImplementedError

    def _rebuild(self, coeffs):
        raise NotImplementedError

    def _check(self, other):
        if not isinstance(other, _Arithmetic) or other.lattice != self.lattice:
            raise LatticeMismatch(
                f"cannot combine {lattice_name(self)} with {lattice_name(other)}"
            )

    def __add__(self, other):
        self._check(other)
        return self._rebuild([x + y for x, y in zip(self._coeffs(), other._coeffs())])

    def __sub__(self, other):
        self._check(other)
        return self._rebuild([x - y for x, y in zip(self._coeffs(), other._coeffs())])

    def __neg__(self):
        return self._rebuild([-x for x in self._coeffs()])

    def __mul__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        return self._rebuild([k * x for x in self._coeffs()])

    __rmul__ = __mul__

    def is_zero(self) -> bool:
        return not any(self._coeffs())


@dataclass(frozen=True, order=True)
class HirzebruchClass(_Arithmetic):
    e: int
    a: int
    b: int

    def __post_init__(self):
        if self.e < 0:
            raise InvalidClass(f"Hirzebruch index must be >= 0, got {self.e}")

    @property
    def lattice(self) -> tuple:
        return ("F", self.e)

    def _coeffs(self):
        return (self.a, self.b)

    def _rebuild(self, coeffs):
        return HirzebruchClass(self.e, *coeffs)


@dataclass(frozen=True, order=True)
class QuadricClass(_Arithmetic):
    a: int
    b: int

    @property
    def lattice(self) -> tuple:
        return ("Q",)

    def _coeffs(self):
        return (self.a, self.b)

    def _rebuild(self, coeffs):
        return QuadricClass(*coeffs)


@dataclass(frozen=True, order=True)
class BlowupClass(_Arithmetic):
    """Class al - sum b_i e_i on the plane blown up at len(b) points.

    Multiplicities are positional: b[i] belongs to the i-th point. Use
    ``sorted()`` for the non-increasing canonical form.
    """

    a: int
    b: tuple[int, ...] = field(default=())

    def __post_init__(self):
        object.__setattr__(self, "b", tuple(int(x) for x in self.b))
        if len(self.b) > 8:
            raise InvalidClass(f"at most 8 blown-up points are supported, got {len(self.b)}")

    @property
    def s(self) -> int:
        return len(self.b)

    @property
    def lattice(self) -> tuple:
        return ("BP", self.s)

    def _coeffs(self):
        return (self.a,) + self.b

    def _rebuild(self, coeffs):
        return BlowupClass(coeffs[0], tuple(coeffs[1:]))

    def sorted(self) -> "BlowupClass":
        return BlowupClass(self.a, tuple(sorted(self.b, reverse=True)))

    def blow_up(self, *mults: int) -> "BlowupClass":
        """Same class pulled back to a lattice with extra points of the given multiplicities."""
        return BlowupClass(self.a, self.b + tuple(mults))


@dataclass(frozen=True, order=True)
class ScrollClass(_Arithmetic):
    r: int
    a: int
    b: int

    def __post_init__(self):
        if self.r < 3:
            raise InvalidClass(f"scroll ambient dimension must be >= 3, got {self.r}")

    @property
    def lattice(self) -> tuple:
        return ("Scroll", self.r)

    def _coeffs(self):
        return (self.a, self.b)

    def _rebuild(self, coeffs):
        return ScrollClass(self.r, *coeffs)


DivisorClass = Union[HirzebruchClass, QuadricClass, BlowupClass, ScrollClass]


def lattice_name(c) -> str:
    lat = getattr(c, "lattice", None)
    if lat is None:
        return type(c).__name__
    if len(lat) == 1:
        return lat[0]
    return f"{lat[0]}[{lat[1]}]"


def intersect(c1: DivisorClass, c2: DivisorClass) -> int:
    """Symmetric bilinear intersection number of two classes on one lattice."""
    if getattr(c1, "lattice", None) is None or getattr(c2, "lattice", None) != c1.lattice:
        raise LatticeMismatch(
            f"intersection across lattices: {lattice_name(c1)} vs {lattice_name(c2)}"
        )

    if isinstance(c1, HirzebruchClass):
        return -c1.e * c1.a * c2.a + c1.a * c2.b + c2.a * c1.b
    if isinstance(c1, QuadricClass):
        return c1.a * c2.b + c2.a * c1.b
    if isinstance(c1, BlowupClass):
        return c1.a * c2.a - sum(x * y for x, y in zip(c1.b, c2.b))
    if isinstance(c1, ScrollClass):
        return (c1.r - 1) * c1.a * c2.a + c1.a * c2.b + c2.a * c1.b
    raise LatticeMismatch(f"unsupported class type {type(c1).__name__}")


# ---------------------------------------------------------------------------
# Surface models
# ---------------------------------------------------------------------------

HIRZEBRUCH = "Hirzebruch"
QUADRIC = "Quadric"
BLOWN_PLANE = "BlownPlane"
SCROLL = "Scroll"
RATIONAL_CONE = "RationalConeStrictModel"
ELLIPTIC_CONE = "EllipticConeModel"


@dataclass(frozen=True)
class SurfaceModel:
    kind: str
    index: int | None
    canonical: DivisorClass
    embedding: DivisorClass | None
    aut_dim: int
    chi_o: int = 1

    @property
    def label(self) -> str:
        if self.index is None:
            return self.kind
        return f"{self.kind}({self.index})"

    @property
    def lattice(self) -> tuple:
        return self.canonical.lattice

    def zero(self) -> DivisorClass:
        return self.canonical * 0


def _hirzebruch_aut(e: int) -> int:
    # Aut(F_0) = PGL2 x PGL2; for e >= 1 the group has dimension e + 5
    return 6 if e == 0 else e + 5


def hirzebruch(e: int, embedding: HirzebruchClass | None = None) -> SurfaceModel:
    return SurfaceModel(
        kind=HIRZEBRUCH,
        index=e,
        canonical=HirzebruchClass(e, -2, -(e + 2)),
        embedding=embedding,
        aut_dim=_hirzebruch_aut(e),
    )


def quadric() -> SurfaceModel:
    return SurfaceModel(
        kind=QUADRIC,
        index=None,
        canonical=QuadricClass(-2, -2),
        embedding=QuadricClass(1, 1),
        aut_dim=6,
    )


def blown_plane(s: int, embedding: BlowupClass | None = None) -> SurfaceModel:
    if not 0 <= s <= 8:
        raise UnsupportedInput(f"blown-up plane needs 0 <= s <= 8, got {s}")
    return SurfaceModel(
        kind=BLOWN_PLANE,
        index=s,
        canonical=BlowupClass(-3, (-1,) * s),
        embedding=embedding,
        aut_dim=max(8 - 2 * s, 0),
    )


def del_pezzo(r: int) -> SurfaceModel:
    """Anticanonical model of degree r in P^r: the plane blown up at 9 - r points."""
    if not 3 <= r <= 9:
        raise UnsupportedInput(f"del Pezzo surfaces in P^r need 3 <= r <= 9, got {r}")
    s = 9 - r
    return blown_plane(s, embedding=BlowupClass(3, (1,) * s))


def balanced_index(r: int) -> int:
    return (r - 1) % 2


def scroll(r: int) -> SurfaceModel:
    return SurfaceModel(
        kind=SCROLL,
        index=r,
        canonical=ScrollClass(r, -2, r - 3),
        embedding=ScrollClass(r, 1, 0),
        aut_dim=_hirzebruch_aut(balanced_index(r)),
    )


def rational_cone(r: int) -> SurfaceModel:
    """Desingularized cone over a rational normal curve of degree r-1."""
    e = r - 1
    return SurfaceModel(
        kind=RATIONAL_CONE,
        index=e,
        canonical=HirzebruchClass(e, -2, -(e + 2)),
        embedding=HirzebruchClass(e, 1, e),
        aut_dim=_hirzebruch_aut(e),
    )


def elliptic_cone(r: int) -> SurfaceModel:
    """Desingularized cone over an elliptic normal curve of degree r in P^(r-1).

    Numerically the lattice is F_r (h^2 = -r); the surface is ruled over an
    elliptic curve, so K = -2h - r f and chi(O) = 0.
    """
    return SurfaceModel(
        kind=ELLIPTIC_CONE,
        index=r,
        canonical=HirzebruchClass(r, -2, -r),
        embedding=HirzebruchClass(r, 1, r),
        aut_dim=r + 1,
        chi_o=0,
    )


def _check_on(S: SurfaceModel, C: DivisorClass):
    if getattr(C, "lattice", None) != S.lattice:
        raise LatticeMismatch(f"class on {lattice_name(C)} used on surface {S.label}")


def arithmetic_genus(S: SurfaceModel, C: DivisorClass) -> int:
    """Adjunction genus 1 + (C.C + C.K)/2."""
    _check_on(S, C)
    n = intersect(C, C) + intersect(C, S.canonical)
    if n % 2:
        raise InvalidClass(f"C.(C+K) = {n} is odd for {format_class(C)} on {S.label}")
    return 1 + n // 2


def degree(S: SurfaceModel, C: DivisorClass) -> int:
    if S.embedding is None:
        raise MissingEmbedding(f"surface {S.label} has no embedding class")
    _check_on(S, C)
    return intersect(C, S.embedding)


# ---------------------------------------------------------------------------
# Lattice maps
# ---------------------------------------------------------------------------

def scroll_to_hirzebruch(c: ScrollClass, e: int) -> HirzebruchClass:
    """Pull aH + bL back to F_e, where H = h + ((r-1+e)/2) f and L = f."""
    if e < 0:
        raise InvalidClass(f"Hirzebruch index must be >= 0, got {e}")
    if (c.r - 1 - e) % 2:
        raise ParityError(f"e={e} and r-1={c.r - 1} have different parity")
    shift = (c.r - 1 + e) // 2
    if shift < e:
        raise InvalidClass(f"H = h + {shift}f is not very ample on F_{e}")
    return HirzebruchClass(e, c.a, c.a * shift + c.b)


def hirzebruch_to_blowup(c: HirzebruchClass) -> BlowupClass:
    """F_1 as the plane blown up at one point: h = e_1, f = l - e_1."""
    if c.e != 1:
        raise UnsupportedInput(f"only F_1 is a blown-up plane, got F_{c.e}")
    return BlowupClass(c.b, (c.b - c.a,))


def quadric_to_hirzebruch(c: QuadricClass) -> HirzebruchClass:
    return HirzebruchClass(0, c.a, c.b)


# ---------------------------------------------------------------------------
# (-1)-curves and Cremona transformations
# ---------------------------------------------------------------------------

def neg_one_curves(s: int) -> list[BlowupClass]:
    """All (-1)-curves on the plane blown up at s <= 5 general points.

    Order: exceptional curves e_i, then lines l - e_i - e_j (lexicographic in
    (i, j)), then the conic (2;1^5) when s = 5.
    """
    if not 1 <= s <= 5:
        raise UnsupportedInput(f"(-1)-curves are tabulated for 1 <= s <= 5, got {s}")

    curves = []
    for i in range(s):
        b = [0] * s
        b[i] = -1
        curves.append(BlowupClass(0, tuple(b)))
    for i, j in itertools.combinations(range(s), 2):
        b = [0] * s
        b[i] = b[j] = 1
        curves.append(BlowupClass(1, tuple(b)))
    if s == 5:
        curves.append(BlowupClass(2, (1,) * 5))
    return curves


def cremona(c: BlowupClass, i: int, j: int, k: int) -> BlowupClass:
    """Quadratic transformation centred at points i, j, k."""
    if len({i, j, k}) != 3 or max(i, j, k) >= c.s:
        raise InvalidClass(f"need three distinct points among {c.s}, got {(i, j, k)}")
    b = list(c.b)
    bi, bj, bk = b[i], b[j], b[k]
    b[i] = c.a - bj - bk
    b[j] = c.a - bi - bk
    b[k] = c.a - bi - bj
    return BlowupClass(2 * c.a - bi - bj - bk, tuple(b))


def cremona_reduce(c: BlowupClass) -> BlowupClass:
    """Sorted Cremona-minimal representative: a >= b_1 + b_2 + b_3."""
    c = c.sorted()
    if c.s < 3:
        return c
    while c.a < c.b[0] + c.b[1] + c.b[2]:
        c = cremona(c, 0, 1, 2).sorted()
    return c


# ---------------------------------------------------------------------------
# Text forms
# ---------------------------------------------------------------------------

def _run_length(values) -> str:
    parts = []
    for value, group in itertools.groupby(values):
        n = len(list(group))
        parts.append(f"{value}^{n}" if n > 1 else f"{value}")
    return ",".join(parts)


def short_label(c: BlowupClass) -> str:
    """Run-length form such as (9;3^4,2)."""
    if not c.b:
        return f"({c.a})"
    return f"({c.a};{_run_length(c.b)})"


def format_class(c: DivisorClass) -> str:
    if isinstance(c, HirzebruchClass):
        return f"F[{c.e}]:{c.a}*h{c.b:+d}*f"
    if isinstance(c, QuadricClass):
        return f"Q:({c.a},{c.b})"
    if isinstance(c, BlowupClass):
        return f"BP[{c.s}]:({c.a};{','.join(str(x) for x in c.b)})"
    if isinstance(c, ScrollClass):
        return f"Scroll[{c.r}]:({c.a}*H{c.b:+d}*L)"
    raise InvalidClass(f"unsupported class type {type(c).__name__}")


_HIRZEBRUCH_RE = re.compile(r"^F\[(\d+)\]:(-?\d+)\*h([+-]\d+)\*f$")
_QUADRIC_RE = re.compile(r"^Q:\((-?\d+),(-?\d+)\)$")
_BLOWUP_RE = re.compile(r"^BP\[(\d+)\]:\((-?\d+)(?:;([-\d,^]*))?\)$")
_SCROLL_RE = re.compile(r"^Scroll\[(\d+)\]:\((-?\d+)\*H([+-]\d+)\*L\)$")
_SHORT_RE = re.compile(r"^\((-?\d+)(?:;([-\d,^]*))?\)$")


def _parse_mults(text: str | None) -> tuple[int, ...]:
    if not text:
        return ()
    mults = []
    for part in text.split(","):
        value, _, count = part.partition("^")
        mults.extend([int(value)] * (int(count) if count else 1))
    return tuple(mults)


def parse_class(text: str) -> DivisorClass:
    """Inverse of ``format_class``; also accepts run-length forms like (9;3^4,2)."""
    text = text.replace(" ", "")
    if m := _HIRZEBRUCH_RE.match(text):
        return HirzebruchClass(int(m[1]), int(m[2]), int(m[3]))
    if m := _QUADRIC_RE.match(text):
        return QuadricClass(int(m[1]), int(m[2]))
    if m := _SCROLL_RE.match(text):
        return ScrollClass(int(m[1]), int(m[2]), int(m[3]))
    if m := _BLOWUP_RE.match(text):
        c = BlowupClass(int(m[2]), _parse_mults(m[3]))
        if c.s != int(m[1]):
            # short lists are padded with zero multiplicities
            if c.s > int(m[1]):
                raise InvalidClass(f"{text}: {c.s} multiplicities on BP[{m[1]}]")
            c = c.blow_up(*([0] * (int(m[1]) - c.s)))
        return c
    if m := _SHORT_RE.match(text):
        return BlowupClass(int(m[1]), _parse_mults(m[2]))
    raise InvalidClass(f"cannot parse divisor class {text!r}")


def class_to_json(c: DivisorClass) -> dict:
    if isinstance(c, HirzebruchClass):
        return {"lattice": "F", "e": c.e, "a": c.a, "b": c.b, "text": format_class(c)}
    if isinstance(c, QuadricClass):
        return {"lattice": "Q", "a": c.a, "b": c.b, "text": format_class(c)}
    if isinstance(c, BlowupClass):
        return {"lattice": "BP", "s": c.s, "a": c.a, "b": list(c.b), "text": format_class(c)}
    if isinstance(c, ScrollClass):
        return {"lattice": "Scroll", "r": c.r, "a": c.a, "b": c.b, "text": format_class(c)}
    raise InvalidClass(f"unsupported class type {type(c).__name__}")
