"""Line bundle cohomology on P^1, Hirzebruch surfaces and the quadric.

Hirzebruch values come from pushing forward to P^1: for a >= 0,

    h^i(F_e, ah + bf) = sum_{k=0}^{a} h^i(P^1, O(b - ke))

a = -1 has no cohomology at all, and a <= -2 is reduced to a >= 0 by Serre
duality with K = -2h - (e+2)f. The quadric uses the Kunneth formula.

On blown-up planes only the expected dimension of a linear system is given;
every use in the census is in the non-special range.
"""

import logging
from dataclasses import dataclass

from engine.errors import InvalidClass, PreconditionFailed, UnsupportedInput
from engine.lattice import (
    BLOWN_PLANE,
    ELLIPTIC_CONE,
    BlowupClass,
    HirzebruchClass,
    QuadricClass,
    SurfaceModel,
    arithmetic_genus,
    format_class,
    hirzebruch,
    intersect,
    quadric_to_hirzebruch,
)

logger = logging.getLogger(__name__)

Triple = tuple[int, int, int]


def h_p1(n: int) -> tuple[int, int]:
    """(h0, h1) of O(n) on P^1."""
    if n >= 0:
        return n + 1, 0
    if n == -1:
        return 0, 0
    return 0, -n - 1


def h_hirzebruch(e: int, a: int, b: int) -> Triple:
    if e < 0:
        raise InvalidClass(f"Hirzebruch index must be >= 0, got {e}")
    if a >= 0:
        h0 = h1 = 0
        for k in range(a + 1):
            x0, x1 = h_p1(b - k * e)
            h0 += x0
            h1 += x1
        return h0, h1, 0
    if a == -1:
        return 0, 0, 0
    # Serre duality: h^i(D) = h^(2-i)(K - D)
    d0, d1, d2 = h_hirzebruch(e, -2 - a, -e - 2 - b)
    return d2, d1, d0


def h_quadric(a: int, b: int) -> Triple:
    a0, a1 = h_p1(a)
    b0, b1 = h_p1(b)
    return a0 * b0, a0 * b1 + a1 * b0, a1 * b1


def line_bundle_cohomology(S: SurfaceModel, C) -> Triple:
    """(h0, h1, h2) of O_S(C) on a rational ruled model or the quadric."""
    if S.kind in (BLOWN_PLANE, ELLIPTIC_CONE):
        raise UnsupportedInput(f"no exact cohomology on {S.label}")
    if isinstance(C, QuadricClass):
        return h_quadric(C.a, C.b)
    if isinstance(C, HirzebruchClass) and C.lattice == S.lattice:
        return h_hirzebruch(C.e, C.a, C.b)
    raise UnsupportedInput(f"no exact cohomology for {format_class(C)} on {S.label}")


def euler_characteristic(S: SurfaceModel, C) -> int:
    """Riemann-Roch: chi(O_S) + C.(C - K)/2."""
    return S.chi_o + (intersect(C, C) - intersect(C, S.canonical)) // 2


def dim_linear_system_scroll(r: int, a: int, b: int) -> int:
    """dim|aH + bL| on a scroll of degree r-1; -1 means the system is empty."""
    if a < 0:
        raise InvalidClass(f"scroll systems need a >= 0, got a={a}")
    value = a * (a + 1) * (r - 1) // 2 + (a + 1) * (b + 1) - 1
    return max(value, -1)


@dataclass(frozen=True)
class ExpectedDimension:
    value: int
    assumes_non_special: bool = True


def expected_dim_blowup(c: BlowupClass) -> ExpectedDimension:
    """Virtual dimension a(a+3)/2 - sum b_i(b_i+1)/2 of a plane system with fat base points."""
    if any(x < 0 for x in c.b):
        raise InvalidClass(f"multiplicities must be >= 0, got {c.b}")
    value = c.a * (c.a + 3) // 2 - sum(x * (x + 1) // 2 for x in c.b)
    return ExpectedDimension(value=value)


def h0_restricted(S: SurfaceModel, M, C) -> int:
    """h0(O_C(M)) from 0 -> O(M - C) -> O(M) -> O_C(M) -> 0.

    Valid only when h0(M - C) = 0 and h1(M) = 0; then
    h0(O_C(M)) = h0(M) + h1(M - C).
    """
    m0, m1, _ = line_bundle_cohomology(S, M)
    r0, r1, _ = line_bundle_cohomology(S, M - C)
    if r0 != 0 or m1 != 0:
        values = {"h0(M-C)": r0, "h1(M)": m1}
        logger.warning("restriction sequence outside its regime on %s: %s", S.label, values)
        raise PreconditionFailed(
            f"h0(M-C)={r0}, h1(M)={m1} for M={format_class(M)}, C={format_class(C)}",
            values,
        )
    return m0 + r1


def scrollar_invariant(e: int, C) -> tuple[int, int]:
    """First t with h0(O_C(t f)) >= t + 2, together with that h0.

    f is the ruling; a quadric class is read on F_0.
    """
    if isinstance(C, QuadricClass):
        C = quadric_to_hirzebruch(C)
    if C.e != e:
        raise InvalidClass(f"{format_class(C)} does not live on F_{e}")
    S = hirzebruch(e)
    f = HirzebruchClass(e, 0, 1)
    if intersect(C, f) < 2:
        raise InvalidClass(f"{format_class(C)} meets the ruling in fewer than 2 points")

    genus = arithmetic_genus(S, C)
    limit = max(2 * genus, 1)
    t = 1
    while t <= limit:
        value = h0_restricted(S, f * t, C)
        if value >= t + 2:
            return t, value
        t += 1
    raise UnsupportedInput(f"no scrollar invariant found up to t={limit} for {format_class(C)}")


def maroni_invariant(e: int, C) -> dict:
    """Maroni data of a trigonal class.

    The trigonal pencil is the ruling; with c the scrollar invariant, the
    canonical curve lies on a scroll whose directrix index is g - 2 - 2(c - 2).
    """
    if isinstance(C, QuadricClass):
        C = quadric_to_hirzebruch(C)
    S = hirzebruch(e)
    if intersect(C, HirzebruchClass(e, 0, 1)) != 3:
        raise InvalidClass(f"{format_class(C)} is not trigonal via the ruling")
    c, h0 = scrollar_invariant(e, C)
    genus = arithmetic_genus(S, C)
    m = c - 2
    return {"scrollar": c, "h0": h0, "maroni": m, "canonical_scroll_index": genus - 2 - 2 * m}


def h1_twist_sequence(S: SurfaceModel, H, X, ts) -> list[int]:
    """h1(S, tH - X) for each t; all zero means X is ACM when S is."""
    return [line_bundle_cohomology(S, H * t - X)[1] for t in ts]
