import random

import pytest

from engine.cohomology import euler_characteristic
from engine.errors import InvalidClass, LatticeMismatch, ParityError
from engine.lattice import (
    BlowupClass,
    HirzebruchClass,
    QuadricClass,
    ScrollClass,
    arithmetic_genus,
    blown_plane,
    cremona,
    cremona_reduce,
    degree,
    del_pezzo,
    elliptic_cone,
    format_class,
    hirzebruch,
    hirzebruch_to_blowup,
    intersect,
    neg_one_curves,
    parse_class,
    quadric,
    scroll,
    scroll_to_hirzebruch,
    short_label,
)


def _random_class(rng, S):
    a = rng.randint(-6, 12)
    if S.lattice[0] == "F":
        return HirzebruchClass(S.index, a, rng.randint(-10, 20))
    if S.lattice[0] == "Q":
        return QuadricClass(a, rng.randint(-10, 20))
    return BlowupClass(a, tuple(rng.randint(-2, 5) for _ in range(S.index)))


def test_adjunction_agrees_with_riemann_roch():
    rng = random.Random(7)
    surfaces = [hirzebruch(e) for e in range(5)] + [quadric(), blown_plane(4), blown_plane(5), elliptic_cone(5)]
    for _ in range(500):
        S = rng.choice(surfaces)
        C = _random_class(rng, S)
        # p_a(C) = 1 - chi(O_C) and chi(O_C) = chi(O_S) - chi(O_S(-C))
        assert arithmetic_genus(S, C) == 1 - S.chi_o + euler_characteristic(S, -C)


def test_degree_is_additive():
    rng = random.Random(11)
    S = del_pezzo(5)
    for _ in range(100):
        c1, c2 = _random_class(rng, S), _random_class(rng, S)
        assert degree(S, c1 + c2) == degree(S, c1) + degree(S, c2)


def test_scroll_pullback_preserves_pairing_and_canonical_class():
    rng = random.Random(3)
    for _ in range(200):
        r = rng.randint(3, 8)
        e = rng.choice([x for x in range(0, r) if (r - 1 - x) % 2 == 0])
        c1 = ScrollClass(r, rng.randint(0, 6), rng.randint(-8, 8))
        c2 = ScrollClass(r, rng.randint(0, 6), rng.randint(-8, 8))
        pulled = scroll_to_hirzebruch(c1, e), scroll_to_hirzebruch(c2, e)
        assert intersect(*pulled) == intersect(c1, c2)
        assert scroll_to_hirzebruch(scroll(r).canonical, e) == hirzebruch(e).canonical


def test_scroll_pullback_rejects_wrong_parity():
    with pytest.raises(ParityError):
        scroll_to_hirzebruch(ScrollClass(5, 3, 3), 1)


def test_scroll_classes_of_the_genus_16_family():
    S = scroll(5)
    c = ScrollClass(5, 3, 3)
    assert degree(S, c) == 15
    assert arithmetic_genus(S, c) == 16
    assert scroll_to_hirzebruch(c, 0) == HirzebruchClass(0, 3, 9)
    assert scroll_to_hirzebruch(c, 2) == HirzebruchClass(2, 3, 12)
    assert arithmetic_genus(S, ScrollClass(5, 4, -1)) == 18


def test_del_pezzo_genus_and_degree():
    S = del_pezzo(5)
    assert degree(S, BlowupClass(9, (3, 3, 3, 3))) == 15
    assert arithmetic_genus(S, BlowupClass(9, (3, 3, 3, 3))) == 16
    assert arithmetic_genus(S, BlowupClass(8, (3, 2, 2, 2))) == 15


def test_neg_one_curves():
    for s in range(1, 6):
        curves = neg_one_curves(s)
        K = blown_plane(s).canonical
        assert len(curves) == s + s * (s - 1) // 2 + (1 if s == 5 else 0)
        for E in curves:
            assert intersect(E, E) == -1
            assert intersect(E, K) == -1
    assert len(neg_one_curves(5)) == 16


def test_cremona_preserves_intersections():
    rng = random.Random(5)
    K = blown_plane(5).canonical
    for _ in range(100):
        c = BlowupClass(rng.randint(0, 12), tuple(rng.randint(0, 5) for _ in range(5)))
        i, j, k = rng.sample(range(5), 3)
        t = cremona(c, i, j, k)
        assert intersect(t, t) == intersect(c, c)
        assert intersect(t, K) == intersect(c, K)


def test_cremona_orbit_of_the_genus_15_class():
    assert cremona_reduce(BlowupClass(9, (4, 3, 3, 2))) == BlowupClass(8, (3, 2, 2, 2))
    assert cremona_reduce(BlowupClass(10, (4, 4, 4, 3))) == BlowupClass(8, (3, 2, 2, 2))


def test_f1_is_the_blown_up_plane():
    h, f = HirzebruchClass(1, 1, 0), HirzebruchClass(1, 0, 1)
    for x in (h, f):
        for y in (h, f):
            assert intersect(hirzebruch_to_blowup(x), hirzebruch_to_blowup(y)) == intersect(x, y)


def test_mixing_lattices_is_rejected():
    with pytest.raises(LatticeMismatch):
        HirzebruchClass(1, 1, 0) + QuadricClass(1, 1)
    with pytest.raises(LatticeMismatch):
        intersect(HirzebruchClass(1, 1, 0), HirzebruchClass(2, 1, 0))
    with pytest.raises(LatticeMismatch):
        arithmetic_genus(quadric(), HirzebruchClass(0, 1, 1))


def test_text_forms():
    assert parse_class("(9;3^4,2)") == BlowupClass(9, (3, 3, 3, 3, 2))
    assert short_label(BlowupClass(10, (4, 4, 3, 3, 3))) == "(10;4^2,3^3)"
    assert parse_class("BP[5]:(9;3,3,3,3)") == BlowupClass(9, (3, 3, 3, 3, 0))
    assert format_class(ScrollClass(5, 4, -1)) == "Scroll[5]:(4*H-1*L)"
    c = HirzebruchClass(2, 3, 12)
    assert parse_class(format_class(c)) == c
    with pytest.raises(InvalidClass):
        parse_class("3h+12f")
