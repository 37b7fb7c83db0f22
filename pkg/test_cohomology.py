import random

import pytest

from engine.cohomology import (
    dim_linear_system_scroll,
    euler_characteristic,
    expected_dim_blowup,
    h0_restricted,
    h_hirzebruch,
    h_p1,
    h_quadric,
    h1_twist_sequence,
    line_bundle_cohomology,
    maroni_invariant,
    scrollar_invariant,
)
from engine.errors import InvalidClass, PreconditionFailed, UnsupportedInput
from engine.lattice import (
    BlowupClass,
    HirzebruchClass,
    QuadricClass,
    ScrollClass,
    blown_plane,
    hirzebruch,
    quadric,
    scroll_to_hirzebruch,
)


def test_p1():
    assert h_p1(3) == (4, 0)
    assert h_p1(-1) == (0, 0)
    assert h_p1(-4) == (0, 3)


def test_riemann_roch_and_serre_duality_on_hirzebruch_surfaces():
    rng = random.Random(1)
    for e in range(5):
        S = hirzebruch(e)
        K = S.canonical
        for _ in range(1000):
            C = HirzebruchClass(e, rng.randint(-8, 8), rng.randint(-15, 15))
            h0, h1, h2 = h_hirzebruch(e, C.a, C.b)
            assert min(h0, h1, h2) >= 0
            assert h0 - h1 + h2 == euler_characteristic(S, C)
            dual = K - C
            assert h_hirzebruch(e, dual.a, dual.b) == (h2, h1, h0)


def test_riemann_roch_and_serre_duality_on_the_quadric():
    rng = random.Random(2)
    S = quadric()
    for _ in range(1000):
        C = QuadricClass(rng.randint(-10, 10), rng.randint(-10, 10))
        h0, h1, h2 = h_quadric(C.a, C.b)
        assert h0 - h1 + h2 == euler_characteristic(S, C)
        dual = S.canonical - C
        assert h_quadric(dual.a, dual.b) == (h2, h1, h0)


def test_spot_values():
    assert h_quadric(0, -3)[1] == 2
    assert h_hirzebruch(2, 0, -3)[1] == 2
    assert h_hirzebruch(2, 1, 0)[1] == 1
    assert h_quadric(2, 4)[0] == 15
    assert h_hirzebruch(2, 2, 6)[0] == 15


def test_no_exact_cohomology_on_blown_up_planes():
    with pytest.raises(UnsupportedInput):
        line_bundle_cohomology(blown_plane(4), BlowupClass(3, (1, 1, 1, 1)))


def test_scroll_system_dimension_matches_balanced_model():
    rng = random.Random(4)
    for _ in range(200):
        r = rng.randint(3, 8)
        e = (r - 1) % 2
        a, b = rng.randint(0, 6), rng.randint(0, 8)
        pulled = scroll_to_hirzebruch(ScrollClass(r, a, b), e)
        assert dim_linear_system_scroll(r, a, b) == h_hirzebruch(e, pulled.a, pulled.b)[0] - 1


def test_scroll_system_dimension():
    assert dim_linear_system_scroll(5, 3, 3) == 39
    assert dim_linear_system_scroll(5, 5, -5) == 35
    assert dim_linear_system_scroll(5, 4, -1) == 39
    assert dim_linear_system_scroll(5, 0, -3) == -1
    with pytest.raises(InvalidClass):
        dim_linear_system_scroll(5, -1, 0)


def test_expected_dimension_of_plane_systems():
    result = expected_dim_blowup(BlowupClass(8, (3, 2, 2, 2)))
    assert result.value == 29
    assert result.assumes_non_special
    assert expected_dim_blowup(BlowupClass(9, (3, 3, 3, 3))).value == 30


def test_restriction_to_the_genus_16_curves():
    # X = 3H + 3L on the quadric and 5H - 5L on F_2, both restricted from 2H
    assert h0_restricted(hirzebruch(0), HirzebruchClass(0, 2, 4), HirzebruchClass(0, 3, 9)) == 15
    assert h0_restricted(hirzebruch(2), HirzebruchClass(2, 2, 6), HirzebruchClass(2, 5, 10)) == 16


def test_restriction_outside_its_regime():
    with pytest.raises(PreconditionFailed) as info:
        h0_restricted(hirzebruch(0), HirzebruchClass(0, 0, 1), HirzebruchClass(0, 0, 0))
    assert info.value.values["h0(M-C)"] == 2


def test_scrollar_invariants():
    assert scrollar_invariant(0, QuadricClass(4, 7)) == (7, 11)
    assert scrollar_invariant(2, HirzebruchClass(2, 4, 11)) == (5, 7)
    assert scrollar_invariant(0, HirzebruchClass(0, 5, 5)) == (5, 10)
    with pytest.raises(InvalidClass):
        scrollar_invariant(2, HirzebruchClass(0, 4, 7))


def test_maroni_strata():
    on_quadric = maroni_invariant(0, QuadricClass(3, 9))
    assert (on_quadric["scrollar"], on_quadric["maroni"], on_quadric["canonical_scroll_index"]) == (9, 7, 0)
    on_f2 = maroni_invariant(2, HirzebruchClass(2, 3, 12))
    assert (on_f2["scrollar"], on_f2["maroni"], on_f2["canonical_scroll_index"]) == (8, 6, 2)
    with pytest.raises(InvalidClass):
        maroni_invariant(0, QuadricClass(4, 7))


def test_twist_sequence():
    S = hirzebruch(0)
    H = HirzebruchClass(0, 1, 2)
    assert any(h1_twist_sequence(S, H, HirzebruchClass(0, 3, 9), range(0, 16)))
    assert not any(h1_twist_sequence(S, H, HirzebruchClass(0, 4, 7), range(0, 16)))


def test_scrollar_invariant_of_rational_classes():
    assert scrollar_invariant(0, HirzebruchClass(0, 2, 1)) == (1, 3)
    assert scrollar_invariant(1, HirzebruchClass(1, 2, 2)) == (1, 3)
