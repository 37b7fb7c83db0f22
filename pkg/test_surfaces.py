import random

import pytest

from engine.cohomology import h_hirzebruch
from engine.errors import EmptyLinearSystem, InvalidClass
from engine.lattice import BlowupClass, HirzebruchClass, arithmetic_genus, degree, intersect, neg_one_curves
from engine.surfaces import (
    CANDIDATE,
    CONTRACTED_CURVE,
    EXCLUDED,
    MULTISECANT_FIBER,
    OBSTRUCTED,
    VERY_AMPLE_CANDIDATE,
    ObstructionVerdict,
    contraction_obstruction,
    cremona_orbits,
    del_pezzo_classes,
    dual_model_checks,
    elliptic_cone_classes,
    fixed_part,
    multisecant_fiber_check,
    rational_cone_classes,
    scroll_classes,
    solution_label,
)


def _pairs(solutions):
    return {(s.divisor.a, s.divisor.b) for s in solutions}


def test_scroll_classes():
    assert _pairs(scroll_classes(15, 16, 5)) == {(3, 3), (5, -5)}
    assert scroll_classes(15, 17, 5) == []
    assert _pairs(scroll_classes(15, 18, 5)) == {(4, -1)}
    assert [solution_label(s) for s in scroll_classes(15, 16, 5)] == ["scroll:3H+3L", "scroll:5H-5L"]


def test_elliptic_cone_classes():
    triples = {(s.divisor.a, s.vertex_multiplicity, s.genus) for s in elliptic_cone_classes(13, 4)}
    assert triples == {(3, 1, 15), (2, 5, 10)}
    hyperplane = [s for s in elliptic_cone_classes(5, 5)]
    assert [(s.divisor.a, s.vertex_multiplicity, s.genus) for s in hyperplane] == [(1, 0, 1)]


def test_rational_cone_classes():
    found = rational_cone_classes(15, 5)
    assert [(s.divisor.a, s.vertex_multiplicity, s.genus) for s in found] == [(1, 11, 0), (2, 7, 10), (3, 3, 16)]
    assert not any(s.smooth_candidate for s in found)


def test_del_pezzo_classes_in_p4():
    labels = [solution_label(s) for s in del_pezzo_classes(13, 15, 15, 4)]
    assert labels == ["delpezzo:(9;3^4,2)", "delpezzo:(10;4^2,3^3)", "delpezzo:(11;4^5)"]


def test_del_pezzo_classes_in_p5():
    assert [s.divisor for s in del_pezzo_classes(15, 16, 16, 5)] == [BlowupClass(9, (3, 3, 3, 3))]
    genus_15 = del_pezzo_classes(15, 15, 15, 5)
    assert len(genus_15) == 3
    orbits = cremona_orbits(genus_15)
    assert list(orbits) == ["(8;3,2^3)"]
    assert genus_15[0].gonality_hint == 5


def test_pruned_search_matches_wide_search():
    for d, g_lo, g_hi, r in [(15, 10, 18, 5), (13, 10, 18, 4), (12, 8, 15, 4)]:
        pruned = [s.divisor for s in del_pezzo_classes(d, g_lo, g_hi, r)]
        wide = [s.divisor for s in del_pezzo_classes(d, g_lo, g_hi, r, prune=False)]
        assert pruned == wide


def test_del_pezzo_solutions_are_consistent():
    for s in del_pezzo_classes(15, 10, 16, 5):
        assert degree(s.surface, s.divisor) == 15
        assert arithmetic_genus(s.surface, s.divisor) == s.genus
        assert all(intersect(s.divisor, E) >= 0 for E in neg_one_curves(4))


def test_fixed_part():
    fixed, moving = fixed_part(1, HirzebruchClass(1, 3, 2))
    assert fixed == HirzebruchClass(1, 1, 0)
    assert moving == HirzebruchClass(1, 2, 2)
    fixed, moving = fixed_part(1, HirzebruchClass(1, 2, 3))
    assert fixed.is_zero()
    with pytest.raises(EmptyLinearSystem):
        fixed_part(1, HirzebruchClass(1, -1, 0))
    with pytest.raises(InvalidClass):
        fixed_part(2, HirzebruchClass(1, 3, 2))


def test_contraction_witnesses():
    v = contraction_obstruction(4, BlowupClass(9, (5, 2, 2, 2)), BlowupClass(4, (3, 1, 1, 1)))
    assert v.status == CONTRACTED_CURVE
    assert v.witness == BlowupClass(1, (1, 1, 0, 0))

    v = contraction_obstruction(5, BlowupClass(11, (4,) * 5), BlowupClass(5, (2,) * 5))
    assert v.status == CONTRACTED_CURVE
    assert v.witness == BlowupClass(2, (1,) * 5)

    v = contraction_obstruction(4, BlowupClass(8, (3, 2, 2, 2)), BlowupClass(3, (1, 1, 1, 1)))
    assert v.status == VERY_AMPLE_CANDIDATE
    assert not v.obstructed


def test_multisecant_fiber():
    v = multisecant_fiber_check(4, HirzebruchClass(4, 4, 13), HirzebruchClass(4, 1, 5))
    assert v.status == MULTISECANT_FIBER
    assert v.witness == HirzebruchClass(4, 0, 1)
    v = multisecant_fiber_check(4, HirzebruchClass(4, 2, 13), HirzebruchClass(4, 1, 5))
    assert v.status == VERY_AMPLE_CANDIDATE


def test_verdict_needs_a_witness():
    with pytest.raises(InvalidClass):
        ObstructionVerdict(status=CONTRACTED_CURVE)


def test_dual_models_of_the_genus_15_curves():
    checks = {f"{c.surface}:{c.divisor}": c for c in dual_model_checks(15, 15, 5)}
    assert checks["scroll(4):5H-2L"].outcome == CANDIDATE
    assert checks["scroll(4):5H-2L"].adjoint == "(3;1^4)"
    assert checks["scroll(4):3H+4L"].outcome == EXCLUDED
    assert checks["cone(4):4h+13f"].verdict.status == MULTISECANT_FIBER
    assert checks["cone(4):3h+13f"].outcome == EXCLUDED
    assert checks["elliptic-cone(4):3h+13f"].outcome == EXCLUDED
    smooth_del_pezzo = [c for c in checks.values() if c.surface == "delpezzo(4)" and c.nodes == 0]
    assert len(smooth_del_pezzo) == 3
    assert all(c.outcome == OBSTRUCTED for c in smooth_del_pezzo)


def test_dual_models_need_a_residual_in_p4():
    assert dual_model_checks(15, 16, 5) == []
    assert dual_model_checks(15, 10, 5) == []


def test_moving_part_has_no_removable_h_or_f():
    rng = random.Random(12)
    checked = 0
    while checked < 150:
        e = rng.randint(0, 4)
        c = HirzebruchClass(e, rng.randint(0, 5), rng.randint(-4, 10))
        if h_hirzebruch(e, c.a, c.b)[0] == 0:
            continue
        fixed, moving = fixed_part(e, c)
        assert fixed + moving == c
        top = h_hirzebruch(e, moving.a, moving.b)[0]
        assert top == h_hirzebruch(e, c.a, c.b)[0]
        for step in (HirzebruchClass(e, 1, 0), HirzebruchClass(e, 0, 1)):
            smaller = moving - step
            assert h_hirzebruch(e, smaller.a, smaller.b)[0] < top
        checked += 1


def test_adding_a_nef_class_keeps_a_candidate_unobstructed():
    rng = random.Random(77)
    checked = 0
    for _ in range(300):
        s = rng.randint(3, 5)
        C = BlowupClass(rng.randint(3, 12), tuple(rng.randint(0, 4) for _ in range(s)))
        M = BlowupClass(rng.randint(1, 6), tuple(rng.randint(0, 2) for _ in range(s)))
        if contraction_obstruction(s, C, M).obstructed:
            continue
        nef = [
            BlowupClass(1, (0,) * s),
            BlowupClass(1, (1,) + (0,) * (s - 1)),
            BlowupClass(3, (1,) * s),
        ]
        for N in nef:
            assert not contraction_obstruction(s, C, M + N).obstructed
        checked += 1
    assert checked > 0


def test_cone_solutions_round_trip_through_adjunction():
    for r in range(3, 7):
        for d in range(r, 19):
            for s in rational_cone_classes(d, r):
                m = d - (r - 1) * s.divisor.a
                assert m >= 0
                assert s.vertex_multiplicity == m
                assert degree(s.surface, s.divisor) == d
                C = s.divisor
                assert s.genus == 1 + (intersect(C, C) + intersect(C, s.surface.canonical)) // 2
            for s in elliptic_cone_classes(d, r):
                m = d - r * s.divisor.a
                assert m >= 0
                assert s.vertex_multiplicity == m
                assert degree(s.surface, s.divisor) == d
                C = s.divisor
                assert s.genus == 1 + (intersect(C, C) + intersect(C, s.surface.canonical)) // 2
