import random

import pytest

from engine import bounds
from engine.bounds import (
    LinearSeries,
    bounds_report,
    castelnuovo_severi,
    chi_expected,
    gonality_bn,
    grassmannian_dim,
    hurwitz_dim,
    lambda_,
    max_birational_dim,
    moduli_codim,
    pi,
    pi_1,
    residual_series,
    rho,
    small_codim_excess,
)
from engine.errors import BoundMismatch, SeriesError, UnsupportedInput


def test_castelnuovo_bound():
    expected = {(15, 5): 18, (15, 6): 13, (13, 4): 18, (12, 4): 15, (16, 7): 12, (5, 4): 1, (6, 4): 2}
    for (d, r), value in expected.items():
        assert pi(d, r) == value


def test_castelnuovo_bound_rejects_small_inputs():
    with pytest.raises(UnsupportedInput):
        pi(5, 2)
    with pytest.raises(UnsupportedInput):
        pi(3, 5)


def test_second_bound_in_p5():
    result = pi_1(15, 5)
    assert result.value == 16
    assert "delpezzo:(9;3^4)" in result.attained_by
    assert "elliptic-cone:k=3,m=0" in result.attained_by


def test_second_bound_in_p4():
    result = pi_1(13, 4)
    assert result.value == 15
    assert {"delpezzo:(9;3^4,2)", "delpezzo:(10;4^2,3^3)", "delpezzo:(11;4^5)",
            "elliptic-cone:k=3,m=1"} == set(result.attained_by)


def test_second_bound_disagreement_is_an_error(monkeypatch):
    monkeypatch.setitem(bounds.PI1_OVERRIDES, (15, 5), 17)
    with pytest.raises(BoundMismatch):
        pi_1(15, 5)


def test_second_bound_outside_p4_and_p5():
    with pytest.raises(UnsupportedInput):
        pi_1(15, 6)


def test_brill_noether_counts():
    assert rho(15, 16, 5) == -20
    assert lambda_(15, 16, 5) == 25
    assert [chi_expected(15, g, 5) for g in (10, 11, 12, 13, 15, 16)] == [72, 70, 68, 66, 62, 60]
    assert gonality_bn(12) == 7


def test_residual_series_is_an_involution():
    rng = random.Random(9)
    checked = 0
    while checked < 100:
        g = rng.randint(2, 30)
        d = rng.randint(0, 2 * g - 2)
        lo, hi = max(0, d - g + 1), min(d, g - 1)
        if lo > hi:
            continue
        L = LinearSeries(d=d, r=rng.randint(lo, hi), g=g)
        assert residual_series(residual_series(L)) == L
        checked += 1


def test_residual_series():
    assert str(residual_series(LinearSeries(15, 5, 13))) == "g^2_9"
    assert residual_series(LinearSeries(15, 5, 15)) == LinearSeries(13, 4, 15)
    with pytest.raises(SeriesError):
        residual_series(LinearSeries(15, 5, 5))
    with pytest.raises(SeriesError):
        LinearSeries(3, 5, 2)


def test_other_counts():
    assert castelnuovo_severi(2, 0, 3, 0) == 2
    assert max_birational_dim(15, 13) == 6
    assert max_birational_dim(15, 15) == 5
    assert grassmannian_dim(5, 6) == 6
    assert hurwitz_dim(13, 3) == 27
    assert moduli_codim(13, 27) == 9
    assert small_codim_excess(68, 66, 13, 27)
    assert not small_codim_excess(66, 66, 13, 27)


def test_bounds_report():
    assert bounds_report(15, 5).to_dict() == {"d": 15, "r": 5, "pi": 18, "pi1": 16}
    report = bounds_report(15, 5, 16).to_dict()
    assert report["chi"] == 60
    assert report["lambda"] == 25
    assert report["alpha"] == 6
    assert "pi1" not in bounds_report(15, 6).to_dict()


def test_castelnuovo_bound_is_monotone():
    for r in range(3, 9):
        for d in range(r, 40):
            assert pi(d + 1, r) >= pi(d, r)
            if d >= r + 1:
                assert pi(d, r + 1) <= pi(d, r)


def test_second_bound_never_exceeds_the_first():
    checked = 0
    for r in (4, 5):
        for d in range(5, 20):
            try:
                result = pi_1(d, r)
            except UnsupportedInput:
                continue
            assert result.value <= pi(d, r), (d, r, result)
            assert not any(label.startswith("elliptic-cone:k=1,") for label in result.attained_by)
            checked += 1
    assert checked >= 2


def test_hyperplane_sections_do_not_count_for_the_second_bound():
    try:
        result = pi_1(5, 5)
    except UnsupportedInput:
        return
    assert result.value <= pi(5, 5) == 0
    assert "elliptic-cone:k=1,m=0" not in result.attained_by


def test_expected_dimension_identities():
    rng = random.Random(31)
    for _ in range(300):
        r = rng.randint(3, 8)
        d = rng.randint(r, 40)
        g = rng.randint(0, 40)
        assert chi_expected(d, g, r) - lambda_(d, g, r) == r * r + 2 * r
        if rho(d, g, r) >= 0:
            assert chi_expected(d, g, r) >= 3 * g - 3 + r * r + 2 * r
