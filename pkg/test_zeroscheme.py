import random

import pytest
import sympy as sp

from engine.errors import InvalidClass, UnsupportedInput
from engine.zeroscheme import (
    FatPoint,
    LinePair,
    PlanePoint,
    SmoothConic,
    ZeroScheme,
    collinearity_h1_criterion,
    conditions_matrix,
    contained_in_line,
    h_ideal,
    ideal_cohomology,
    line_intersection_degree,
    plane_model_genus,
    random_configuration,
    random_line,
    residual_conic,
    residual_line,
    scheme_from_json,
    singular_point_pencils,
)


def _collinear_six():
    return ZeroScheme(tuple(FatPoint(PlanePoint.of(x, 0)) for x in range(6)))


def test_general_double_point_plus_three_points():
    rng = random.Random(2024)
    for _ in range(20):
        Z = random_configuration(rng, simple=3, fat=[2])
        assert Z.degree == 6
        assert h_ideal(Z, 2) == (0, 0)
        assert h_ideal(Z, 4) == (9, 0)


def test_six_collinear_points_fail_on_quartics():
    Z = _collinear_six()
    assert h_ideal(Z, 4) == (10, 1)
    assert collinearity_h1_criterion(Z)
    assert contained_in_line(Z)


def test_general_six_points_impose_independent_conditions():
    rng = random.Random(17)
    Z = random_configuration(rng, simple=6)
    assert h_ideal(Z, 4) == (9, 0)
    assert not collinearity_h1_criterion(Z)
    assert not contained_in_line(Z)


def test_criterion_needs_degree_six():
    with pytest.raises(UnsupportedInput):
        collinearity_h1_criterion(ZeroScheme((FatPoint(PlanePoint.of(0, 0), 2),)))


def test_residual_line_is_additive_in_degree():
    rng = random.Random(8)
    for _ in range(100):
        Z = random_configuration(rng, simple=rng.randint(0, 3), fat=[rng.randint(1, 3) for _ in range(2)])
        if rng.random() < 0.5:
            p, q = Z.points[0].point.coords, Z.points[1].point.coords
            line = tuple(sp.Matrix(p).cross(sp.Matrix(q)))
        else:
            line = random_line(rng)
        assert Z.degree == line_intersection_degree(Z, line) + residual_line(Z, line).degree


def test_residual_line():
    Z = scheme_from_json([
        {"point": [0, 0, 1], "m": 2},
        {"point": [1, 0, 1]},
        {"point": [0, 1, 1]},
    ])
    R = residual_line(Z, (0, 1, 0))
    assert R.to_json() == [{"point": ["0", "0", "1"], "m": 1}, {"point": ["0", "1", "1"], "m": 1}]
    with pytest.raises(InvalidClass):
        residual_line(Z, (0, 0, 0))


def test_residual_conic():
    Z = ZeroScheme((
        FatPoint(PlanePoint.of(0, 0), 3),
        FatPoint(PlanePoint.of(1, 0), 2),
        FatPoint(PlanePoint.of(5, 7), 1),
    ))
    # the two axes x = 0 and y = 0
    axes = LinePair((1, 0, 0), (0, 1, 0))
    R = residual_conic(Z, axes)
    assert [(fp.point, fp.m) for fp in R.points] == [
        (PlanePoint.of(0, 0), 1),
        (PlanePoint.of(1, 0), 1),
        (PlanePoint.of(5, 7), 1),
    ]
    # x^2 + y^2 = z^2 through (1, 0)
    circle = SmoothConic(((1, 0, 0), (0, 1, 0), (0, 0, -1)))
    assert residual_conic(Z, circle).degree == Z.degree - 2
    with pytest.raises(UnsupportedInput):
        SmoothConic(((1, 0, 0), (0, 0, 0), (0, 0, 0)))
    with pytest.raises(UnsupportedInput):
        LinePair((1, 0, 0), (2, 0, 0))


def test_points_and_schemes():
    assert PlanePoint((2, 4, 2)) == PlanePoint.of(1, 2)
    assert PlanePoint(("1/2", 0, 1)).to_json() == ["1", "0", "2"]
    with pytest.raises(InvalidClass):
        PlanePoint((0, 0, 0))
    with pytest.raises(InvalidClass):
        ZeroScheme((FatPoint(PlanePoint.of(1, 1)), FatPoint(PlanePoint((2, 2, 2)))))
    with pytest.raises(InvalidClass):
        FatPoint(PlanePoint.of(0, 0), 0)


def test_conditions_do_not_depend_on_the_chart():
    Z = ZeroScheme((FatPoint(PlanePoint((1, 1, 1)), 2), FatPoint(PlanePoint((1, 2, 3)), 1)))
    ranks = {conditions_matrix(Z, 3, chart=c).rank() for c in range(3)}
    assert ranks == {4}


def test_ideal_cohomology_report():
    result = ideal_cohomology(ZeroScheme(), 2)
    assert result.to_dict() == {"h0": 6, "h1": 0, "rank": 0, "deg": 0}


def test_plane_models():
    assert plane_model_genus(8, [3, 2, 2, 2]) == 15
    assert plane_model_genus(9, [3, 3, 3, 3]) == 16
    assert plane_model_genus(9, [2] * 15) == 13
    assert singular_point_pencils(8, [3, 2, 2, 2]) == [5, 6, 6, 6, 7]
    with pytest.raises(InvalidClass):
        plane_model_genus(5, [5])


def test_no_conditions_fail_from_degree_minus_one_on():
    rng = random.Random(41)
    for _ in range(15):
        Z = random_configuration(rng, simple=rng.randint(1, 3), fat=[rng.randint(1, 2)])
        for t in (Z.degree - 1, Z.degree):
            assert h_ideal(Z, t)[1] == 0


def test_sections_are_bounded_by_the_residual_sequence():
    rng = random.Random(55)
    for _ in range(40):
        Z = random_configuration(rng, simple=rng.randint(0, 3), fat=[rng.randint(1, 3), rng.randint(1, 2)])
        if rng.random() < 0.5:
            p, q = Z.points[0].point.coords, Z.points[1].point.coords
            line = tuple(sp.Matrix(p).cross(sp.Matrix(q)))
        else:
            line = random_line(rng)
        t = rng.randint(1, 5)
        on_line = max(0, t + 1 - line_intersection_degree(Z, line))
        assert h_ideal(Z, t)[0] <= h_ideal(residual_line(Z, line), t - 1)[0] + on_line


def test_points_reject_floating_coordinates():
    with pytest.raises(InvalidClass):
        PlanePoint((0.1, 0, 1))
    with pytest.raises(InvalidClass):
        scheme_from_json([{"point": [0.5, 1, 1], "m": 1}])
