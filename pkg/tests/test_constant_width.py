import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from crofton3d.errors import DomainError
from crofton3d.measures import constant_width_bounds, lower_bound_positivity_root
from crofton3d.measures.constant_width import JUNG_MIN_RATIO, exterior_lower_factor
from crofton3d.measures.exterior import ball_area_squared_integral, ball_slice_l2_integral

ratios = st.floats(JUNG_MIN_RATIO, 1.0)
widths = st.floats(0.1, 10.0)


def test_ball_equalities():
    b = constant_width_bounds(2.0, 1.0)
    assert b.slice_l2_upper == pytest.approx(32 * np.pi**3 / 3, rel=1e-14)
    assert b.slice_l2_upper == pytest.approx(ball_slice_l2_integral(1.0), rel=1e-12)
    assert b.exterior_area2_lower == pytest.approx(ball_area_squared_integral(1.0), rel=1e-12)
    assert b.exterior_area2_upper == pytest.approx(ball_area_squared_integral(1.0), rel=1e-12)
    assert b.remark_lower == 0 and b.remark_upper == 0
    assert (b.inradius, b.circumradius) == (1.0, 1.0)
    assert b.open_equality_question


def test_positivity_root():
    root = lower_bound_positivity_root()
    assert abs(root - 0.657) < 1e-3
    assert np.floor(root * 1000) / 1000 == 0.657
    assert root == pytest.approx(16 ** (-1 / 3) / (1 - 16 ** (-1 / 3)), abs=1e-9)
    assert exterior_lower_factor(root - 1e-6) < 0 < exterior_lower_factor(root + 1e-6)


@given(widths, ratios)
def test_bounds_are_ordered(a, c):
    b = constant_width_bounds(a, c)
    assert b.inradius + b.circumradius == pytest.approx(a)
    assert b.exterior_area2_lower <= b.exterior_area2_upper * (1 + 1e-12)
    assert b.exterior_area2_upper <= b.exterior_area2_upper_width_only * (1 + 1e-12)
    assert b.slice_l2_upper <= b.slice_l2_upper_jung * (1 + 1e-12)
    assert b.remark_lower <= 1e-15 and b.remark_upper >= -1e-15


def test_jung_ratio_recovers_width_only_bounds():
    b = constant_width_bounds(1.0, JUNG_MIN_RATIO)
    assert b.exterior_area2_upper == pytest.approx(b.exterior_area2_upper_width_only, rel=1e-12)
    assert b.slice_l2_upper == pytest.approx(b.slice_l2_upper_jung, rel=1e-12)


@given(widths, ratios, st.floats(0.5, 3.0))
def test_cubic_homogeneity_in_width(a, c, lam):
    b1, b2 = constant_width_bounds(a, c), constant_width_bounds(lam * a, c)
    assert b2.slice_l2_upper == pytest.approx(lam**3 * b1.slice_l2_upper, rel=1e-12)
    assert b2.exterior_area2_upper == pytest.approx(lam**3 * b1.exterior_area2_upper, rel=1e-12)


@pytest.mark.parametrize("a, c", [(0.0, 1.0), (-1.0, 1.0), (1.0, 0.5), (1.0, 1.01)])
def test_domain(a, c):
    with pytest.raises(DomainError):
        constant_width_bounds(a, c)
