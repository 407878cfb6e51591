from fractions import Fraction as F

import pytest
from hypothesis import given, strategies as st

from kstab.alpha import (
    AlphaBound,
    FlagResolutionData,
    HypothesisError,
    alpha_add_ample_upper,
    alpha_scale,
    dp1_alpha_lower,
    flag_upper_bound,
    log_flag_upper_bound,
    perturbation_delta,
)
from kstab.picard import SurfaceModel

pos = st.fractions(min_value=F(1, 50), max_value=20, max_denominator=50)


def test_scaling_examples():
    assert alpha_scale(AlphaBound(1), 2).lower == F(1, 2)
    assert alpha_scale(AlphaBound(0), 7).lower == 0
    b = alpha_scale(AlphaBound(F(3, 4), 2), F(1, 3))
    assert (b.lower, b.upper) == (F(9, 4), 6)


def test_add_ample_keeps_only_upper():
    assert alpha_add_ample_upper(AlphaBound(None, 1)).upper == 1
    b = alpha_add_ample_upper(AlphaBound(F(1, 2)))
    assert b.lower is None and b.upper is None
    b = alpha_add_ample_upper(AlphaBound(F(1, 2), 3))
    assert b.lower is None and b.upper == 3


def test_bound_validation():
    with pytest.raises(ValueError):
        AlphaBound(-1)
    with pytest.raises(ValueError):
        AlphaBound(2, 1)
    b = AlphaBound(F(1, 3), 2, "test")
    assert AlphaBound.from_json(b.to_json()) == b


def test_perturbation_examples():
    assert perturbation_delta(1, 1, 1) == F(1, 3)
    assert perturbation_delta(F(1, 2), 2, F(3, 4)) == F(1, 2)
    with pytest.raises(ValueError):
        perturbation_delta(1, 0, 1)


@given(pos, pos, pos)
def test_perturbation_strictly_inside(eps, c, alpha):
    d = perturbation_delta(eps, c, alpha)
    assert 0 < d < c


def test_dp1_bound_examples():
    s = SurfaceModel.dp1()
    assert dp1_alpha_lower(1, s) == 1
    assert dp1_alpha_lower(0, s) == F(1, 2)
    assert dp1_alpha_lower(F(6, 5), s) == 1


@pytest.mark.parametrize("lam,surface", [
    (2, SurfaceModel.dp1()),
    (F(5, 2), SurfaceModel.dp1()),
    (-1, SurfaceModel.dp1()),
    (1, SurfaceModel(8)),
    (1, SurfaceModel(7, no_cuspidal_anticanonical=True)),
])
def test_dp1_bound_refusals(lam, surface):
    with pytest.raises(HypothesisError):
        dp1_alpha_lower(lam, surface)


def test_flag_examples():
    assert flag_upper_bound(FlagResolutionData([(2, 1, 1)])) == 2
    assert flag_upper_bound(FlagResolutionData([(0, 1, 1)])) == 0
    assert flag_upper_bound(FlagResolutionData([(2, 1, 1), (3, 1, 2)])) == F(3, 2)


def test_log_flag_examples():
    data = FlagResolutionData([(2, 1, 1, 1)])
    assert log_flag_upper_bound(data, 0) == 1
    assert log_flag_upper_bound(data, 1) == flag_upper_bound(data)
    assert log_flag_upper_bound(FlagResolutionData([(2, 1, 2, 2)]), F(1, 2)) == F(1, 2)


def test_flag_validation():
    with pytest.raises(ValueError):
        FlagResolutionData([(1, 1, 0)])
    with pytest.raises(ValueError):
        FlagResolutionData([(1, 1, 1, -1)])
    with pytest.raises(ValueError):
        FlagResolutionData([])
    data = FlagResolutionData([(2, 1, 1, F(1, 2)), (3, 1, 2)])
    assert FlagResolutionData.from_json(data.to_json()) == data


small = st.fractions(min_value=-5, max_value=5, max_denominator=6)
rows = st.lists(st.tuples(small, small, pos, st.fractions(min_value=0, max_value=5, max_denominator=6)),
                min_size=1, max_size=4)
unit = st.fractions(min_value=0, max_value=1, max_denominator=30)


@given(rows, unit, unit)
def test_log_flag_monotone_in_beta(rs, b1, b2):
    data = FlagResolutionData(rs)
    lo, hi = min(b1, b2), max(b1, b2)
    assert log_flag_upper_bound(data, lo) <= log_flag_upper_bound(data, hi)
