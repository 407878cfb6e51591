from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from kstab.alpha import AlphaBound, dp1_alpha_lower
from kstab.exact import surd
from kstab.picard import DivisorClass, SurfaceModel
from kstab.stability import (
    DegeneratePolarisation,
    NotAmpleError,
    NumericalType,
    StabilityCertificate,
    Verdict,
    check_criterion,
    check_log_criterion,
    classify_numerical_type,
    max_certified_beta,
    numerical_type,
    openness_margins,
    slope,
)

DP1 = SurfaceModel.dp1()
SEXTIC = DivisorClass(6, [2] * 7 + [3])


def L(lam):
    return DivisorClass(3, [1] * 7 + [lam])


def test_slope_examples():
    assert slope(DP1, DP1.anticanonical) == 1
    assert slope(DP1, DP1.anticanonical * 2) == F(1, 2)
    for lam in (F(1, 2), F(1), F(6, 5)):
        assert slope(DP1, L(lam)) == (2 - lam) / (2 - lam * lam)
    with pytest.raises(DegeneratePolarisation):
        slope(SurfaceModel(1), DivisorClass(1, [1]))


def test_anticanonical_certified():
    c = check_criterion(DP1, DP1.anticanonical, 1)
    assert c.verdict is Verdict.CERTIFIED
    assert c.condition_i.margin == F(1, 3)
    assert c.condition_ii.tested_class == DP1.anticanonical * F(1, 3)


def test_six_fifths_inconclusive_on_condition_ii():
    lam = F(6, 5)
    c = check_criterion(DP1, L(lam), dp1_alpha_lower(lam, DP1))
    assert c.verdict is Verdict.INCONCLUSIVE
    assert c.condition_i.passed and not c.condition_ii.passed
    # E8 is the obstruction beyond sqrt(10) - 2
    assert c.condition_ii.nef.witness == DP1.E(8)


def test_zero_alpha_inconclusive():
    c = check_criterion(DP1, L(1), 0)
    assert not c.condition_i.passed and c.condition_i.margin == -c.threshold


def test_refuses_non_ample():
    with pytest.raises(NotAmpleError) as exc:
        check_criterion(DP1, L(F(4, 3)), 1)
    assert exc.value.result.witness == SEXTIC


def test_certificate_round_trip_and_audit():
    c = check_criterion(DP1, L(1), AlphaBound(1, None, "test bound"))
    assert StabilityCertificate.from_json(c.to_json()) == c
    trail = c.audit_trail()
    assert "Verdict: KStableCertified" in trail and "test bound" in trail


def test_log_examples():
    assert check_log_criterion(DP1, L(1), F(1, 2), F(3, 4) - F(1, 100)).condition_i.passed
    assert not check_log_criterion(DP1, L(1), F(1, 2), F(3, 4)).condition_i.passed
    c = check_log_criterion(DP1, L(1), F(1, 3), F(1, 4))
    assert c.condition_i.threshold == F(1, 6) and c.certified


def test_log_at_beta_one_matches_plain():
    plain = check_criterion(DP1, L(1), F(4, 5)).to_json()
    log = check_log_criterion(DP1, L(1), F(4, 5), 1).to_json()
    assert log.pop("beta") is not None
    plain.pop("beta")
    assert log == plain


def test_max_beta_examples():
    b = max_certified_beta(DP1, DP1.anticanonical, 1)
    assert b.value == 1 and b.attained
    b = max_certified_beta(DP1, DP1.anticanonical, F(1, 2))
    assert b.value == F(3, 4) and not b.attained
    assert max_certified_beta(DP1, L(1), F(2, 3)).value == 1
    b = max_certified_beta(DP1, L(F(6, 5)), 1)
    assert not b.certified and b.value is None


def test_numerical_types():
    assert classify_numerical_type(DP1, DP1.anticanonical) is NumericalType.FANO
    assert numerical_type(0, False, True) is NumericalType.CALABI_YAU
    assert numerical_type(-1, True, True) is NumericalType.INAPPLICABLE


def test_openness():
    rep = openness_margins(check_criterion(DP1, L(1), 1))
    assert rep.open and rep.margin_i == F(1, 3)
    edge = surd(-2, 1, 10)
    c = check_criterion(DP1, L(edge), 1)
    assert c.certified
    assert not openness_margins(c).strict_ii


def test_alpha_equal_to_threshold_not_certified():
    assert not check_criterion(DP1, DP1.anticanonical, F(2, 3)).certified


pos = st.fractions(min_value=F(1, 20), max_value=10, max_denominator=20)
lam = st.fractions(min_value=F(1, 300), max_value=F(397, 300), max_denominator=300)


@settings(max_examples=60, deadline=None)
@given(lam, pos, st.fractions(min_value=0, max_value=2, max_denominator=30))
def test_scaling_invariance(t, c, a):
    base = check_criterion(DP1, L(t), a)
    scaled = check_criterion(DP1, L(t) * c, a / c)
    assert base.verdict == scaled.verdict


@settings(max_examples=60, deadline=None)
@given(lam, st.fractions(min_value=0, max_value=2, max_denominator=30),
       st.fractions(min_value=0, max_value=1, max_denominator=30))
def test_log_monotone_in_beta(t, a, beta):
    # shrinking beta never loses a certificate
    if check_log_criterion(DP1, L(t), a, beta).certified:
        assert check_log_criterion(DP1, L(t), a, beta / 2).certified
