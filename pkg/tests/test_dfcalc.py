from dataclasses import replace
from fractions import Fraction as F

import pytest
from hypothesis import given, strategies as st

from kstab.dfcalc import (
    IntersectionTable,
    MissingFieldError,
    df_certificate,
    df_evaluate,
    df_log_evaluate,
    normal_cone_point_table,
    scale_table,
    validate_sign_lemmas,
)
from kstab.picard import DivisorClass, SurfaceModel

import oracles

P2 = SurfaceModel(0)
DP1 = SurfaceModel.dp1()

q = st.fractions(min_value=-20, max_value=20, max_denominator=12)
posq = st.fractions(min_value=F(1, 12), max_value=20, max_denominator=12)


@st.composite
def tables(draw, log=True):
    kw = dict(n=draw(st.integers(1, 4)), LK=draw(q), Ln=draw(posq), A=draw(q), B=draw(q), C=draw(q))
    if log:
        kw.update(Dn1=draw(q), BD=draw(q), Cexc=draw(q))
    return IntersectionTable(**kw)


def test_trivial_table():
    t = IntersectionTable(2, -3, 1, A=0, B=0, C=0, Dn1=3, BD=0, Cexc=0)
    assert df_evaluate(t) == 0
    for beta in (0, F(1, 3), 1):
        assert df_log_evaluate(t, beta) == 0


def test_normal_cone_examples():
    t = normal_cone_point_table(P2, P2.H())
    assert (t.LK, t.Ln, t.A, t.B, t.C) == (-3, 1, -1, 0, 2)
    assert df_evaluate(t) == 0
    assert df_evaluate(normal_cone_point_table(P2, DivisorClass(2, []))) == 12
    assert df_evaluate(normal_cone_point_table(P2, DivisorClass(3, []))) == 36
    t = normal_cone_point_table(DP1, DP1.anticanonical)
    assert (t.LK, t.Ln) == (-1, 1) and df_evaluate(t) == 4


@pytest.mark.parametrize("k", range(1, 21))
def test_normal_cone_against_symbolic_oracle(k):
    t = normal_cone_point_table(P2, DivisorClass(k, []))
    assert df_evaluate(t) == oracles.normal_cone_df(k) == 6 * k * k - 6 * k


def test_log_example():
    t = IntersectionTable(2, -3, 1, A=-1, B=0, C=2, Dn1=3, BD=0, Cexc=2)
    assert df_log_evaluate(t, F(1, 2)) == 3


def test_missing_fields():
    t = IntersectionTable(2, -3, 1)
    with pytest.raises(MissingFieldError):
        df_evaluate(t)
    with pytest.raises(MissingFieldError):
        df_log_evaluate(IntersectionTable(2, -3, 1, A=1, B=0, C=0), 1)
    with pytest.raises(MissingFieldError):
        IntersectionTable.from_json({"n": 2, "LK": "1"})


def test_normal_cone_needs_ample():
    with pytest.raises(ValueError):
        normal_cone_point_table(P2, DivisorClass(0, []))


def test_sign_lemmas():
    assert validate_sign_lemmas(normal_cone_point_table(P2, P2.H())).ok
    rep = validate_sign_lemmas(IntersectionTable(2, -3, 1, A=-1, B=0, C=2, LE_E=0))
    assert not rep.ok and any("E-positivity fails" in f for f in rep.flags)
    rep = validate_sign_lemmas(IntersectionTable(2, -3, 1, A=-1, B=0, C=2, LE_R=[F(1, 2)], LE_E=1))
    assert not rep.nef_pullbacks_ok


def test_certificate_labels_normalisation():
    c = df_certificate(normal_cone_point_table(P2, DivisorClass(2, [])))
    assert c.value == 12 and c.sign == 1 and "sign-meaningful" in c.normalisation


@given(tables())
def test_table_json_round_trip(t):
    assert IntersectionTable.from_json(t.to_json()) == t


@given(tables(log=False), st.sampled_from(["LK", "Ln", "A", "B", "C"]))
def test_affine_in_each_field(t, name):
    # with the other fields fixed, DF is affine in each one: equal steps give equal increments
    v = getattr(t, name) or F(1)
    f = [df_evaluate(replace(t, **{name: k * v})) for k in (1, 2, 3)]
    assert f[2] - f[1] == f[1] - f[0]


@given(tables())
def test_log_at_beta_one_is_plain(t):
    t = replace(t, Cexc=t.C)
    assert df_log_evaluate(t, 1) == df_evaluate(t)


@given(tables(), posq)
def test_scaling_multiplies_by_power(t, r):
    s = scale_table(t, r)
    assert df_evaluate(s) == r ** (2 * t.n) * df_evaluate(t)
    assert df_log_evaluate(s, F(1, 2)) == r ** (2 * t.n) * df_log_evaluate(t, F(1, 2))


@pytest.mark.parametrize("r", [2, 3])
@pytest.mark.parametrize("k", [1, 2, 3, 5])
def test_scaling_preserves_sign_on_normal_cone(r, k):
    t = normal_cone_point_table(P2, DivisorClass(k, []))
    a, b = df_evaluate(t), df_evaluate(scale_table(t, r))
    assert (a > 0) == (b > 0) and (a == 0) == (b == 0)
