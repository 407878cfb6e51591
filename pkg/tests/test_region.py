import random
from fractions import Fraction as F

import pytest

from kstab.exact import AlgebraicInterval, RatPoly, surd
from kstab.picard import DivisorClass, SurfaceModel
from kstab.region import (
    AlphaPiece,
    FamilyError,
    PolarisationFamily,
    ample_domain,
    certified_region,
    constant_alpha,
    dp1_alpha_pieces,
    dp1_family,
    pointwise_certified,
    region_report,
)
from kstab.alpha import dp1_alpha_lower

S10 = surd(0, 1, 10)
LOWER = (10 - S10) / 9
UPPER = S10 - 2
DP1 = SurfaceModel.dp1()


def with_alpha(f: PolarisationFamily, pieces) -> PolarisationFamily:
    return PolarisationFamily(f.surface, f.base, f.direction, tuple(pieces), f.param, "test", "custom")


def test_ample_domain_dp1():
    assert ample_domain(dp1_family()) == [AlgebraicInterval.open(F(0), F(4, 3))]


def test_ample_domain_constant_family():
    f = PolarisationFamily(DP1, DP1.anticanonical, DivisorClass.zero(8), constant_alpha(1))
    assert ample_domain(f) == [AlgebraicInterval.real_line()]


def test_ample_domain_mirrors_with_direction():
    f = dp1_family()
    g = PolarisationFamily(DP1, f.base, -f.direction, constant_alpha(1), "t")
    assert ample_domain(g) == [AlgebraicInterval.open(F(-4, 3), F(0))]


def test_dp1_region():
    r = certified_region(dp1_family())
    assert r.intervals == (AlgebraicInterval.open(LOWER, UPPER),)
    assert r.solution == (AlgebraicInterval.closed(LOWER, UPPER),)
    lo, hi = r.bindings
    assert [c.witness for c in lo.constraints] == [DivisorClass(6, [2] * 7 + [3])]
    assert [c.witness for c in hi.constraints] == [DP1.E(8)]
    p, rel = lo.constraints[0].normalised()
    assert (p, rel) == (RatPoly([10, -20, 9], "lambda"), "<=")
    p, rel = hi.constraints[0].normalised()
    assert (p, rel) == (RatPoly([6, -4, -1], "lambda"), ">=")
    assert p(UPPER) == 0


def test_constant_family_region_is_everything():
    f = PolarisationFamily(DP1, DP1.anticanonical, DivisorClass.zero(8), constant_alpha(1))
    assert certified_region(f).intervals == (AlgebraicInterval.real_line(),)


def test_zero_alpha_gives_empty_region():
    f = with_alpha(dp1_family(), constant_alpha(0, "lambda"))
    r = certified_region(f)
    assert r.is_empty
    assert "no certified parameters" in region_report(r)


def test_degenerate_family_rejected():
    f = PolarisationFamily(DP1, DivisorClass.zero(8), DivisorClass.zero(8), constant_alpha(1))
    with pytest.raises(FamilyError):
        certified_region(f)


def test_denominator_sign_is_checked():
    bad = (AlphaPiece(AlgebraicInterval.open(F(0), F(2)), RatPoly([1]), RatPoly([-1, 1])),)
    f = with_alpha(dp1_family(param="t"), bad)
    with pytest.raises(FamilyError, match="vanishes"):
        certified_region(f)


def test_negative_denominator_is_flipped():
    # -1/(t-2) equals 1/(2-t): same region as the built-in bound
    pieces = list(dp1_alpha_pieces("lambda"))
    pieces[0] = AlphaPiece(pieces[0].domain, RatPoly([-1], "lambda"), RatPoly([-2, 1], "lambda"))
    r = certified_region(with_alpha(dp1_family(), pieces))
    assert r.intervals == (AlgebraicInterval.open(LOWER, UPPER),)


def test_report_contents():
    text = region_report(certified_region(dp1_family()))
    assert "((10-sqrt(10))/9, sqrt(10)-2)" in text
    assert "6 - 4lambda - lambda^2 >= 0" in text
    assert "10 - 20lambda + 9lambda^2 <= 0" in text
    assert "(approximate)" in text and "no cuspidal curve" in text


def test_alpha_pieces_match_library_bound():
    f = dp1_family()
    for k in range(0, 200):
        t = F(k, 100)
        assert f.alpha_at(t) == dp1_alpha_lower(t, DP1)


def test_pointwise_consistency():
    f = dp1_family()
    r = certified_region(f)
    rng = random.Random(7)
    probes = [F(rng.randint(1, 10 ** 4 - 1), 10 ** 4) * F(4, 3) for _ in range(150)]
    probes += [F(19, 25), F(29, 25), F(3, 4), F(7, 6), F(1), LOWER, UPPER]
    for t in probes:
        assert r.contains(t) == pointwise_certified(f, t)


def test_monotone_in_alpha():
    f = dp1_family()
    base = certified_region(f)
    up = [AlphaPiece(p.domain, p.num + p.den * F(1, 100), p.den) for p in f.pieces]
    bigger = certified_region(with_alpha(f, up))
    for iv in base.solution:
        for x in (iv.lo, iv.hi, F(1)):
            assert bigger.contains(x)


def test_region_json_is_complete():
    js = certified_region(dp1_family()).to_json()
    assert js["intervals"][0]["display"] == "((10-sqrt(10))/9, sqrt(10)-2)"
    assert js["intervals"][0]["lo"]["kind"] == "quadratic"
    assert len(js["boundary_certified"]) == 2
