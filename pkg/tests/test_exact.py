import math
from fractions import Fraction as F

import pytest
import sympy
from hypothesis import given, settings, strategies as st

from kstab.exact import (
    AlgebraicInterval,
    IsolatedRoot,
    MixedFieldError,
    QuadraticSurd,
    RatPoly,
    UnsupportedDegreeError,
    display,
    isolate_roots,
    parse_scalar,
    scalar_cmp,
    scalar_from_json,
    scalar_sign,
    scalar_to_json,
    simplest_between,
    solve_sign_system,
    sqrt_exact,
    squarefree_factors,
    surd,
)
from kstab.exact.solve import merge_union, union_contains

import oracles

S10 = surd(0, 1, 10)
LOWER = (10 - S10) / 9
UPPER = S10 - 2

rationals = st.fractions(min_value=-50, max_value=50, max_denominator=60)
squarefree = st.sampled_from([2, 3, 5, 6, 7, 10, 11, 13])


# ---- scalars ----------------------------------------------------------------

def test_surd_normalises_to_fraction():
    assert surd(3, 0, 5) == F(3)
    assert sqrt_exact(F(9, 4)) == F(3, 2)
    assert isinstance(surd(1, 2, 12), QuadraticSurd)
    assert surd(1, 2, 12) == surd(1, 4, 3)


def test_surd_arithmetic_exact():
    assert UPPER * UPPER == 14 - 4 * S10
    assert (UPPER + 2) ** 2 == F(10)
    assert (1 / UPPER) * UPPER == 1
    assert LOWER.conjugate() == (10 + S10) / 9


def test_cmp_against_29_25():
    # 29/25 = 1.16 sits just below sqrt(10) - 2 = 1.1622...
    assert scalar_cmp(UPPER, F(29, 25)) == 1
    assert scalar_cmp(F(29, 25), UPPER) == -1


def test_cmp_against_19_25():
    # (10 - sqrt(10))/9 = 0.7597..., 19/25 = 0.76
    assert scalar_cmp(LOWER, F(19, 25)) == -1


def test_cmp_identity():
    assert scalar_cmp(F(1, 3), F(1, 3)) == 0
    assert scalar_cmp(UPPER, UPPER) == 0


def test_cmp_across_fields():
    assert scalar_cmp(sqrt_exact(2), sqrt_exact(3)) == -1
    assert scalar_cmp(1 + sqrt_exact(2), sqrt_exact(5)) == 1  # 2.414 vs 2.236
    with pytest.raises(MixedFieldError):
        sqrt_exact(2) + sqrt_exact(3)


@given(rationals, rationals, squarefree, rationals, rationals, squarefree)
def test_cmp_matches_sympy(a, b, d, c, e, d2):
    x, y = surd(a, b, d), surd(c, e, d2)
    want = sympy.sign(oracles.sympy_value(x) - oracles.sympy_value(y))
    assert scalar_cmp(x, y) == int(want)


@given(rationals, rationals, squarefree)
def test_sign_matches_sympy(a, b, d):
    x = surd(a, b, d)
    assert scalar_sign(x) == int(sympy.sign(oracles.sympy_value(x)))


@given(rationals, rationals, squarefree)
def test_scalar_json_and_display_round_trip(a, b, d):
    x = surd(a, b, d)
    assert scalar_from_json(scalar_to_json(x)) == x
    assert parse_scalar(display(x)) == x


def test_display_forms():
    assert display(LOWER) == "(10-sqrt(10))/9"
    assert display(UPPER) == "sqrt(10)-2"
    assert display(F(-4, 3)) == "-4/3"
    assert display(math.inf) == "inf"


def test_parse_scalar_errors():
    for bad in ("", "1/0", "sqrt(-1)", "2**", "x"):
        with pytest.raises((ValueError, ZeroDivisionError)):
            parse_scalar(bad)


# ---- polynomials --------------------------------------------------------------

def lam_poly(*coeffs):
    return RatPoly(list(coeffs), "lambda")


def test_isolate_quadratic_examples():
    roots = isolate_roots(lam_poly(10, -20, 9))
    assert [r for r, _ in roots] == [LOWER, (10 + S10) / 9]
    assert [r for r, _ in isolate_roots(lam_poly(-1, 0, 1))] == [F(-1), F(1)]
    roots = [r for r, _ in isolate_roots(lam_poly(6, -4, -1))]
    assert roots == [-2 - S10, -2 + S10]


def test_isolate_multiplicities():
    p = RatPoly([-1, 1]) ** 2 * RatPoly([2, 0, -1])  # (t-1)^2 (2 - t^2)
    roots = isolate_roots(p)
    assert [m for _, m in roots] == [1, 2, 1]
    assert roots[1][0] == 1


def test_isolate_errors():
    with pytest.raises(ValueError, match="indeterminate"):
        isolate_roots(RatPoly([]))
    with pytest.raises(UnsupportedDegreeError):
        isolate_roots(RatPoly([1, 0, 0, 0, 0, 1]))


def test_cubic_roots_are_isolated_and_comparable():
    p = RatPoly([-2, 0, 0, 1])  # t^3 - 2
    (root, m), = isolate_roots(p)
    assert isinstance(root, IsolatedRoot) and m == 1
    assert root > F(125, 100) and root < F(126, 100)
    assert root < sqrt_exact(2) + F(1, 10) and root > sqrt_exact(F(3, 2))
    lo, hi = root.bracket(40)
    assert lo <= 2 ** (1 / 3) <= hi


coeff = st.integers(min_value=-9, max_value=9)


@settings(max_examples=150, deadline=None)
@given(st.lists(coeff, min_size=2, max_size=5))
def test_isolate_matches_sympy(cs):
    p = RatPoly(cs)
    if p.is_zero() or p.degree < 1:
        return
    ours = isolate_roots(p)
    theirs = oracles.sympy_real_roots(p.coeffs)
    distinct = sorted(set(theirs), key=lambda z: float(z))
    assert len(ours) == len(distinct)
    for (root, mult), ref in zip(ours, distinct):
        assert mult == theirs.count(ref)
        lo, hi = (root, root) if not isinstance(root, IsolatedRoot) else (root.lo, root.hi)
        if isinstance(root, IsolatedRoot):
            assert sympy.Rational(lo.numerator, lo.denominator) <= ref <= sympy.Rational(hi.numerator, hi.denominator)
        else:
            assert sympy.simplify(oracles.sympy_value(root) - ref) == 0


@given(st.lists(coeff, min_size=1, max_size=5), st.lists(coeff, min_size=1, max_size=4))
def test_divmod_identity(a, b):
    p, q = RatPoly(a), RatPoly(b)
    if q.is_zero():
        return
    quo, rem = p.divmod(q)
    assert quo * q + rem == p
    assert rem.is_zero() or rem.degree < q.degree


def test_squarefree_factors():
    p = RatPoly([-1, 1]) ** 3 * RatPoly([1, 0, 1])
    facs = squarefree_factors(p)
    assert {m for _, m in facs} == {1, 3}


def test_poly_json_round_trip():
    p = lam_poly(F(1, 2), 0, -3)
    assert RatPoly.from_json(p.to_json()) == p
    assert p.format() == "1/2 - 3lambda^2"


# ---- intervals and sign systems ---------------------------------------------

def test_interval_basics():
    iv = AlgebraicInterval.closed(LOWER, UPPER)
    assert str(iv) == "[(10-sqrt(10))/9, sqrt(10)-2]"
    assert iv.contains(1) and iv.contains(UPPER) and not iv.contains(F(29, 25) * 2)
    assert AlgebraicInterval.from_json(iv.to_json()) == iv
    assert iv.interior() == AlgebraicInterval.open(LOWER, UPPER)
    assert AlgebraicInterval.empty().is_empty


def test_solve_dp1_system():
    cons = [(lam_poly(6, -4, -1), ">="), (lam_poly(10, -20, 9), "<=")]
    got = solve_sign_system(cons, AlgebraicInterval.open(F(0), F(4, 3)))
    assert got == [AlgebraicInterval.closed(LOWER, UPPER)]


def test_solve_contradiction():
    cons = [(lam_poly(0, 1), ">"), (lam_poly(0, 1), "<")]
    assert solve_sign_system(cons, AlgebraicInterval.real_line()) == []


def test_solve_open_piece():
    got = solve_sign_system([(lam_poly(2, 2, -3), ">")], AlgebraicInterval.open(F(1), F(2)))
    assert got == [AlgebraicInterval.open(F(1), (1 + sqrt_exact(7)) / 3)]


def test_solve_rejects_high_degree():
    with pytest.raises(UnsupportedDegreeError):
        solve_sign_system([(RatPoly([0, 0, 0, 0, 0, 1]), ">")])


def test_simplest_between():
    assert simplest_between(F(3, 10), F(4, 10)) == F(1, 3)
    assert simplest_between(F(-1, 2), F(1, 2)) == 0


def test_merge_union_joins_touching_pieces():
    a = AlgebraicInterval(F(0), F(1), False, True)
    b = AlgebraicInterval(F(1), F(2), False, False)
    assert merge_union([b, a]) == [AlgebraicInterval.open(F(0), F(2))]


@settings(max_examples=80, deadline=None)
@given(st.lists(st.tuples(st.lists(coeff, min_size=2, max_size=4), st.sampled_from([">", ">=", "<", "<="])),
                min_size=1, max_size=3))
def test_solve_matches_probing(system):
    cons = [(RatPoly(c), rel) for c, rel in system if not RatPoly(c).is_zero()]
    if not cons:
        return
    got = solve_sign_system(cons)
    for k in range(-80, 81):
        x = F(k, 8)
        want = all(oracles.holds(oracles.horner(p.coeffs, x), rel) for p, rel in cons)
        assert union_contains(got, x) == want
