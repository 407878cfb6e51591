"""Intervals with algebraic endpoints and exact solution of one-variable sign systems."""
from __future__ import annotations

import functools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .poly import MAX_DEGREE, RatPoly, UnsupportedDegreeError, isolate_roots, sign_at
from .scalar import bracket, display, scalar_cmp, scalar_to_json, scalar_from_json

RELATIONS = (">", ">=", "<", "<=")


def _holds(sign: int, rel: str) -> bool:
    if rel == ">":
        return sign > 0
    if rel == ">=":
        return sign >= 0
    if rel == "<":
        return sign < 0
    if rel == "<=":
        return sign <= 0
    raise ValueError(f"unknown relation {rel!r}; expected one of {RELATIONS}")


@dataclass(frozen=True)
class AlgebraicInterval:
    """Interval of the real line; ``None`` endpoints are infinite (and always open).

    The empty interval is represented by equal endpoints that are not both closed.
    """

    lo: object = None
    hi: object = None
    lo_closed: bool = False
    hi_closed: bool = False

    def __post_init__(self):
        if self.lo is None and self.lo_closed:
            object.__setattr__(self, "lo_closed", False)
        if self.hi is None and self.hi_closed:
            object.__setattr__(self, "hi_closed", False)
        if self.lo is not None and self.hi is not None and scalar_cmp(self.lo, self.hi) > 0:
            raise ValueError(f"interval endpoints out of order: {display(self.lo)} > {display(self.hi)}")

    @classmethod
    def empty(cls) -> "AlgebraicInterval":
        return cls(Fraction(0), Fraction(0), False, False)

    @classmethod
    def real_line(cls) -> "AlgebraicInterval":
        return cls()

    @classmethod
    def open(cls, lo, hi) -> "AlgebraicInterval":
        return cls(lo, hi, False, False)

    @classmethod
    def closed(cls, lo, hi) -> "AlgebraicInterval":
        return cls(lo, hi, True, True)

    @property
    def is_empty(self) -> bool:
        if self.lo is None or self.hi is None:
            return False
        return scalar_cmp(self.lo, self.hi) == 0 and not (self.lo_closed and self.hi_closed)

    def contains(self, x) -> bool:
        if self.is_empty:
            return False
        if self.lo is not None:
            c = scalar_cmp(x, self.lo)
            if c < 0 or (c == 0 and not self.lo_closed):
                return False
        if self.hi is not None:
            c = scalar_cmp(x, self.hi)
            if c > 0 or (c == 0 and not self.hi_closed):
                return False
        return True

    __contains__ = contains

    def intersect(self, other: "AlgebraicInterval") -> "AlgebraicInterval":
        if self.is_empty or other.is_empty:
            return AlgebraicInterval.empty()
        lo, lo_c = _max_lower((self.lo, self.lo_closed), (other.lo, other.lo_closed))
        hi, hi_c = _min_upper((self.hi, self.hi_closed), (other.hi, other.hi_closed))
        if lo is not None and hi is not None:
            c = scalar_cmp(lo, hi)
            if c > 0 or (c == 0 and not (lo_c and hi_c)):
                return AlgebraicInterval.empty()
        return AlgebraicInterval(lo, hi, lo_c, hi_c)

    def interior(self) -> "AlgebraicInterval":
        if self.is_empty:
            return self
        if self.lo is not None and self.hi is not None and scalar_cmp(self.lo, self.hi) == 0:
            return AlgebraicInterval.empty()
        return AlgebraicInterval(self.lo, self.hi, False, False)

    def __eq__(self, other):
        if not isinstance(other, AlgebraicInterval):
            return NotImplemented
        if self.is_empty or other.is_empty:
            return self.is_empty and other.is_empty
        return (_end_eq(self.lo, other.lo) and _end_eq(self.hi, other.hi)
                and self.lo_closed == other.lo_closed and self.hi_closed == other.hi_closed)

    __hash__ = None

    def __str__(self) -> str:
        if self.is_empty:
            return "{}"
        if self.lo is not None and self.hi is not None and scalar_cmp(self.lo, self.hi) == 0:
            return "{" + display(self.lo) + "}"
        left = "[" if self.lo_closed else "("
        right = "]" if self.hi_closed else ")"
        lo = "-inf" if self.lo is None else display(self.lo) if not hasattr(self.lo, "poly") else str(self.lo)
        hi = "inf" if self.hi is None else display(self.hi) if not hasattr(self.hi, "poly") else str(self.hi)
        return f"{left}{lo}, {hi}{right}"

    def to_json(self) -> dict:
        if self.is_empty:
            return {"empty": True, "display": "{}"}
        return {
            "empty": False,
            "lo": None if self.lo is None else scalar_to_json(self.lo),
            "hi": None if self.hi is None else scalar_to_json(self.hi),
            "lo_closed": self.lo_closed,
            "hi_closed": self.hi_closed,
            "display": str(self),
        }

    @classmethod
    def from_json(cls, obj) -> "AlgebraicInterval":
        if obj.get("empty"):
            return cls.empty()
        lo = None if obj.get("lo") is None else scalar_from_json(obj["lo"])
        hi = None if obj.get("hi") is None else scalar_from_json(obj["hi"])
        return cls(lo, hi, bool(obj.get("lo_closed")), bool(obj.get("hi_closed")))


def _end_eq(a, b) -> bool:
    if a is None or b is None:
        return a is None and b is None
    return scalar_cmp(a, b) == 0


def _max_lower(a, b):
    if a[0] is None:
        return b
    if b[0] is None:
        return a
    c = scalar_cmp(a[0], b[0])
    if c != 0:
        return a if c > 0 else b
    return a[0], a[1] and b[1]


def _min_upper(a, b):
    if a[0] is None:
        return b
    if b[0] is None:
        return a
    c = scalar_cmp(a[0], b[0])
    if c != 0:
        return a if c < 0 else b
    return a[0], a[1] and b[1]


def simplest_between(lo: Fraction, hi: Fraction) -> Fraction:
    """Rational with the smallest denominator in the open interval ``(lo, hi)``."""
    if lo >= hi:
        raise ValueError("empty open interval")
    fl = math.floor(lo)
    if fl + 1 < hi:
        # an integer lies strictly inside; choose the one nearest zero
        if lo < 0 < hi:
            return Fraction(0)
        cand = Fraction(fl + 1)
        if hi <= 0:
            cand = Fraction(math.ceil(hi) - 1)
        return cand
    # continued-fraction descent on the fractional parts
    a, b = lo - fl, hi - fl
    if a == 0:
        # (0, b) with b <= 1: 1/n for the least n with 1/n < b
        n = math.floor(1 / b) + 1
        return fl + Fraction(1, n)
    inner = simplest_between(1 / b, 1 / a)
    return fl + 1 / inner


def rational_between(x, y) -> Fraction:
    """A simple rational strictly between exact values ``x < y`` (``None`` = infinite)."""
    if x is None and y is None:
        return Fraction(0)
    if x is None:
        return Fraction(math.floor(bracket(y, 1)[0]) - 1)
    if y is None:
        return Fraction(math.ceil(bracket(x, 1)[1]) + 1)
    bits = 8
    while True:
        xlo, xhi = bracket(x, bits)
        ylo, yhi = bracket(y, bits)
        if xhi < ylo:
            return simplest_between(xhi, ylo)
        bits *= 2
        if bits > 1 << 14:
            raise ArithmeticError("could not separate values; are they equal?")


def _sorted_unique(points: Iterable) -> list:
    pts = sorted(points, key=functools.cmp_to_key(scalar_cmp))
    out = []
    for p in pts:
        if not out or scalar_cmp(out[-1], p) != 0:
            out.append(p)
    return out


Constraint = tuple[RatPoly, str]


def _check_constraints(constraints: Sequence[Constraint]):
    for poly, rel in constraints:
        if rel not in RELATIONS:
            raise ValueError(f"unknown relation {rel!r}; expected one of {RELATIONS}")
        if poly.degree > MAX_DEGREE:
            raise UnsupportedDegreeError(
                f"constraint {poly} has degree {poly.degree} > {MAX_DEGREE}")


def satisfies(constraints: Sequence[Constraint], x) -> bool:
    """Exact test of every constraint at ``x``."""
    return all(_holds(sign_at(p, x), rel) for p, rel in constraints)


def critical_points(constraints: Sequence[Constraint]) -> list:
    pts = []
    for poly, _ in constraints:
        if poly.degree >= 1:
            pts.extend(r for r, _ in isolate_roots(poly))
    return _sorted_unique(pts)


def solve_sign_system(constraints: Sequence[Constraint],
                      domain: AlgebraicInterval | None = None) -> list[AlgebraicInterval]:
    """Exact solution set of ``p_k(x) REL_k 0`` for all k, within ``domain``.

    Returns disjoint intervals in increasing order.  Endpoints are closed exactly
    when the endpoint itself satisfies every constraint (and lies in the domain).
    """
    _check_constraints(constraints)
    domain = AlgebraicInterval.real_line() if domain is None else domain
    if domain.is_empty:
        raise ValueError("solve_sign_system needs a non-empty domain")

    pts = critical_points(constraints)
    if domain.lo is not None:
        pts.append(domain.lo)
    if domain.hi is not None:
        pts.append(domain.hi)
    pts = [p for p in _sorted_unique(pts)
           if (domain.lo is None or scalar_cmp(p, domain.lo) >= 0)
           and (domain.hi is None or scalar_cmp(p, domain.hi) <= 0)]

    # cells alternate: gap, point, gap, point, ..., gap
    cells: list[tuple[str, object, object, bool]] = []
    edges = [None] + pts + [None]
    for i in range(len(edges) - 1):
        a, b = edges[i], edges[i + 1]
        # gap (a, b); skip gaps outside the domain
        outside = (domain.lo is not None and a is None) or (domain.hi is not None and b is None)
        if not outside and (a is None or b is None or scalar_cmp(a, b) < 0):
            sample = rational_between(a, b)
            cells.append(("gap", a, b, satisfies(constraints, sample)))
        if i < len(pts):
            p = pts[i]
            cells.append(("point", p, p, domain.contains(p) and satisfies(constraints, p)))

    out: list[AlgebraicInterval] = []
    run: list = []
    for cell in cells + [("end", None, None, False)]:
        if cell[3]:
            run.append(cell)
            continue
        if run:
            first, last = run[0], run[-1]
            lo_closed = first[0] == "point"
            hi_closed = last[0] == "point"
            out.append(AlgebraicInterval(first[1], last[2], lo_closed, hi_closed))
            run = []
    return out


def union_contains(intervals: Sequence[AlgebraicInterval], x) -> bool:
    return any(iv.contains(x) for iv in intervals)


def intersect_unions(a: Sequence[AlgebraicInterval], b: Sequence[AlgebraicInterval]) -> list[AlgebraicInterval]:
    out = []
    for u in a:
        for v in b:
            w = u.intersect(v)
            if not w.is_empty:
                out.append(w)
    out.sort(key=functools.cmp_to_key(_cmp_intervals))
    return out


def _cmp_intervals(u: AlgebraicInterval, v: AlgebraicInterval) -> int:
    if u.lo is None or v.lo is None:
        return (u.lo is not None) - (v.lo is not None)
    c = scalar_cmp(u.lo, v.lo)
    if c:
        return c
    return (not u.lo_closed) - (not v.lo_closed)


def merge_union(intervals: Sequence[AlgebraicInterval]) -> list[AlgebraicInterval]:
    """Sort and merge overlapping or touching intervals into a disjoint union."""
    ivs = sorted((iv for iv in intervals if not iv.is_empty), key=functools.cmp_to_key(_cmp_intervals))
    out: list[AlgebraicInterval] = []
    for iv in ivs:
        if not out:
            out.append(iv)
            continue
        cur = out[-1]
        if cur.hi is None:
            continue
        c = None if iv.lo is None else scalar_cmp(iv.lo, cur.hi)
        joins = c is None or c < 0 or (c == 0 and (cur.hi_closed or iv.lo_closed))
        if not joins:
            out.append(iv)
            continue
        if iv.hi is None:
            hi, hi_c = None, False
        else:
            d = scalar_cmp(iv.hi, cur.hi)
            if d > 0:
                hi, hi_c = iv.hi, iv.hi_closed
            elif d < 0:
                hi, hi_c = cur.hi, cur.hi_closed
            else:
                hi, hi_c = cur.hi, cur.hi_closed or iv.hi_closed
        out[-1] = AlgebraicInterval(cur.lo, hi, cur.lo_closed, hi_c)
    return out
