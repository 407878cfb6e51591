"""Univariate rational polynomials, Sturm sequences and exact real-root isolation."""
from __future__ import annotations

import functools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .scalar import (
    ExactScalar,
    QuadraticSurd,
    _as_fraction,
    display,
    scalar_cmp,
    scalar_sign,
    sqrt_exact,
)

MAX_DEGREE = 4


class UnsupportedDegreeError(ValueError):
    pass


def _trim(coeffs: Iterable) -> tuple[Fraction, ...]:
    c = [_as_fraction(x) for x in coeffs]
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


@dataclass(frozen=True)
class RatPoly:
    """Polynomial with Fraction coefficients in ascending order (``coeffs[i]`` multiplies ``x**i``).

    The zero polynomial has an empty coefficient tuple and degree -1.
    """

    coeffs: tuple[Fraction, ...]
    var: str = "t"

    def __init__(self, coeffs: Iterable = (), var: str = "t"):
        object.__setattr__(self, "coeffs", _trim(coeffs))
        object.__setattr__(self, "var", var)

    @classmethod
    def constant(cls, c, var: str = "t") -> "RatPoly":
        return cls([c], var)

    @classmethod
    def x(cls, var: str = "t") -> "RatPoly":
        return cls([0, 1], var)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def lead(self) -> Fraction:
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_constant(self) -> bool:
        return self.degree <= 0

    def __call__(self, x):
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    # ---- ring operations --------------------------------------------------
    def _lift(self, other) -> "RatPoly":
        if isinstance(other, RatPoly):
            return other
        return RatPoly([other], self.var)

    def __add__(self, other):
        o = self._lift(other)
        n = max(len(self.coeffs), len(o.coeffs))
        a = self.coeffs + (Fraction(0),) * (n - len(self.coeffs))
        b = o.coeffs + (Fraction(0),) * (n - len(o.coeffs))
        return RatPoly([x + y for x, y in zip(a, b)], self.var)

    __radd__ = __add__

    def __neg__(self):
        return RatPoly([-c for c in self.coeffs], self.var)

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        if not isinstance(other, RatPoly):
            k = _as_fraction(other)
            return RatPoly([c * k for c in self.coeffs], self.var)
        if self.is_zero() or other.is_zero():
            return RatPoly([], self.var)
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return RatPoly(out, self.var)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        out = RatPoly([1], self.var)
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other):
        if isinstance(other, RatPoly):
            return self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction)):
            return self.coeffs == _trim([other])
        return NotImplemented

    def __hash__(self):
        return hash(self.coeffs)

    def divmod(self, other: "RatPoly") -> tuple["RatPoly", "RatPoly"]:
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        q = [Fraction(0)] * max(len(rem) - len(other.coeffs) + 1, 0)
        dl = other.lead
        for k in range(len(q) - 1, -1, -1):
            c = rem[k + other.degree] / dl
            q[k] = c
            if c:
                for j, b in enumerate(other.coeffs):
                    rem[k + j] -= c * b
        return RatPoly(q, self.var), RatPoly(rem[: other.degree] if other.degree > 0 else [], self.var)

    def __mod__(self, other):
        return self.divmod(other)[1]

    def __floordiv__(self, other):
        return self.divmod(other)[0]

    def derivative(self) -> "RatPoly":
        return RatPoly([i * c for i, c in enumerate(self.coeffs)][1:], self.var)

    def monic(self) -> "RatPoly":
        if self.is_zero():
            return self
        return self * (1 / self.lead)

    def primitive(self) -> "RatPoly":
        """Integer-coefficient multiple with content 1 and positive leading coefficient."""
        if self.is_zero():
            return self
        den = math.lcm(*(c.denominator for c in self.coeffs))
        ints = [int(c * den) for c in self.coeffs]
        g = math.gcd(*ints)
        s = 1 if ints[-1] > 0 else -1
        return RatPoly([Fraction(s * v, g) for v in ints], self.var)

    def with_var(self, var: str) -> "RatPoly":
        return RatPoly(self.coeffs, var)

    # ---- display ------------------------------------------------------------
    def __str__(self) -> str:
        return self.format()

    def format(self, descending: bool = False) -> str:
        if self.is_zero():
            return "0"
        terms = []
        order = range(self.degree, -1, -1) if descending else range(self.degree + 1)
        for i in order:
            c = self.coeffs[i]
            if c == 0:
                continue
            mag = abs(c)
            if i == 0:
                body = display(mag)
            else:
                mono = self.var if i == 1 else f"{self.var}^{i}"
                body = mono if mag == 1 else f"{display(mag)}{mono}" if mag.denominator == 1 else f"({display(mag)}){mono}"
            terms.append(("-" if c < 0 else "+", body))
        first_sign, first = terms[0]
        out = ("-" if first_sign == "-" else "") + first
        for sgn, body in terms[1:]:
            out += f" {sgn} {body}"
        return out

    def __repr__(self) -> str:
        return f"RatPoly({self.format()!r})"

    def to_json(self) -> dict:
        return {"var": self.var, "coeffs": [display(c) for c in self.coeffs], "display": self.format()}

    @classmethod
    def from_json(cls, obj) -> "RatPoly":
        return cls([Fraction(c) for c in obj["coeffs"]], obj.get("var", "t"))


def poly_gcd(p: RatPoly, q: RatPoly) -> RatPoly:
    """Monic gcd (zero if both are zero)."""
    a, b = p, q
    while not b.is_zero():
        a, b = b, a % b
    return a.monic()


def squarefree_factors(p: RatPoly) -> list[tuple[RatPoly, int]]:
    """Yun's algorithm: ``p = c * prod(f_i ** i)`` with each ``f_i`` square-free and coprime."""
    if p.degree < 1:
        return []
    out = []
    a = p.monic()
    b = a.derivative()
    c = poly_gcd(a, b)
    w = a // c
    y = b // c
    i = 1
    while w.degree > 0:
        z = y - w.derivative()
        g = poly_gcd(w, z)
        if g.degree > 0:
            out.append((g, i))
        w = w // g
        y = z // g
        i += 1
    return out


def sturm_sequence(p: RatPoly) -> list[RatPoly]:
    seq = [p, p.derivative()]
    while not seq[-1].is_zero():
        r = seq[-2] % seq[-1]
        if r.is_zero():
            break
        seq.append(-r)
    return seq


def _variations(values: Sequence) -> int:
    signs = [s for s in (scalar_sign(v) for v in values) if s != 0]
    return sum(1 for u, v in zip(signs, signs[1:]) if u != v)


def _variations_at_infinity(seq: Sequence[RatPoly], positive: bool) -> int:
    vals = []
    for f in seq:
        if f.is_zero():
            continue
        lead_sign = 1 if f.lead > 0 else -1
        if not positive and f.degree % 2 == 1:
            lead_sign = -lead_sign
        vals.append(lead_sign)
    return _variations(vals)


def count_roots(seq: Sequence[RatPoly], lo, hi) -> int:
    """Distinct real roots in ``(lo, hi]`` for the Sturm sequence of a square-free polynomial.

    ``lo``/``hi`` are rationals or ``None`` for -inf / +inf.
    """
    vlo = _variations_at_infinity(seq, False) if lo is None else _variations([f(lo) for f in seq])
    vhi = _variations_at_infinity(seq, True) if hi is None else _variations([f(hi) for f in seq])
    return vlo - vhi


def root_bound(p: RatPoly) -> Fraction:
    """Cauchy bound: every real root lies strictly inside ``(-B, B)``."""
    lead = abs(p.lead)
    return 1 + max((abs(c) / lead for c in p.coeffs[:-1]), default=Fraction(0))


@dataclass(frozen=True, eq=False)
class IsolatedRoot:
    """The unique root of square-free ``poly`` inside the open interval ``(lo, hi)``.

    Neither endpoint is a root.  Used for roots of cubic and quartic factors
    that have no closed form here; comparisons refine the interval on demand.
    """

    poly: RatPoly
    lo: Fraction
    hi: Fraction

    def _seq(self):
        return sturm_sequence(self.poly)

    def refine(self, steps: int = 1) -> "IsolatedRoot":
        lo, hi = self.lo, self.hi
        p = self.poly
        slo = scalar_sign(p(lo))
        for _ in range(steps):
            mid = (lo + hi) / 2
            v = p(mid)
            if v == 0:
                # rational root: shrink to a tiny interval around it
                w = (hi - lo) / 4
                lo, hi = mid - w / 2, mid + w / 2
                slo = scalar_sign(p(lo))
                continue
            if scalar_sign(v) == slo:
                lo = mid
            else:
                hi = mid
        return IsolatedRoot(p, lo, hi)

    def bracket(self, bits: int) -> tuple[Fraction, Fraction]:
        r = self
        while r.hi - r.lo > Fraction(1, 1 << bits):
            r = r.refine(4)
        return r.lo, r.hi

    def __float__(self) -> float:
        lo, hi = self.bracket(60)
        return float((lo + hi) / 2)

    def sign_of(self, q: RatPoly) -> int:
        """Exact sign of ``q`` evaluated at this root."""
        if q.is_zero():
            return 0
        g = poly_gcd(self.poly, q)
        if g.degree > 0 and count_roots(sturm_sequence(g), self.lo, self.hi) > 0:
            return 0
        r = self
        qseq = sturm_sequence(q.monic()) if q.degree > 0 else None
        while qseq is not None:
            if q(r.lo) != 0 and q(r.hi) != 0 and count_roots(qseq, r.lo, r.hi) == 0:
                break
            r = r.refine(2)
        return scalar_sign(q((r.lo + r.hi) / 2))

    def _cmp_scalar(self, other) -> int:
        if isinstance(other, float):
            return -1 if other > 0 else 1
        if isinstance(other, IsolatedRoot):
            return self._cmp_root(other)
        if isinstance(other, (int, Fraction)):
            q = Fraction(other)
            if q <= self.lo:
                return 1
            if q >= self.hi:
                return -1
            if self.poly(q) == 0:
                return 0
            return 1 if count_roots(self._seq(), self.lo, q) == 0 else -1
        if isinstance(other, QuadraticSurd):
            if self.poly(other) == 0 and scalar_cmp(self.lo, other) < 0 and scalar_cmp(other, self.hi) < 0:
                return 0
            r = self
            while True:
                if scalar_cmp(other, r.lo) <= 0:
                    return 1
                if scalar_cmp(other, r.hi) >= 0:
                    return -1
                r = r.refine(2)
        raise TypeError(f"cannot compare IsolatedRoot with {type(other).__name__}")

    def _cmp_root(self, other: "IsolatedRoot") -> int:
        a, b = self, other
        g = poly_gcd(a.poly, b.poly)
        if g.degree > 0:
            lo, hi = max(a.lo, b.lo), min(a.hi, b.hi)
            if lo < hi and g(lo) != 0 and g(hi) != 0 and count_roots(sturm_sequence(g), lo, hi) > 0:
                return 0
        while True:
            if a.hi <= b.lo:
                return -1
            if b.hi <= a.lo:
                return 1
            # a common root sitting on a refined endpoint would stall; the gcd test above
            # is re-run with the narrower intervals.
            a, b = a.refine(2), b.refine(2)
            if g.degree > 0:
                lo, hi = max(a.lo, b.lo), min(a.hi, b.hi)
                if lo < hi and g(lo) != 0 and g(hi) != 0 and count_roots(sturm_sequence(g), lo, hi) > 0:
                    return 0

    def __eq__(self, other):
        if isinstance(other, (int, Fraction, QuadraticSurd, IsolatedRoot)):
            return scalar_cmp(self, other) == 0
        return NotImplemented

    __hash__ = None

    def __lt__(self, other):
        return scalar_cmp(self, other) < 0

    def __le__(self, other):
        return scalar_cmp(self, other) <= 0

    def __gt__(self, other):
        return scalar_cmp(self, other) > 0

    def __ge__(self, other):
        return scalar_cmp(self, other) >= 0

    def __str__(self) -> str:
        return f"root of {self.poly.format(descending=True)} in ({display(self.lo)}, {display(self.hi)})"

    def to_json(self) -> dict:
        return {"kind": "algebraic", "poly": self.poly.to_json(), "lo": display(self.lo),
                "hi": display(self.hi), "display": str(self), "approx": float(self)}

    @classmethod
    def from_json(cls, obj) -> "IsolatedRoot":
        return cls(RatPoly.from_json(obj["poly"]), Fraction(obj["lo"]), Fraction(obj["hi"]))


def _quadratic_roots(p: RatPoly) -> list[ExactScalar]:
    c, b, a = p.coeffs
    disc = b * b - 4 * a * c
    if disc < 0:
        return []
    s = sqrt_exact(disc)
    r1 = (-b - s) / (2 * a)
    r2 = (-b + s) / (2 * a)
    return sorted([r1, r2], key=functools.cmp_to_key(scalar_cmp))


def _isolate_squarefree(p: RatPoly) -> list[tuple[Fraction, Fraction]]:
    """Disjoint open intervals each holding one root of square-free ``p``, plus exact rational hits.

    Returns ``(lo, hi)`` pairs; a pair with ``lo == hi`` is an exact rational root.
    """
    seq = sturm_sequence(p)
    B = root_bound(p)
    out = []
    stack = [(-B, B)]
    while stack:
        lo, hi = stack.pop()
        n = count_roots(seq, lo, hi)
        if n == 0:
            continue
        if n == 1:
            if p(hi) == 0:
                out.append((hi, hi))
                continue
            # lo may be a root owned by the neighbouring interval
            while p(lo) == 0:
                mid = (lo + hi) / 2
                if p(mid) == 0:
                    lo = hi = mid
                    break
                if count_roots(seq, lo, mid) == 1:
                    hi = mid
                else:
                    lo = mid
            out.append((lo, hi))
            continue
        mid = (lo + hi) / 2
        stack.append((lo, mid))
        stack.append((mid, hi))
    return out


def _rational_root_in(p: RatPoly, lo: Fraction, hi: Fraction):
    """The rational root of ``p`` in ``(lo, hi)`` if there is one, else ``None``.

    A rational root has denominator dividing the primitive leading coefficient;
    once the interval is shorter than half the spacing of such fractions a single
    candidate remains, found by ``limit_denominator``.
    """
    prim = p.primitive()
    lead = int(abs(prim.lead))
    r = IsolatedRoot(p, lo, hi)
    target = Fraction(1, 2 * lead * lead)
    while r.hi - r.lo >= target:
        r = r.refine(4)
    cand = ((r.lo + r.hi) / 2).limit_denominator(lead)
    if r.lo < cand < r.hi and p(cand) == 0:
        return cand
    return None


def _roots_of_squarefree(p: RatPoly) -> list:
    if p.degree == 1:
        return [-p.coeffs[0] / p.coeffs[1]]
    if p.degree == 2:
        return _quadratic_roots(p)
    rational = []
    pending = []
    for lo, hi in _isolate_squarefree(p):
        if lo == hi:
            rational.append(lo)
            continue
        q = _rational_root_in(p, lo, hi)
        if q is not None:
            rational.append(q)
        else:
            pending.append((lo, hi))
    if not rational:
        return [IsolatedRoot(p, lo, hi) for lo, hi in pending]
    rest = p
    for q in rational:
        rest = rest // RatPoly([-q, 1], p.var)
    if rest.degree <= 2:
        tail = _roots_of_squarefree(rest) if rest.degree >= 1 else []
    else:
        tail = [IsolatedRoot(rest, lo, hi) for lo, hi in _isolate_squarefree(rest)]
    return list(rational) + tail


def isolate_roots(p: RatPoly) -> list[tuple[object, int]]:
    """All distinct real roots of ``p`` in increasing order, with multiplicities.

    Roots of linear and quadratic square-free factors come back in closed form
    (``Fraction`` or ``QuadraticSurd``); irrational roots of irreducible cubic or
    quartic factors come back as :class:`IsolatedRoot`.
    """
    if p.is_zero():
        raise ValueError("indeterminate sign everywhere: zero polynomial")
    if p.degree > MAX_DEGREE:
        raise UnsupportedDegreeError(f"degree {p.degree} exceeds supported maximum {MAX_DEGREE}")
    out = []
    for f, mult in squarefree_factors(p):
        out.extend((r, mult) for r in _roots_of_squarefree(f))
    out.sort(key=functools.cmp_to_key(lambda u, v: scalar_cmp(u[0], v[0])))
    return out


def sign_at(p: RatPoly, x) -> int:
    """Exact sign of ``p(x)`` for any exact scalar or isolated root."""
    if isinstance(x, IsolatedRoot):
        return x.sign_of(p)
    return scalar_sign(p(x))
