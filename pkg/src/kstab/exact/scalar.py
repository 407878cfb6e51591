"""Exact real scalars: rationals and elements a + b*sqrt(d) of real quadratic fields.

Rationals are plain :class:`fractions.Fraction` values.  A genuinely irrational
quadratic number is a :class:`QuadraticSurd`; constructors normalise, so a surd
whose irrational part cancels comes back as a ``Fraction``.  Equality of two
normalised values is therefore structural, and ordering is decided by exact
sign analysis (no floating point anywhere in a comparison).
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import Union


class MixedFieldError(ArithmeticError):
    """Arithmetic between surds of different quadratic fields."""


def _sign(x) -> int:
    return (x > 0) - (x < 0)


def _as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, Rational)):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"not an exact rational: {x!r}")


def squarefree_decompose(n: int) -> tuple[int, int]:
    """Return ``(s, d)`` with ``n == s*s*d`` and ``d`` square-free (``n > 0``).

    Trial division runs up to the cube root; what remains has at most two prime
    factors above that bound, so it is square-free unless it is a perfect square.
    """
    if n <= 0:
        raise ValueError("squarefree_decompose needs a positive integer")
    s, d = 1, 1
    m = n
    p = 2
    while p * p * p <= m:
        if m % p == 0:
            e = 0
            while m % p == 0:
                m //= p
                e += 1
            s *= p ** (e // 2)
            if e % 2:
                d *= p
        p += 1 if p == 2 else 2
    r = math.isqrt(m)
    if r * r == m:
        s *= r
    else:
        d *= m
    return s, d


@dataclass(frozen=True)
class QuadraticSurd:
    """The real number ``a + b*sqrt(d)`` with ``b != 0`` and ``d >= 2`` square-free.

    Build instances with :func:`surd`, which normalises; the raw constructor
    assumes its arguments are already normal.
    """

    a: Fraction
    b: Fraction
    d: int

    # ---- arithmetic -------------------------------------------------------
    def _split(self, other):
        if isinstance(other, QuadraticSurd):
            if other.d != self.d:
                raise MixedFieldError(
                    f"cannot combine sqrt({self.d}) and sqrt({other.d}) arithmetically")
            return other.a, other.b
        if isinstance(other, (int, Fraction)):
            return Fraction(other), Fraction(0)
        return None

    def __add__(self, other):
        parts = self._split(other)
        if parts is None:
            return NotImplemented
        return surd(self.a + parts[0], self.b + parts[1], self.d)

    __radd__ = __add__

    def __neg__(self):
        return QuadraticSurd(-self.a, -self.b, self.d)

    def __pos__(self):
        return self

    def __sub__(self, other):
        parts = self._split(other)
        if parts is None:
            return NotImplemented
        return surd(self.a - parts[0], self.b - parts[1], self.d)

    def __rsub__(self, other):
        parts = self._split(other)
        if parts is None:
            return NotImplemented
        return surd(parts[0] - self.a, parts[1] - self.b, self.d)

    def __mul__(self, other):
        parts = self._split(other)
        if parts is None:
            return NotImplemented
        a2, b2 = parts
        return surd(self.a * a2 + self.b * b2 * self.d, self.a * b2 + self.b * a2, self.d)

    __rmul__ = __mul__

    def conjugate(self) -> "QuadraticSurd":
        return QuadraticSurd(self.a, -self.b, self.d)

    def norm(self) -> Fraction:
        """Field norm ``a^2 - d*b^2`` (never zero for a normalised surd)."""
        return self.a * self.a - self.d * self.b * self.b

    def inverse(self) -> "QuadraticSurd":
        n = self.norm()
        return QuadraticSurd(self.a / n, -self.b / n, self.d)

    def __truediv__(self, other):
        if isinstance(other, QuadraticSurd):
            return self * other.inverse()
        if isinstance(other, (int, Fraction)):
            if other == 0:
                raise ZeroDivisionError("division of surd by zero")
            return surd(self.a / other, self.b / other, self.d)
        return NotImplemented

    def __rtruediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.inverse() * Fraction(other)
        return NotImplemented

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return self.inverse() ** (-k)
        result = Fraction(1)
        base = self
        while k:
            if k & 1:
                result = base * result
            base = base * base
            k >>= 1
        return result

    def __abs__(self):
        return -self if self.sign() < 0 else self

    # ---- order ------------------------------------------------------------
    def sign(self) -> int:
        return _sign_single(self.a, self.b, self.d)

    def __lt__(self, other):
        c = _cmp_or_none(self, other)
        return NotImplemented if c is None else c < 0

    def __le__(self, other):
        c = _cmp_or_none(self, other)
        return NotImplemented if c is None else c <= 0

    def __gt__(self, other):
        c = _cmp_or_none(self, other)
        return NotImplemented if c is None else c > 0

    def __ge__(self, other):
        c = _cmp_or_none(self, other)
        return NotImplemented if c is None else c >= 0

    # ---- approximation (display only) -------------------------------------
    def bracket(self, bits: int) -> tuple[Fraction, Fraction]:
        """Rationals ``lo < self < hi`` with ``hi - lo <= 2**-bits``."""
        lo, hi = _sqrt_bracket(self.b * self.b * self.d, bits + 2)
        if self.b < 0:
            lo, hi = -hi, -lo
        return self.a + lo, self.a + hi

    def __float__(self) -> float:
        lo, hi = self.bracket(60)
        return float((lo + hi) / 2)

    def __str__(self) -> str:
        return display(self)

    def __repr__(self) -> str:
        return f"QuadraticSurd({display(self)})"


ExactScalar = Union[Fraction, QuadraticSurd]


def surd(a, b, d) -> ExactScalar:
    """Normalised ``a + b*sqrt(d)``; returns a ``Fraction`` when the result is rational."""
    a, b, d = _as_fraction(a), _as_fraction(b), int(d)
    if d < 0:
        raise ValueError("only real quadratic fields are supported (d >= 0)")
    if b == 0 or d == 0:
        return a
    s, core = squarefree_decompose(d)
    if core == 1:
        return a + b * s
    return QuadraticSurd(a, b * s, core)


def sqrt_exact(q) -> ExactScalar:
    """Exact square root of a non-negative rational."""
    q = _as_fraction(q)
    if q < 0:
        raise ValueError("square root of a negative rational")
    if q == 0:
        return Fraction(0)
    # sqrt(p/r) = sqrt(p*r)/r
    return surd(0, Fraction(1, q.denominator), q.numerator * q.denominator)


def exact(x) -> ExactScalar:
    """Coerce ints, strings and Fractions to an exact scalar; surds pass through."""
    if isinstance(x, QuadraticSurd):
        return x
    return _as_fraction(x)


def _sign_single(a: Fraction, b: Fraction, d: int) -> int:
    sa, sb = _sign(a), _sign(b)
    if sb == 0:
        return sa
    if sa == 0 or sa == sb:
        return sb
    c = _sign(a * a - b * b * d)
    return sa if c > 0 else (sb if c < 0 else 0)


def _sign_two_fields(p: Fraction, q: Fraction, d1: int, s: Fraction, d2: int) -> int:
    """Sign of ``p + q*sqrt(d1) + s*sqrt(d2)`` by squaring with sign tracking."""
    sa = _sign_single(p, q, d1)
    sb = _sign(s)
    if sb == 0:
        return sa
    if sa == 0:
        return sb
    if sa == sb:
        return sa
    # |p + q sqrt(d1)| vs |s| sqrt(d2): compare squares, both sides exact in Q(sqrt(d1))
    c = _sign_single(p * p + q * q * d1 - s * s * d2, 2 * p * q, d1)
    if c == 0:
        return 0
    return sa if c > 0 else sb


def scalar_sign(x) -> int:
    if isinstance(x, QuadraticSurd):
        return x.sign()
    return _sign(x)


def _cmp_or_none(x, y):
    if isinstance(y, float) and math.isinf(y):
        return -1 if y > 0 else 1
    if not isinstance(y, (int, Fraction, QuadraticSurd)):
        return None
    return scalar_cmp(x, y)


def scalar_cmp(x, y) -> int:
    """Exact three-way comparison: -1, 0 or 1.

    Accepts Fractions, ints, surds over any field, and objects providing a
    ``_cmp_scalar`` hook (isolated algebraic roots).  Float infinities are
    accepted as the unbounded endpoints.
    """
    if isinstance(x, float) or isinstance(y, float):
        if any(isinstance(v, float) and not math.isinf(v) for v in (x, y)):
            raise TypeError("finite floats are not exact scalars")
        xv = x if isinstance(x, float) else 0.0
        yv = y if isinstance(y, float) else 0.0
        return (xv > yv) - (xv < yv)
    if hasattr(x, "_cmp_scalar"):
        return x._cmp_scalar(y)
    if hasattr(y, "_cmp_scalar"):
        return -y._cmp_scalar(x)
    if isinstance(x, QuadraticSurd) and isinstance(y, QuadraticSurd):
        if x.d == y.d:
            return scalar_sign(x - y)
        return _sign_two_fields(x.a - y.a, x.b, x.d, -y.b, y.d)
    if isinstance(x, QuadraticSurd):
        return _sign_single(x.a - _as_fraction(y), x.b, x.d)
    if isinstance(y, QuadraticSurd):
        return -_sign_single(y.a - _as_fraction(x), y.b, y.d)
    return _sign(_as_fraction(x) - _as_fraction(y))


def _sqrt_bracket(q: Fraction, bits: int) -> tuple[Fraction, Fraction]:
    """Rationals bracketing sqrt(q) (q >= 0) to within 2**-bits."""
    num = q.numerator * q.denominator
    den = q.denominator
    scale = 1 << bits
    r = math.isqrt(num * scale * scale)
    lo = Fraction(r, den * scale)
    if r * r == num * scale * scale:
        return lo, lo
    return lo, Fraction(r + 1, den * scale)


def bracket(x, bits: int) -> tuple[Fraction, Fraction]:
    if isinstance(x, (int, Fraction)):
        x = Fraction(x)
        return x, x
    return x.bracket(bits)


def approx(x) -> float:
    """Float approximation for display; never used in a decision."""
    return float(x)


# ---- display and parsing -------------------------------------------------

def _frac_str(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def display(x) -> str:
    """Canonical ASCII form, e.g. ``(10-sqrt(10))/9`` or ``sqrt(10)-2``."""
    if isinstance(x, float) and math.isinf(x):
        return "inf" if x > 0 else "-inf"
    if hasattr(x, "_cmp_scalar"):
        return str(x)
    if not isinstance(x, QuadraticSurd):
        return _frac_str(_as_fraction(x))
    den = math.lcm(x.a.denominator, x.b.denominator)
    A = int(x.a * den)
    B = int(x.b * den)
    root = f"sqrt({x.d})"
    mag = abs(B)
    rterm = root if mag == 1 else f"{mag}*{root}"
    if A == 0:
        num = rterm if B > 0 else "-" + rterm
        single = True
    elif A < 0 and B > 0:
        num = f"{rterm}-{-A}"
        single = False
    else:
        num = f"{A}{'+' if B > 0 else '-'}{rterm}"
        single = False
    if den == 1:
        return num
    if single:
        return f"{num}/{den}"
    return f"({num})/{den}"


def parse_scalar(text: str) -> ExactScalar:
    """Parse the display grammar: integers, ``p/q``, ``sqrt(n)``, ``+ - * /`` and parentheses."""
    return _ScalarParser(text).parse()


class _ScalarParser:
    def __init__(self, text: str):
        self.s = text.replace(" ", "")
        self.i = 0

    def parse(self):
        if not self.s:
            raise ValueError("empty scalar expression")
        v = self.expr()
        if self.i != len(self.s):
            raise ValueError(f"unexpected {self.s[self.i:]!r} in scalar {self.s!r}")
        return v

    def peek(self):
        return self.s[self.i] if self.i < len(self.s) else ""

    def expr(self):
        v = self.term()
        while self.peek() in ("+", "-") and self.peek():
            op = self.s[self.i]
            self.i += 1
            w = self.term()
            v = v + w if op == "+" else v - w
        return v

    def term(self):
        v = self.unary()
        while self.peek() in ("*", "/") and self.peek():
            op = self.s[self.i]
            self.i += 1
            w = self.unary()
            v = v * w if op == "*" else v / w
        return v

    def unary(self):
        if self.peek() == "-":
            self.i += 1
            return -self.unary()
        if self.peek() == "+":
            self.i += 1
            return self.unary()
        return self.atom()

    def atom(self):
        if self.s.startswith("sqrt(", self.i):
            self.i += 5
            inner = self.expr()
            self.expect(")")
            if isinstance(inner, QuadraticSurd):
                raise ValueError("nested square roots are not supported")
            return sqrt_exact(inner)
        if self.peek() == "(":
            self.i += 1
            v = self.expr()
            self.expect(")")
            return v
        j = self.i
        while self.i < len(self.s) and self.s[self.i].isdigit():
            self.i += 1
        if j == self.i:
            raise ValueError(f"malformed scalar {self.s!r} at position {j}")
        return Fraction(int(self.s[j:self.i]))

    def expect(self, ch):
        if self.peek() != ch:
            raise ValueError(f"expected {ch!r} in scalar {self.s!r}")
        self.i += 1


def scalar_to_json(x) -> dict:
    if isinstance(x, float) and math.isinf(x):
        return {"kind": "infinity", "sign": 1 if x > 0 else -1, "display": display(x)}
    if isinstance(x, QuadraticSurd):
        return {"kind": "quadratic", "a": _frac_str(x.a), "b": _frac_str(x.b), "d": x.d,
                "display": display(x), "approx": float(x)}
    if hasattr(x, "to_json"):
        return x.to_json()
    q = _as_fraction(x)
    return {"kind": "rational", "p": q.numerator, "q": q.denominator, "display": display(q)}


def scalar_from_json(obj) -> ExactScalar:
    if isinstance(obj, (int, str)):
        return parse_scalar(str(obj))
    kind = obj.get("kind")
    if kind == "rational":
        return Fraction(int(obj["p"]), int(obj["q"]))
    if kind == "quadratic":
        return surd(Fraction(str(obj["a"])), Fraction(str(obj["b"])), int(obj["d"]))
    if kind == "infinity":
        return math.inf if obj.get("sign", 1) > 0 else -math.inf
    if kind == "algebraic":
        from .poly import IsolatedRoot
        return IsolatedRoot.from_json(obj)
    raise ValueError(f"unknown scalar kind {kind!r}")
