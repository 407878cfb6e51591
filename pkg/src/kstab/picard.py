"""Picard lattice of the plane blown up in r <= 8 general points.

Classes are written ``D = h*H - sum(e_i * E_i)``; the stored ``e`` tuple holds the
subtracted multiplicities, so the exceptional class ``E_1`` has ``e = (-1, 0, ...)``.
The intersection form is ``H^2 = 1``, ``E_i.E_j = -delta_ij``, ``H.E_i = 0``.
"""
from __future__ import annotations

import itertools
import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from .exact import display, exact, scalar_cmp, scalar_sign

MAX_POINTS = 8


class DimensionError(ValueError):
    pass


def _num(x):
    return exact(x)


@dataclass(frozen=True)
class DivisorClass:
    h: object
    e: tuple

    def __init__(self, h, e: Iterable = ()):
        object.__setattr__(self, "h", _num(h))
        object.__setattr__(self, "e", tuple(_num(x) for x in e))

    @property
    def r(self) -> int:
        return len(self.e)

    @classmethod
    def zero(cls, r: int) -> "DivisorClass":
        return cls(0, [0] * r)

    @classmethod
    def hyperplane(cls, r: int) -> "DivisorClass":
        return cls(1, [0] * r)

    @classmethod
    def exceptional(cls, i: int, r: int) -> "DivisorClass":
        """The class ``E_i`` (1-based)."""
        if not 1 <= i <= r:
            raise DimensionError(f"E{i} does not exist on a surface with r={r}")
        e = [0] * r
        e[i - 1] = -1
        return cls(0, e)

    @classmethod
    def anticanonical(cls, r: int) -> "DivisorClass":
        return cls(3, [1] * r)

    def _check(self, other: "DivisorClass"):
        if self.r != other.r:
            raise DimensionError(f"classes live on different surfaces (r={self.r} vs r={other.r})")

    def dot(self, other: "DivisorClass"):
        self._check(other)
        acc = self.h * other.h
        for a, b in zip(self.e, other.e):
            acc = acc - a * b
        return acc

    def __add__(self, other):
        if not isinstance(other, DivisorClass):
            return NotImplemented
        self._check(other)
        return DivisorClass(self.h + other.h, [a + b for a, b in zip(self.e, other.e)])

    def __sub__(self, other):
        if not isinstance(other, DivisorClass):
            return NotImplemented
        self._check(other)
        return DivisorClass(self.h - other.h, [a - b for a, b in zip(self.e, other.e)])

    def __neg__(self):
        return DivisorClass(-self.h, [-a for a in self.e])

    def __mul__(self, c):
        if isinstance(c, DivisorClass):
            return NotImplemented
        c = _num(c)
        return DivisorClass(self.h * c, [a * c for a in self.e])

    __rmul__ = __mul__

    def is_zero(self) -> bool:
        return self.h == 0 and all(a == 0 for a in self.e)

    def sort_key(self):
        return (self.h,) + self.e

    def __str__(self) -> str:
        return format_divisor(self)

    def to_json(self) -> dict:
        # signed-sum form: coefficient of E_i is -e_i
        return {"r": self.r, "H": display(self.h),
                "E": [display(-a) for a in self.e], "display": format_divisor(self)}

    @classmethod
    def from_json(cls, obj) -> "DivisorClass":
        from .exact import parse_scalar
        return cls(parse_scalar(str(obj["H"])), [-parse_scalar(str(c)) for c in obj["E"]])


def _term(coeff, symbol: str) -> tuple[str, str]:
    sgn = "-" if scalar_sign(coeff) < 0 else "+"
    mag = -coeff if sgn == "-" else coeff
    if mag == 1:
        return sgn, symbol
    text = display(mag)
    if not text.replace("/", "").isdigit():
        text = f"({text})"
    return sgn, f"{text} {symbol}" if "/" in text else f"{text}{symbol}"


def format_divisor(d: DivisorClass) -> str:
    """Signed-sum display accepted by :func:`parse_divisor`, e.g. ``3H - E1 - 4/3 E8``."""
    terms = []
    if d.h != 0:
        terms.append(_term(d.h, "H"))
    for i, a in enumerate(d.e, start=1):
        if a != 0:
            terms.append(_term(-a, f"E{i}"))
    if not terms:
        return "0"
    sgn, body = terms[0]
    out = ("-" if sgn == "-" else "") + body
    for sgn, body in terms[1:]:
        out += f" {sgn} {body}"
    return out


_TERM = re.compile(
    r"""\s*(?P<sign>[+-])?\s*
        (?P<coeff>\d+(?:/\d+)?)?\s*\*?\s*
        (?P<param>[A-Za-z_]\w*?)?\s*\*?\s*
        (?P<sym>H|E\d+)\s*""",
    re.VERBOSE,
)
_ELLIPSIS = re.compile(r"\s*(?P<sign>[+-])?\s*(\.\.\.|…)\s*")


def parse_linear_divisor(text: str, r: int, param: str | None = None) -> tuple[DivisorClass, DivisorClass]:
    """Parse ``base + param*direction`` from text such as ``3H-E1-...-E7 - t*E8``.

    Terms are ``[sign][coeff][*][param][*](H|E<k>)``; coefficients are integers or
    ``p/q``.  ``...`` between two exceptional terms with equal coefficients fills in
    the indices between them.  Returns ``(base, direction)``.
    """
    base_h, dir_h = Fraction(0), Fraction(0)
    base_e = [Fraction(0)] * r
    dir_e = [Fraction(0)] * r
    s = text.strip()
    if not s:
        raise ValueError("empty divisor expression")
    if s == "0":
        return DivisorClass(base_h, base_e), DivisorClass(dir_h, dir_e)
    pos = 0
    terms = []
    pending_ellipsis = False
    while pos < len(s):
        m = _ELLIPSIS.match(s, pos)
        if m and m.end() > pos:
            pending_ellipsis = True
            pos = m.end()
            continue
        m = _TERM.match(s, pos)
        if not m or m.end() == pos:
            raise ValueError(f"cannot parse divisor near {s[pos:]!r}; grammar: signed sum of "
                             f"'[coeff] H' and '[coeff] E<k>' terms, coeff like 4/3")
        if m.group("sign") is None and terms:
            raise ValueError(f"missing '+' or '-' before {m.group(0).strip()!r}")
        sign = -1 if m.group("sign") == "-" else 1
        try:
            coeff = Fraction(m.group("coeff")) if m.group("coeff") else Fraction(1)
        except ZeroDivisionError:
            raise ValueError(f"malformed rational {m.group('coeff')!r}") from None
        p = m.group("param")
        if p is not None and (param is None or p != param):
            raise ValueError(f"unknown symbol {p!r} in divisor expression")
        sym = m.group("sym")
        term = (sign * coeff, p is not None, sym)
        if pending_ellipsis:
            if not terms or not sym.startswith("E") or not terms[-1][2].startswith("E"):
                raise ValueError("'...' must sit between two exceptional terms")
            prev = terms[-1]
            if (prev[0], prev[1]) != (term[0], term[1]):
                raise ValueError("'...' needs equal coefficients on both sides")
            a, b = int(prev[2][1:]), int(sym[1:])
            for k in range(a + 1, b):
                terms.append((term[0], term[1], f"E{k}"))
            pending_ellipsis = False
        terms.append(term)
        pos = m.end()
    if pending_ellipsis:
        raise ValueError("dangling '...' in divisor expression")
    for coeff, is_param, sym in terms:
        if sym == "H":
            if is_param:
                dir_h += coeff
            else:
                base_h += coeff
            continue
        k = int(sym[1:])
        if not 1 <= k <= r:
            raise DimensionError(f"E{k} does not exist on a surface with r={r}")
        # subtraction convention: coefficient c on E_k is stored as -c
        if is_param:
            dir_e[k - 1] -= coeff
        else:
            base_e[k - 1] -= coeff
    return DivisorClass(base_h, base_e), DivisorClass(dir_h, dir_e)


def parse_divisor(text: str, r: int) -> DivisorClass:
    """Parse a divisor expression such as ``3H - E1 - E2 - 4/3 E8`` on ``Bl_r P^2``."""
    return parse_linear_divisor(text, r)[0]


def _family_classes(r: int) -> list[tuple]:
    """(h, multiplicities) for the seven families of exceptional curves on r points."""
    pts = range(r)
    out = []

    def cls(h, mult):
        m = [0] * r
        for i, v in mult.items():
            m[i] = v
        out.append((h, tuple(m)))

    for i in pts:
        cls(0, {i: -1})
    for i, j in itertools.combinations(pts, 2):
        cls(1, {i: 1, j: 1})
    for S in itertools.combinations(pts, 5):
        cls(2, {i: 1 for i in S})
    for S in itertools.combinations(pts, 7):
        for j in S:
            cls(3, {i: (2 if i == j else 1) for i in S})
    if r == 8:
        for T in itertools.combinations(pts, 3):
            cls(4, {i: (2 if i in T else 1) for i in pts})
        for S in itertools.combinations(pts, 6):
            cls(5, {i: (2 if i in S else 1) for i in pts})
        for j in pts:
            cls(6, {i: (3 if i == j else 2) for i in pts})
    return out


def enumerate_exceptional(r: int) -> list[DivisorClass]:
    """All (-1)-classes on the blow-up of the plane in r general points, sorted lexicographically."""
    if not 0 <= r <= MAX_POINTS:
        raise ValueError(f"r must lie in 0..{MAX_POINTS}, got {r}")
    uniq = sorted(set(_family_classes(r)))
    return [DivisorClass(h, m) for h, m in uniq]


@dataclass(frozen=True)
class SurfaceModel:
    """Blow-up of the plane in ``r`` points, with declared genericity assumptions.

    ``general_position`` and ``no_cuspidal_anticanonical`` are recorded, never
    verified: no point coordinates are modelled.
    """

    r: int
    general_position: bool = True
    no_cuspidal_anticanonical: bool = False

    def __post_init__(self):
        if not 0 <= self.r <= MAX_POINTS:
            raise ValueError(f"r must lie in 0..{MAX_POINTS}, got {self.r}")
        # eager caches keep instances immutable after construction
        object.__setattr__(self, "_curves", tuple(enumerate_exceptional(self.r)))
        object.__setattr__(self, "_extra", tuple(self._extremal_extra()))

    @classmethod
    def dp1(cls) -> "SurfaceModel":
        """General degree-one del Pezzo surface (8 general points, no cuspidal anticanonical curve)."""
        return cls(8, True, True)

    def _extremal_extra(self) -> list[DivisorClass]:
        if self.r == 0:
            return [DivisorClass.hyperplane(0)]
        if self.r == 1:
            return [DivisorClass(1, [1])]
        return []

    @property
    def canonical(self) -> DivisorClass:
        return DivisorClass(-3, [-1] * self.r)

    @property
    def anticanonical(self) -> DivisorClass:
        return DivisorClass.anticanonical(self.r)

    @property
    def exceptional_curves(self) -> tuple[DivisorClass, ...]:
        return self._curves

    @property
    def test_classes(self) -> tuple[DivisorClass, ...]:
        """Classes whose non-negative pairing decides nefness (extremal rays of the curve cone)."""
        return self._curves + self._extra

    @property
    def nef_test_covered_by_exceptional(self) -> bool:
        return self.r >= 2

    def H(self) -> DivisorClass:
        return DivisorClass.hyperplane(self.r)

    def E(self, i: int) -> DivisorClass:
        return DivisorClass.exceptional(i, self.r)

    def parse(self, text: str) -> DivisorClass:
        return parse_divisor(text, self.r)

    def hypotheses(self) -> list[str]:
        tags = [f"X = Bl_{self.r} P^2"]
        if self.general_position:
            tags.append("points in general position (declared)")
        if self.no_cuspidal_anticanonical:
            tags.append("no cuspidal curve in |-K_X| (declared)")
        if self.r <= 1:
            tags.append(f"nef test set enlarged by non-exceptional extremal classes for r={self.r}")
        return tags

    def to_json(self) -> dict:
        return {"r": self.r, "general_position": self.general_position,
                "no_cuspidal_anticanonical": self.no_cuspidal_anticanonical}

    @classmethod
    def from_json(cls, obj) -> "SurfaceModel":
        return cls(int(obj["r"]), bool(obj.get("general_position", True)),
                   bool(obj.get("no_cuspidal_anticanonical", False)))


def intersect(s: SurfaceModel, d1: DivisorClass, d2: DivisorClass):
    if d1.r != s.r or d2.r != s.r:
        raise DimensionError(f"divisor does not live on Bl_{s.r} P^2")
    return d1.dot(d2)


@dataclass(frozen=True)
class PositivityResult:
    """Outcome of a nef or ample test; truthy when the test passes."""

    ok: bool
    witness: DivisorClass | None = None
    value: object = None
    reason: str = ""

    def __bool__(self) -> bool:
        return self.ok

    def to_json(self) -> dict:
        from .exact import scalar_to_json
        return {"ok": self.ok,
                "witness": None if self.witness is None else self.witness.to_json(),
                "value": None if self.value is None else scalar_to_json(self.value),
                "reason": self.reason}

    @classmethod
    def from_json(cls, obj) -> "PositivityResult":
        from .exact import scalar_from_json
        w = obj.get("witness")
        v = obj.get("value")
        return cls(bool(obj["ok"]), None if w is None else DivisorClass.from_json(w),
                   None if v is None else scalar_from_json(v), obj.get("reason", ""))


def is_nef(s: SurfaceModel, d: DivisorClass) -> PositivityResult:
    """``d.C >= 0`` for every test class; the witness is the first class (in sorted order) with the least pairing."""
    worst, worst_val = None, None
    for c in s.test_classes:
        v = intersect(s, d, c)
        if scalar_sign(v) < 0 and (worst_val is None or scalar_cmp(v, worst_val) < 0):
            worst, worst_val = c, v
    if worst is None:
        return PositivityResult(True)
    return PositivityResult(False, worst, worst_val, f"negative on {worst}")


def is_ample(s: SurfaceModel, d: DivisorClass) -> PositivityResult:
    """Nakai-Moishezon on the polyhedral curve cone: ``d.C > 0`` for all test classes and ``d^2 > 0``."""
    for c in s.test_classes:
        v = intersect(s, d, c)
        if scalar_sign(v) <= 0:
            return PositivityResult(False, c, v, f"non-positive on {c}")
    sq = intersect(s, d, d)
    if scalar_sign(sq) <= 0:
        return PositivityResult(False, None, sq, "self-intersection not positive")
    return PositivityResult(True)


@dataclass(frozen=True)
class Threshold:
    """``sup{t >= 0 : base - t*dir nef}``; ``value`` is ``math.inf`` when unbounded."""

    value: object
    witnesses: tuple[DivisorClass, ...] = ()

    def to_json(self) -> dict:
        from .exact import scalar_to_json
        return {"value": scalar_to_json(self.value),
                "witnesses": [w.to_json() for w in self.witnesses]}


def nef_threshold(s: SurfaceModel, base: DivisorClass, direction: DivisorClass) -> Threshold:
    if not is_nef(s, base):
        raise ValueError("nef_threshold needs a nef base class")
    best, wit = None, []
    for c in s.test_classes:
        dc = intersect(s, direction, c)
        if scalar_sign(dc) <= 0:
            continue
        ratio = intersect(s, base, c) / dc
        cmp = 1 if best is None else scalar_cmp(best, ratio)
        if cmp > 0:
            best, wit = ratio, [c]
        elif cmp == 0:
            wit.append(c)
    if best is None:
        return Threshold(math.inf)
    return Threshold(best, tuple(wit))


def gram_matrix(r: int) -> list[list[int]]:
    return [[1 if i == j == 0 else (-1 if i == j else 0) for j in range(r + 1)] for i in range(r + 1)]


def leading_minors(r: int) -> list[Fraction]:
    """Exact leading principal minors of the Gram matrix in the basis H, E_1, ..., E_r."""
    g = [[Fraction(v) for v in row] for row in gram_matrix(r)]
    out = []
    for k in range(1, r + 2):
        out.append(_det([row[:k] for row in g[:k]]))
    return out


def _det(m: list[list[Fraction]]) -> Fraction:
    m = [row[:] for row in m]
    n = len(m)
    det = Fraction(1)
    for i in range(n):
        piv = next((k for k in range(i, n) if m[k][i] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != i:
            m[i], m[piv] = m[piv], m[i]
            det = -det
        det *= m[i][i]
        for k in range(i + 1, n):
            f = m[k][i] / m[i][i]
            for j in range(i, n):
                m[k][j] -= f * m[i][j]
    return det


def signature(r: int) -> tuple[int, int]:
    """(positive, negative) inertia from the sign changes of the leading minors (Jacobi)."""
    minors = [Fraction(1)] + leading_minors(r)
    neg = sum(1 for a, b in zip(minors, minors[1:]) if (a > 0) != (b > 0))
    return r + 1 - neg, neg
