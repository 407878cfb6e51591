"""Exact parameter regions where the alpha criterion certifies a one-parameter family.

For ``L_t = base + t*direction`` every quantity in the criterion is polynomial in
``t`` after clearing positive denominators:

* ampleness:       ``L_t.C > 0`` for each test class ``C`` and ``L_t^2 > 0``;
* condition (i):   ``3*num(t)*L_t^2 - 2*den(t)*(-K.L_t) > 0`` on each piece ``num/den``
                   of the alpha lower bound (``den > 0`` checked, never assumed);
* condition (ii):  ``3*(-K.C)*L_t^2 - 2*(-K.L_t)*(L_t.C) >= 0`` for each test class ``C``.

The resulting sign systems are solved exactly, piece by piece.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .alpha import DP1_PROVENANCE
from .exact import (
    AlgebraicInterval,
    RatPoly,
    display,
    isolate_roots,
    merge_union,
    rational_between,
    scalar_cmp,
    scalar_to_json,
    sign_at,
    solve_sign_system,
)
from .picard import DivisorClass, SurfaceModel, format_divisor, parse_linear_divisor
from .stability import NotAmpleError, check_criterion

_N = 2  # surfaces


class FamilyError(ValueError):
    pass


@dataclass(frozen=True)
class AlphaPiece:
    """Lower bound ``num(t)/den(t)`` valid for ``t`` in ``domain``."""

    domain: AlgebraicInterval
    num: RatPoly
    den: RatPoly

    def value(self, t):
        return self.num(t) / self.den(t)

    def to_json(self) -> dict:
        return {"domain": self.domain.to_json(), "num": self.num.to_json(), "den": self.den.to_json()}


@dataclass(frozen=True)
class PolarisationFamily:
    surface: SurfaceModel
    base: DivisorClass
    direction: DivisorClass
    pieces: tuple[AlphaPiece, ...]
    param: str = "t"
    alpha_provenance: str = "user-supplied"
    name: str = ""

    def __post_init__(self):
        if self.base.r != self.surface.r or self.direction.r != self.surface.r:
            raise FamilyError("family classes do not live on the surface")
        if not self.pieces:
            raise FamilyError("family needs at least one alpha piece")
        for a, b in zip(self.pieces, self.pieces[1:]):
            if a.domain.hi is None or b.domain.lo is None or scalar_cmp(a.domain.hi, b.domain.lo) > 0:
                raise FamilyError("alpha pieces must be listed with increasing breakpoints")

    def at(self, t) -> DivisorClass:
        return self.base + self.direction * t

    def alpha_at(self, t):
        for p in self.pieces:
            if p.domain.contains(t):
                return p.value(t)
        raise FamilyError(f"no alpha piece covers {self.param} = {display(t)}")

    def breakpoints(self) -> list:
        return [p.domain.hi for p in self.pieces[:-1]]

    def describe(self) -> str:
        d = format_divisor(self.direction)
        return f"L_{self.param} = {format_divisor(self.base)} + {self.param}*({d})"

    def to_json(self) -> dict:
        return {"name": self.name, "surface": self.surface.to_json(), "base": self.base.to_json(),
                "direction": self.direction.to_json(), "param": self.param,
                "alpha_pieces": [p.to_json() for p in self.pieces],
                "alpha_provenance": self.alpha_provenance, "display": self.describe()}


def constant_alpha(value, var: str = "t") -> tuple[AlphaPiece, ...]:
    v = Fraction(value)
    return (AlphaPiece(AlgebraicInterval.real_line(), RatPoly([v], var), RatPoly([1], var)),)


def dp1_alpha_pieces(var: str = "lambda") -> tuple[AlphaPiece, ...]:
    """``min{1/(2-t), 1}`` on ``[0, 2)``, split at the breakpoint ``t = 1``."""
    one = RatPoly([1], var)
    return (
        AlphaPiece(AlgebraicInterval.closed(Fraction(0), Fraction(1)), one, RatPoly([2, -1], var)),
        AlphaPiece(AlgebraicInterval(Fraction(1), Fraction(2), False, False), one, one),
    )


def dp1_family(surface: SurfaceModel | None = None, param: str = "lambda") -> PolarisationFamily:
    """``L_lambda = 3H - E1 - ... - E7 - lambda*E8`` with the built-in degree-one del Pezzo bound."""
    s = SurfaceModel.dp1() if surface is None else surface
    if s.r != 8 or not s.no_cuspidal_anticanonical:
        raise FamilyError("built-in dP1 bound needs r = 8 with no cuspidal anticanonical curve")
    base = DivisorClass(3, [1] * 7 + [0])
    direction = DivisorClass(0, [0] * 7 + [1])
    return PolarisationFamily(s, base, direction, dp1_alpha_pieces(param), param, DP1_PROVENANCE, "dp1")


def family_from_text(surface: SurfaceModel, text: str, pieces: Sequence[AlphaPiece],
                     param: str = "t", provenance: str = "user-supplied") -> PolarisationFamily:
    base, direction = parse_linear_divisor(text, surface.r, param)
    pieces = tuple(AlphaPiece(p.domain, p.num.with_var(param), p.den.with_var(param)) for p in pieces)
    return PolarisationFamily(surface, base, direction, pieces, param, provenance)


# ---- polynomial forms ------------------------------------------------------

def _pairing(f: PolarisationFamily, C: DivisorClass) -> RatPoly:
    return RatPoly([f.base.dot(C), f.direction.dot(C)], f.param)


def _square(f: PolarisationFamily) -> RatPoly:
    b, d = f.base, f.direction
    return RatPoly([b.dot(b), 2 * b.dot(d), d.dot(d)], f.param)


@dataclass(frozen=True)
class Constraint:
    poly: RatPoly
    relation: str
    condition: str
    witness: DivisorClass | None = None

    def normalised(self) -> tuple[RatPoly, str]:
        """Primitive integer form with positive constant term (leading term if no constant)."""
        flip = {">": "<", ">=": "<=", "<": ">", "<=": ">="}
        p = self.poly.primitive()
        rel = self.relation
        if (p.lead > 0) != (self.poly.lead > 0):
            rel = flip[rel]
        if next(c for c in p.coeffs if c != 0) < 0:
            p, rel = -p, flip[rel]
        return p, rel

    def describe(self) -> str:
        p, rel = self.normalised()
        out = f"{self.condition}: {p.format()} {rel} 0"
        if self.witness is not None:
            out += f"  [curve {format_divisor(self.witness)}]"
        return out

    def to_json(self) -> dict:
        p, rel = self.normalised()
        return {"condition": self.condition, "poly": p.to_json(), "relation": rel,
                "witness": None if self.witness is None else self.witness.to_json(),
                "display": self.describe()}


def _dedupe(cons: Sequence[Constraint]) -> list[Constraint]:
    seen = {}
    for c in cons:
        if c.poly.is_zero() and c.relation in (">=", "<="):
            continue  # trivially true
        key = (c.poly.monic().coeffs if not c.poly.is_zero() else (), c.relation,
               1 if c.poly.lead >= 0 else -1)
        seen.setdefault(key, c)
    return list(seen.values())


def ampleness_constraints(f: PolarisationFamily) -> list[Constraint]:
    cons = [Constraint(_pairing(f, C), ">", "ampleness", C) for C in f.surface.test_classes]
    cons.append(Constraint(_square(f), ">", "ampleness (L^2 > 0)"))
    return _dedupe(cons)


def condition_ii_constraints(f: PolarisationFamily) -> list[Constraint]:
    s = f.surface
    mK = s.anticanonical
    sq = _square(f)
    kl = _pairing(f, mK)
    cons = []
    for C in s.test_classes:
        poly = (_N + 1) * mK.dot(C) * sq - _N * kl * _pairing(f, C)
        cons.append(Constraint(poly, ">=", "condition (ii)", C))
    return _dedupe(cons)


def condition_i_constraint(f: PolarisationFamily, piece: AlphaPiece) -> Constraint:
    sq = _square(f)
    kl = _pairing(f, f.surface.anticanonical)
    return Constraint((_N + 1) * piece.num * sq - _N * piece.den * kl, ">", "condition (i)")


def _solve(cons: Sequence[Constraint], domain: AlgebraicInterval) -> list[AlgebraicInterval]:
    return solve_sign_system([(c.poly, c.relation) for c in cons], domain)


def ample_domain(f: PolarisationFamily) -> list[AlgebraicInterval]:
    """Exact set of parameters where ``L_t`` is ample (a union of open intervals)."""
    return _solve(ampleness_constraints(f), AlgebraicInterval.real_line())


def _oriented_piece(piece: AlphaPiece, domain: AlgebraicInterval) -> AlphaPiece:
    """Piece with a denominator verified positive on ``domain``."""
    den = piece.den
    if den.is_zero():
        raise FamilyError("alpha piece has zero denominator")
    if den.degree >= 1:
        for root, _ in isolate_roots(den):
            if domain.contains(root):
                raise FamilyError(f"alpha denominator {den} vanishes at {display(root)} inside its piece")
    sample = rational_between(domain.lo, domain.hi) if not _is_point(domain) else domain.lo
    if sign_at(den, sample) < 0:
        return AlphaPiece(piece.domain, -piece.num, -den)
    return piece


def _is_point(iv: AlgebraicInterval) -> bool:
    return iv.lo is not None and iv.hi is not None and scalar_cmp(iv.lo, iv.hi) == 0


@dataclass(frozen=True)
class EndpointBinding:
    """Constraints vanishing at a region endpoint (empty when a piece breakpoint binds)."""

    endpoint: object
    side: str
    constraints: tuple[Constraint, ...]
    note: str = ""

    def to_json(self) -> dict:
        return {"endpoint": scalar_to_json(self.endpoint), "side": self.side, "note": self.note,
                "constraints": [c.to_json() for c in self.constraints]}


@dataclass(frozen=True)
class RegionResult:
    """Certified parameters of a family.

    ``intervals`` is the open region (interiors of the solution components);
    ``solution`` keeps the exact endpoint structure, where a closed endpoint means
    the criterion also holds there (condition (ii) with equality).
    """

    family: PolarisationFamily
    intervals: tuple[AlgebraicInterval, ...]
    solution: tuple[AlgebraicInterval, ...]
    ample: tuple[AlgebraicInterval, ...]
    bindings: tuple[EndpointBinding, ...]
    hypotheses: tuple[str, ...] = field(default_factory=tuple)

    @property
    def is_empty(self) -> bool:
        return not self.intervals and not self.solution

    def contains(self, t) -> bool:
        """Whether the criterion certifies ``L_t`` (exact solution set, endpoints included)."""
        return any(iv.contains(t) for iv in self.solution)

    def in_open_region(self, t) -> bool:
        return any(iv.contains(t) for iv in self.intervals)

    @property
    def boundary_certified(self) -> list:
        pts = []
        for iv in self.solution:
            if iv.lo is not None and iv.lo_closed:
                pts.append(iv.lo)
            if iv.hi is not None and iv.hi_closed and not (iv.lo_closed and scalar_cmp(iv.lo, iv.hi) == 0):
                pts.append(iv.hi)
        return pts

    def to_json(self) -> dict:
        return {
            "family": self.family.to_json(),
            "intervals": [iv.to_json() for iv in self.intervals],
            "solution": [iv.to_json() for iv in self.solution],
            "boundary_certified": [scalar_to_json(p) for p in self.boundary_certified],
            "ample_domain": [iv.to_json() for iv in self.ample],
            "bindings": [b.to_json() for b in self.bindings],
            "hypotheses": list(self.hypotheses),
            "empty": self.is_empty,
        }


def certified_region(f: PolarisationFamily) -> RegionResult:
    if f.base.is_zero() and f.direction.is_zero():
        raise FamilyError("degenerate family: base and direction are both zero")
    amp = ample_domain(f)
    cii = condition_ii_constraints(f)
    pieces = []
    used: list[Constraint] = list(cii)
    for A in amp:
        for piece in f.pieces:
            D = A.intersect(piece.domain)
            if D.is_empty:
                continue
            op = _oriented_piece(piece, D)
            ci = condition_i_constraint(f, op)
            used.append(ci)
            pieces.extend(_solve([ci] + cii, D))
    solution = merge_union(pieces)
    intervals = tuple(iv.interior() for iv in solution if not iv.interior().is_empty)
    bindings = _bindings(solution, used + ampleness_constraints(f))
    hyps = tuple(f.surface.hypotheses()) + (f"alpha lower bound: {f.alpha_provenance}",)
    return RegionResult(f, intervals, tuple(solution), tuple(amp), tuple(bindings), hyps)


def _bindings(solution, constraints) -> list[EndpointBinding]:
    out = []
    for iv in solution:
        for side, x in (("lower", iv.lo), ("upper", iv.hi)):
            if x is None:
                continue
            hit = tuple(c for c in constraints if not c.poly.is_zero() and sign_at(c.poly, x) == 0)
            note = "" if hit else "alpha piece breakpoint"
            out.append(EndpointBinding(x, side, hit, note))
    return out


def region_report(r: RegionResult) -> str:
    f = r.family
    lines = [f"Family: {f.describe()} on Bl_{f.surface.r} P^2",
             f"Alpha lower bound: {f.alpha_provenance}",
             "Ample for: " + (" U ".join(str(iv) for iv in r.ample) if r.ample else "no parameter")]
    if r.is_empty:
        lines.append("Certified region: no certified parameters")
    else:
        lines.append("Certified region: " + " U ".join(str(iv) for iv in r.intervals))
        for iv in r.intervals:
            for x in (iv.lo, iv.hi):
                if x is not None:
                    lines.append(f"  {f.param} = {display(x)} ~ {float(x):.6f} (approximate)")
        pts = r.boundary_certified
        if pts:
            lines.append("Endpoints where the criterion holds with equality in (ii): "
                         + ", ".join(display(p) for p in pts))
    for b in r.bindings:
        lines.append(f"{b.side.capitalize()} endpoint {f.param} = {display(b.endpoint)} bound by:"
                     + (f" {b.note}" if b.note else ""))
        for c in b.constraints:
            lines.append(f"  {c.describe()}")
    lines.append("Hypotheses:")
    lines += [f"  - {h}" for h in r.hypotheses]
    return "\n".join(lines)


def pointwise_certified(f: PolarisationFamily, t) -> bool:
    """Direct evaluation of the criterion at ``t`` (False outside the ample domain)."""
    try:
        alpha = f.alpha_at(t)
    except FamilyError:
        return False
    try:
        return check_criterion(f.surface, f.at(t), alpha).certified
    except (NotAmpleError, ValueError):
        return False
