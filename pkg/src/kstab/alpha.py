"""Certified bounds on alpha invariants.

Nothing here computes an alpha invariant outright.  A bound carries its
provenance, and each operation transforms bounds according to a known
inequality: scaling, adding an ample class, continuity under perturbation,
the lower bound for general degree-one del Pezzo surfaces, and the upper bounds
read off from a resolved flag ideal.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .exact import display, exact, scalar_cmp, scalar_sign, scalar_to_json, scalar_from_json
from .exact.scalar import _as_fraction
from .picard import SurfaceModel

DP1_PROVENANCE = "degree-one del Pezzo bound min{1/(2-lambda), 1} (general X, no cuspidal anticanonical curve)"


class HypothesisError(ValueError):
    """A gated bound was requested without its hypotheses."""


@dataclass(frozen=True)
class AlphaBound:
    lower: object = None
    upper: object = None
    provenance: str = "user-supplied"

    def __post_init__(self):
        if self.lower is not None:
            object.__setattr__(self, "lower", exact(self.lower))
            if scalar_sign(self.lower) < 0:
                raise ValueError("alpha lower bound must be non-negative (log canonical X)")
        if self.upper is not None:
            object.__setattr__(self, "upper", exact(self.upper))
        if self.lower is not None and self.upper is not None and scalar_cmp(self.lower, self.upper) > 0:
            raise ValueError(f"inconsistent alpha bounds: {display(self.lower)} > {display(self.upper)}")

    def to_json(self) -> dict:
        return {"lower": None if self.lower is None else scalar_to_json(self.lower),
                "upper": None if self.upper is None else scalar_to_json(self.upper),
                "provenance": self.provenance}

    @classmethod
    def from_json(cls, obj) -> "AlphaBound":
        lo = obj.get("lower")
        hi = obj.get("upper")
        return cls(None if lo is None else scalar_from_json(lo),
                   None if hi is None else scalar_from_json(hi),
                   obj.get("provenance", "user-supplied"))


def alpha_scale(b: AlphaBound, c) -> AlphaBound:
    """Bounds for ``alpha(X, cL) = alpha(X, L) / c``."""
    c = exact(c)
    if scalar_sign(c) <= 0:
        raise ValueError("scaling factor must be positive")
    return AlphaBound(
        None if b.lower is None else b.lower / c,
        None if b.upper is None else b.upper / c,
        f"{b.provenance}; scaled by 1/{display(c)}",
    )


def alpha_add_ample_upper(b_of_L: AlphaBound) -> AlphaBound:
    """Bound for ``alpha(X, L + D)`` with ``D`` ample: only the upper bound survives."""
    return AlphaBound(None, b_of_L.upper, f"{b_of_L.provenance}; L + ample D (upper bound only)")


def perturbation_delta(eps, c, alpha) -> Fraction:
    """Step ``delta = c*eps / (2*alpha + eps)`` keeping ``|alpha(L) - alpha(L + delta*D)| <= eps/2``.

    Valid when ``L + c*D`` and ``L - c*D`` are both ample; the caller asserts that.
    """
    eps, c, alpha = exact(eps), exact(c), exact(alpha)
    for name, v in (("eps", eps), ("c", c), ("alpha", alpha)):
        if scalar_sign(v) <= 0:
            raise ValueError(f"{name} must be positive")
    return c * eps / (2 * alpha + eps)


def dp1_alpha_lower(lam, surface: SurfaceModel | None = None):
    """``min{1/(2 - lam), 1}``, a lower bound for ``alpha(X, 3H - E1 - ... - E7 - lam*E8)``.

    Requires ``0 <= lam < 2`` and, when a surface is passed, a declared general
    degree-one del Pezzo (no cuspidal curve in the anticanonical system).
    """
    lam = exact(lam)
    if surface is not None:
        if surface.r != 8:
            raise HypothesisError(f"bound is stated for degree-one del Pezzo surfaces (r=8), got r={surface.r}")
        if not surface.no_cuspidal_anticanonical:
            raise HypothesisError("bound requires the genericity flag: |-K_X| contains no cuspidal curve")
    if scalar_sign(lam) < 0:
        raise HypothesisError("bound is stated for lambda >= 0")
    if scalar_cmp(lam, 2) >= 0:
        raise HypothesisError("bound has a pole at lambda = 2; need lambda < 2")
    v = 1 / (2 - lam)
    return v if scalar_cmp(v, 1) < 0 else Fraction(1)


def dp1_alpha_bound(lam, surface: SurfaceModel | None = None) -> AlphaBound:
    return AlphaBound(dp1_alpha_lower(lam, surface), None, DP1_PROVENANCE)


@dataclass(frozen=True)
class FlagRow:
    """One exceptional divisor of a resolved flag ideal.

    ``a``: discrepancy, ``b``: multiplicity in the pulled-back central fibre,
    ``c``: valuation of the flag ideal (> 0), ``d``: multiplicity of the boundary divisor.
    """

    a: Fraction
    b: Fraction
    c: Fraction
    d: Fraction = Fraction(0)

    def __post_init__(self):
        for k in ("a", "b", "c", "d"):
            object.__setattr__(self, k, _as_fraction(getattr(self, k)))
        if self.c <= 0:
            raise ValueError("flag-ideal valuation c must be positive")
        if self.d < 0:
            raise ValueError("boundary multiplicity d must be non-negative")


@dataclass(frozen=True)
class FlagResolutionData:
    rows: tuple[FlagRow, ...] = field(default_factory=tuple)

    def __init__(self, rows: Sequence):
        rs = tuple(r if isinstance(r, FlagRow) else FlagRow(*r) for r in rows)
        if not rs:
            raise ValueError("flag resolution data needs at least one row")
        object.__setattr__(self, "rows", rs)

    def to_json(self) -> dict:
        return {"rows": [{k: display(getattr(r, k)) for k in "abcd"} for r in self.rows]}

    @classmethod
    def from_json(cls, obj) -> "FlagResolutionData":
        rows = []
        for r in obj["rows"]:
            rows.append(FlagRow(Fraction(str(r["a"])), Fraction(str(r["b"])), Fraction(str(r["c"])),
                                Fraction(str(r.get("d", 0)))))
        return cls(rows)


def flag_upper_bound(data: FlagResolutionData) -> Fraction:
    """``min_i (a_i - b_i + 1) / c_i``, an upper bound for ``alpha(X, L)``."""
    return min((r.a - r.b + 1) / r.c for r in data.rows)


def log_flag_upper_bound(data: FlagResolutionData, beta) -> Fraction:
    """``min_i (a_i - b_i + 1 - (1 - beta)*d_i) / c_i``, bounding ``alpha((X, (1-beta)D); L)``."""
    beta = _as_fraction(beta)
    if not 0 <= beta <= 1:
        raise ValueError("beta must lie in [0, 1]")
    return min((r.a - r.b + 1 - (1 - beta) * r.d) / r.c for r in data.rows)
