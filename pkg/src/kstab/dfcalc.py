"""Donaldson-Futaki invariants of flag-ideal test configurations from intersection tables.

For the blow-up ``B`` of ``X x P^1`` along a flag ideal with exceptional divisor ``E``,

    DF = -n (L^(n-1).K_X) (L-E)^(n+1) + (n+1) (L^n) (L-E)^n.(K_X + K_{B/X x P^1})

up to a positive constant, so only the sign is meaningful.  The log version with
cone angle ``beta`` along ``D`` uses its own normalisation; values of the two
evaluators are never compared in magnitude.
"""
from __future__ import annotations

from dataclasses import dataclass, fields, replace
from fractions import Fraction

from .exact import display
from .exact.scalar import _as_fraction
from .picard import DivisorClass, SurfaceModel, intersect, is_ample

PLAIN_NORMALISATION = "intersection formula verbatim; defined up to a positive constant (sign-meaningful only)"
LOG_NORMALISATION = "log intersection formula verbatim (weight normalisation x 2 a_0^2); sign-meaningful only"


class MissingFieldError(ValueError):
    pass


_OPTIONAL = ("Dn1", "BD", "Cexc", "LE_E")


@dataclass(frozen=True)
class IntersectionTable:
    """Intersection numbers of a flag-ideal blow-up.

    ``LK = L^(n-1).K_X`` and ``Ln = L^n`` are computed on X; ``A = (L-E)^(n+1)``,
    ``B = (L-E)^n.K_X`` (pulled back), ``C = (L-E)^n.K_{B/X x P^1}`` on the blow-up.
    Log fields: ``Dn1 = L^(n-1).D``, ``BD = (L-E)^n.D`` (pulled back) and ``Cexc`` for the
    exceptional part of the log relative canonical class.  ``LE_R`` lists
    ``(L-E)^n.R`` for pulled-back nef classes ``R``; ``LE_E = (L-E)^n.E``.
    """

    n: int
    LK: Fraction
    Ln: Fraction
    A: Fraction | None = None
    B: Fraction | None = None
    C: Fraction | None = None
    Dn1: Fraction | None = None
    BD: Fraction | None = None
    Cexc: Fraction | None = None
    LE_R: tuple[Fraction, ...] = ()
    LE_E: Fraction | None = None
    provenance: str = "user-supplied"

    def __post_init__(self):
        for f in fields(self):
            v = getattr(self, f.name)
            if f.name in ("n", "provenance"):
                continue
            if f.name == "LE_R":
                object.__setattr__(self, "LE_R", tuple(_as_fraction(x) for x in v))
            elif v is not None:
                object.__setattr__(self, f.name, _as_fraction(v))
        if self.n < 1:
            raise ValueError("dimension n must be at least 1")
        if self.Ln is None or self.Ln <= 0:
            raise ValueError("L^n must be positive")

    def require(self, *names: str):
        missing = [k for k in names if getattr(self, k) is None]
        if missing:
            raise MissingFieldError(f"intersection table lacks {', '.join(missing)}")

    def to_json(self) -> dict:
        out = {"n": self.n, "provenance": self.provenance}
        for f in fields(self):
            if f.name in ("n", "provenance"):
                continue
            v = getattr(self, f.name)
            if f.name == "LE_R":
                out["LE_R"] = [display(x) for x in v]
            elif v is not None:
                out[f.name] = display(v)
        return out

    @classmethod
    def from_json(cls, obj) -> "IntersectionTable":
        kw = {}
        for f in fields(cls):
            if f.name not in obj or obj[f.name] is None:
                continue
            v = obj[f.name]
            if f.name == "n":
                kw["n"] = int(v)
            elif f.name == "provenance":
                kw["provenance"] = str(v)
            elif f.name == "LE_R":
                kw["LE_R"] = tuple(Fraction(str(x)) for x in v)
            else:
                kw[f.name] = Fraction(str(v))
        for k in ("n", "LK", "Ln"):
            if k not in kw:
                raise MissingFieldError(f"intersection table JSON lacks {k!r}")
        return cls(**kw)


def df_evaluate(t: IntersectionTable) -> Fraction:
    t.require("A", "B", "C")
    n = t.n
    return -n * t.LK * t.A + (n + 1) * t.Ln * (t.B + t.C)


def df_log_evaluate(t: IntersectionTable, beta) -> Fraction:
    beta = _as_fraction(beta)
    if not 0 <= beta <= 1:
        raise ValueError("beta must lie in [0, 1]")
    t.require("A", "B", "Dn1", "BD", "Cexc")
    n = t.n
    w = 1 - beta
    return -n * (t.LK + w * t.Dn1) * t.A + (n + 1) * t.Ln * (t.B + w * t.BD + t.Cexc)


def scale_table(t: IntersectionTable, r) -> IntersectionTable:
    """Table of the same configuration with ``L - E`` replaced by ``r(L - E)``.

    Each entry picks up ``r`` to the number of ``L`` or ``E`` factors it contains, so
    every DF value is multiplied by ``r**(2n)``.
    """
    r = _as_fraction(r)
    if r <= 0:
        raise ValueError("scaling factor must be positive")
    n = t.n

    def s(v, k):
        return None if v is None else v * r ** k

    return replace(
        t, LK=s(t.LK, n - 1), Ln=s(t.Ln, n), A=s(t.A, n + 1), B=s(t.B, n), C=s(t.C, n),
        Dn1=s(t.Dn1, n - 1), BD=s(t.BD, n), Cexc=s(t.Cexc, n),
        LE_R=tuple(v * r ** n for v in t.LE_R), LE_E=s(t.LE_E, n),
        provenance=f"{t.provenance}; L-E scaled by {display(r)}",
    )


POINT_BLOWUP_IDENTITIES = (
    "blow-up of a smooth point of the threefold X x P^1 in the central fibre (flag ideal I_p + (t))",
    "E^3 = 1",
    "triple products containing a pull-back from X together with E vanish; L^3 = 0 on X x P^1",
    "K_{B/X x P^1} = 2E",
)


def normal_cone_point_table(s: SurfaceModel, L: DivisorClass) -> IntersectionTable:
    """Exact table for the deformation to the normal cone of a point of ``X``."""
    amp = is_ample(s, L)
    if not amp:
        raise ValueError(f"L = {L} is not ample: {amp.reason}")
    LK = intersect(s, L, s.canonical)
    Ln = intersect(s, L, L)
    return IntersectionTable(
        n=2, LK=_as_fraction(LK), Ln=_as_fraction(Ln), A=-1, B=0, C=2, LE_R=(0,), LE_E=1,
        provenance="normal cone of a point: " + "; ".join(POINT_BLOWUP_IDENTITIES),
    )


@dataclass(frozen=True)
class SignLemmaReport:
    nef_pullbacks_ok: bool
    exceptional_ok: bool
    flags: tuple[str, ...]

    @property
    def ok(self) -> bool:
        return self.nef_pullbacks_ok and self.exceptional_ok

    def to_json(self) -> dict:
        return {"ok": self.ok, "nef_pullbacks_ok": self.nef_pullbacks_ok,
                "exceptional_ok": self.exceptional_ok, "flags": list(self.flags)}


def validate_sign_lemmas(t: IntersectionTable) -> SignLemmaReport:
    """Check ``(L-E)^n.R <= 0`` for the listed nef pull-backs and ``(L-E)^n.E > 0``.

    A violation means the table cannot come from a semi-test configuration.
    """
    flags = []
    bad = [i for i, v in enumerate(t.LE_R) if v > 0]
    for i in bad:
        flags.append(f"nef pull-back #{i}: (L-E)^n.R = {display(t.LE_R[i])} > 0")
    exc_ok = True
    if t.LE_E is None:
        exc_ok = False
        flags.append("missing (L-E)^n.E: E-positivity unchecked")
    elif t.LE_E <= 0:
        exc_ok = False
        flags.append(f"degenerate: E-positivity fails ((L-E)^n.E = {display(t.LE_E)})")
    return SignLemmaReport(not bad, exc_ok, tuple(flags))


@dataclass(frozen=True)
class DFResult:
    value: Fraction
    beta: Fraction | None
    normalisation: str
    sign_lemmas: SignLemmaReport
    table: IntersectionTable

    @property
    def sign(self) -> int:
        return (self.value > 0) - (self.value < 0)

    def to_json(self) -> dict:
        return {"value": display(self.value), "sign": self.sign,
                "beta": None if self.beta is None else display(self.beta),
                "normalisation": self.normalisation, "sign_lemmas": self.sign_lemmas.to_json(),
                "table": self.table.to_json()}


def df_certificate(t: IntersectionTable, beta=None) -> DFResult:
    """Evaluate (plainly or with cone angle ``beta``) and attach the sign-lemma check."""
    report = validate_sign_lemmas(t)
    if beta is None:
        return DFResult(df_evaluate(t), None, PLAIN_NORMALISATION, report, t)
    b = _as_fraction(beta)
    return DFResult(df_log_evaluate(t, b), b, LOG_NORMALISATION, report, t)
