"""Alpha-invariant criterion for K-stability of polarised surfaces, and its log variant.

A polarisation ``L`` is certified K-stable when

    (i)  alpha(X, L) > n/(n+1) * mu(X, L)           (strict)
    (ii) -K_X - n/(n+1) * mu(X, L) * L  is nef

where ``mu = (-K_X . L^(n-1)) / L^n`` is the slope.  The log variant multiplies the
threshold in (i) by the cone angle ``beta``.  The criterion is sufficient only, so a
failed condition yields ``Inconclusive``, never "unstable".
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, replace
from fractions import Fraction

from .alpha import AlphaBound
from .exact import display, exact, scalar_cmp, scalar_from_json, scalar_sign, scalar_to_json
from .exact.scalar import _as_fraction
from .picard import DivisorClass, PositivityResult, SurfaceModel, intersect, is_ample, is_nef

SURFACE_DIM = 2
LOG_BOUNDARY = "D in |-K_X| effective, integral, reduced, Cartier; (X, D) log canonical (declared)"
OPEN_NOTE = "K-stability open under perturbation of L (both inequalities strict)"


class Verdict(str, enum.Enum):
    CERTIFIED = "KStableCertified"
    INCONCLUSIVE = "Inconclusive"


class NumericalType(str, enum.Enum):
    FANO = "Fano"
    CALABI_YAU = "CalabiYau"
    INAPPLICABLE = "Inapplicable"


class DegeneratePolarisation(ValueError):
    pass


class NotAmpleError(ValueError):
    def __init__(self, result: PositivityResult, L: DivisorClass):
        self.result = result
        self.divisor = L
        super().__init__(f"L = {L} is not ample: {result.reason}")


def slope(s: SurfaceModel, L: DivisorClass):
    """``(-K . L) / L^2``."""
    sq = intersect(s, L, L)
    if scalar_sign(sq) <= 0:
        raise DegeneratePolarisation(f"L^2 = {display(sq)} is not positive")
    return intersect(s, s.anticanonical, L) / sq


def criterion_threshold(mu, n: int = SURFACE_DIM):
    return Fraction(n, n + 1) * mu


@dataclass(frozen=True)
class ConditionI:
    alpha_lower: object
    threshold: object
    margin: object
    passed: bool

    def to_json(self) -> dict:
        return {"alpha_lower": scalar_to_json(self.alpha_lower),
                "threshold": scalar_to_json(self.threshold),
                "margin": scalar_to_json(self.margin), "pass": self.passed}

    @classmethod
    def from_json(cls, obj) -> "ConditionI":
        return cls(scalar_from_json(obj["alpha_lower"]), scalar_from_json(obj["threshold"]),
                   scalar_from_json(obj["margin"]), bool(obj["pass"]))


@dataclass(frozen=True)
class ConditionII:
    tested_class: DivisorClass
    nef: PositivityResult

    @property
    def passed(self) -> bool:
        return self.nef.ok

    def to_json(self) -> dict:
        return {"tested_class": self.tested_class.to_json(), "nef": self.nef.to_json(),
                "pass": self.passed}

    @classmethod
    def from_json(cls, obj) -> "ConditionII":
        return cls(DivisorClass.from_json(obj["tested_class"]), PositivityResult.from_json(obj["nef"]))


@dataclass(frozen=True)
class LogData:
    beta: Fraction
    boundary: str = LOG_BOUNDARY

    def to_json(self) -> dict:
        return {"beta": scalar_to_json(self.beta), "boundary": self.boundary}

    @classmethod
    def from_json(cls, obj) -> "LogData":
        return cls(scalar_from_json(obj["beta"]), obj.get("boundary", LOG_BOUNDARY))


@dataclass(frozen=True)
class StabilityCertificate:
    surface: SurfaceModel
    polarisation: DivisorClass
    n: int
    ampleness: PositivityResult
    slope: object
    threshold: object
    condition_i: ConditionI
    condition_ii: ConditionII
    alpha_provenance: str
    hypotheses: tuple[str, ...]
    beta: LogData | None = None
    annotations: tuple[str, ...] = ()

    @property
    def verdict(self) -> Verdict:
        if self.condition_i.passed and self.condition_ii.passed:
            return Verdict.CERTIFIED
        return Verdict.INCONCLUSIVE

    @property
    def certified(self) -> bool:
        return self.verdict is Verdict.CERTIFIED

    def to_json(self) -> dict:
        return {
            "verdict": self.verdict.value,
            "surface": self.surface.to_json(),
            "polarisation": self.polarisation.to_json(),
            "n": self.n,
            "ampleness": self.ampleness.to_json(),
            "slope": scalar_to_json(self.slope),
            "threshold": scalar_to_json(self.threshold),
            "condition_i": self.condition_i.to_json(),
            "condition_ii": self.condition_ii.to_json(),
            "alpha_provenance": self.alpha_provenance,
            "hypotheses": list(self.hypotheses),
            "beta": None if self.beta is None else self.beta.to_json(),
            "annotations": list(self.annotations),
            "normalisation": "sufficient criterion only: Inconclusive asserts nothing",
        }

    @classmethod
    def from_json(cls, obj) -> "StabilityCertificate":
        return cls(
            SurfaceModel.from_json(obj["surface"]),
            DivisorClass.from_json(obj["polarisation"]),
            int(obj["n"]),
            PositivityResult.from_json(obj["ampleness"]),
            scalar_from_json(obj["slope"]),
            scalar_from_json(obj["threshold"]),
            ConditionI.from_json(obj["condition_i"]),
            ConditionII.from_json(obj["condition_ii"]),
            obj["alpha_provenance"],
            tuple(obj["hypotheses"]),
            None if obj.get("beta") is None else LogData.from_json(obj["beta"]),
            tuple(obj.get("annotations", ())),
        )

    def audit_trail(self) -> str:
        """Human-readable walk through the criterion."""
        L = self.polarisation
        ci, cii = self.condition_i, self.condition_ii
        lines = [f"Surface: Bl_{self.surface.r} P^2", f"Polarisation L = {L}",
                 f"  ampleness: {'ample' if self.ampleness.ok else 'NOT ample'}",
                 f"Slope mu = (-K.L)/L^2 = {display(self.slope)}",
                 f"Threshold n/(n+1)*mu = {display(self.threshold)}  (n = {self.n})"]
        if self.beta is not None:
            lines.append(f"Cone angle beta = {display(self.beta.beta)}; boundary: {self.beta.boundary}")
        lines += [
            f"(i)  alpha lower bound {display(ci.alpha_lower)} > {display(ci.threshold)}: "
            f"margin {display(ci.margin)} -> {'pass' if ci.passed else 'fail'}",
            f"     alpha provenance: {self.alpha_provenance}",
            f"(ii) -K - {display(self.threshold)}*L = {cii.tested_class} nef: "
            f"{'pass' if cii.passed else 'fail, witness ' + str(cii.nef.witness) + ' pairs to ' + display(cii.nef.value)}",
            "Hypotheses:",
        ]
        lines += [f"  - {h}" for h in self.hypotheses]
        for a in self.annotations:
            lines.append(f"Note: {a}")
        lines.append(f"Verdict: {self.verdict.value}")
        return "\n".join(lines)


def _alpha_parts(alpha_lb) -> tuple[object, str]:
    if isinstance(alpha_lb, AlphaBound):
        if alpha_lb.lower is None:
            return Fraction(0), alpha_lb.provenance + " (no lower bound; 0 from log canonicity)"
        return alpha_lb.lower, alpha_lb.provenance
    v = exact(alpha_lb)
    if scalar_sign(v) < 0:
        raise ValueError("alpha lower bound must be non-negative")
    return v, "user-supplied"


def _evaluate(s: SurfaceModel, L: DivisorClass, alpha_lb, beta, provenance: str | None):
    amp = is_ample(s, L)
    if not amp:
        raise NotAmpleError(amp, L)
    alpha, prov = _alpha_parts(alpha_lb)
    if provenance is not None:
        prov = provenance
    mu = slope(s, L)
    thr = criterion_threshold(mu, SURFACE_DIM)
    thr_i = thr if beta is None else beta * thr
    margin = alpha - thr_i
    ci = ConditionI(alpha, thr_i, margin, scalar_sign(margin) > 0)
    tested = s.anticanonical - thr * L
    cii = ConditionII(tested, is_nef(s, tested))
    hyps = tuple(s.hypotheses()) + ("X log canonical and Q-Gorenstein (smooth surface)",)
    return StabilityCertificate(s, L, SURFACE_DIM, amp, mu, thr, ci, cii, prov, hyps,
                                None if beta is None else LogData(beta))


def check_criterion(s: SurfaceModel, L: DivisorClass, alpha_lb, provenance: str | None = None) -> StabilityCertificate:
    """Evaluate both conditions for ``(X, L)``; raises :class:`NotAmpleError` if ``L`` is not ample."""
    return _evaluate(s, L, alpha_lb, None, provenance)


def check_log_criterion(s: SurfaceModel, L: DivisorClass, alpha_log_lb, beta,
                        provenance: str | None = None) -> StabilityCertificate:
    """Log variant with cone angle ``beta`` along an anticanonical boundary ``D`` (declared)."""
    beta = _as_fraction(beta)
    if not 0 <= beta <= 1:
        raise ValueError("beta must lie in [0, 1]")
    return _evaluate(s, L, alpha_log_lb, beta, provenance)


@dataclass(frozen=True)
class BetaBound:
    """Supremum of certifiable cone angles; ``attained`` is False for an open supremum."""

    value: object
    attained: bool
    certified: bool = True
    reason: str = ""

    def to_json(self) -> dict:
        return {"value": None if self.value is None else scalar_to_json(self.value),
                "attained": self.attained, "certified": self.certified, "reason": self.reason}


def max_certified_beta(s: SurfaceModel, L: DivisorClass, alpha_log_lb) -> BetaBound:
    cert = check_criterion(s, L, alpha_log_lb)
    if not cert.condition_ii.passed:
        return BetaBound(None, False, False, "condition (ii) fails: no cone angle can be certified")
    if scalar_sign(cert.slope) <= 0:
        raise DegeneratePolarisation("max_certified_beta needs positive slope")
    alpha = cert.condition_i.alpha_lower
    raw = alpha / cert.threshold
    if scalar_cmp(raw, 1) > 0:
        return BetaBound(Fraction(1), True, True, "capped at beta = 1")
    return BetaBound(raw, False, True, "open: alpha > beta*threshold is strict")


def numerical_type(mu, condition_ii: bool, anticanonical_nef: bool) -> NumericalType:
    """Fano / numerically Calabi-Yau dichotomy forced by condition (ii)."""
    sgn = scalar_sign(mu)
    if sgn > 0 and condition_ii:
        return NumericalType.FANO
    if sgn == 0 and anticanonical_nef:
        return NumericalType.CALABI_YAU
    return NumericalType.INAPPLICABLE


def classify_numerical_type(s: SurfaceModel, L: DivisorClass) -> NumericalType:
    mu = slope(s, L)
    tested = s.anticanonical - criterion_threshold(mu) * L
    return numerical_type(mu, bool(is_nef(s, tested)), bool(is_nef(s, s.anticanonical)))


@dataclass(frozen=True)
class OpennessReport:
    strict_i: bool
    strict_ii: bool
    margin_i: object
    ample_ii: PositivityResult
    annotation: str | None

    @property
    def open(self) -> bool:
        return self.strict_i and self.strict_ii

    def to_json(self) -> dict:
        return {"strict_i": self.strict_i, "strict_ii": self.strict_ii,
                "margin_i": scalar_to_json(self.margin_i), "ample_ii": self.ample_ii.to_json(),
                "annotation": self.annotation}


def openness_margins(cert: StabilityCertificate) -> OpennessReport:
    """Whether both inequalities hold strictly (condition (ii) as ampleness), so nearby polarisations stay certified."""
    amp = is_ample(cert.surface, cert.condition_ii.tested_class)
    strict_i = scalar_sign(cert.condition_i.margin) > 0
    strict_ii = amp.ok
    note = OPEN_NOTE if (cert.certified and strict_i and strict_ii) else None
    return OpennessReport(strict_i, strict_ii, cert.condition_i.margin, amp, note)


def annotate_openness(cert: StabilityCertificate) -> StabilityCertificate:
    rep = openness_margins(cert)
    if rep.annotation is None:
        return cert
    return replace(cert, annotations=cert.annotations + (rep.annotation,))
