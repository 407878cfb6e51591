"""Command-line front end.

Every subcommand runs one library operation and prints its result as JSON
(sorted keys, exact scalars encoded by :mod:`kstab.exact`) or as text built
from the same display strings.  Exit status is 0 whenever a result was
computed, including an Inconclusive verdict; input and usage errors exit 2.
"""
from __future__ import annotations

import argparse
import json
import locale
import os
import sys
from fractions import Fraction

from . import alpha as alpha_mod
from . import dfcalc, picard, region, stability
from .exact import display, parse_scalar, scalar_to_json
from .picard import DivisorClass, SurfaceModel

GRAMMAR = """\
input grammar:
  surface    dp1 | P2 | r=N | N | JSON like {"r":8,"general_position":true,"no_cuspidal_anticanonical":true}
  divisor    signed sum of [coeff] H and [coeff] Ek terms, coeff an integer or p/q,
             e.g. "3H - E1 - E2 - E3 - E4 - E5 - E6 - E7 - 4/3 E8"; "E1 - ... - E7" fills in
  family     divisor with one parameter term, e.g. "3H - E1 - ... - E7 - t*E8"
  scalar     rational p/q, or an expression with sqrt, e.g. "(10-sqrt(10))/9"
  alpha      builtin:dp1 | scalar (a scalar needs --provenance)
  a value starting with '-' must be attached with '=', e.g. --D1="-3H + E1 + E2"
config file (--config): key=value lines; keys surface, general_position,
  no_cuspidal_anticanonical, output; '#' starts a comment
"""


class InputError(ValueError):
    pass


# ---- parsing helpers --------------------------------------------------------

def _bool(text: str) -> bool:
    t = text.strip().lower()
    if t in ("1", "true", "yes", "on"):
        return True
    if t in ("0", "false", "no", "off"):
        return False
    raise InputError(f"not a boolean: {text!r}")


def read_config(path: str) -> dict:
    out = {}
    with open(path, encoding="utf-8") as fh:
        for no, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise InputError(f"{path}:{no}: expected key=value")
            k, v = (x.strip() for x in line.split("=", 1))
            out[k] = v.strip('"').strip("'")
    return out


def parse_surface(text: str, general_position: bool | None = None, no_cusp: bool | None = None) -> SurfaceModel:
    t = text.strip()
    if t.startswith("{"):
        obj = json.loads(t)
        s = SurfaceModel(int(obj["r"]), bool(obj.get("general_position", True)),
                         bool(obj.get("no_cuspidal_anticanonical", False)))
    elif t.lower() == "dp1":
        s = SurfaceModel.dp1()
    elif t.lower() in ("p2", "r=0"):
        s = SurfaceModel(0)
    elif t.lower().startswith("r="):
        s = SurfaceModel(int(t[2:]))
    elif t.isdigit():
        s = SurfaceModel(int(t))
    else:
        raise InputError(f"unknown surface {text!r}")
    if general_position is not None or no_cusp is not None:
        s = SurfaceModel(s.r,
                         s.general_position if general_position is None else general_position,
                         s.no_cuspidal_anticanonical if no_cusp is None else no_cusp)
    return s


def _scalar(text: str):
    return parse_scalar(text)


def _rational(text: str) -> Fraction:
    v = parse_scalar(text)
    if not isinstance(v, Fraction):
        raise InputError(f"expected a rational number, got {text!r}")
    return v


def _load_json(path: str):
    with open(path, encoding="utf-8") as fh:
        return json.load(fh)


def _dp1_lambda(s: SurfaceModel, L: DivisorClass):
    """Read ``lambda`` off ``3H - E1 - ... - E7 - lambda*E8``."""
    if s.r != 8 or L.h != 3 or any(e != 1 for e in L.e[:7]):
        raise InputError("builtin:dp1 needs L = 3H - E1 - ... - E7 - lambda*E8 on a degree-one del Pezzo")
    return L.e[7]


def _alpha_for(args, s: SurfaceModel, L: DivisorClass):
    spec = args.alpha.strip()
    if spec.lower() == "builtin:dp1":
        lam = _dp1_lambda(s, L)
        return alpha_mod.dp1_alpha_lower(lam, s), alpha_mod.DP1_PROVENANCE
    if spec.lower().startswith("builtin:"):
        raise InputError(f"unknown built-in alpha bound {spec!r} (available: builtin:dp1)")
    if not args.provenance:
        raise InputError("a user-supplied alpha bound needs --provenance")
    return _scalar(spec), args.provenance


# ---- output -----------------------------------------------------------------

def _text(obj, indent: int = 0) -> list[str]:
    pad = "  " * indent
    if isinstance(obj, dict):
        if "display" in obj and set(obj) <= {"kind", "p", "q", "a", "b", "d", "display", "approx",
                                             "H", "E", "r", "poly", "lo", "hi"}:
            return [pad + str(obj["display"])]
        lines = []
        for k in sorted(obj):
            v = obj[k]
            sub = _text(v, indent + 1)
            if len(sub) == 1 and not isinstance(v, (dict, list)) or (len(sub) == 1 and isinstance(v, dict)):
                lines.append(f"{pad}{k}: {sub[0].strip()}")
            else:
                lines.append(f"{pad}{k}:")
                lines += sub
        return lines
    if isinstance(obj, list):
        if not obj:
            return [pad + "(none)"]
        out = []
        for v in obj:
            sub = _text(v, indent + 1)
            out.append(pad + "- " + sub[0].strip())
            out += sub[1:]
        return out
    if obj is None:
        return [pad + "-"]
    if isinstance(obj, bool):
        return [pad + ("yes" if obj else "no")]
    return [pad + str(obj)]


def emit(payload: dict, mode: str, text: str | None = None, out=None):
    out = out or sys.stdout
    if mode == "json":
        out.write(json.dumps(payload, sort_keys=True, indent=2, ensure_ascii=True) + "\n")
    else:
        out.write((text if text is not None else "\n".join(_text(payload))) + "\n")


# ---- subcommands ------------------------------------------------------------

def cmd_surface_info(args, s):
    K = s.canonical
    sig = picard.signature(s.r)
    payload = {"surface": s.to_json(), "canonical": K.to_json(), "K_squared": display(K.dot(K)),
               "exceptional_curve_count": len(s.exceptional_curves), "signature": list(sig),
               "hypotheses": s.hypotheses()}
    return payload, None


def cmd_intersect(args, s):
    a, b = s.parse(args.D1), s.parse(args.D2)
    v = picard.intersect(s, a, b)
    return {"D1": a.to_json(), "D2": b.to_json(), "value": scalar_to_json(v)}, display(v)


def cmd_curves(args, s):
    cs = s.exceptional_curves
    if args.count:
        return {"r": s.r, "count": len(cs)}, str(len(cs))
    return {"r": s.r, "count": len(cs), "curves": [c.to_json() for c in cs]}, \
        "\n".join(str(c) for c in cs) or "(none)"


def cmd_nef(args, s):
    D = s.parse(args.D)
    return {"class": D.to_json(), "nef": picard.is_nef(s, D).to_json()}, None


def cmd_ample(args, s):
    D = s.parse(args.D)
    return {"class": D.to_json(), "ample": picard.is_ample(s, D).to_json()}, None


def cmd_nef_threshold(args, s):
    base, direction = s.parse(args.base), s.parse(args.direction)
    return picard.nef_threshold(s, base, direction).to_json(), None


def cmd_slope(args, s):
    L = s.parse(args.L)
    mu = stability.slope(s, L)
    return {"L": L.to_json(), "slope": scalar_to_json(mu),
            "threshold": scalar_to_json(stability.criterion_threshold(mu))}, None


def cmd_alpha_bound(args, s):
    if args.flag_data:
        data = alpha_mod.FlagResolutionData.from_json(_load_json(args.flag_data))
        if args.beta is not None:
            v = alpha_mod.log_flag_upper_bound(data, _rational(args.beta))
            kind = "log flag-ideal upper bound"
        else:
            v = alpha_mod.flag_upper_bound(data)
            kind = "flag-ideal upper bound"
        return {"upper": scalar_to_json(v), "kind": kind, "data": data.to_json()}, None
    if args.lam is None:
        raise InputError("alpha-bound needs --lambda (built-in dP1 bound) or --flag-data FILE")
    b = alpha_mod.dp1_alpha_bound(_scalar(args.lam), s)
    return b.to_json(), None


def _certificate(args, s, beta=None):
    L = s.parse(args.L)
    alpha, prov = _alpha_for(args, s, L)
    if beta is None:
        cert = stability.check_criterion(s, L, alpha, prov)
    else:
        cert = stability.check_log_criterion(s, L, alpha, beta, prov)
    cert = stability.annotate_openness(cert)
    return cert.to_json(), cert.audit_trail()


def cmd_certify(args, s):
    return _certificate(args, s)


def cmd_log_certify(args, s):
    return _certificate(args, s, _rational(args.beta))


def cmd_max_beta(args, s):
    L = s.parse(args.L)
    alpha, _ = _alpha_for(args, s, L)
    return stability.max_certified_beta(s, L, alpha).to_json(), None


def cmd_region(args, s):
    spec = args.alpha.strip().lower()
    if args.family is None:
        if spec != "builtin:dp1":
            raise InputError("region without --family only supports --alpha builtin:dp1")
        fam = region.dp1_family(s, args.param or "lambda")
    else:
        param = args.param or "t"
        if spec == "builtin:dp1":
            base, direction = picard.parse_linear_divisor(args.family, s.r, param)
            dp1 = region.dp1_family(s, param)
            if base != dp1.base or direction != dp1.direction:
                raise InputError("builtin:dp1 applies only to 3H - E1 - ... - E7 - t*E8")
            fam = dp1
        else:
            if not args.provenance:
                raise InputError("a user-supplied alpha bound needs --provenance")
            fam = region.family_from_text(s, args.family, region.constant_alpha(_rational(args.alpha), param),
                                          param, args.provenance)
    res = region.certified_region(fam)
    return res.to_json(), region.region_report(res)


def _table(args) -> dfcalc.IntersectionTable:
    return dfcalc.IntersectionTable.from_json(_load_json(args.table))


def cmd_df_eval(args, s):
    beta = None if args.beta is None else _rational(args.beta)
    return dfcalc.df_certificate(_table(args), beta).to_json(), None


def cmd_df_normal_cone(args, s):
    L = s.parse(args.L)
    t = dfcalc.normal_cone_point_table(s, L)
    return dfcalc.df_certificate(t).to_json(), None


def cmd_validate_table(args, s):
    return dfcalc.validate_sign_lemmas(_table(args)).to_json(), None


def cmd_perturb_delta(args, s):
    d = alpha_mod.perturbation_delta(_scalar(args.eps), _scalar(args.c), _scalar(args.alpha_value))
    return {"delta": scalar_to_json(d)}, display(d)


COMMANDS = {
    "surface-info": (cmd_surface_info, "Picard data, canonical class and hypotheses"),
    "intersect": (cmd_intersect, "intersection number D1.D2"),
    "curves": (cmd_curves, "(-1)-curves of the blow-up"),
    "nef": (cmd_nef, "nefness test with witness"),
    "ample": (cmd_ample, "ampleness test with witness"),
    "nef-threshold": (cmd_nef_threshold, "largest t with base + t*direction nef"),
    "slope": (cmd_slope, "slope (-K.L)/L^2 and criterion threshold"),
    "alpha-bound": (cmd_alpha_bound, "built-in lower bound or flag-ideal upper bound"),
    "certify": (cmd_certify, "apply the alpha-invariant criterion"),
    "log-certify": (cmd_log_certify, "log criterion with cone angle beta"),
    "max-beta": (cmd_max_beta, "largest certifiable cone angle"),
    "region": (cmd_region, "exact certified parameter region of a family"),
    "df-eval": (cmd_df_eval, "Donaldson-Futaki invariant of an intersection table"),
    "df-normal-cone": (cmd_df_normal_cone, "DF of the deformation to the normal cone of a point"),
    "validate-table": (cmd_validate_table, "sign checks on an intersection table"),
    "perturb-delta": (cmd_perturb_delta, "perturbation step c*eps/(2*alpha+eps)"),
}


def build_parser() -> argparse.ArgumentParser:
    # SUPPRESS keeps a subparser from resetting options given before the subcommand
    common = argparse.ArgumentParser(add_help=False, argument_default=argparse.SUPPRESS, allow_abbrev=False)
    common.add_argument("--output", choices=("json", "text"))
    common.add_argument("--config", help="key=value defaults file")
    common.add_argument("--surface", help="surface spec (default dp1)")
    common.add_argument("--r", type=int, help="number of blown-up points (overrides --surface)")
    gp = common.add_mutually_exclusive_group()
    gp.add_argument("--general-position", dest="general_position", action="store_true")
    gp.add_argument("--special-position", dest="general_position", action="store_false")
    nc = common.add_mutually_exclusive_group()
    nc.add_argument("--no-cusp", dest="no_cusp", action="store_true",
                    help="declare that |-K_X| contains no cuspidal curve")
    nc.add_argument("--cusp-possible", dest="no_cusp", action="store_false")

    p = argparse.ArgumentParser(prog="kstab", allow_abbrev=False, description="Exact K-stability certificates for blow-ups of P^2.",
                                epilog=GRAMMAR, formatter_class=argparse.RawDescriptionHelpFormatter,
                                parents=[common])
    sub = p.add_subparsers(dest="command", required=True, metavar="COMMAND")
    for name, (_, help_) in COMMANDS.items():
        sp = sub.add_parser(name, help=help_, parents=[common], epilog=GRAMMAR, allow_abbrev=False,
                            formatter_class=argparse.RawDescriptionHelpFormatter)
        if name == "intersect":
            sp.add_argument("--D1", required=True)
            sp.add_argument("--D2", required=True)
        elif name == "curves":
            sp.add_argument("--count", action="store_true")
        elif name in ("nef", "ample"):
            sp.add_argument("--D", required=True)
        elif name == "nef-threshold":
            sp.add_argument("--base", required=True)
            sp.add_argument("--direction", required=True)
        elif name in ("slope", "df-normal-cone"):
            sp.add_argument("--L", required=True)
        elif name == "alpha-bound":
            sp.add_argument("--lambda", dest="lam")
            sp.add_argument("--flag-data")
            sp.add_argument("--beta")
        elif name in ("certify", "log-certify", "max-beta"):
            sp.add_argument("--L", required=True)
            sp.add_argument("--alpha", required=True)
            sp.add_argument("--provenance")
            if name == "log-certify":
                sp.add_argument("--beta", required=True)
        elif name == "region":
            sp.add_argument("--family")
            sp.add_argument("--alpha", default="builtin:dp1")
            sp.add_argument("--param")
            sp.add_argument("--provenance")
        elif name in ("df-eval", "validate-table"):
            sp.add_argument("--table", required=True)
            if name == "df-eval":
                sp.add_argument("--beta")
        elif name == "perturb-delta":
            sp.add_argument("--eps", required=True)
            sp.add_argument("--c", required=True)
            sp.add_argument("--alpha", dest="alpha_value", required=True)
    return p


def _force_c_locale():
    os.environ["LC_ALL"] = "C"
    try:
        locale.setlocale(locale.LC_ALL, "C")
    except locale.Error:
        pass


def run(argv=None, out=None, err=None) -> int:
    _force_c_locale()
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    args = parser.parse_args(argv)
    for k in ("output", "config", "surface", "r", "general_position", "no_cusp"):
        if not hasattr(args, k):
            setattr(args, k, None)
    try:
        cfg = read_config(args.config) if args.config else {}
        mode = args.output or cfg.get("output", "text")
        if mode not in ("json", "text"):
            raise InputError(f"unknown output mode {mode!r}")
        gp = args.general_position
        if gp is None and "general_position" in cfg:
            gp = _bool(cfg["general_position"])
        nc = args.no_cusp
        if nc is None and "no_cuspidal_anticanonical" in cfg:
            nc = _bool(cfg["no_cuspidal_anticanonical"])
        if args.r is not None:
            s = parse_surface(f"r={args.r}", gp, nc)
        else:
            s = parse_surface(args.surface or cfg.get("surface", "dp1"), gp, nc)
        fn = COMMANDS[args.command][0]
        payload, text = fn(args, s)
    except (ValueError, KeyError, TypeError, OSError, json.JSONDecodeError) as exc:
        err.write(f"kstab {args.command}: error: {exc}\n\n{GRAMMAR}")
        return 2
    emit(payload, mode, text, out)
    return 0


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
