"""Command-line driver and report serialisation.

Every run prints one JSON envelope (or text/csv rendering of the same
data) embedding its full configuration, so outputs are reproducible
byte-for-byte; wall-clock timing lives in a separate ``timing`` object
that consumers strip before comparing runs.

Exit codes: 0 success, 2 usage error, 3 a mathematical verification
failed, 4 resource problems (e.g. unwritable cache directory).

Polynomial syntax on the command line: ``T^2+T+1`` over the prime
field; extension-field coefficients are bracketed base-p digit strings
with the w^0 digit first, e.g. ``[01]T^2+[11]`` over F_4.  The cache
directory may also be set through $FFZETA_CACHE_DIR.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from fractions import Fraction

from . import __version__
from .acceptance import CriterionResult, run_battery
from .cache import ENV_CACHE_DIR, PowerSumCache, cache_from_env
from .drinfeld import (
    carlitz_module,
    frobenius_charpoly,
    lseries_coeffs,
    lseries_special_coeffs,
    module_over_A,
)
from .errors import FFZetaError, UsageError
from .ffpoly import FiniteField, Poly, poly_parse
from .newton import NewtonPolygon, hensel_root, newton_polygon, rh_verdict, zero_spectrum
from .nonarch import LaurentSeries, PadicExponent, SvPoint, VadicElem
from .sqrtcar import (
    hecke_identity,
    parity_report,
    psi_composition_check,
    psi_factorization_check,
)
from .zeta import ceil_log, special_polynomial, zeta_family_infty, zeta_family_vadic

SCHEMA_VERSION = 1
EXIT_OK, EXIT_USAGE, EXIT_MATH, EXIT_RESOURCE = 0, 2, 3, 4


# ---------------------------------------------------------------------------
# serialisation
# ---------------------------------------------------------------------------

def poly_json(p: Poly) -> dict:
    return {"string": p.to_string(), "digits": p.to_digit_strings()}


def series_json(s: LaurentSeries) -> dict:
    return {"start": s.start if s.coeffs else None,
            "coeffs": [s.field.encode_str(c) for c in s.coeffs],
            "precision": s.prec}


def vadic_json(e: VadicElem) -> dict:
    return {"rep": e.rep.to_string(), "digits": e.rep.to_digit_strings(),
            "precision": e.ring.precision}


def _frac(x: Fraction) -> str:
    return str(x)


def polygon_json(np_: NewtonPolygon) -> dict:
    points = [{"d": d, "kind": "finite", "valuation": v} for d, v in np_.finite]
    points += [{"d": d, "kind": "zero_to_precision", "bound": b}
               for d, b in np_.bounds]
    points += [{"d": d, "kind": "exact_zero"} for d in np_.exact_zeros]
    points.sort(key=lambda row: row["d"])
    segs = [{"slope": _frac(s.slope), "length": s.length,
             "zero_valuation": _frac(s.zero_valuation),
             "abs_value_exponent": _frac(s.abs_value_exponent)}
            for s in np_.segments]
    return {"points": points, "vertices": [list(v) for v in np_.vertices],
            "segments": segs, "provisional": np_.provisional}


def verdict_json(v) -> dict:
    return {"passed": v.passed, "all_simple_beyond": v.all_simple_beyond,
            "unique_abs_value": v.unique_abs_value,
            "exceptions": [{"slope": _frac(s.slope), "length": s.length}
                           for s in v.exceptions]}


def envelope(command: str, config: dict, result: dict, seconds: float) -> dict:
    return {"schemaVersion": SCHEMA_VERSION,
            "command": command,
            "config": config,
            "result": result,
            "timing": {"seconds": round(seconds, 6)}}


def render_json(doc: dict) -> str:
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"


def render_battery_json(results: list[CriterionResult],
                        config: dict | None = None,
                        strip_timing: bool = False) -> str:
    records = [{"id": res.cid, "title": res.title, "params": res.params,
                "passed": res.passed, "details": res.details}
               for res in results]
    doc = {"schemaVersion": SCHEMA_VERSION,
           "command": "verify",
           "config": config or {},
           "result": {"records": records,
                      "all_passed": all(r.passed for r in results)},
           "timing": {"total_seconds": round(sum(r.seconds for r in results), 6),
                      "per_criterion": {r.cid: round(r.seconds, 6)
                                        for r in results}}}
    if strip_timing:
        del doc["timing"]
    return render_json(doc)


def _render_text(doc: dict) -> str:
    out = [f"# {doc['command']} (schema {doc['schemaVersion']})"]
    out.append("config: " + json.dumps(doc["config"], sort_keys=True))
    out.append(json.dumps(doc["result"], sort_keys=True, indent=2))
    if "timing" in doc:
        out.append("timing: " + json.dumps(doc["timing"], sort_keys=True))
    return "\n".join(out) + "\n"


def _render_csv(doc: dict) -> str:
    result = doc.get("result", {})
    polygon = result.get("polygon")
    if polygon is None:
        raise UsageError("csv output is only defined for the newton command")
    lines = ["kind,d,valuation_or_bound"]
    for row in polygon["points"]:
        val = row.get("valuation", row.get("bound", ""))
        lines.append(f"{row['kind']},{row['d']},{val}")
    for d, v in polygon["vertices"]:
        lines.append(f"vertex,{d},{v}")
    for seg in polygon["segments"]:
        lines.append(f"segment,{seg['slope']},{seg['length']}")
    return "\n".join(lines) + "\n"


def emit(doc: dict, fmt: str) -> str:
    if fmt == "json":
        return render_json(doc)
    if fmt == "text":
        return _render_text(doc)
    if fmt == "csv":
        return _render_csv(doc)
    raise UsageError(f"unknown output format {fmt!r}")


# ---------------------------------------------------------------------------
# shared argument handling
# ---------------------------------------------------------------------------

def _add_field_args(sp):
    sp.add_argument("--p", type=int, required=True, help="prime characteristic")
    sp.add_argument("--m", type=int, default=1, help="extension degree")
    sp.add_argument("--modulus", type=str, default=None,
                    help="field modulus digits, lowest first, e.g. 1,1,1")


def _add_common(sp):
    sp.add_argument("--format", choices=("json", "text", "csv"), default="json")
    sp.add_argument("--cache-dir", type=str, default=None,
                    help=f"power-sum cache directory (or ${ENV_CACHE_DIR})")
    sp.add_argument("--threads", type=int, default=1)


def _field_from(args) -> FiniteField:
    modulus = None
    if args.modulus:
        modulus = [int(tok) for tok in args.modulus.split(",")]
    return FiniteField(args.p, args.m, modulus)


def _cache_from(args) -> PowerSumCache | None:
    if getattr(args, "cache_dir", None):
        return PowerSumCache(args.cache_dir)
    return cache_from_env()


def _config_of(args, *names) -> dict:
    cfg = {}
    for name in names:
        cfg[name] = getattr(args, name.replace("-", "_"))
    return cfg


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def cmd_special(args) -> tuple[dict, int]:
    field = _field_from(args)
    cache = _cache_from(args)
    t0 = time.perf_counter()
    z = special_polynomial(field, args.j, args.dmax, cache=cache)
    result = {"coefficients": [poly_json(c) for c in z.coeffs],
              "observed_degree": z.observed_degree,
              "certified_polynomial": z.certified_polynomial}
    cfg = _config_of(args, "p", "m", "modulus", "j", "dmax", "cache_dir",
                     "threads", "format")
    return envelope("special", cfg, result, time.perf_counter() - t0), EXIT_OK


def _exponent_from(args, field: FiniteField, prec: int) -> PadicExponent:
    if args.y_digits:
        digs = [int(tok) for tok in args.y_digits.split(",")]
        return PadicExponent(field.p, digs)
    if args.y is None:
        raise UsageError("give --y or --y-digits")
    n = max(ceil_log(field.p, prec + 1), 8)
    return PadicExponent.from_int(field.p, args.y, n)


def cmd_newton(args) -> tuple[dict, int]:
    field = _field_from(args)
    t0 = time.perf_counter()
    prec = args.prec
    y = _exponent_from(args, field, prec)
    refined = []
    if args.f:
        f = poly_parse(field, args.f)
        unit_order = field.order ** int(f.degree) - 1
        s1 = args.s1 if args.s1 is not None else (args.y or 0)
        s = SvPoint(s1, y, max(unit_order, 1))
        fam = zeta_family_vadic(field, s, f, args.dmax, prec)
    else:
        fam = zeta_family_infty(field, y, args.dmax, prec)
    poly = newton_polygon(fam)
    spectrum = zero_spectrum(poly, accept_provisional=True)
    verdict = rh_verdict(spectrum)
    if args.refine and not args.f:
        from .newton import hensel_slack
        for seg in poly.segments:
            if seg.length == 1 and seg.slope.denominator == 1:
                target = prec - hensel_slack(int(seg.slope), len(fam.coeffs) - 1)
                if target <= 0:
                    refined.append({"slope": _frac(seg.slope),
                                    "skipped": "insufficient precision"})
                    continue
                root = hensel_root(fam.coeffs, int(seg.slope), target)
                refined.append({"slope": _frac(seg.slope),
                                "root": series_json(root),
                                "residual_valuation_at_least": target})
    result = {"polygon": polygon_json(poly),
              "verdict": verdict_json(verdict),
              "coefficients": [series_json(c) if isinstance(c, LaurentSeries)
                               else vadic_json(c) for c in fam.coeffs]}
    if refined:
        result["refined_roots"] = refined
    cfg = _config_of(args, "p", "m", "modulus", "y", "y_digits", "f", "s1",
                     "dmax", "prec", "refine", "threads", "format")
    return envelope("newton", cfg, result, time.perf_counter() - t0), EXIT_OK


def _module_from(args, field: FiniteField):
    if args.module == "carlitz":
        return carlitz_module(field)
    if not args.tau_coeffs:
        raise UsageError("give --module carlitz or --tau-coeffs")
    gs = [poly_parse(field, tok) for tok in args.tau_coeffs.split(",")]
    return module_over_A(field, gs, label=f"tau-coeffs {args.tau_coeffs}")


def cmd_frobenius(args) -> tuple[dict, int]:
    field = _field_from(args)
    t0 = time.perf_counter()
    f = poly_parse(field, args.f)
    module = _module_from(args, field)
    data = frobenius_charpoly(module, f)
    result = {"f": poly_json(f), "rank": data.rank,
              "mu": poly_json(data.mu),
              "a": poly_json(data.a) if data.a is not None else None,
              "epsilon": data.epsilon,
              "verified": data.verified,
              "trace_bound_ok": data.trace_bound_ok,
              "charpoly": data.charpoly_string()}
    cfg = _config_of(args, "p", "m", "modulus", "f", "module", "tau_coeffs",
                     "threads", "format")
    return envelope("frobenius", cfg, result, time.perf_counter() - t0), EXIT_OK


def cmd_lseries(args) -> tuple[dict, int]:
    field = _field_from(args)
    t0 = time.perf_counter()
    module = _module_from(args, field)
    coeffs = lseries_coeffs(module, args.degree_bound)
    table = [{"n": n.to_string(), "c": poly_json(v)}
             for n, v in sorted(coeffs.c.items(),
                                key=lambda kv: (int(kv[0].degree), kv[0].coeffs))]
    result = {"degree_bound": args.degree_bound,
              "coefficients": table,
              "skipped_primes": [f.to_string() for f in coeffs.skipped]}
    if args.j is not None:
        specials = lseries_special_coeffs(module, args.j, args.degree_bound,
                                          coeffs)
        result["special_coefficients"] = {
            "j": args.j, "values": [poly_json(c) for c in specials]}
    cfg = _config_of(args, "p", "m", "modulus", "module", "tau_coeffs",
                     "degree_bound", "j", "threads", "format")
    return envelope("lseries", cfg, result, time.perf_counter() - t0), EXIT_OK


def cmd_sqrtcar(args) -> tuple[dict, int]:
    t0 = time.perf_counter()
    cache = _cache_from(args)
    identity = hecke_identity(args.j, args.dmax, cache=cache)
    parity = parity_report(args.j, args.dmax, args.prec)
    composition = psi_composition_check()
    factorization = psi_factorization_check(min(args.dmax, 4))
    result = {
        "composition_ok": composition,
        "identity": {"j": identity.j, "dmax": identity.dmax,
                     "per_degree": identity.per_degree,
                     "passed": identity.passed},
        "factorization": {
            "passed": factorization.passed,
            "per_prime": [{"g_prime": g.to_string("u"),
                           "a": poly_json(data.a),
                           "mu": poly_json(data.mu), "ok": ok}
                          for g, data, ok in factorization.per_prime]},
        "parity": {
            "vadic_slopes": [_frac(s) for s in parity.vadic_slopes],
            "vadic_violations": [_frac(s) for s in parity.vadic_violations],
            "vadic_all_odd": parity.vadic_all_odd,
            "infty_slopes": [_frac(s) for s in parity.infty_slopes],
            "infty_violations": [_frac(s) for s in parity.infty_violations],
            "infty_all_even": parity.infty_all_even,
            "removed_factor_slope": parity.removed_factor_slope},
    }
    passed = composition and identity.passed and factorization.passed \
        and parity.passed
    cfg = _config_of(args, "j", "dmax", "prec", "cache_dir", "threads", "format")
    doc = envelope("sqrtcar", cfg, result, time.perf_counter() - t0)
    return doc, EXIT_OK if passed else EXIT_MATH


def cmd_verify(args) -> tuple[dict, int]:
    cache = _cache_from(args)
    results = run_battery(quick=args.quick, cache=cache,
                          threads=args.threads, criteria=args.criteria)
    for res in results:
        print(res.line(), file=sys.stderr)
    cfg = _config_of(args, "quick", "criteria", "threads", "cache_dir", "format")
    blob = render_battery_json(results, cfg)
    doc = json.loads(blob)
    code = EXIT_OK if all(r.passed for r in results) else EXIT_MATH
    return doc, code


# ---------------------------------------------------------------------------
# parser / entry point
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="ffzeta",
        description="exact zeta/L-series data over F_r[T]: special "
                    "polynomials, Newton polygons, Frobenius data, and the "
                    "verification battery")
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("special", help="special polynomial coefficients")
    _add_field_args(sp)
    sp.add_argument("--j", type=int, required=True)
    sp.add_argument("--dmax", type=int, default=None,
                    help="compute at least this many coefficients")
    _add_common(sp)

    sp = sub.add_parser("newton", help="coefficient family polygon and verdict")
    _add_field_args(sp)
    sp.add_argument("--y", type=int, default=None,
                    help="integer exponent (the family applies -y)")
    sp.add_argument("--y-digits", type=str, default=None,
                    help="explicit base-p digits of the exponent, lowest first")
    sp.add_argument("--f", type=str, default=None,
                    help="finite prime (v-adic family instead of infinity)")
    sp.add_argument("--s1", type=int, default=None,
                    help="finite-order exponent coordinate at f")
    sp.add_argument("--dmax", type=int, default=8)
    sp.add_argument("--prec", type=int, default=64)
    sp.add_argument("--refine", action="store_true",
                    help="Hensel-refine roots on unit integer slopes "
                         "(infinite place only)")
    _add_common(sp)

    sp = sub.add_parser("frobenius", help="Frobenius characteristic polynomial")
    _add_field_args(sp)
    sp.add_argument("--f", type=str, required=True)
    sp.add_argument("--module", type=str, default=None,
                    help='"carlitz" or use --tau-coeffs')
    sp.add_argument("--tau-coeffs", type=str, default=None,
                    help="comma list of A-polynomials g_1,...,g_rank")
    _add_common(sp)

    sp = sub.add_parser("lseries", help="Dirichlet coefficients of a module")
    _add_field_args(sp)
    sp.add_argument("--module", type=str, default=None)
    sp.add_argument("--tau-coeffs", type=str, default=None)
    sp.add_argument("--degree-bound", type=int, required=True)
    sp.add_argument("--j", type=int, default=None,
                    help="also emit exact special coefficients at this exponent")
    _add_common(sp)

    sp = sub.add_parser("sqrtcar", help="square-root CM example checks")
    sp.add_argument("--j", type=int, required=True)
    sp.add_argument("--dmax", type=int, default=8)
    sp.add_argument("--prec", type=int, default=64)
    _add_common(sp)

    sp = sub.add_parser("verify", help="run the acceptance battery")
    sp.add_argument("--quick", action="store_true")
    sp.add_argument("--criteria", type=str, default=None,
                    help="comma-separated criterion ids, default all")
    _add_common(sp)

    return ap


_DISPATCH = {
    "special": cmd_special,
    "newton": cmd_newton,
    "frobenius": cmd_frobenius,
    "lseries": cmd_lseries,
    "sqrtcar": cmd_sqrtcar,
    "verify": cmd_verify,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        doc, code = _DISPATCH[args.command](args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except FFZetaError as exc:
        hint = ""
        if exc.__class__.__name__ == "AllCoefficientsVanish":
            hint = " (raise --prec: every coefficient vanished to precision)"
        print(f"verification failure: {exc}{hint}", file=sys.stderr)
        return EXIT_MATH
    except ValueError as exc:
        # malformed polynomial/digit inputs surface here
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"resource error: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    sys.stdout.write(emit(doc, args.format))
    return code


if __name__ == "__main__":
    sys.exit(main())
