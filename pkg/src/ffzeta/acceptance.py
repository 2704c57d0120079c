"""The verification battery: one runner per acceptance criterion.

Each criterion runs at its stated grid (``quick=True`` shrinks the grid
for smoke runs) and returns a CriterionResult with a machine-readable
parameter record, a pass/fail verdict and details.  All checks are
exact; there are no numeric tolerances anywhere.  Pseudo-random
exponents come from a fixed seed so every run sees the same sample.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass, field as dc_field

from .drinfeld import (
    carlitz_module,
    frobenius_charpoly,
    lseries_coeffs,
    lseries_coeffs_by_expansion,
    module_over_A,
)
from .errors import FFZetaError
from .ffpoly import FiniteField, Poly, enumerate_monic, enumerate_monic_primes
from .newton import newton_polygon, rh_verdict, zero_spectrum
from .nonarch import PadicExponent, SvPoint
from .sqrtcar import (
    hecke_identity,
    parity_report,
    psi_composition_check,
    psi_factorization_check,
)
from .zeta import (
    ceil_log,
    euler_removed_identity,
    power_sum,
    power_sum_enumerated,
    twist_identity_deg1,
    zeta_family_infty,
    zeta_family_vadic,
)

RANDOM_SEED = 0x5EED  # fixed: identical samples on every run
PADIC_DIGITS = 8      # "precision p^8" for sampled exponents


@dataclass
class CriterionResult:
    cid: str
    title: str
    params: dict
    passed: bool
    seconds: float
    details: dict = dc_field(default_factory=dict)

    def line(self) -> str:
        mark = "PASS" if self.passed else "FAIL"
        return f"[criterion {self.cid}] {mark}  {self.title}  ({self.seconds:.2f}s)"


def _result(cid, title, params, passed, t0, details=None) -> CriterionResult:
    return CriterionResult(cid, title, params, passed, time.perf_counter() - t0,
                           details or {})


# ---------------------------------------------------------------------------

def criterion_1(quick=False, cache=None, threads=1) -> CriterionResult:
    """Special values are polynomials: a zero window right after the
    logarithmic degree bound, for every exponent in the grid."""
    t0 = time.perf_counter()
    jmax = 60 if quick else 200
    rs = (2, 3) if quick else (2, 3, 4, 5)
    failures = []
    for r in rs:
        field = _field_of_order(r)
        for j in range(jmax + 1):
            base = ceil_log(r, j + 1) + 1
            for d in (base + 1, base + 2, base + 3):
                if not power_sum(field, d, j, cache=cache).is_zero():
                    failures.append({"r": r, "j": j, "d": d})
    return _result("1", "vanishing window after the degree bound",
                   {"r": list(rs), "jmax": jmax}, not failures, t0,
                   {"failures": failures})


def _field_of_order(r: int) -> FiniteField:
    if r in (2, 3, 5, 7):
        return FiniteField(r)
    if r == 4:
        return FiniteField(2, 2)
    if r == 9:
        return FiniteField(3, 2)
    raise ValueError(f"no standard field of order {r} wired up")


def _sample_exponents(field: FiniteField, count: int, digits: int,
                      multiple_of: int = 1) -> list[PadicExponent]:
    rng = random.Random(RANDOM_SEED + field.order)
    out = []
    for _ in range(count):
        v = rng.randrange(field.p ** digits)
        out.append(PadicExponent.from_int(field.p, v * multiple_of, digits))
    return out


def criterion_2(quick=False, cache=None, threads=1) -> CriterionResult:
    """Every segment of the zeta family polygon at infinity has length 1
    and the polygon is non-provisional, across integer and sampled
    exponents."""
    t0 = time.perf_counter()
    jmax, nrand, dmax, prec = (6, 3, 5, 32) if quick else (30, 20, 8, 64)
    rs = (2,) if quick else (2, 3)
    failures = []
    for r in rs:
        field = _field_of_order(r)
        exps = [PadicExponent.from_int(field.p, -j, PADIC_DIGITS)
                for j in range(jmax + 1)]
        exps += _sample_exponents(field, nrand, PADIC_DIGITS)
        for idx, y in enumerate(exps):
            fam = zeta_family_infty(field, y, dmax, prec)
            poly = newton_polygon(fam)
            verdict = rh_verdict(zero_spectrum(poly, accept_provisional=True))
            if poly.provisional or not verdict.passed:
                failures.append({"r": r, "exponent_index": idx,
                                 "provisional": poly.provisional,
                                 "lengths": [s.length for s in poly.segments]})
    return _result("2", "simplicity of zeta zero spectra at infinity",
                   {"r": list(rs), "jmax": jmax, "random": nrand,
                    "dmax": dmax, "precision": prec},
                   not failures, t0, {"failures": failures})


def criterion_3(quick=False, cache=None, threads=1) -> CriterionResult:
    """Exact Euler-factor removal identity over primes of degree <= 3."""
    t0 = time.perf_counter()
    jmax, fdeg = (10, 2) if quick else (50, 3)
    rs = (2,) if quick else (2, 3)
    failures = []
    for r in rs:
        field = _field_of_order(r)
        primes = [f for dd in range(1, fdeg + 1)
                  for f in enumerate_monic_primes(field, dd)]
        for j in range(jmax + 1):
            totals: dict = {}
            for f in primes:
                rep = euler_removed_identity(field, j, f, cache=cache,
                                             totals=totals, threads=threads)
                if not rep.passed:
                    failures.append({"r": r, "j": j, "f": f.to_string()})
    return _result("3", "euler factor removal identity",
                   {"r": list(rs), "jmax": jmax, "prime_deg_max": fdeg},
                   not failures, t0, {"failures": failures})


def criterion_4(quick=False, cache=None, threads=1) -> CriterionResult:
    """Exact degree-1 twist identity between the finite place and infinity."""
    t0 = time.perf_counter()
    jmax = 20 if quick else 100
    rs = (2,) if quick else (2, 3, 4)
    failures = []
    for r in rs:
        field = _field_of_order(r)
        step = max(r - 1, 1)
        for j in range(0, jmax + 1, step):
            rep = twist_identity_deg1(field, j, cache=cache)
            if not rep.passed:
                failures.append({"r": r, "j": j})
    return _result("4", "degree-1 finite-place twist identity",
                   {"r": list(rs), "jmax": jmax}, not failures, t0,
                   {"failures": failures})


def criterion_5(quick=False, cache=None, threads=1) -> CriterionResult:
    """Simplicity of the v-adic zeta spectra at f = T for exponents in
    (r-1) times the exponent space."""
    t0 = time.perf_counter()
    jmax, nrand, dmax, prec = (6, 3, 5, 32) if quick else (30, 20, 8, 64)
    rs = (2,) if quick else (2, 3)
    failures = []
    for r in rs:
        field = _field_of_order(r)
        T = Poly.variable(field)
        unit_order = r - 1
        svs = [SvPoint.from_int(-(r - 1) * j, unit_order, field.p, PADIC_DIGITS)
               for j in range(jmax + 1)]
        for y in _sample_exponents(field, nrand, PADIC_DIGITS, multiple_of=r - 1):
            svs.append(SvPoint(0, y, unit_order))
        for idx, s in enumerate(svs):
            fam = zeta_family_vadic(field, s, T, dmax, prec)
            poly = newton_polygon(fam)
            verdict = rh_verdict(zero_spectrum(poly, accept_provisional=True))
            if poly.provisional or not verdict.passed:
                failures.append({"r": r, "exponent_index": idx,
                                 "provisional": poly.provisional,
                                 "lengths": [sg.length for sg in poly.segments]})
    return _result("5", "simplicity of v-adic zeta spectra at a degree-1 prime",
                   {"r": list(rs), "jmax": jmax, "random": nrand,
                    "dmax": dmax, "precision": prec},
                   not failures, t0, {"failures": failures})


def criterion_6(quick=False, cache=None, threads=1) -> CriterionResult:
    """Carlitz Frobenius norm equals the prime, and the L-series has
    c(n) = n (after unit bookkeeping if a nontrivial unit ever shows up)."""
    t0 = time.perf_counter()
    fdeg, dbound = (3, 4) if quick else (5, 6)
    rs = (2,) if quick else (2, 3)
    failures = []
    epsilons: dict = {}
    for r in rs:
        field = _field_of_order(r)
        module = carlitz_module(field)
        for dd in range(1, fdeg + 1):
            eps_seen = set()
            for f in enumerate_monic_primes(field, dd):
                data = frobenius_charpoly(module, f)
                eps_seen.add(data.epsilon)
                if data.epsilon == 0 or not data.verified:
                    failures.append({"r": r, "f": f.to_string(),
                                     "reason": "norm is not a unit multiple"})
            epsilons[f"r{r}_deg{dd}"] = sorted(eps_seen)
            if len(eps_seen) > 1:
                failures.append({"r": r, "deg": dd,
                                 "reason": "unit factor not constant"})
        coeffs = lseries_coeffs(module, dbound)
        signs = _sign_bookkeeping(field, coeffs, dbound)
        for d in range(dbound + 1):
            for n in enumerate_monic(field, d):
                if coeffs.at(n) != n.scale(signs.get(n, 1)):
                    failures.append({"r": r, "n": n.to_string(),
                                     "reason": "c(n) != n up to recorded units"})
    return _result("6", "carlitz frobenius and shifted-zeta coefficients",
                   {"r": list(rs), "prime_deg_max": fdeg, "degree_bound": dbound},
                   not failures, t0,
                   {"failures": failures[:20], "unit_factors": epsilons})


def _sign_bookkeeping(field, coeffs, dbound) -> dict:
    """Multiplicative unit factors from the recorded per-prime epsilons;
    all 1 unless some norm came out as a nontrivial unit multiple."""
    signs = {Poly.one(field): 1}
    for f, data in coeffs.local.items():
        df = int(f.degree)
        for n, sg in list(signs.items()):
            nd = int(n.degree)
            e = data.epsilon if data.epsilon else 1
            acc = sg
            for k in range(1, dbound // df + 1):
                if nd + k * df > dbound:
                    break
                acc = acc * e % field.p if field.m == 1 else field.mul(acc, e)
                signs[n * f ** k] = acc
    return signs


def criterion_7(quick=False, cache=None, threads=1) -> CriterionResult:
    """Rank-2 Frobenius charpoly verifies exactly and obeys the local
    degree bound 2 deg a <= deg f."""
    t0 = time.perf_counter()
    fdeg = 2 if quick else 4
    rs = (2,) if quick else (2, 3)
    failures = []
    for r in rs:
        field = _field_of_order(r)
        one = Poly.one(field)
        T = Poly.variable(field)
        modules = [module_over_A(field, [one, one], "g1=1"),
                   module_over_A(field, [T, one], "g1=theta")]
        for module in modules:
            for dd in range(1, fdeg + 1):
                for f in enumerate_monic_primes(field, dd):
                    try:
                        data = frobenius_charpoly(module, f)
                    except FFZetaError as exc:
                        failures.append({"r": r, "module": module.label,
                                         "f": f.to_string(), "error": str(exc)})
                        continue
                    if not (data.verified and data.trace_bound_ok):
                        failures.append({"r": r, "module": module.label,
                                         "f": f.to_string(),
                                         "verified": data.verified,
                                         "bound": data.trace_bound_ok})
    return _result("7", "rank-2 local degree bound and exact charpoly",
                   {"r": list(rs), "prime_deg_max": fdeg},
                   not failures, t0, {"failures": failures})


def criterion_8(quick=False, cache=None, threads=1) -> CriterionResult:
    """The square-root CM example: composition, coefficient identity,
    Euler-factor squares, and slope parities."""
    t0 = time.perf_counter()
    jmax_id, dmax_id = (10, 6) if quick else (50, 8)
    fac_deg = 2 if quick else 4
    jmax_par = 5 if quick else 20
    details: dict = {}
    a_ok = psi_composition_check()
    details["a_composition"] = a_ok
    b_fail = [j for j in range(jmax_id + 1)
              if not hecke_identity(j, dmax_id, cache=cache).passed]
    details["b_identity_failures"] = b_fail
    c_rep = psi_factorization_check(fac_deg)
    details["c_factorization"] = c_rep.passed
    d_v_fail, d_i_fail, provisional = [], [], []
    for j in range(jmax_par + 1):
        rep = parity_report(j, 8, 64)
        if not rep.vadic_all_odd:
            d_v_fail.append({"j": j,
                             "violations": [str(s) for s in rep.vadic_violations]})
        if not rep.infty_all_even:
            d_i_fail.append({"j": j,
                             "violations": [str(s) for s in rep.infty_violations]})
    details["d_vadic_odd_failures"] = d_v_fail
    details["d_infty_even_failures"] = d_i_fail
    passed = (a_ok and not b_fail and c_rep.passed
              and not d_v_fail and not d_i_fail)
    return _result("8", "square-root CM example suite",
                   {"jmax_identity": jmax_id, "dmax": dmax_id,
                    "factorization_deg": fac_deg, "jmax_parity": jmax_par},
                   passed, t0, details)


def criterion_9(quick=False, cache=None, threads=1) -> CriterionResult:
    """Oracle equivalences: partitioned enumeration against single-thread
    enumeration, and Euler-product recursion against symbolic expansion."""
    t0 = time.perf_counter()
    samples = 12 if quick else 50
    dbound = 3 if quick else 5
    rng = random.Random(RANDOM_SEED)
    failures = []
    fields = [_field_of_order(r) for r in (2, 3, 4, 5)]
    for _ in range(samples):
        field = rng.choice(fields)
        d = rng.randint(0, 4)
        j = rng.randint(0, 50)
        a = power_sum_enumerated(field, d, j, threads=3)
        b = power_sum_enumerated(field, d, j)
        if a != b:
            failures.append({"r": field.order, "d": d, "j": j,
                             "reason": "partitioned != single"})
    F2, F3 = _field_of_order(2), _field_of_order(3)
    one2 = Poly.one(F2)
    targets = [carlitz_module(F2), carlitz_module(F3),
               module_over_A(F2, [one2, one2], "rank2")]
    for module in targets:
        rec = lseries_coeffs(module, dbound)
        exp = lseries_coeffs_by_expansion(module, dbound)
        for d in range(dbound + 1):
            for n in enumerate_monic(module.base_field, d):
                if rec.at(n) != exp.at(n):
                    failures.append({"module": module.label,
                                     "n": n.to_string(),
                                     "reason": "recursion != expansion"})
    return _result("9", "independent-route equivalences",
                   {"samples": samples, "degree_bound": dbound},
                   not failures, t0, {"failures": failures})


def criterion_10(quick=False, cache=None, threads=1) -> CriterionResult:
    """Byte determinism: the quick battery serialises identically twice
    (timing excluded)."""
    t0 = time.perf_counter()
    from . import cli  # late import; cli owns the serialisation

    spec = "1,2,3,4,5,6,7,8,9"
    blob1 = cli.render_battery_json(run_battery(quick=True, cache=cache,
                                                criteria=spec),
                                    strip_timing=True)
    blob2 = cli.render_battery_json(run_battery(quick=True, cache=cache,
                                                criteria=spec),
                                    strip_timing=True)
    same = blob1 == blob2
    return _result("10", "byte-identical reports modulo timing",
                   {"battery": "quick 1-9"}, same, t0,
                   {"bytes": len(blob1)})


_RUNNERS = {
    "1": criterion_1, "2": criterion_2, "3": criterion_3, "4": criterion_4,
    "5": criterion_5, "6": criterion_6, "7": criterion_7, "8": criterion_8,
    "9": criterion_9, "10": criterion_10,
}


def run_battery(quick=False, cache=None, threads=1,
                criteria: str | None = None) -> list[CriterionResult]:
    """Run the requested criteria (comma-separated ids; default all ten)."""
    if criteria is None:
        wanted = [str(k) for k in range(1, 11)]
    else:
        wanted = [tok.strip() for tok in criteria.split(",") if tok.strip()]
        unknown = [tok for tok in wanted if tok not in _RUNNERS]
        if unknown:
            from .errors import UsageError
            raise UsageError(f"unknown criteria: {unknown}")
    return [_RUNNERS[cid](quick=quick, cache=cache, threads=threads)
            for cid in wanted]
