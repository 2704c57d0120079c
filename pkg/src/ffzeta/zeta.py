"""Power sums, special polynomials, and coefficient families of zeta data.

The central quantity is the exact power sum

    S_d(j) = sum of n^j over monic n of degree d in F_q[T].

Two independent routes compute it:

* ``method="enumeration"`` walks the monic polynomials (optionally in
  disjoint index partitions across threads) and sums their powers.  This
  is the oracle route: slow, transparent, exactly the definition.

* ``method="recursion"`` (the default) expands (T^d + m)^j binomially
  over the coefficient subspace V_d = {deg < d} and uses that the inner
  character sum over F_q kills every exponent not divisible by q-1.  All
  values lie in the prime subfield (the monic family is Galois stable),
  so the recursion runs on packed prime-field polynomials and is fast
  enough for four-digit exponents.  The test suite pins the two routes
  against each other across fields.

Families of local-field coefficients (the d-th coefficient of the zeta
series at a fixed exponent) are built from the same enumeration with the
bracket/one-unit machinery of :mod:`ffzeta.nonarch`.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import _packing as pk
from .errors import PreconditionViolated, ZeroPolynomial
from .ffpoly import FiniteField, Poly, enumerate_monic, monic_by_index
from .nonarch import (
    LaurentSeries,
    PadicExponent,
    SvPoint,
    VadicElem,
    VadicRing,
    pow_sv,
)


def ceil_log(r: int, x: int) -> int:
    """Smallest L with r^L >= x (x >= 1)."""
    L = 0
    v = 1
    while v < x:
        v *= r
        L += 1
    return L


# ---------------------------------------------------------------------------
# fast route: subspace binomial recursion on prime-field packed polynomials
# ---------------------------------------------------------------------------

class _SumEngine:
    """Tables E_d(t) = sum of m^t over all m with deg m < d, per (p, q).

    The values live in F_p[T]; for p = 2 they are stored as bit ints,
    otherwise as 16-bit digit-packed ints.  The memo is shared across
    threads; concurrent fills are idempotent (same exact value), so no
    locking is needed.
    """

    def __init__(self, p: int, q: int):
        self.p = p
        self.q = q
        self._E: dict[tuple[int, int], int] = {}

    def subspace_sum(self, d: int, t: int) -> int:
        key = (d, t)
        hit = self._E.get(key)
        if hit is not None:
            return hit
        p, q = self.p, self.q
        if d == 0:
            val = (pk.pk_pack([1]) if p != 2 else 1) if t == 0 else 0
        elif t == 0:
            val = 0
        else:
            acc = 0
            step = q - 1
            for s in range(step, t + 1, step):
                c = pk.binom_mod_p(t, s, p)
                if not c:
                    continue
                sub = self.subspace_sum(d - 1, t - s)
                if not sub:
                    continue
                if p == 2:
                    acc ^= sub << ((d - 1) * s)
                else:
                    scalar = (p - 1) * c % p
                    acc += (sub * scalar) << ((d - 1) * s * pk.DIGIT_BITS)
            val = acc if p == 2 else (
                pk.digits_mod(acc, p, (d - 1) * t + 1) if acc else 0)
        self._E[key] = val
        return val

    def monic_sum_coeffs(self, d: int, j: int) -> list[int]:
        p = self.p
        acc = 0
        for t, c in pk.lucas_subsets(j, p):
            sub = self.subspace_sum(d, t)
            if not sub:
                continue
            shift = d * (j - t)
            if p == 2:
                acc ^= sub << shift
            else:
                acc += (sub * c) << (shift * pk.DIGIT_BITS)
        if not acc:
            return []
        length = d * j + 1
        if p == 2:
            return pk.f2_to_coeffs(acc, length)
        return pk.pk_unpack(pk.digits_mod(acc, p, length), length).tolist()


_ENGINES: dict[tuple[int, int], _SumEngine] = {}


def _engine(field: FiniteField) -> _SumEngine:
    key = (field.p, field.order)
    eng = _ENGINES.get(key)
    if eng is None:
        eng = _ENGINES[key] = _SumEngine(*key)
    return eng


# ---------------------------------------------------------------------------
# oracle route: direct enumeration
# ---------------------------------------------------------------------------

def _index_coeffs(q: int, d: int, i: int) -> list[int]:
    out = [0] * (d + 1)
    out[d] = 1
    for k in range(d):
        i, out[k] = divmod(i, q)
    return out


def _sum_powers(field: FiniteField, coeff_lists, j: int, d: int) -> Poly:
    """Exact sum of n^j over the given degree-d coefficient lists."""
    p, m = field.p, field.m
    out_len = d * j + 1
    if m == 1 and p == 2:
        acc = 0
        for cs in coeff_lists:
            acc ^= pk.f2_pow(pk.f2_from_coeffs(cs), j)
        return Poly(field, pk.f2_to_coeffs(acc, out_len))
    if m == 1:
        vec = np.zeros(out_len, dtype=np.int64)
        for cs in coeff_lists:
            x = pk.pk_pow(cs, j, p)
            vec += pk.pk_unpack(x, out_len)
        return Poly(field, (vec % p).tolist())
    if p == 2 and field._planes is not None:
        pl = field._planes
        planes_acc = [0] * m
        for cs in coeff_lists:
            for e, plane in enumerate(pl.pow(cs, j)):
                planes_acc[e] ^= plane
        return Poly(field, pl.to_encodings(planes_acc, out_len))
    total = Poly.zero(field)
    for cs in coeff_lists:
        total = total + Poly(field, cs) ** j
    return total


def power_sum_enumerated(field: FiniteField, d: int, j: int, *,
                         start: int = 0, stop: int | None = None,
                         threads: int = 1) -> Poly:
    """S_d(j) by direct enumeration over monic index range [start, stop).

    With ``threads > 1`` the index range is split into disjoint chunks
    summed independently; field addition is exact and order-independent,
    so any partition gives the same value.
    """
    q = field.order
    total = q ** d
    if stop is None:
        stop = total
    if threads <= 1 or stop - start < 2 * threads:
        cs = (_index_coeffs(q, d, i) for i in range(start, stop))
        return _sum_powers(field, cs, j, d)
    bounds = np.linspace(start, stop, threads + 1, dtype=int).tolist()
    chunks = [(bounds[k], bounds[k + 1]) for k in range(threads)]
    with ThreadPoolExecutor(max_workers=threads) as ex:
        parts = list(ex.map(
            lambda ab: power_sum_enumerated(field, d, j, start=ab[0], stop=ab[1]),
            chunks))
    acc = Poly.zero(field)
    for part in parts:
        acc = acc + part
    return acc


def power_sum(field: FiniteField, d: int, j: int, *,
              cache=None, method: str = "auto", threads: int = 1) -> Poly:
    """Exact S_d(j); consults/updates the cache when one is supplied."""
    if d < 0 or j < 0:
        raise ValueError("need d >= 0 and j >= 0")
    if method == "enumeration":
        return power_sum_enumerated(field, d, j, threads=threads)
    if cache is not None:
        hit = cache.get(field, d, j)
        if hit is not None:
            if cache.should_spot_check():
                fresh = Poly(field, _engine(field).monic_sum_coeffs(d, j))
                if fresh != hit:
                    from .errors import CacheCorruption
                    raise CacheCorruption(
                        f"cache entry S_{d}({j}) disagrees with recomputation")
            return hit
    value = Poly(field, _engine(field).monic_sum_coeffs(d, j))
    if cache is not None:
        cache.put(field, d, j, value)
    return value


def coprime_power_sum(field: FiniteField, d: int, j: int, f: Poly) -> Poly:
    """Sum of n^j over monic degree-d n with f not dividing n, enumerated.

    Every n is enumerated individually: the full monic family in one
    pass and the multiples of f (each constructed as an explicit product
    and exponentiated on its own) in another; the coprime total is their
    exact difference.  No Euler-factor identity is consulted, which is
    the point: this is the oracle side of those identities.
    """
    total = power_sum_enumerated(field, d, j)
    return total - multiples_power_sum(field, d, j, f)


def multiples_power_sum(field: FiniteField, d: int, j: int, f: Poly) -> Poly:
    """Sum of n^j over monic degree-d multiples of f, each enumerated."""
    df = int(f.degree)
    if d < df:
        return Poly.zero(field)
    q = field.order

    def gen():
        for i in range(q ** (d - df)):
            n = monic_by_index(field, d - df, i) * f
            yield list(n.coeffs)

    return _sum_powers(field, gen(), j, d)


# ---------------------------------------------------------------------------
# special polynomials
# ---------------------------------------------------------------------------

@dataclass
class SpecialPolynomial:
    """z(x, -j): coefficients S_d(j) in A, observed x-degree, and the
    honest flag that vanishing beyond the computed window is heuristic."""

    field: FiniteField
    j: int
    coeffs: list[Poly]
    observed_degree: int
    certified_polynomial: bool = False

    @property
    def dmax(self) -> int:
        return len(self.coeffs) - 1

    def coefficient(self, d: int) -> Poly:
        if d < len(self.coeffs):
            return self.coeffs[d]
        return Poly.zero(self.field)


STOP_WINDOW = 3  # consecutive zero coefficients required beyond the log bound


def special_polynomial(field: FiniteField, j: int, dmax_hint: int | None = None,
                       *, cache=None) -> SpecialPolynomial:
    """Compute S_d(j) until the polynomial has visibly stopped.

    The stop rule: go at least to ceil(log_r(j+1)) + 1 and then require
    STOP_WINDOW consecutive zero coefficients.  The result records the
    observed degree; `certified_polynomial` stays False because vanishing
    beyond the window is not proved here.
    """
    r = field.order
    bound = ceil_log(r, j + 1) + 1
    floor_d = bound if dmax_hint is None else max(bound, dmax_hint)
    coeffs: list[Poly] = []
    zeros_run = 0
    d = 0
    while d <= floor_d or zeros_run < STOP_WINDOW:
        if d > floor_d + 64:
            from .errors import NonConvergence
            raise NonConvergence(
                "no zero window found far beyond the degree bound")
        s = power_sum(field, d, j, cache=cache)
        coeffs.append(s)
        zeros_run = 0 if s.coeffs else zeros_run + 1
        d += 1
    observed = max((i for i, c in enumerate(coeffs) if c.coeffs), default=0)
    return SpecialPolynomial(field, j, coeffs, observed)


# ---------------------------------------------------------------------------
# coefficient families
# ---------------------------------------------------------------------------

@dataclass
class CoefficientFamily:
    """d -> coefficient of x^(-d) of a series at a fixed exponent.

    ``place`` is "infinity" (coefficients are LaurentSeries in pi = 1/T)
    or "finite" (coefficients are VadicElem in A/(f^M), with ``ring``
    set).  Coefficients all carry precision >= ``precision``.
    """

    place: str
    field: FiniteField
    exponent: object
    coeffs: list
    precision: int
    ring: VadicRing | None = None
    label: str = ""

    @property
    def dmax(self) -> int:
        return len(self.coeffs) - 1


def _series_pow_trunc(field: FiniteField, coeffs: Sequence[int], e: int,
                      prec: int):
    """coeffs (a unit series window) raised to integer e >= 0, mod pi^prec.

    Returns a coefficient list of length <= prec.  Fast paths share the
    packed kernels; residue fields with m > 1 go through generic window
    multiplication.
    """
    p, m = field.p, field.m
    if m == 1 and p == 2:
        mask = (1 << prec) - 1
        acc = 1
        base = pk.f2_from_coeffs(coeffs) & mask
        while e:
            if e & 1:
                acc = pk.f2_mul(acc, base) & mask
            e >>= 1
            if e:
                base = pk.f2_mul(base, base) & mask
        return pk.f2_to_coeffs(acc, prec)
    if m == 1:
        mask = (1 << (pk.DIGIT_BITS * prec)) - 1
        acc = pk.pk_pack([1])
        base = pk.pk_pack(list(coeffs)[:prec])
        while e:
            if e & 1:
                acc = pk.digits_mod((acc * base) & mask, p, prec)
            e >>= 1
            if e:
                base = pk.digits_mod((base * base) & mask, p, prec)
        return pk.pk_unpack(acc, prec).tolist()
    from .nonarch import _window_mul
    acc = [1]
    base = list(coeffs)[:prec]
    while e:
        if e & 1:
            acc = list(_window_mul(field, acc, base, prec))
        e >>= 1
        if e:
            base = list(_window_mul(field, base, base, prec))
    return acc


def zeta_family_infty(field: FiniteField, y: PadicExponent, dmax: int,
                      prec: int) -> CoefficientFamily:
    """c_d(y) = sum over monic n of degree d of <n>^(-y), to precision prec.

    Note the sign: the exponent actually applied is -y.
    """
    e = (-y).value()
    if field.p ** y.precision < prec:
        from .errors import InsufficientPadicPrecision
        raise InsufficientPadicPrecision(
            f"need p^N >= {prec}, got p^{y.precision}")
    q = field.order
    out = []
    for d in range(dmax + 1):
        vec = _zero_acc(field, prec)
        for i in range(q ** d):
            bracket = _bracket_coeffs(field, d, i)
            powed = _series_pow_trunc(field, bracket, e, prec)
            vec = _acc_add(field, vec, powed)
        coeffs = _acc_done(field, vec, prec)
        out.append(LaurentSeries(field, 0, coeffs, prec))
    return CoefficientFamily("infinity", field, y, out, prec,
                             label="zeta at infinity")


def _bracket_coeffs(field: FiniteField, d: int, i: int) -> list[int]:
    q = field.order
    digs = [0] * d
    for k in range(d):
        i, digs[k] = divmod(i, q)
    return [1] + digs[::-1]


def _zero_acc(field, prec):
    if field.p == 2 and field.m == 1:
        return 0
    if field.m == 1:
        return np.zeros(prec, dtype=np.int64)
    return [0] * prec


def _acc_add(field, acc, coeffs):
    if field.p == 2 and field.m == 1:
        return acc ^ pk.f2_from_coeffs(coeffs)
    if field.m == 1:
        arr = np.zeros(len(acc), dtype=np.int64)
        arr[: len(coeffs)] = coeffs
        return acc + arr
    out = list(acc)
    for k, c in enumerate(coeffs[: len(out)]):
        out[k] = field.add(out[k], c)
    return out


def _acc_done(field, acc, prec):
    if field.p == 2 and field.m == 1:
        return pk.f2_to_coeffs(acc, prec)
    if field.m == 1:
        return (acc % field.p).tolist()
    return acc


def zeta_family_vadic(field: FiniteField, s: SvPoint, f: Poly, dmax: int,
                      prec: int) -> CoefficientFamily:
    """Coefficient d is the sum of n^(-s) over monic degree-d n coprime
    to f, in A/(f^prec)."""
    ring = VadicRing(f, prec)
    if field.p ** s.s2.precision < prec:
        from .errors import InsufficientPadicPrecision
        raise InsufficientPadicPrecision(
            f"need p^N >= {prec}, got p^{s.s2.precision}")
    if s.unit_order != ring.residue_order - 1 and ring.residue_order > 2:
        raise ValueError("exponent lives at a different prime (unit order mismatch)")
    minus_s = -s
    q = field.order
    df = int(f.degree)
    fast = ring._is_var and field.m == 1
    out = []
    for d in range(dmax + 1):
        if fast:
            vec = _zero_acc(field, prec * df)
            for n in _coprime_iter(field, d, f):
                c0 = n.coeffs[0]
                cinv = field.inv(c0)
                unit = [field.mul(cinv, c) for c in n.coeffs]
                powed = _series_pow_trunc(field, unit, minus_s.s2.value(), prec)
                w = field.pow(c0, minus_s.s1 % (q - 1)) if q > 2 else 1
                if w != 1:
                    powed = [field.mul(w, c) for c in powed]
                vec = _acc_add(field, vec, powed)
            coeffs = _acc_done(field, vec, prec)
            out.append(VadicElem(ring, Poly(field, coeffs)))
        else:
            acc = ring.zero()
            for n in _coprime_iter(field, d, f):
                acc = acc + pow_sv(n, minus_s, ring)
            out.append(acc)
    return CoefficientFamily("finite", field, s, out, prec, ring=ring,
                             label="zeta at a finite prime")


def _coprime_iter(field: FiniteField, d: int, f: Poly):
    """Monic degree-d polynomials coprime to f, enumerated directly."""
    df = int(f.degree)
    if d < df:
        yield from enumerate_monic(field, d)
        return
    for n in enumerate_monic(field, d):
        if not (n % f).is_zero():
            yield n


# ---------------------------------------------------------------------------
# identity reports
# ---------------------------------------------------------------------------

@dataclass
class IdentityReport:
    name: str
    params: dict
    per_degree: list[bool]
    passed: bool
    detail: str = ""


def interp_consistency(field: FiniteField, j: int, dmax: int, prec: int,
                       *, cache=None) -> IdentityReport:
    """Check c_d(-j) = S_d(j) * pi^(d*j) to the working precision.

    The left side goes through the p-adic machinery at the integer image
    of -j; the right side is the exact power sum placed into the window.
    """
    n_digits = max(ceil_log(field.p, prec), 1)
    y = PadicExponent.from_int(field.p, -j, n_digits)
    fam = zeta_family_infty(field, y, dmax, prec)
    results = []
    for d in range(dmax + 1):
        s = power_sum(field, d, j, cache=cache)
        rhs = poly_to_series_infty(s, prec).shift(d * j) if s.coeffs else \
            LaurentSeries.zero_to_precision(field, prec)
        results.append(fam.coeffs[d].agrees_with(rhs))
    return IdentityReport(
        "bracket interpolation consistency",
        {"r": field.order, "j": j, "dmax": dmax, "precision": prec},
        results, all(results))


def poly_to_series_infty(a: Poly, prec: int) -> LaurentSeries:
    """View a nonzero polynomial in T inside K = F_r((pi)): T^k = pi^(-k)."""
    if a.is_zero():
        raise ZeroPolynomial("zero has no leading behaviour at infinity")
    d = int(a.degree)
    window = [a.coefficient(d - k) for k in range(d + 1)]
    return LaurentSeries(a.field, -d, window, prec)


def euler_removed_identity(field: FiniteField, j: int, f: Poly,
                           dmax: int | None = None, *, cache=None,
                           totals: dict | None = None,
                           threads: int = 1) -> IdentityReport:
    """Exact check that removing the Euler factor at f multiplies the
    special polynomial by (1 - x^(-deg f) f^j).

    Left side: direct enumeration of coprime power sums.  Right side:
    S_d(j) - f^j * S_(d-deg f)(j) from the recursion route.  Both sides
    are exact elements of A; equality is coefficient-by-coefficient.
    ``totals`` optionally memoises the enumerated full sums across calls
    that share j (they do not depend on f).
    """
    df = int(f.degree)
    if dmax is None:
        z = special_polynomial(field, j, cache=cache)
        dmax = z.observed_degree + df + 2
    fj = f ** j
    per_degree = []
    for d in range(dmax + 1):
        if totals is not None:
            total = totals.get(d)
            if total is None:
                total = totals[d] = power_sum_enumerated(field, d, j,
                                                         threads=threads)
        else:
            total = power_sum_enumerated(field, d, j, threads=threads)
        lhs = total - multiples_power_sum(field, d, j, f)
        rhs = power_sum(field, d, j, cache=cache)
        if d >= df:
            rhs = rhs - fj * power_sum(field, d - df, j, cache=cache)
        per_degree.append(lhs == rhs)
    return IdentityReport(
        "euler factor removal",
        {"r": field.order, "j": j, "f": f.to_string(), "dmax": dmax},
        per_degree, all(per_degree))


def twist_identity_deg1(field: FiniteField, j: int, f: Poly | None = None,
                        dmax: int | None = None, *, cache=None) -> IdentityReport:
    """Exact check of the degree-1 finite-place twist:

        (coprime sums, T -> 1/T)  ==  (1 - x^(-1)) * (bracket sums)

    coefficient-by-coefficient as polynomials in pi.  Requires (r-1) | j.
    A degree-1 prime other than (T) is first moved to (T) by the affine
    substitution T -> T - c; the polygon data is unaffected.
    """
    r = field.order
    if (r - 1) > 1 and j % (r - 1) != 0:
        raise PreconditionViolated(f"need (r-1) | j, got j = {j}, r = {r}")
    if f is None:
        f = Poly.variable(field)
    if f.degree != 1 or not f.is_monic:
        raise PreconditionViolated("the twist is for monic degree-1 primes")
    shift_c = f.coefficient(0)
    if dmax is None:
        z = special_polynomial(field, j, cache=cache)
        dmax = z.observed_degree + 3
    T = Poly.variable(field)
    per_degree = []
    prev_bracket: Poly | None = None
    for d in range(dmax + 1):
        csum = _sum_polys(field,
                          (n ** j for n in _coprime_iter(field, d, f)))
        if shift_c:
            csum = _compose_linear(csum, T - Poly.constant(field, shift_c))
        lhs = csum  # same coefficient tuple read in pi after T -> 1/T
        s = power_sum(field, d, j, cache=cache)
        bracket_d = _reverse_into_pi(s, d * j)
        rhs = bracket_d - prev_bracket if prev_bracket is not None else bracket_d
        prev_bracket = bracket_d
        per_degree.append(lhs == rhs)
    return IdentityReport(
        "degree-1 finite-place twist",
        {"r": r, "j": j, "f": f.to_string(), "dmax": dmax},
        per_degree, all(per_degree))


def _sum_polys(field: FiniteField, it) -> Poly:
    acc = Poly.zero(field)
    for a in it:
        acc = acc + a
    return acc


def _compose_linear(a: Poly, lin: Poly) -> Poly:
    """a(lin) by Horner; lin has degree 1."""
    acc = Poly.zero(a.field)
    for c in reversed(a.coeffs):
        acc = acc * lin + Poly.constant(a.field, c)
    return acc


def _reverse_into_pi(s: Poly, pivot: int) -> Poly:
    """s(T) * pi^pivot as an exact polynomial in pi (pivot >= deg s)."""
    if s.is_zero():
        return s
    out = [0] * (pivot + 1)
    for k, c in enumerate(s.coeffs):
        out[pivot - k] = c
    return Poly(s.field, out)
