"""On-disk cache of power sums S_d(j), shared safely between runs.

Layout: one file per (d, j) under a directory keyed by the field,

    <root>/p<p>_m<m>[_mod<digits>]/S_d<d>_j<j>.txt

holding a single line

    deg <k>: c_0 c_1 ... c_k

where each c_i is the base-p digit string of the coefficient (w^0 digit
first) and the zero polynomial is written as ``deg -inf:``.  The format
is line-oriented, diff-able and language-neutral.  Writes go to a
temporary file in the same directory followed by an atomic rename, so
parallel runs may share a cache directory.

A cache hit can be spot-checked: with probability ``verify_fraction``
the caller is told to recompute and compare (power_sum does exactly
that), raising CacheCorruption on mismatch.
"""

from __future__ import annotations

import os
import random
import tempfile
from pathlib import Path

from .errors import CacheCorruption
from .ffpoly import FiniteField, Poly

ENV_CACHE_DIR = "FFZETA_CACHE_DIR"


class PowerSumCache:
    def __init__(self, root: str | os.PathLike, verify_fraction: float = 0.05,
                 seed: int = 0x5EED5):
        self.root = Path(root)
        self.verify_fraction = verify_fraction
        self._rng = random.Random(seed)
        self.hits = 0
        self.misses = 0
        self.writes = 0
        self.spot_checks = 0

    # -- keying --------------------------------------------------------------

    def field_dir(self, field: FiniteField) -> Path:
        name = f"p{field.p}_m{field.m}"
        if field.m > 1:
            digits = "".join(str(c) for c in field.modulus)
            name += f"_mod{digits}"
        return self.root / name

    def path(self, field: FiniteField, d: int, j: int) -> Path:
        return self.field_dir(field) / f"S_d{d}_j{j}.txt"

    # -- io --------------------------------------------------------------------

    def get(self, field: FiniteField, d: int, j: int) -> Poly | None:
        p = self.path(field, d, j)
        try:
            text = p.read_text()
        except FileNotFoundError:
            self.misses += 1
            return None
        except OSError as exc:
            raise CacheCorruption(f"unreadable cache entry {p}: {exc}")
        self.hits += 1
        return self._parse(field, text, p)

    def put(self, field: FiniteField, d: int, j: int, value: Poly) -> None:
        target = self.path(field, d, j)
        target.parent.mkdir(parents=True, exist_ok=True)
        fd, tmp = tempfile.mkstemp(dir=target.parent, prefix=".tmp_", suffix=".txt")
        try:
            with os.fdopen(fd, "w") as fh:
                fh.write(self._render(value))
            os.replace(tmp, target)
        except BaseException:
            try:
                os.unlink(tmp)
            except OSError:
                pass
            raise
        self.writes += 1

    def should_spot_check(self) -> bool:
        if self.verify_fraction <= 0:
            return False
        hit = self._rng.random() < self.verify_fraction
        if hit:
            self.spot_checks += 1
        return hit

    # -- format -----------------------------------------------------------------

    @staticmethod
    def _render(value: Poly) -> str:
        if value.is_zero():
            return "deg -inf:\n"
        digits = " ".join(value.to_digit_strings())
        return f"deg {int(value.degree)}: {digits}\n"

    @staticmethod
    def _parse(field: FiniteField, text: str, origin: Path) -> Poly:
        line = text.strip()
        if not line.startswith("deg ") or ":" not in line:
            raise CacheCorruption(f"malformed cache entry {origin}")
        head, _, tail = line.partition(":")
        deg_str = head[4:].strip()
        tail = tail.strip()
        if deg_str == "-inf":
            if tail:
                raise CacheCorruption(f"zero entry with coefficients in {origin}")
            return Poly.zero(field)
        try:
            deg = int(deg_str)
            coeffs = [field.decode_str(tok) for tok in tail.split()]
        except ValueError as exc:  # covers decode_str's digit errors too
            raise CacheCorruption(f"malformed cache entry {origin}: {exc}")
        if len(coeffs) != deg + 1 or (coeffs and coeffs[-1] == 0):
            raise CacheCorruption(f"inconsistent degree in cache entry {origin}")
        return Poly(field, coeffs)


def cache_from_env(default: str | None = None,
                   verify_fraction: float = 0.05) -> PowerSumCache | None:
    """Cache at $FFZETA_CACHE_DIR, or at `default`, or None."""
    root = os.environ.get(ENV_CACHE_DIR, default)
    if not root:
        return None
    return PowerSumCache(root, verify_fraction)
