import json
import subprocess
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import pytest

from ffzeta import cli
from ffzeta.cache import PowerSumCache
from ffzeta.errors import CacheCorruption
from ffzeta.ffpoly import FiniteField, Poly, poly_parse
from ffzeta.zeta import power_sum

F2 = FiniteField(2)
F3 = FiniteField(3)
F4 = FiniteField(2, 2)

GOLDEN = Path(__file__).parent / "golden"


class TestCache:
    def test_roundtrip(self, tmp_path):
        cache = PowerSumCache(tmp_path, verify_fraction=0)
        value = power_sum(F3, 2, 7)
        cache.put(F3, 2, 7, value)
        assert cache.get(F3, 2, 7) == value

    def test_zero_entry(self, tmp_path):
        cache = PowerSumCache(tmp_path, verify_fraction=0)
        cache.put(F2, 3, 0, Poly.zero(F2))
        got = cache.get(F2, 3, 0)
        assert got is not None and got.is_zero()

    def test_extension_field_digits(self, tmp_path):
        cache = PowerSumCache(tmp_path, verify_fraction=0)
        value = power_sum(F4, 1, 5)
        cache.put(F4, 1, 5, value)
        assert cache.get(F4, 1, 5) == value
        assert "mod111" in str(cache.field_dir(F4))

    def test_miss_returns_none(self, tmp_path):
        cache = PowerSumCache(tmp_path)
        assert cache.get(F2, 1, 1) is None

    def test_corrupt_entry_detected(self, tmp_path):
        cache = PowerSumCache(tmp_path, verify_fraction=0)
        cache.put(F2, 1, 1, power_sum(F2, 1, 1))
        path = cache.path(F2, 1, 1)
        path.write_text("deg 2: 1 1\n")  # inconsistent degree
        with pytest.raises(CacheCorruption):
            cache.get(F2, 1, 1)

    def test_spot_check_catches_tampering(self, tmp_path):
        cache = PowerSumCache(tmp_path, verify_fraction=1.0)
        cache.put(F2, 1, 3, poly_parse(F2, "T+1"))  # wrong on purpose
        with pytest.raises(CacheCorruption):
            power_sum(F2, 1, 3, cache=cache)

    def test_file_format_is_line_oriented(self, tmp_path):
        cache = PowerSumCache(tmp_path, verify_fraction=0)
        cache.put(F2, 1, 3, power_sum(F2, 1, 3))  # T^2+T+1
        text = cache.path(F2, 1, 3).read_text()
        assert text == "deg 2: 1 1 1\n"

    def test_concurrent_writes_stay_parseable(self, tmp_path):
        cache = PowerSumCache(tmp_path, verify_fraction=0)
        value = power_sum(F3, 3, 11)

        def write(_):
            cache.put(F3, 3, 11, value)

        with ThreadPoolExecutor(max_workers=8) as ex:
            list(ex.map(write, range(64)))
        assert cache.get(F3, 3, 11) == value
        leftovers = [p for p in cache.field_dir(F3).iterdir()
                     if p.name.startswith(".tmp_")]
        assert not leftovers


def run_cli(*argv):
    import io
    from contextlib import redirect_stderr, redirect_stdout
    out, err = io.StringIO(), io.StringIO()
    with redirect_stdout(out), redirect_stderr(err):
        code = cli.main(list(argv))
    return code, out.getvalue(), err.getvalue()


class TestCli:
    def test_special_golden(self):
        code, out, _ = run_cli("special", "--p", "2", "--j", "1")
        assert code == 0
        doc = json.loads(out)
        del doc["timing"]
        expected = json.loads((GOLDEN / "special_p2_j1.json").read_text())
        assert doc == expected

    def test_special_j0(self):
        code, out, _ = run_cli("special", "--p", "2", "--j", "0")
        doc = json.loads(out)
        coeffs = [c["string"] for c in doc["result"]["coefficients"]]
        assert coeffs[0] == "1" and set(coeffs[1:]) == {"0"}
        assert doc["result"]["observed_degree"] == 0

    def test_usage_error_for_composite_p(self):
        code, _, err = run_cli("special", "--p", "4", "--j", "1")
        assert code == 2 and "not prime" in err

    def test_newton_infinity(self):
        code, out, _ = run_cli("newton", "--p", "2", "--y", "-1",
                               "--dmax", "4", "--prec", "16")
        assert code == 0
        doc = json.loads(out)
        segs = doc["result"]["polygon"]["segments"]
        assert segs == [{"slope": "1", "length": 1, "zero_valuation": "-1",
                         "abs_value_exponent": "1"}]
        assert doc["result"]["verdict"]["passed"] is True
        assert doc["result"]["polygon"]["provisional"] is False

    def test_newton_vadic_degree_two_prime_reports_length_two(self):
        # removed Euler factor at a degree-2 prime: two zeroes of one size
        code, out, _ = run_cli("newton", "--p", "3", "--y", "-2",
                               "--f", "T^2+1", "--dmax", "6", "--prec", "24")
        assert code == 0
        doc = json.loads(out)
        exceptions = doc["result"]["verdict"]["exceptions"]
        assert any(e["length"] == 2 for e in exceptions)

    def test_newton_refine(self):
        code, out, _ = run_cli("newton", "--p", "2", "--y", "-1",
                               "--dmax", "3", "--prec", "24", "--refine")
        doc = json.loads(out)
        roots = doc["result"]["refined_roots"]
        assert roots and roots[0]["root"]["start"] == -1

    def test_newton_csv(self):
        code, out, _ = run_cli("newton", "--p", "2", "--y", "-1",
                               "--dmax", "3", "--prec", "16",
                               "--format", "csv")
        assert code == 0
        lines = out.strip().splitlines()
        assert lines[0] == "kind,d,valuation_or_bound"
        assert any(line.startswith("vertex,") for line in lines)
        assert any(line.startswith("segment,") for line in lines)

    def test_frobenius_command(self):
        code, out, _ = run_cli("frobenius", "--p", "2", "--f", "T^2+T+1",
                               "--module", "carlitz")
        assert code == 0
        doc = json.loads(out)
        assert doc["result"]["mu"]["string"] == "T^2+T+1"
        assert doc["result"]["verified"] is True

    def test_frobenius_rank2(self):
        code, out, _ = run_cli("frobenius", "--p", "3", "--f", "T^2+1",
                               "--tau-coeffs", "1,1")
        doc = json.loads(out)
        assert doc["result"]["rank"] == 2
        assert doc["result"]["trace_bound_ok"] is True

    def test_lseries_command(self):
        code, out, _ = run_cli("lseries", "--p", "2", "--module", "carlitz",
                               "--degree-bound", "3", "--j", "1")
        doc = json.loads(out)
        table = {row["n"]: row["c"]["string"] for row in doc["result"]["coefficients"]}
        assert table["T^2+T+1"] == "T^2+T+1"
        specials = doc["result"]["special_coefficients"]["values"]
        # sum of n * n over monic linear n = S_1(2) = 1 over F_2
        assert specials[1]["string"] == "1"

    def test_sqrtcar_reports_parity_exception(self):
        code, out, _ = run_cli("sqrtcar", "--j", "1", "--dmax", "6")
        doc = json.loads(out)
        assert doc["result"]["identity"]["passed"] is True
        assert doc["result"]["factorization"]["passed"] is True
        assert doc["result"]["composition_ok"] is True
        parity = doc["result"]["parity"]
        assert parity["infty_all_even"] is True
        assert parity["vadic_violations"] == ["0"]
        assert code == 3  # the documented even trivial slope makes this red

    def test_verify_quick_subset_passes(self):
        code, out, err = run_cli("verify", "--quick", "--criteria", "1,7,9")
        assert code == 0
        doc = json.loads(out)
        assert doc["result"]["all_passed"] is True
        assert [r["id"] for r in doc["result"]["records"]] == ["1", "7", "9"]
        assert "[criterion 1] PASS" in err

    def test_verify_determinism_bytes(self):
        runs = []
        for _ in range(2):
            code, out, _ = run_cli("verify", "--quick", "--criteria", "1,6,7")
            doc = json.loads(out)
            del doc["timing"]
            runs.append(json.dumps(doc, sort_keys=True))
        assert runs[0] == runs[1]

    def test_unknown_criterion_is_usage_error(self):
        code, _, err = run_cli("verify", "--criteria", "42")
        assert code == 2

    def test_cache_dir_flag(self, tmp_path):
        code, _, _ = run_cli("special", "--p", "3", "--j", "5",
                             "--cache-dir", str(tmp_path))
        assert code == 0
        files = list((tmp_path / "p3_m1").glob("S_d*_j5.txt"))
        assert files

    def test_env_cache_dir(self, tmp_path, monkeypatch):
        monkeypatch.setenv("FFZETA_CACHE_DIR", str(tmp_path))
        code, _, _ = run_cli("special", "--p", "2", "--j", "3")
        assert code == 0
        assert list(tmp_path.rglob("*.txt"))

    def test_bad_polynomial_is_usage_error(self):
        code, _, err = run_cli("frobenius", "--p", "2", "--f", "garbage!!",
                               "--module", "carlitz")
        assert code == 2 and "cannot parse" in err

    def test_newton_explicit_digits(self):
        code, out, _ = run_cli("newton", "--p", "2",
                               "--y-digits", "1,1,1,1,1,1,1,1",  # -1 mod 2^8
                               "--dmax", "3", "--prec", "16")
        assert code == 0
        doc = json.loads(out)
        assert doc["result"]["polygon"]["segments"][0]["slope"] == "1"

    def test_newton_extension_field(self):
        code, out, _ = run_cli("newton", "--p", "2", "--m", "2", "--y", "-3",
                               "--dmax", "3", "--prec", "12")
        assert code == 0
        doc = json.loads(out)
        assert doc["result"]["polygon"]["provisional"] is False

    def test_verify_threads_flag(self):
        code, out, _ = run_cli("verify", "--quick", "--criteria", "9",
                               "--threads", "3")
        assert code == 0

    def test_entry_point_subprocess(self):
        proc = subprocess.run(
            [sys.executable, "-m", "ffzeta.cli", "special", "--p", "2", "--j", "1"],
            capture_output=True, text=True)
        assert proc.returncode == 0
        assert json.loads(proc.stdout)["result"]["observed_degree"] == 1

    def test_text_format(self):
        code, out, _ = run_cli("special", "--p", "2", "--j", "1",
                               "--format", "text")
        assert code == 0 and out.startswith("# special")
