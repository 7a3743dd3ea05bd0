"""Command-line interface: outputs, exit codes, reproducibility."""

import io
import json
import shutil
import subprocess

import numpy as np
import pytest

from conftest import KAT_IV, KAT_KEY

from kdfc_snow.cli import main
from kdfc_snow.confgen import pipeline_poly
from kdfc_snow.kdfc import TARGET_POLY_EXPONENTS

ZERO_KEY = "0" * 64
ZERO_IV = "0" * 32
KAT_KEY_HEX = "".join(f"{w:08x}" for w in KAT_KEY)
KAT_IV_HEX = "".join(f"{w:08x}" for w in KAT_IV)

SNOW_ZERO_FIRST8 = [
    "b56f2d8e", "430e20bc", "444a4a78", "77a9788f",
    "4f060087", "fcedd8c2", "10daed5d", "42aa2c88",
]
KDFC_KEYED_FIRST8 = [
    "4668f2b6", "8c1f8cc4", "b770cb47", "4cb1af7a",
    "99f903a7", "7dc2e350", "eb1f0c19", "efe0da38",
]


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestSnow2Stream:
    def test_zero_key_words(self, capsys):
        code, out, _ = run(
            capsys, "snow2", "stream", "--key", ZERO_KEY, "--iv", ZERO_IV,
            "-n", "8",
        )
        assert code == 0
        assert out.splitlines() == SNOW_ZERO_FIRST8

    def test_repeat_runs_byte_identical(self, capsys):
        args = ("snow2", "stream", "--key", KAT_KEY_HEX, "--iv", KAT_IV_HEX,
                "-n", "16")
        _, first, _ = run(capsys, *args)
        _, second, _ = run(capsys, *args)
        assert first == second

    def test_n_zero_is_empty_success(self, capsys):
        code, out, err = run(
            capsys, "snow2", "stream", "--key", ZERO_KEY, "--iv", ZERO_IV,
            "-n", "0",
        )
        assert code == 0 and out == "" and err == ""

    def test_mixed_case_key_accepted(self, capsys):
        code, out, _ = run(
            capsys, "snow2", "stream", "--key", ZERO_KEY.upper(), "--iv",
            ZERO_IV, "-n", "1",
        )
        assert code == 0 and out.splitlines() == SNOW_ZERO_FIRST8[:1]

    def test_bad_key_length(self, capsys):
        code, out, err = run(
            capsys, "snow2", "stream", "--key", "ab", "--iv", ZERO_IV,
            "-n", "1",
        )
        assert code == 1 and out == ""
        assert err.startswith("error:") and "64 hex digits" in err

    def test_bad_hex(self, capsys):
        code, _, err = run(
            capsys, "snow2", "stream", "--key", "zz" * 32, "--iv", ZERO_IV,
            "-n", "1",
        )
        assert code == 1 and "not valid hex" in err


class TestKdfc:
    def test_stream_kat(self, capsys):
        code, out, _ = run(
            capsys, "kdfc", "stream", "--key", KAT_KEY_HEX, "--iv",
            KAT_IV_HEX, "-n", "8",
        )
        assert code == 0
        assert out.splitlines() == KDFC_KEYED_FIRST8

    def test_init_document(self, capsys, tmp_path):
        out_path = tmp_path / "state.json"
        code, _, _ = run(
            capsys, "kdfc", "init", "--key", KAT_KEY_HEX, "--iv", KAT_IV_HEX,
            "--out", str(out_path),
        )
        assert code == 0
        doc = json.loads(out_path.read_text())
        assert doc["m"] == 32 and doc["b"] == 16
        assert doc["char_poly"] == sorted(TARGET_POLY_EXPONENTS, reverse=True)
        assert len(doc["lfsr"]) == 16
        assert set(doc["fsm"]) == {"r1", "r2"}

    def test_state_resume_matches_direct(self, capsys, tmp_path):
        state = tmp_path / "state.json"
        run(
            capsys, "kdfc", "init", "--key", KAT_KEY_HEX, "--iv", KAT_IV_HEX,
            "--out", str(state),
        )
        code, resumed, _ = run(
            capsys, "kdfc", "stream", "--state", str(state), "-n", "8"
        )
        assert code == 0
        _, direct, _ = run(
            capsys, "kdfc", "stream", "--key", KAT_KEY_HEX, "--iv",
            KAT_IV_HEX, "-n", "8",
        )
        assert resumed == direct

    def test_stream_needs_key_or_state(self, capsys):
        code, _, err = run(capsys, "kdfc", "stream", "-n", "4")
        assert code == 1 and "needs --key and --iv, or --state" in err

    def test_dump_config(self, capsys):
        code, out, _ = run(
            capsys, "kdfc", "dump-config", "--key", KAT_KEY_HEX, "--iv",
            KAT_IV_HEX,
        )
        assert code == 0
        doc = json.loads(out)
        assert doc["char_poly"] == sorted(TARGET_POLY_EXPONENTS, reverse=True)
        assert "lfsr" not in doc and "fsm" not in doc
        assert doc["config"]["m"] == 32


class TestGenConfig:
    def test_char_poly_is_prescribed(self, capsys):
        code, out, _ = run(
            capsys, "gen-config", "--m", "2", "--b", "4", "--seed", "demo",
        )
        assert code == 0
        doc = json.loads(out)
        want = [e for e in range(8, -1, -1) if pipeline_poly(8).coeff(e)]
        assert doc["polynomial"] == want
        assert doc["char_poly"] == want
        assert doc["m"] == 2 and doc["b"] == 4 and doc["seed"] == "demo"

    def test_deterministic(self, capsys):
        args = ("gen-config", "--m", "4", "--b", "4", "--k", "3", "--seed", "x")
        _, a, _ = run(capsys, *args)
        _, b, _ = run(capsys, *args)
        assert a == b

    def test_poly_override(self, capsys):
        code, out, _ = run(
            capsys, "gen-config", "--m", "2", "--b", "4", "--seed", "s",
            "--poly", "8,4,3,2,0",
        )
        assert code == 0
        doc = json.loads(out)
        assert doc["polynomial"] == [8, 4, 3, 2, 0]
        assert doc["char_poly"] == [8, 4, 3, 2, 0]

    def test_poly_degree_mismatch(self, capsys):
        code, _, err = run(
            capsys, "gen-config", "--m", "2", "--b", "4", "--seed", "s",
            "--poly", "4,1,0",
        )
        assert code == 1 and "degree" in err

    def test_k_out_of_range(self, capsys):
        code, _, err = run(
            capsys, "gen-config", "--m", "2", "--b", "4", "--k", "7",
            "--seed", "s",
        )
        assert code == 1 and "--k must be in [0, 6]" in err


class TestCharPoly:
    def test_target_listing(self, capsys):
        code, out, _ = run(capsys, "char-poly", "--target")
        assert code == 0
        got = [int(t) for t in out.split()]
        assert got == sorted(TARGET_POLY_EXPONENTS, reverse=True)

    def test_snow2_computed_is_reciprocal_of_target(self, capsys):
        code, out, _ = run(capsys, "char-poly", "--snow2")
        assert code == 0
        got = [int(t) for t in out.split()]
        assert got == sorted((512 - e for e in TARGET_POLY_EXPONENTS),
                             reverse=True)

    def test_seeded_route(self, capsys):
        code, out, _ = run(
            capsys, "char-poly", "--m", "2", "--b", "2", "--seed", "s",
        )
        assert code == 0
        want = [e for e in range(4, -1, -1) if pipeline_poly(4).coeff(e)]
        assert [int(t) for t in out.split()] == want

    def test_needs_a_mode(self, capsys):
        code, _, err = run(capsys, "char-poly")
        assert code == 1 and "char-poly needs" in err


class TestAnalyze:
    def test_bias_output(self, capsys):
        code, out, _ = run(
            capsys, "analyze", "bias", "--eps-log2", "-27.61", "--taps", "250",
        )
        assert code == 0
        assert out == "eps_final_log2 = -6653.5\nkeystream_log2 = 13307.0\n"

    def test_linearization_exact(self, capsys):
        code, out, _ = run(
            capsys, "analyze", "linearization", "--n", "544", "--degree", "2",
            "--exact",
        )
        assert code == 0
        lines = dict(l.split(" = ") for l in out.splitlines())
        assert lines["monomials"] == "148241"
        assert abs(float(lines["monomials_log2"]) - 17.1776) < 1e-3

    def test_gd_snow2_json(self, capsys):
        code, out, _ = run(capsys, "analyze", "gd", "--json")
        assert code == 0
        doc = json.loads(out)
        assert doc["found"] is True
        assert doc["basis"] == [39, 8, 6, 22, 10, 2, 7, 9, 12]
        assert doc["basis_size"] == 9
        assert doc["guess_complexity_log2"] == 288

    def test_gd_kdfc_no_cover(self, capsys):
        code, out, _ = run(
            capsys, "analyze", "gd", "--cipher", "kdfc", "--max-stages", "1",
            "--json",
        )
        assert code == 0
        doc = json.loads(out)
        assert doc["found"] is False
        assert doc["eliminated"] == 1
        assert doc["node_count"] == 1542

    def test_gd_text_mode(self, capsys):
        code, out, _ = run(capsys, "analyze", "gd")
        assert code == 0 and "found = True" in out


def _hex_stream(nbits, seed=20260825):
    rng = np.random.default_rng(seed)
    data = rng.integers(0, 256, size=nbits // 8, dtype=np.uint8)
    return bytes(data.tolist()).hex()


class TestRandtest:
    def test_passing_stream_text(self, capsys, tmp_path):
        path = tmp_path / "ks.hex"
        path.write_text(_hex_stream(1_000_000))
        code, out, _ = run(capsys, "randtest", "--in", str(path))
        assert code == 0
        assert "all tests passed" in out
        assert out.count("PASS") == 10

    def test_zero_stream_fails(self, capsys, tmp_path):
        path = tmp_path / "zeros.hex"
        path.write_text("0" * 250_000)
        code, out, _ = run(capsys, "randtest", "--in", str(path))
        assert code == 1
        assert "some tests FAILED" in out

    def test_json_report(self, capsys, tmp_path):
        path = tmp_path / "ks.hex"
        path.write_text(_hex_stream(1_000_000))
        code, out, _ = run(
            capsys, "randtest", "--in", str(path), "--report", "json",
        )
        assert code == 0
        doc = json.loads(out)
        assert doc["all_passed"] is True
        assert doc["bits"] == 1_000_000
        assert len(doc["results"]) == 10

    def test_stdin(self, capsys, monkeypatch):
        monkeypatch.setattr("sys.stdin", io.StringIO(_hex_stream(1_000_000)))
        code, out, _ = run(capsys, "randtest", "--in", "-")
        assert code == 0 and "all tests passed" in out

    def test_too_short_is_an_error(self, capsys, tmp_path):
        path = tmp_path / "tiny.hex"
        path.write_text("ab" * 100)
        code, _, err = run(capsys, "randtest", "--in", str(path))
        assert code == 1 and err.startswith("error:")

    def test_missing_file(self, capsys):
        code, _, err = run(capsys, "randtest", "--in", "/nonexistent.hex")
        assert code == 1 and err.startswith("error:")


class TestVerify:
    def test_lemmas_pass(self, capsys):
        code, out, _ = run(capsys, "verify", "lemmas", "--m", "2", "--b", "2")
        assert code == 0 and "all claims hold" in out

    def test_lemmas_json(self, capsys):
        code, out, _ = run(
            capsys, "verify", "lemmas", "--m", "2", "--b", "2", "--json",
        )
        assert code == 0
        doc = json.loads(out)
        assert doc["all_hold"] is True

    def test_theorem1(self, capsys):
        code, out, _ = run(
            capsys, "verify", "theorem1", "--m", "2", "--b", "4", "--poly",
            "8,4,3,2,0",
        )
        assert code == 0
        assert "corner entry degree = 4" in out and "PASS" in out

    def test_count(self, capsys):
        code, out, _ = run(capsys, "verify", "count", "--m", "2", "--b", "2")
        assert code == 0
        assert "formula     = 16" in out and "PASS" in out

    def test_count_guard(self, capsys):
        code, _, err = run(capsys, "verify", "count", "--m", "3", "--b", "3")
        assert code == 1 and "error:" in err

    def test_period(self, capsys):
        code, out, _ = run(
            capsys, "verify", "period", "--m", "2", "--b", "2", "--seed", "s",
        )
        assert code == 0
        assert "period   = 15" in out and "PASS" in out


class TestUsage:
    def test_no_command(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main([])
        assert exc.value.code == 2

    def test_unknown_command(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["frobnicate"])
        assert exc.value.code == 2

    def test_missing_required_flag(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["snow2", "stream", "--key", ZERO_KEY, "-n", "1"])
        assert exc.value.code == 2


class TestConsoleScript:
    def test_entry_point_installed(self):
        exe = shutil.which("kdfc-snow")
        assert exe, "console script kdfc-snow not on PATH"
        proc = subprocess.run(
            [exe, "analyze", "bias", "--eps-log2", "-15.496", "--taps", "250"],
            capture_output=True, text=True, timeout=120,
        )
        assert proc.returncode == 0
        assert proc.stdout == "eps_final_log2 = -3625.0\nkeystream_log2 = 7250.0\n"


class TestOutFlag:
    def test_out_file_matches_stdout(self, capsys, tmp_path):
        _, streamed, _ = run(capsys, "char-poly", "--target")
        path = tmp_path / "poly.txt"
        code, out, _ = run(capsys, "char-poly", "--target", "--out", str(path))
        assert code == 0 and out == ""
        assert path.read_text() == streamed
