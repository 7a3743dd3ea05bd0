"""Command-line front end (console script ``kdfc-snow``).

Subcommands: snow2 stream, kdfc init|stream|dump-config, gen-config,
char-poly, analyze bias|linearization|gd, randtest, verify
lemmas|theorem1|count|period.

Conventions: binary data crosses the CLI boundary as lowercase hex only;
structured artifacts are JSON; keystream prints one 8-digit word per
line.  Wherever fill bits are needed a --seed flag is mandatory, so every
invocation is reproducible byte for byte.  Exit codes: 0 success, 1
domain error or failed verification, 2 usage error.  The polynomial
table can be overridden with the KDFC_SNOW_POLY_TABLE environment
variable (see gf2.primtable).
"""

from __future__ import annotations

import argparse
import json
import sys

from kdfc_snow import attacks, kdfc, randtests, symbolic
from kdfc_snow.confgen import (
    FillBits,
    brute_force_count,
    count_configurations,
    generate_config,
    pipeline_poly,
    y_offline,
)
from kdfc_snow.gf2.poly import Gf2Poly
from kdfc_snow.sigma_lfsr import (
    LfsrState,
    SigmaConfig,
    config_char_poly,
    period,
)
from kdfc_snow.snow2 import (
    CipherState,
    FsmState,
    snow2_gains,
    snow2_init,
    snow2_keystream,
)

__all__ = ["main", "build_parser"]


# ---------------------------------------------------------------------------
# small codecs

def _words_from_hex(text: str, nwords: int, what: str) -> list[int]:
    digits = "".join(text.split()).lower()
    if len(digits) != 8 * nwords:
        raise ValueError(
            f"{what} must be {8 * nwords} hex digits ({32 * nwords} bits), "
            f"got {len(digits)}"
        )
    try:
        return [int(digits[8 * i : 8 * i + 8], 16) for i in range(nwords)]
    except ValueError:
        raise ValueError(f"{what} is not valid hex") from None


def _poly_from_exps(text: str) -> Gf2Poly:
    try:
        exps = [int(t) for t in text.replace(",", " ").split()]
    except ValueError:
        raise ValueError(f"bad exponent list {text!r}") from None
    if not exps or min(exps) < 0:
        raise ValueError(f"bad exponent list {text!r}")
    coeffs = 0
    for e in exps:
        coeffs |= 1 << e
    return Gf2Poly(coeffs)


def _exps_of(p: Gf2Poly) -> list[int]:
    return [i for i in range(p.degree, -1, -1) if (p.coeffs >> i) & 1]


def _emit(text: str, out: str | None) -> None:
    if not text.endswith("\n"):
        text += "\n"
    if out is None or out == "-":
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)


def _stream_words(words: list[int]) -> str:
    return "\n".join(f"{w:08x}" for w in words)


def _resolve_poly(args, degree: int) -> Gf2Poly:
    if getattr(args, "poly", None):
        p = _poly_from_exps(args.poly)
        if p.degree != degree:
            raise ValueError(f"--poly must have degree {degree}, got {p.degree}")
        return p
    return pipeline_poly(degree)


def _seeded_config(m: int, b: int, k: int, seed: str, p: Gf2Poly) -> SigmaConfig:
    total = m * b - m
    if not 0 <= k <= total:
        raise ValueError(f"--k must be in [0, {total}] for m={m}, b={b}")
    offline = FillBits.from_seed(m, k, seed, "offline-fill")
    online = FillBits.from_seed(m, total - k, seed, "online-fill")
    y = y_offline(m, b, k, offline)
    return generate_config(m, b, p, y, online)


# ---------------------------------------------------------------------------
# subcommand handlers

def _cmd_snow2_stream(args) -> int:
    key = _words_from_hex(args.key, 8, "--key")
    iv = _words_from_hex(args.iv, 4, "--iv")
    state = snow2_init(key, iv)
    words = snow2_keystream(state, args.n)
    if words:
        _emit(_stream_words(words), args.out)
    return 0


def _kdfc_state(args) -> CipherState:
    key = _words_from_hex(args.key, 8, "--key")
    iv = _words_from_hex(args.iv, 4, "--iv")
    params = kdfc.KdfcParams(key=key, iv=iv, k=args.k, discard=args.discard)
    if args.y_init:
        params = kdfc.KdfcParams(
            key=key, iv=iv, k=args.k, discard=args.discard,
            y_init=kdfc.load_y_init(args.y_init).y,
        )
    return kdfc.kdfc_init(params)


def _state_doc(state: CipherState) -> dict:
    cfg = state.cfg
    return {
        "m": cfg.m,
        "b": cfg.b,
        "char_poly": _exps_of(config_char_poly(cfg)),
        "config": cfg.to_json(),
        "lfsr": list(state.lfsr.blocks),
        "fsm": {"r1": state.fsm.r1, "r2": state.fsm.r2},
    }


def _cmd_kdfc_init(args) -> int:
    state = _kdfc_state(args)
    _emit(json.dumps(_state_doc(state), indent=2), args.out)
    return 0


def _cmd_kdfc_stream(args) -> int:
    if args.state:
        with open(args.state, encoding="utf-8") as fh:
            doc = json.load(fh)
        cfg = SigmaConfig.from_json(doc["config"])
        state = CipherState(
            LfsrState(cfg.m, list(doc["lfsr"])),
            FsmState(doc["fsm"]["r1"], doc["fsm"]["r2"]),
            cfg,
        )
    else:
        if not (args.key and args.iv):
            raise ValueError("kdfc stream needs --key and --iv, or --state")
        state = _kdfc_state(args)
    words = kdfc.kdfc_keystream(state, args.n)
    if words:
        _emit(_stream_words(words), args.out)
    return 0


def _cmd_kdfc_dump_config(args) -> int:
    state = _kdfc_state(args)
    doc = _state_doc(state)
    del doc["lfsr"], doc["fsm"]
    _emit(json.dumps(doc, indent=2), args.out)
    return 0


def _cmd_gen_config(args) -> int:
    p = _resolve_poly(args, args.m * args.b)
    cfg = _seeded_config(args.m, args.b, args.k, args.seed, p)
    doc = {
        "m": cfg.m,
        "b": cfg.b,
        "k": args.k,
        "seed": args.seed,
        "polynomial": _exps_of(p),
        "char_poly": _exps_of(config_char_poly(cfg)),
        "config": cfg.to_json(),
    }
    _emit(json.dumps(doc, indent=2), args.out)
    return 0


def _cmd_char_poly(args) -> int:
    if args.snow2:
        p = config_char_poly(snow2_gains())
    elif args.target:
        p = kdfc.target_poly()
    else:
        if args.m is None or args.b is None or args.seed is None:
            raise ValueError(
                "char-poly needs --snow2, --target, or --m/--b/--k/--seed"
            )
        prescribed = _resolve_poly(args, args.m * args.b)
        cfg = _seeded_config(args.m, args.b, args.k, args.seed, prescribed)
        p = config_char_poly(cfg)
    _emit(" ".join(str(e) for e in _exps_of(p)), args.out)
    return 0


def _cmd_analyze_bias(args) -> int:
    eps_final = attacks.pileup_bias(args.eps_log2, args.taps)
    needed = attacks.keystream_needed(eps_final)
    _emit(f"eps_final_log2 = {eps_final!r}\nkeystream_log2 = {needed!r}", args.out)
    return 0


def _cmd_analyze_linearization(args) -> int:
    log2 = attacks.linearization_log2(args.n, args.degree)
    lines = [f"monomials_log2 = {log2!r}"]
    if args.exact:
        lines.append(f"monomials = {attacks.linearization_size(args.n, args.degree)}")
    _emit("\n".join(lines), args.out)
    return 0


def _cmd_analyze_gd(args) -> int:
    if args.cipher == "snow2":
        tables = attacks.build_snow2_tables()
    else:
        tables = attacks.build_kdfc_tables()
    try:
        path = attacks.gd_search(tables, args.max_stages)
        doc = {
            "cipher": args.cipher,
            "node_count": tables.node_count,
            "found": True,
            "basis": list(path.nodes),
            "basis_size": len(path),
            "guess_complexity_log2": path.guess_complexity_log2(),
        }
    except attacks.NoCoverError as e:
        doc = {
            "cipher": args.cipher,
            "node_count": tables.node_count,
            "found": False,
            "stages": args.max_stages,
            "best_path": list(e.best.nodes),
            "eliminated": e.eliminated,
        }
    if args.json:
        _emit(json.dumps(doc, indent=2), args.out)
    else:
        lines = [f"{k} = {v}" for k, v in doc.items()]
        _emit("\n".join(lines), args.out)
    return 0


def _cmd_randtest(args) -> int:
    if args.infile == "-":
        text = sys.stdin.read()
    else:
        with open(args.infile, encoding="utf-8") as fh:
            text = fh.read()
    bits = randtests.bits_from_hex(text)
    results = randtests.run_battery(bits)
    all_passed = all(r.passed for r in results)
    if args.report == "json":
        doc = {
            "bits": int(bits.size),
            "results": [
                {"name": r.name, "p_value": r.p_value, "passed": r.passed}
                for r in results
            ],
            "all_passed": all_passed,
        }
        _emit(json.dumps(doc, indent=2), args.out)
    else:
        lines = [
            f"{r.name:26s} p={r.p_value:.6f} {'PASS' if r.passed else 'FAIL'}"
            for r in results
        ]
        lines.append(
            f"{'all tests passed' if all_passed else 'some tests FAILED'}"
            f" ({bits.size} bits)"
        )
        _emit("\n".join(lines), args.out)
    return 0 if all_passed else 1


def _cmd_verify_lemmas(args) -> int:
    p = _resolve_poly(args, args.m * args.b)
    report = symbolic.verify_minor_lemmas(args.m, args.b, p)
    if args.json:
        _emit(json.dumps(report, indent=2), args.out)
    else:
        _emit(symbolic.format_report(report), args.out)
    return 0 if report["all_hold"] else 1


def _cmd_verify_theorem1(args) -> int:
    p = _resolve_poly(args, args.m * args.b)
    entry, ok = symbolic.theorem1_check(args.m, args.b, p)
    want = args.m * args.b - args.b
    _emit(
        f"corner entry degree = {symbolic.degree(entry)}\n"
        f"expected degree     = {want}\n"
        f"{'PASS' if ok else 'FAIL'}",
        args.out,
    )
    return 0 if ok else 1


def _cmd_verify_count(args) -> int:
    formula = count_configurations(args.m, args.b)
    brute = brute_force_count(args.m, args.b)
    ok = formula == brute
    _emit(
        f"formula     = {formula}\n"
        f"enumeration = {brute}\n"
        f"{'PASS' if ok else 'FAIL'}",
        args.out,
    )
    return 0 if ok else 1


def _cmd_verify_period(args) -> int:
    p = _resolve_poly(args, args.m * args.b)
    cfg = _seeded_config(args.m, args.b, args.k, args.seed, p)
    blocks = [1] + [0] * (args.b - 1)
    got = period(cfg, LfsrState(args.m, blocks))
    want = (1 << (args.m * args.b)) - 1
    ok = got == want
    _emit(
        f"period   = {got}\n"
        f"expected = {want}\n"
        f"single orbit covers every nonzero state: {'PASS' if ok else 'FAIL'}",
        args.out,
    )
    return 0 if ok else 1


# ---------------------------------------------------------------------------
# parser

def _add_out(p: argparse.ArgumentParser) -> None:
    p.add_argument("--out", default=None, help="output file (default stdout)")


def _add_key_iv(p: argparse.ArgumentParser, required: bool = True) -> None:
    p.add_argument("--key", required=required, help="64 hex digits (256-bit key)")
    p.add_argument("--iv", required=required, help="32 hex digits (128-bit IV)")


def _add_kdfc_knobs(p: argparse.ArgumentParser) -> None:
    p.add_argument("--k", type=int, default=kdfc.DEFAULT_K,
                   help="offline iteration count (default %(default)s)")
    p.add_argument("--discard", type=int, default=32,
                   help="output words discarded after reconfiguration")
    p.add_argument("--y-init", default=None,
                   help="path to an offline-matrix JSON document")


def build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(
        prog="kdfc-snow",
        description="keystream generation, configuration tooling, and analysis",
    )
    sub = top.add_subparsers(dest="cmd", required=True)

    p = sub.add_parser("snow2", help="SNOW 2.0 with the public configuration")
    s2 = p.add_subparsers(dest="sub", required=True)
    q = s2.add_parser("stream", help="print keystream words as hex lines")
    _add_key_iv(q)
    q.add_argument("-n", type=int, required=True, help="number of 32-bit words")
    _add_out(q)
    q.set_defaults(func=_cmd_snow2_stream)

    p = sub.add_parser("kdfc", help="key-dependent-configuration cipher")
    s2 = p.add_subparsers(dest="sub", required=True)
    q = s2.add_parser("init", help="initialize and print the full state as JSON")
    _add_key_iv(q)
    _add_kdfc_knobs(q)
    _add_out(q)
    q.set_defaults(func=_cmd_kdfc_init)
    q = s2.add_parser("stream", help="print keystream words as hex lines")
    _add_key_iv(q, required=False)
    _add_kdfc_knobs(q)
    q.add_argument("--state", default=None, help="resume from a state JSON file")
    q.add_argument("-n", type=int, required=True, help="number of 32-bit words")
    _add_out(q)
    q.set_defaults(func=_cmd_kdfc_stream)
    q = s2.add_parser("dump-config", help="print the derived configuration as JSON")
    _add_key_iv(q)
    _add_kdfc_knobs(q)
    _add_out(q)
    q.set_defaults(func=_cmd_kdfc_dump_config)

    q = sub.add_parser("gen-config", help="seeded configuration generation")
    q.add_argument("--m", type=int, required=True)
    q.add_argument("--b", type=int, required=True)
    q.add_argument("--k", type=int, default=0, help="offline iteration count")
    q.add_argument("--seed", required=True, help="fill-bit seed string")
    q.add_argument("--poly", default=None,
                   help="prescribed polynomial as exponent list, e.g. '8,4,3,2,0'")
    _add_out(q)
    q.set_defaults(func=_cmd_gen_config)

    q = sub.add_parser("char-poly",
                       help="characteristic polynomial as an exponent list")
    q.add_argument("--snow2", action="store_true",
                   help="the SNOW 2.0 configuration matrix")
    q.add_argument("--target", action="store_true",
                   help="the degree-512 generation target")
    q.add_argument("--m", type=int)
    q.add_argument("--b", type=int)
    q.add_argument("--k", type=int, default=0)
    q.add_argument("--seed")
    q.add_argument("--poly", default=None)
    _add_out(q)
    q.set_defaults(func=_cmd_char_poly)

    p = sub.add_parser("analyze", help="attack-cost arithmetic and search")
    s2 = p.add_subparsers(dest="sub", required=True)
    q = s2.add_parser("bias", help="pile up a linear-mask bias")
    q.add_argument("--eps-log2", type=float, required=True,
                   help="log2 of the single-approximation bias (negative)")
    q.add_argument("--taps", type=int, required=True,
                   help="number of XORed approximations")
    _add_out(q)
    q.set_defaults(func=_cmd_analyze_bias)
    q = s2.add_parser("linearization", help="monomial count for linearization")
    q.add_argument("--n", type=int, required=True, help="variable count")
    q.add_argument("--degree", type=int, required=True, help="max degree")
    q.add_argument("--exact", action="store_true", help="also print the integer")
    _add_out(q)
    q.set_defaults(func=_cmd_analyze_linearization)
    q = s2.add_parser("gd", help="guess-and-determine basis search")
    q.add_argument("--cipher", choices=["snow2", "kdfc"], default="snow2")
    q.add_argument("--max-stages", type=int, default=16)
    q.add_argument("--json", action="store_true")
    _add_out(q)
    q.set_defaults(func=_cmd_analyze_gd)

    q = sub.add_parser("randtest", help="statistical battery over hex input")
    q.add_argument("--in", dest="infile", required=True,
                   help="hex file ('-' for stdin)")
    q.add_argument("--report", choices=["text", "json"], default="text")
    _add_out(q)
    q.set_defaults(func=_cmd_randtest)

    p = sub.add_parser("verify", help="structure and counting checks")
    s2 = p.add_subparsers(dest="sub", required=True)
    q = s2.add_parser("lemmas", help="minor degree/zero regions of symbolic Q")
    q.add_argument("--m", type=int, required=True)
    q.add_argument("--b", type=int, required=True)
    q.add_argument("--poly", default=None)
    q.add_argument("--json", action="store_true")
    _add_out(q)
    q.set_defaults(func=_cmd_verify_lemmas)
    q = s2.add_parser("theorem1", help="corner-entry degree of the symbolic config")
    q.add_argument("--m", type=int, required=True)
    q.add_argument("--b", type=int, required=True)
    q.add_argument("--poly", default=None)
    _add_out(q)
    q.set_defaults(func=_cmd_verify_theorem1)
    q = s2.add_parser("count", help="enumeration vs counting formula")
    q.add_argument("--m", type=int, required=True)
    q.add_argument("--b", type=int, required=True)
    _add_out(q)
    q.set_defaults(func=_cmd_verify_count)
    q = s2.add_parser("period", help="maximal period from a seeded configuration")
    q.add_argument("--m", type=int, required=True)
    q.add_argument("--b", type=int, required=True)
    q.add_argument("--k", type=int, default=0)
    q.add_argument("--seed", required=True)
    q.add_argument("--poly", default=None)
    _add_out(q)
    q.set_defaults(func=_cmd_verify_period)

    return top


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, RuntimeError, OSError, KeyError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
