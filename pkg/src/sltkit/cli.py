"""Command-line entry point wiring every operation together.

Exit status: 0 on success or a passing verdict, 1 when a verification
fails or a refutation witness is found, 2 on usage or input errors.  All
output is deterministic for fixed inputs.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path as FsPath
from typing import Optional, Sequence

from .automata import (
    DEFAULT_SET_CAP,
    DEFAULT_STATE_CAP,
    DEFAULT_WORD_CAP,
    CapacityError,
    Nfa,
    format_word,
    parse_nfa,
    parse_word,
    totalize,
)
from .codes import build_code, choose_m, closed_form_m
from .construction import (
    Decomposition,
    decode_word,
    encode_word,
    medvedev_main,
    medvedev_width2,
    parse_decomposition,
    serialize_decomposition,
)
from .slt import make_stream_recognizer, min_slt_width, slt_membership
from .verification import (
    CorpusConfig,
    default_horizon,
    fg_values,
    refute_small_ratio,
    run_corpus,
    verify_decomposition,
)


def _read_nfa(path: str) -> Nfa:
    return parse_nfa(FsPath(path).read_text())


def _read_dec(path: str) -> Decomposition:
    return parse_decomposition(FsPath(path).read_text())


def _parse_int_list(text: str) -> list[int]:
    """Comma-separated integers; scientific forms like 1e40 stay exact."""
    values = []
    for item in text.split(","):
        item = item.strip()
        if "e" in item or "E" in item:
            base, _, exp = item.lower().partition("e")
            values.append(int(base) * 10 ** int(exp))
        else:
            values.append(int(item))
    return values


def _check_out_path(path: str) -> None:
    parent = FsPath(path).resolve().parent
    if not parent.is_dir():
        raise ValueError(f"output directory does not exist: {parent}")


def _cmd_build(args: argparse.Namespace) -> int:
    _check_out_path(args.out)
    machine = totalize(_read_nfa(args.nfa))
    if args.ratio >= machine.n:
        print(f"warning: ratio {args.ratio} >= state count {machine.n}; "
              "the width-2 construction would use no more symbols", file=sys.stderr)
    dec = medvedev_main(machine, args.ratio, set_cap=args.cap, word_cap=args.cap)
    FsPath(args.out).write_text(serialize_decomposition(dec))
    sizes = dec.slt
    print(f"written {args.out} kind=main h={dec.h} m={dec.m} k={dec.k} "
          f"|B|={len(sizes.alphabet)} |I|={len(sizes.prefixes)} |T|={len(sizes.suffixes)} "
          f"|F|={len(sizes.factors)} residual={len(dec.residual)}")
    return 0


def _cmd_build2(args: argparse.Namespace) -> int:
    _check_out_path(args.out)
    machine = totalize(_read_nfa(args.nfa))
    dec = medvedev_width2(machine)
    FsPath(args.out).write_text(serialize_decomposition(dec))
    sizes = dec.slt
    print(f"written {args.out} kind=width2 k=2 |B|={len(sizes.alphabet)} "
          f"|I|={len(sizes.prefixes)} |T|={len(sizes.suffixes)} |F|={len(sizes.factors)}")
    return 0


def _cmd_verify(args: argparse.Namespace) -> int:
    machine = _read_nfa(args.nfa)
    dec = _read_dec(args.dec)
    report = verify_decomposition(machine, dec, mode=args.mode, horizon=args.maxlen,
                                  word_cap=args.cap, state_cap=args.state_cap)
    verdict = "pass" if report.ok else "FAIL"
    if report.ok:
        print(f"verification passed in {report.mode} mode"
              + (f" up to length {report.horizon}" if report.horizon else ""))
    else:
        print("verification FAILED:")
        if report.missing is not None:
            print(f"  word in the machine's language but not covered: "
                  f"{format_word(report.missing)}")
        if report.extra is not None:
            print(f"  word covered but not in the machine's language: "
                  f"{format_word(report.extra)}")
            if report.extra_local is not None:
                print(f"  produced by local word: {format_word(report.extra_local)}")
    print(f"verdict={verdict}")
    print(f"mode={report.mode}")
    print(f"horizon={report.horizon if report.horizon is not None else '-'}")
    for key in ("I", "T", "F", "short", "residual"):
        print(f"size_{key}={report.set_sizes[key]}")
    print(f"missing={format_word(report.missing) if report.missing else '-'}")
    print(f"extra={format_word(report.extra) if report.extra else '-'}")
    if report.notice:
        print(f"notice={report.notice}")
    return 0 if report.ok else 1


def _cmd_encode(args: argparse.Namespace) -> int:
    machine = _read_nfa(args.nfa)
    dec = _read_dec(args.dec)
    encoded = encode_word(machine, dec, parse_word(args.word))
    print("residual" if encoded is None else format_word(encoded))
    return 0


def _cmd_decode(args: argparse.Namespace) -> int:
    dec = _read_dec(args.dec)
    print(format_word(decode_word(dec, parse_word(args.word))))
    return 0


def _cmd_recognize(args: argparse.Namespace) -> int:
    dec = _read_dec(args.dec)
    spec = dec.slt
    for raw in sys.stdin:
        word = parse_word(raw)
        if not word:
            print("reject # empty word")
            continue
        unknown = next((s for s in word if s not in spec._index), None)
        if unknown is not None:
            print(f"reject # unknown symbol: {unknown}")
            continue
        if args.stream:
            recognizer = make_stream_recognizer(spec)
            for symbol in word:
                recognizer.feed(symbol)
            verdict = recognizer.finish()
        else:
            verdict = slt_membership(spec, word)
        print("accept" if verdict else "reject")
    return 0


def _cmd_code(args: argparse.Namespace) -> int:
    code = build_code(args.states, args.ratio)
    print(f"h {code.h}")
    print(f"m {code.m}")
    joiner = "" if code.h <= 10 else "."
    for state, word in enumerate(code.codewords):
        print(f"state {state} {joiner.join(word)}")
    return 0


def _cmd_table(args: argparse.Namespace) -> int:
    h_values = _parse_int_list(args.h)
    n_values = _parse_int_list(args.n)
    for h in h_values:
        vals = fg_values(h)
        print(f"h={h} f={vals.f:.4f} g={vals.g_reconciled:.4f} "
              f"g_printed={vals.g_printed:.4f}")
    for h in h_values:
        for n in n_values:
            print(f"width h={h} n={n} closed={2 * closed_form_m(n, h)} "
                  f"exact={2 * choose_m(n, h)}")
    return 0


def _cmd_minwidth(args: argparse.Namespace) -> int:
    machine = _read_nfa(args.nfa)
    result = min_slt_width(machine, args.max_k, args.max_len, word_cap=args.cap)
    width = result.width if result.width is not None else "none"
    print(f"width={width} horizon={result.horizon}")
    return 0


def _cmd_refute(args: argparse.Namespace) -> int:
    dec = _read_dec(args.dec)
    alphabet = dec.pi.image
    if len(alphabet) != args.alphabet_size:
        raise ValueError(
            f"projection image has {len(alphabet)} letters, expected {args.alphabet_size}")
    result = refute_small_ratio(dec, alphabet)
    print(f"bound={result.bound}")
    if result.found:
        assert result.witness is not None
        print(f"letter={result.letter}")
        print(f"unique_preimage={result.symbol if result.symbol else '-'}")
        if result.indistinguishable_pair:
            lo, hi = result.indistinguishable_pair
            print(f"indistinguishable_pair={format_word(lo)} / {format_word(hi)}")
        print(f"witness={format_word(result.witness)}")
        return 1
    print("no witness found (bounded)")
    return 0


def _cmd_corpus(args: argparse.Namespace) -> int:
    config = CorpusConfig(directory=args.dir, ratios=tuple(_parse_int_list(args.ratio)),
                          horizon=args.maxlen, mode=args.mode, jobs=args.jobs,
                          set_cap=args.cap, word_cap=args.cap)
    report = run_corpus(config)
    for line in report.summary_lines():
        print(line)
    return 0 if report.ok else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sltkit",
        description="Convert NFAs into strictly locally testable languages plus "
                    "letter-to-letter projections, and verify the constructions.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_caps(p: argparse.ArgumentParser) -> None:
        p.add_argument("--cap", type=int, default=DEFAULT_SET_CAP,
                       help="resource cap on enumerated words / set elements")
        p.add_argument("--state-cap", type=int, default=DEFAULT_STATE_CAP,
                       help="cap on determinized states in exact checks")

    p = sub.add_parser("build", help="build the width-2m decomposition at a ratio")
    p.add_argument("--nfa", required=True)
    p.add_argument("--ratio", type=int, required=True)
    p.add_argument("--out", required=True)
    add_caps(p)
    p.set_defaults(func=_cmd_build)

    p = sub.add_parser("build2", help="build the width-2 decomposition")
    p.add_argument("--nfa", required=True)
    p.add_argument("--out", required=True)
    add_caps(p)
    p.set_defaults(func=_cmd_build2)

    p = sub.add_parser("verify", help="verify a decomposition against its machine")
    p.add_argument("--nfa", required=True)
    p.add_argument("--dec", required=True)
    p.add_argument("--mode", choices=("exact", "bounded"), default="bounded")
    p.add_argument("--maxlen", type=int, default=None,
                   help="bounded-mode horizon (default: max(3m+6, 2k+4))")
    add_caps(p)
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("encode", help="encode a source word into the local language")
    p.add_argument("--nfa", required=True)
    p.add_argument("--dec", required=True)
    p.add_argument("--word", required=True, help="'.'-separated source letters")
    add_caps(p)
    p.set_defaults(func=_cmd_encode)

    p = sub.add_parser("decode", help="project a local word back to source letters")
    p.add_argument("--dec", required=True)
    p.add_argument("--word", required=True, help="'.'-separated local symbols")
    add_caps(p)
    p.set_defaults(func=_cmd_decode)

    p = sub.add_parser("recognize", help="read words from stdin, print accept/reject")
    p.add_argument("--dec", required=True)
    p.add_argument("--stream", action="store_true",
                   help="use the O(k)-memory streaming recognizer")
    add_caps(p)
    p.set_defaults(func=_cmd_recognize)

    p = sub.add_parser("code", help="emit the factor-decodable state code")
    p.add_argument("--states", type=int, required=True)
    p.add_argument("--ratio", type=int, required=True)
    add_caps(p)
    p.set_defaults(func=_cmd_code)

    p = sub.add_parser("table", help="print growth constants and width tables")
    p.add_argument("--h", default="2,3,4,10,100,1000", help="comma-separated ratios")
    p.add_argument("--n", default="10,1e3,1e6,1e9,1e40",
                   help="comma-separated state counts (1e40 form allowed)")
    add_caps(p)
    p.set_defaults(func=_cmd_table)

    p = sub.add_parser("minwidth", help="smallest window width matching a machine")
    p.add_argument("--nfa", required=True)
    p.add_argument("--max-k", type=int, required=True)
    p.add_argument("--max-len", type=int, required=True)
    add_caps(p)
    p.set_defaults(func=_cmd_minwidth)

    p = sub.add_parser("refute", help="refute a small-alphabet decomposition claim")
    p.add_argument("--dec", required=True)
    p.add_argument("--alphabet-size", type=int, required=True)
    add_caps(p)
    p.set_defaults(func=_cmd_refute)

    p = sub.add_parser("corpus", help="build and verify everything in a directory")
    p.add_argument("--dir", required=True)
    p.add_argument("--ratio", default="2,3")
    p.add_argument("--mode", choices=("exact", "bounded"), default="bounded")
    p.add_argument("--maxlen", type=int, default=None)
    p.add_argument("--jobs", type=int, default=1)
    add_caps(p)
    p.set_defaults(func=_cmd_corpus)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except (OSError, ValueError, CapacityError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def run() -> None:
    sys.exit(main())
