"""Command-line interface.

Exit codes: 0 success, 2 usage or parse error, 3 capacity exceeded,
4 corrupt frame, 1 failed oracle check.  Paths may be ``-`` for
stdin/stdout.  Output files are written atomically, so a failing command
never leaves a partial file behind.
"""

from __future__ import annotations

import argparse
import io
import os
import sys
import tempfile
from typing import Callable, List, Optional

from . import __version__
from .analysis import capacity_curve, usage_experiment, write_curve_csv, write_usage_csv
from .codebook import build_obc, state_probabilities
from .coder import HEADER_BITS, embed_message, extract_message, frame_capacity
from .cover import FORMATS, apply_embedding, load_cover, max_reachable_q, read_states
from .errors import (
    CapacityExceededError,
    CorruptFrameError,
    CoverFormatError,
    EnumerationRangeError,
    InvalidParameterError,
    UnreachableStateError,
)
from .oracle import MAX_ENUM_Q, certify_obc

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_USAGE = 2
EXIT_CAPACITY = 3
EXIT_CORRUPT = 4


class UsageError(Exception):
    pass


def _read_input(path: str) -> bytes:
    if path == "-":
        return sys.stdin.buffer.read()
    try:
        with open(path, "rb") as fh:
            return fh.read()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None


def _write_output(path: str, data: bytes) -> None:
    if path == "-":
        sys.stdout.buffer.write(data)
        sys.stdout.buffer.flush()
        return
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".obcstego-")
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(data)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _report_stream(out_path: str):
    # keep stdout clean when it carries the payload
    return sys.stderr if out_path == "-" else sys.stdout


def _emit(lines: List[str], stream) -> None:
    for line in lines:
        print(line, file=stream)


def cmd_build_code(args: argparse.Namespace) -> int:
    cb = build_obc(args.q)
    for i, (word, p) in enumerate(zip(cb.words, state_probabilities(cb))):
        print(f"{i},{word.bits},{word.length},{float(p):.12g}")
    return EXIT_OK


def _check_reachable(q: int, r: int) -> None:
    if q > max_reachable_q(r, 8):
        raise UsageError(f"q={q} exceeds the {max_reachable_q(r, 8)} states reachable with r={r}")


def cmd_embed(args: argparse.Namespace) -> int:
    _check_reachable(args.q, args.r)
    cover = load_cover(_read_input(args.cover), args.format, args.r)
    message = _read_input(args.message)
    if cover.s < 1:
        raise UsageError(f"cover has {cover.n} elements, fewer than one block of r={args.r}")
    states, frame = embed_message(message, args.q, cover.s)
    stego, report = apply_embedding(cover, states, args.q)
    _write_output(args.out, stego.to_bytes())
    _emit(
        [
            f"q={args.q}",
            f"r={args.r}",
            f"blocks_available={cover.s}",
            f"blocks_used={report.blocks_used}",
            f"blocks_changed={report.changed_blocks}",
            f"elements_changed={report.changed_elements}",
            f"total_absolute_change={report.total_absolute_change}",
            f"message_bits={frame.payload_bit_count}",
            f"frame_bits={HEADER_BITS + frame.payload_bit_count}",
            f"padding_bits={len(frame.padding)}",
            f"capacity_bits={frame_capacity(args.q, cover.s)}",
        ],
        _report_stream(args.out),
    )
    return EXIT_OK


def cmd_extract(args: argparse.Namespace) -> int:
    stego = load_cover(_read_input(args.stego), args.format, args.r)
    states = read_states(stego, args.q)
    message = extract_message([int(s) for s in states], args.q)
    _write_output(args.out, message)
    _emit([f"message_bytes={len(message)}"], _report_stream(args.out))
    return EXIT_OK


def _write_text(path: str, render: Callable[[io.StringIO], None]) -> None:
    buf = io.StringIO()
    render(buf)
    _write_output(path, buf.getvalue().encode())


def cmd_curve(args: argparse.Namespace) -> int:
    points = capacity_curve(args.q_min, args.q_max)
    _write_text(args.out, lambda fh: write_curve_csv(points, fh))
    if args.figure:
        from .plotting import plot_capacity_curve

        plot_capacity_curve(points, args.figure)
    return EXIT_OK


def cmd_usage(args: argparse.Namespace) -> int:
    if args.n < 1:
        raise UsageError("--n must be positive")
    stats = usage_experiment(args.q, args.n, args.seed)
    _write_text(args.out, lambda fh: write_usage_csv(stats, fh))
    if args.figure:
        from .plotting import plot_usage

        plot_usage(stats, args.figure)
    return EXIT_OK


def cmd_oracle_check(args: argparse.Namespace) -> int:
    if not 2 <= args.q_max <= MAX_ENUM_Q:
        raise UsageError(f"--q-max must be in [2, {MAX_ENUM_Q}]")
    ok = True
    for q in range(2, args.q_max + 1):
        cert = certify_obc(q)
        ok = ok and cert.passed
        print(cert.summary_line())
        if args.verbose:
            print(cert.to_text())
    return EXIT_OK if ok else EXIT_CHECK_FAILED


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="obcstego",
        description="Optimal binary coding for q-state steganographic embedding.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("build-code", help="print the canonical code for q states")
    p.add_argument("--q", type=int, required=True)
    p.set_defaults(func=cmd_build_code)

    def cover_args(p: argparse.ArgumentParser) -> None:
        p.add_argument("--format", choices=FORMATS, default="raw8")
        p.add_argument("--r", type=int, required=True, help="elements per block")
        p.add_argument("--q", type=int, required=True, help="states per block")

    p = sub.add_parser("embed", help="hide a message file in a cover")
    p.add_argument("--cover", required=True)
    p.add_argument("--message", required=True)
    p.add_argument("--out", required=True)
    cover_args(p)
    p.set_defaults(func=cmd_embed)

    p = sub.add_parser("extract", help="recover a message from a stego file")
    p.add_argument("--stego", required=True)
    p.add_argument("--out", required=True)
    cover_args(p)
    p.set_defaults(func=cmd_extract)

    p = sub.add_parser("curve", help="capacity/redundancy CSV over a q range")
    p.add_argument("--q-min", type=int, default=2)
    p.add_argument("--q-max", type=int, required=True)
    p.add_argument("--out", default="-")
    p.add_argument("--figure", help="also render the curve to this image file")
    p.set_defaults(func=cmd_curve)

    p = sub.add_parser("usage", help="state-usage experiment on random bits")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--n", type=int, required=True, help="number of blocks")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default="-")
    p.add_argument("--figure", help="also render a frequency chart to this image file")
    p.set_defaults(func=cmd_usage)

    p = sub.add_parser("oracle-check", help="certify the code against exhaustive enumeration")
    p.add_argument("--q-max", type=int, default=12)
    p.add_argument("-v", "--verbose", action="store_true", help="print every clause")
    p.set_defaults(func=cmd_oracle_check)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except CapacityExceededError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CAPACITY
    except CorruptFrameError as exc:
        print(f"error: corrupt frame: {exc}", file=sys.stderr)
        return EXIT_CORRUPT
    except (
        UsageError,
        InvalidParameterError,
        CoverFormatError,
        EnumerationRangeError,
        UnreachableStateError,
    ) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
