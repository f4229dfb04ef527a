"""Command-line harness: replay update streams through any maintainer.

Exit codes: 0 success, 1 parse/usage error, 2 verification failure,
3 surfaced probabilistic failure.
"""

from __future__ import annotations

import argparse
import sys

from .errors import (
    DynlaError,
    ModeMismatch,
    ProbabilisticFailure,
    StreamSyntaxError,
    VerificationFailure,
)
from .gadget import GadgetGraph
from .runner import MODES, run
from .streams import parse


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dynla",
        description="Replay a dynamic-update stream through a rank, basis, "
        "submatrix, or matching maintainer over GF(p).",
    )
    parser.add_argument("--mode", required=True, choices=MODES)
    parser.add_argument(
        "--input", default="-", help="stream file path, or - for stdin"
    )
    parser.add_argument("--prime", type=int, default=None, help="field modulus")
    parser.add_argument("--seed", type=int, default=None, help="RNG seed")
    parser.add_argument(
        "--copies", type=int, default=None, help="sketch copies per level"
    )
    parser.add_argument(
        "--verify", action="store_true", help="check every output against an oracle"
    )
    parser.add_argument(
        "--stats", action="store_true", help="print a final JSON counters block"
    )
    parser.add_argument(
        "--worst-case-spread",
        action="store_true",
        help="spread sketch activation work across updates",
    )
    parser.add_argument(
        "--lowrank",
        action="store_true",
        help="basis mode: rank-scaled probe structures",
    )
    parser.add_argument(
        "--dump-gadget-dot",
        metavar="FILE",
        default=None,
        help="write the switch-gadget graph (for the stream's size) as DOT",
    )
    parser.add_argument(
        "--report",
        metavar="DIR",
        default=None,
        help="render output.txt and figures into DIR",
    )
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.input == "-":
            text = sys.stdin.read()
        else:
            with open(args.input, encoding="utf-8") as fh:
                text = fh.read()
        stream = parse(text)
        if args.dump_gadget_dot is not None:
            size = stream.n if stream.kind in ("matrix", "graph") else max(
                stream.nl, stream.nr
            )
            npad = 1
            while npad < max(2, size):
                npad *= 2
            with open(args.dump_gadget_dot, "w", encoding="utf-8") as fh:
                fh.write(GadgetGraph(npad, [], []).to_dot())
        result = run(
            stream,
            args.mode,
            prime=args.prime,
            seed=args.seed,
            copies=args.copies,
            verify=args.verify,
            worst_case=args.worst_case_spread,
            lowrank=args.lowrank,
        )
    except (StreamSyntaxError, ModeMismatch, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except VerificationFailure as exc:
        print(f"verification failure: {exc}", file=sys.stderr)
        return 2
    except ProbabilisticFailure as exc:
        print(f"probabilistic failure: {exc}", file=sys.stderr)
        return 3
    except DynlaError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    for line in result.lines:
        print(line)
    if args.stats:
        print(result.stats_json())
    if args.report is not None:
        from .report import write_report

        write_report(result, args.mode, args.report)
    return 0


if __name__ == "__main__":
    sys.exit(main())
