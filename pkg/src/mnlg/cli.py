"""Command line: ``mnlg generate | validate | bench``.

Exit status is 0 on success (acts that could not be realized are reported in
the script and do not fail the run), 1 for bad input or grammar, 2 otherwise.
"""

from __future__ import annotations

import argparse
import logging
import sys
from collections import Counter
from pathlib import Path
from typing import Optional, Sequence

from mnlg.errors import MnlgError
from mnlg.generator import GenConfig
from mnlg.pipeline_io import REFERENCE_TIMES, run_benchmark, run_pipeline
from mnlg.repository import classify, load_repository

EXIT_OK, EXIT_INPUT, EXIT_INTERNAL = 0, 1, 2


def _positive(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="mnlg", description="Generate dialogue scripts from dialogue plans.")
    parser.add_argument("-v", "--verbose", action="count", default=0)
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("generate", help="realize one dialogue plan")
    gen.add_argument("--grammar", required=True, type=Path)
    gen.add_argument("--plan", required=True, type=Path)
    gen.add_argument("--max-solutions", type=_positive, default=1)
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--depth-limit", type=_positive, default=32)
    gen.add_argument("--require-full-coverage", action="store_true")
    gen.add_argument("-o", "--output", type=Path, help="script file (default: stdout)")

    val = sub.add_parser("validate", help="load a grammar and summarize its trees")
    val.add_argument("--grammar", required=True, type=Path)

    bench = sub.add_parser("bench", help="time the pipeline on a directory of plans")
    bench.add_argument("--grammar", required=True, type=Path)
    bench.add_argument("--plans", required=True, type=Path)
    bench.add_argument("--reps", type=_positive, default=5)
    bench.add_argument("--seed", type=int, default=0)
    return parser


def _generate(args) -> int:
    repo = load_repository(args.grammar)
    try:
        data = args.plan.read_bytes()
    except OSError as e:
        raise MnlgError(f"cannot read plan {args.plan}: {e}") from e
    config = GenConfig(args.max_solutions, args.seed, args.depth_limit, args.require_full_coverage)
    out = run_pipeline(data, repo, config)
    if args.output:
        args.output.write_bytes(out)
    else:
        sys.stdout.buffer.write(out)
    return EXIT_OK


def _validate(args) -> int:
    repo = load_repository(args.grammar)
    counts = Counter(classify(t) for t in repo.trees)
    print(f"{args.grammar}: {len(repo.trees)} trees, {len(repo.lexicon)} lexical entries")
    for kind in ("canned", "template", "rule"):
        print(f"  {kind}: {counts.get(kind, 0)}")
    return EXIT_OK


def _bench(args) -> int:
    repo = load_repository(args.grammar)
    files = sorted(args.plans.glob("*.xml"))
    if not files:
        raise MnlgError(f"no *.xml plans in {args.plans}")
    plans = [(f.stem, f.read_bytes()) for f in files]
    report = run_benchmark(plans, repo, (1, 10), args.reps, args.seed)
    print(report.format_table())
    known = [r for r in report.rows if r.name in REFERENCE_TIMES]
    if known:
        print("\nreference system (s): input | # acts | =1 | <=10")
        for r in known:
            acts, one, ten = REFERENCE_TIMES[r.name]
            print(f"{r.name} | {acts} | {one:.3f} | {ten:.3f}")
    return EXIT_OK


COMMANDS = {"generate": _generate, "validate": _validate, "bench": _bench}


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.WARNING - 10 * min(args.verbose, 2), format="%(levelname)s %(name)s: %(message)s")
    try:
        return COMMANDS[args.command](args)
    except MnlgError as e:
        print(f"mnlg: error: {e}", file=sys.stderr)
        return EXIT_INPUT
    except Exception as e:  # noqa: BLE001
        logging.getLogger("mnlg").exception("internal error")
        print(f"mnlg: internal error: {e}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
