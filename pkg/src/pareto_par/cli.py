"""Command-line entry point: generate, solve, oracle, verify, bench."""
from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

from . import bench
from .fileio import (InstanceFormatError, format_front, format_instance, read_front,
                     read_instance)
from .instgen import FAMILIES, GenSpec, generate
from .oracle import OracleTooLarge, oracle_front
from .recursion import TimeLimitExceeded
from .runner import ALGORITHMS, solve

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_MISMATCH = 2
EXIT_TIMEOUT = 3
EXIT_USAGE = 4

THREADS_ENV = "PARETO_PAR_THREADS"


class UsageError(Exception):
    pass


def _default_threads() -> int:
    raw = os.environ.get(THREADS_ENV)
    if raw is None:
        return 1
    try:
        t = int(raw)
    except ValueError:
        raise UsageError(f"{THREADS_ENV}={raw!r} is not an integer") from None
    if t < 1:
        raise UsageError(f"{THREADS_ENV} must be at least 1")
    return t


def _parse_perms(text: str) -> list:
    try:
        return [tuple(int(x) for x in part.split(",")) for part in text.split(";") if part.strip()]
    except ValueError:
        raise UsageError(f"bad --seed-perms {text!r}; expected e.g. 1,2,3;2,3,1") from None


def _load(path):
    try:
        return read_instance(path)
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror or exc}") from None
    except InstanceFormatError as exc:
        raise UsageError(f"{path}: {exc}") from None


def _emit(text: str, path) -> None:
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


def cmd_generate(args) -> int:
    try:
        spec = GenSpec(args.family, args.size, args.objectives, args.seed)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    out = Path(args.out) if args.out else Path(spec.filename)
    if out.is_dir():
        out = out / spec.filename
    if out.exists() and not args.force:
        raise UsageError(f"{out} exists; pass --force to overwrite")
    out.write_text(format_instance(generate(spec)))
    print(out)
    return EXIT_OK


def cmd_solve(args) -> int:
    inst = _load(args.instance)
    threads = args.threads if args.threads is not None else _default_threads()
    perms = _parse_perms(args.seed_perms) if args.seed_perms else None
    if perms is not None and args.algorithm not in ("cluster", "spread"):
        raise UsageError("--seed-perms applies only to cluster and spread")
    try:
        archive, report = solve(inst, args.algorithm, threads, time_limit_s=args.time_limit_s,
                                share=not args.no_share, perms=perms,
                                use_cache=not args.no_cache)
    except TimeLimitExceeded:
        print(f"time limit of {args.time_limit_s}s exceeded; no front written", file=sys.stderr)
        return EXIT_TIMEOUT
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    _emit(format_front(archive.vectors()), args.front_out)
    if args.report_out:
        Path(args.report_out).write_text(report.as_text())
    else:
        sys.stderr.write(report.as_text())
    return EXIT_OK


def cmd_oracle(args) -> int:
    inst = _load(args.instance)
    try:
        front = oracle_front(inst)
    except OracleTooLarge as exc:
        raise UsageError(f"instance too large for enumeration: {exc}") from None
    _emit(format_front(front), args.front_out)
    return EXIT_OK


def cmd_verify(args) -> int:
    fronts = []
    for p in (args.front_a, args.front_b):
        try:
            fronts.append(set(read_front(p)))
        except OSError as exc:
            raise UsageError(f"cannot read {p}: {exc.strerror or exc}") from None
        except InstanceFormatError as exc:
            raise UsageError(f"{p}: {exc}") from None
    a, b = fronts
    if a == b:
        print(f"fronts match ({len(a)} vectors)")
        return EXIT_OK
    print(f"fronts differ: {len(a - b)} only in {args.front_a}, {len(b - a)} only in {args.front_b}")
    for v in sorted(a - b):
        print("< " + " ".join(map(str, v)))
    for v in sorted(b - a):
        print("> " + " ".join(map(str, v)))
    return EXIT_MISMATCH


def cmd_bench(args) -> int:
    try:
        cells, reps = bench.load_manifest(args.manifest)
    except (OSError, ValueError, KeyError) as exc:
        raise UsageError(f"bad manifest {args.manifest}: {exc}") from None
    if args.repetitions is not None:
        reps = args.repetitions
    results = bench.run_cells(cells, reps, time_limit_s=args.time_limit_s)
    sys.stdout.write(bench.format_table(results))
    csv_text = bench.format_csv(results)
    if args.csv_out:
        Path(args.csv_out).write_text(csv_text)
    else:
        sys.stdout.write("\n" + csv_text)
    failed = [r for r in results if r.error is not None]
    for r in failed:
        print(f"ERROR {r.cell.instance} {r.cell.algorithm}/{r.cell.threads}: {r.error}",
              file=sys.stderr)
    return EXIT_FAIL if failed else EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="pareto-par",
                                description="Exact Pareto fronts of multi-objective integer programs.")
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("generate", help="write a seeded benchmark instance")
    g.add_argument("--family", required=True, choices=FAMILIES)
    g.add_argument("--size", required=True, type=int)
    g.add_argument("--objectives", required=True, type=int)
    g.add_argument("--seed", required=True, type=int)
    g.add_argument("--out", help="file or directory (default: conventional name in cwd)")
    g.add_argument("--force", action="store_true", help="overwrite an existing file")
    g.set_defaults(func=cmd_generate)

    s = sub.add_parser("solve", help="compute the exact front")
    s.add_argument("instance")
    s.add_argument("--algorithm", default="aira", choices=ALGORITHMS)
    s.add_argument("--threads", type=int,
                   help=f"worker threads (default ${THREADS_ENV} or 1)")
    s.add_argument("--time-limit-s", type=float)
    s.add_argument("--front-out", help="front file (default stdout)")
    s.add_argument("--report-out", help="key=value report (default stderr)")
    s.add_argument("--no-share", action="store_true", help="disable bound exchange")
    s.add_argument("--no-cache", action="store_true", help="disable relaxation reuse")
    s.add_argument("--seed-perms", help="explicit objective orders, e.g. 1,2,3;3,1,2")
    s.set_defaults(func=cmd_solve)

    o = sub.add_parser("oracle", help="front by brute-force enumeration (small instances)")
    o.add_argument("instance")
    o.add_argument("--front-out")
    o.set_defaults(func=cmd_oracle)

    v = sub.add_parser("verify", help="compare two front files as sets")
    v.add_argument("front_a")
    v.add_argument("front_b")
    v.set_defaults(func=cmd_verify)

    b = sub.add_parser("bench", help="run a benchmark manifest")
    b.add_argument("manifest")
    b.add_argument("--csv-out")
    b.add_argument("--repetitions", type=int, help="override the manifest's count")
    b.add_argument("--time-limit-s", type=float)
    b.set_defaults(func=cmd_bench)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on bad usage; that status means "mismatch" here
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"pareto-par: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
