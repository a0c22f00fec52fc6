"""Batch CLI: estimation runs, oracle checks, and histogram generation.

Output contract: JSON documents are the full-fidelity record of a run
(UTF-8, full-precision floats, versioned schema); CSV is the tabular
interchange format consumed by the figure scripts (comma-separated,
header row, LF line endings).  Every subcommand is deterministic given
its flags, apart from the elapsed_seconds field.

Exit codes: 0 success, 2 flag error, 3 failed level, 4 guard refusal.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys
import time

import numpy as np

from . import multiset, oracle, pattern
from .estimator import (ChainConfig, GuardExceededError, LogCountEstimate,
                        MultisetProblem, UnitriangularProblem, estimate_count)
from .rngstream import stream_for

ARTIFACT_VERSION = 1

EXIT_OK = 0
EXIT_FLAGS = 2
EXIT_FAILED_LEVEL = 3
EXIT_GUARD = 4


def rep_seed(seed: int, rep: int) -> int:
    """Per-replication master seed, derived deterministically."""
    ss = np.random.SeedSequence(entropy=int(seed), spawn_key=(int(rep),))
    return int(ss.generate_state(1, np.uint64)[0])


def _levels_json(estimate: LogCountEstimate) -> list[dict]:
    return [
        {
            "level": r.level,
            "value": r.value,
            "std_error": r.std_error,
            "zero_fraction": r.zero_fraction,
            "samples_used": r.samples_used,
        }
        for r in estimate.per_level
    ]


def _write_json(path: str, doc: dict) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh, indent=2)
        fh.write("\n")


def _json_path(base: str, rep: int, reps: int) -> str:
    if reps == 1:
        return base
    stem, dot, suffix = base.rpartition(".")
    if not dot:
        return f"{base}.rep{rep}"
    return f"{stem}.rep{rep}.{suffix}"


def _csv_writer(fh):
    return csv.writer(fh, lineterminator="\n")


def cmd_unitriangular(args) -> int:
    rows = []
    for rep in range(args.reps):
        seed = rep_seed(args.seed, rep)
        config = ChainConfig(burn_in=args.burnin, samples=args.samples,
                             master_seed=seed, worker_count=args.workers)
        t0 = time.perf_counter()
        estimate = estimate_count(UnitriangularProblem(args.n, args.q), config)
        elapsed = time.perf_counter() - t0
        doc = {
            "artifact_version": ARTIFACT_VERSION,
            "command": "unitriangular",
            "config": {
                "n": args.n, "q": args.q, "burnin": args.burnin,
                "samples": args.samples, "seed": args.seed, "rep": rep,
                "rep_seed": seed, "workers": args.workers,
                "guard": args.guard,
            },
            "levels": _levels_json(estimate),
            "result": {
                "logq_count": estimate.log_count,
                "std_error": estimate.std_error,
                "valid": estimate.valid,
            },
            "elapsed_seconds": elapsed,
        }
        if args.out_json:
            _write_json(_json_path(args.out_json, rep, args.reps), doc)
        if not estimate.valid:
            failed = estimate.failed_levels[0]
            print(
                f"error: level {failed.level} failed "
                f"(zero_fraction={failed.zero_fraction:.3f}, "
                f"samples={failed.samples_used})",
                file=sys.stderr,
            )
            return EXIT_FAILED_LEVEL
        rows.append([args.n, args.q, seed, estimate.log_count,
                     estimate.std_error, elapsed])
        print(f"n={args.n} q={args.q} rep={rep} "
              f"log{args.q}(k) = {estimate.log_count:.6f} "
              f"+- {estimate.std_error:.6f}")
    if args.out_csv:
        with open(args.out_csv, "w", newline="", encoding="utf-8") as fh:
            w = _csv_writer(fh)
            w.writerow(["n", "q", "seed", "logq_count", "stderr", "elapsed"])
            w.writerows(rows)
    return EXIT_OK


def cmd_multiset(args) -> int:
    exact = multiset.exact_multiset_count(args.n, args.k)
    log_true = math.log(exact)
    rows = []
    for rep in range(args.reps):
        seed = rep_seed(args.seed, rep)
        config = ChainConfig(burn_in=args.burnin, samples=args.samples,
                             master_seed=seed)
        t0 = time.perf_counter()
        estimate = estimate_count(MultisetProblem(args.n, args.k), config)
        elapsed = time.perf_counter() - t0
        doc = {
            "artifact_version": ARTIFACT_VERSION,
            "command": "multiset",
            "config": {
                "n": args.n, "k": args.k, "burnin": args.burnin,
                "samples": args.samples, "seed": args.seed, "rep": rep,
                "rep_seed": seed,
            },
            "levels": _levels_json(estimate),
            "result": {
                "log_est": estimate.log_count,
                "log_true": log_true,
                "exact_count": exact,
                "std_error": estimate.std_error,
                "valid": estimate.valid,
            },
            "elapsed_seconds": elapsed,
        }
        if args.out_json:
            _write_json(_json_path(args.out_json, rep, args.reps), doc)
        if not estimate.valid:
            print("error: a multiset level failed", file=sys.stderr)
            return EXIT_FAILED_LEVEL
        rows.append([args.n, args.k, log_true, estimate.log_count, rep])
        print(f"n={args.n} k={args.k} rep={rep} "
              f"log(k) true={log_true:.6f} est={estimate.log_count:.6f}")
    if args.out_csv:
        with open(args.out_csv, "w", newline="", encoding="utf-8") as fh:
            w = _csv_writer(fh)
            w.writerow(["n", "k", "log_true", "log_est", "rep"])
            w.writerows(rows)
    return EXIT_OK


def cmd_oracle(args) -> int:
    try:
        if args.check == "count":
            J = pattern.ClosedPositionSet.full(args.n)
            result = oracle.exact_count_conjugacy(J, args.q, args.guard)
            print(f"k(U_{args.n}(F_{args.q})) = {result.k}")
            print(f"class size profile (exponent: classes): "
                  f"{result.class_size_profile}")
            doc = {"check": "count", "n": args.n, "q": args.q, "k": result.k,
                   "class_size_profile": result.class_size_profile}
        elif args.check == "theorem2":
            report = oracle.verify_theorem2(args.n, args.q, args.guard)
            for m, r in enumerate(report.ratios, start=1):
                print(f"m={m:3d}  k(H_m)/k(H_m-1) = {r} "
                      f"({float(r):.4f})")
            verdict = "PASS" if report.all_within_bounds else "FAIL"
            print(f"bounds [1/{args.q}, {args.q}^3]: {verdict}")
            doc = {"check": "theorem2", "n": args.n, "q": args.q,
                   "ratios": [[r.numerator, r.denominator]
                              for r in report.ratios],
                   "all_within_bounds": report.all_within_bounds}
        else:
            seq = pattern.nested_sequence(args.n)
            reports = [oracle.verify_corollary41(args.n, args.q, m, args.guard)
                       for m in range(1, seq.num_levels + 1)]
            for rep in reports:
                print(f"m={rep.level:3d}  E[qK]={rep.mean} "
                      f"target={rep.target_ratio} "
                      f"mean_ok={rep.mean_matches_ratio} "
                      f"std_ok={rep.std_within_bound}")
            ok = all(r.mean_matches_ratio and r.std_within_bound
                     for r in reports)
            print(f"corollary bound: {'PASS' if ok else 'FAIL'}")
            doc = {"check": "corollary41", "n": args.n, "q": args.q,
                   "all_ok": ok}
    except GuardExceededError as exc:
        print(f"refused: {exc}", file=sys.stderr)
        return EXIT_GUARD
    if args.out_json:
        doc["artifact_version"] = ARTIFACT_VERSION
        _write_json(args.out_json, doc)
    return EXIT_OK


def cmd_histogram(args) -> int:
    stream = stream_for(args.seed, 0)
    hist = pattern.class_size_histogram(args.n, args.q, args.samples, stream)
    out = args.out_csv
    if out:
        fh = open(out, "w", newline="", encoding="utf-8")
    else:
        fh = sys.stdout
    try:
        w = _csv_writer(fh)
        w.writerow(["exponent", "count"])
        for exp, count in hist.items():
            w.writerow([exp, count])
    finally:
        if out:
            fh.close()
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="orbitcount",
        description="Approximate orbit counting via the Burnside process "
                    "with importance sampling.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("unitriangular",
                       help="estimate the number of conjugacy classes of "
                            "U_n(F_q)")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--burnin", type=int, default=100_000)
    p.add_argument("--samples", type=int, default=100_000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--reps", type=int, default=1)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--out-json")
    p.add_argument("--out-csv")
    p.add_argument("--guard", type=int, default=oracle.DEFAULT_GUARD)
    p.set_defaults(func=cmd_unitriangular)

    p = sub.add_parser("multiset",
                       help="estimate orbit counts of colorings under "
                            "coordinate permutation")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--burnin", type=int, default=20)
    p.add_argument("--samples", type=int, default=10_000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--reps", type=int, default=1)
    p.add_argument("--out-json")
    p.add_argument("--out-csv")
    p.set_defaults(func=cmd_multiset)

    p = sub.add_parser("oracle", help="exhaustive exact checks at desk scale")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--check", choices=["count", "theorem2", "corollary41"],
                   required=True)
    p.add_argument("--guard", type=int, default=oracle.DEFAULT_GUARD)
    p.add_argument("--out-json")
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("histogram",
                       help="class-size histogram along the Burnside chain")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--samples", type=int, default=10_000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out-csv")
    p.set_defaults(func=cmd_histogram)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except GuardExceededError as exc:
        print(f"refused: {exc}", file=sys.stderr)
        return EXIT_GUARD


if __name__ == "__main__":
    sys.exit(main())
