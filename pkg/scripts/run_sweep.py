#!/usr/bin/env python3
"""Run the full verification sweep and write every report to disk.

This is the experiment behind acceptance criterion 1: two hundred certified
instances over q in {3, 5} across all ten signature shapes, each verified on
both counting routes with the eigenline cross-check enabled.

    python scripts/run_sweep.py --out sweep_reports.json
    python scripts/run_sweep.py --count 1000 --jobs 8 --seed 99
"""

from __future__ import annotations

import argparse
import json
import sys
import time

from afl_lab.cli import DEFAULT_SIGNATURES, SweepConfig, run_sweep


def parse_args():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--q", default="3,5", help="comma-joined odd primes")
    parser.add_argument("--count", type=int, default=200)
    parser.add_argument("--seed", type=int, default=20240)
    parser.add_argument("--max-dim", type=int, default=9)
    parser.add_argument("--jobs", type=int, default=1)
    parser.add_argument("--out", default=None, help="write summary + reports here")
    return parser.parse_args()


def main() -> int:
    args = parse_args()
    config = SweepConfig(
        qs=tuple(int(q) for q in args.q.split(",")),
        max_dim=args.max_dim,
        count=args.count,
        seed=args.seed,
        signatures=DEFAULT_SIGNATURES,
        jobs=args.jobs,
        out=args.out,
    )
    started = time.time()
    summary, reports = run_sweep(config)
    elapsed = time.time() - started
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            json.dump({"summary": summary, "reports": reports}, fh, sort_keys=True)
    print(
        f"{summary['instances']} instances in {elapsed:.1f}s: "
        f"{summary['passes']} pass, {summary['fails']} fail"
    )
    for finding in summary["findings"]:
        print(f"finding: {finding}")
    return 0 if not summary["fails"] else 1


if __name__ == "__main__":
    sys.exit(main())
