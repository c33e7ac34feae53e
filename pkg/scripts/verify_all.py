"""Run every check suite on every registered example variant and print a summary table."""
from __future__ import annotations

import argparse
import sys
import time

from qbundle.suites import SUITES, SuiteConfig, resolve, run

VARIANTS = ["trivial-u1", "trivial-u1[circle]", "trivial-u1[free]", "trivial-u1[point]",
            "hopf-fibration", "dunkl-rank1"]


def main(argv: list[str] | None = None) -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--budget", type=int, default=3)
    ap.add_argument("--suite", action="append", choices=SUITES, help="restrict to a suite (repeatable)")
    ap.add_argument("-v", "--verbose", action="store_true", help="print failing and skipped checks")
    args = ap.parse_args(argv)
    suites = args.suite or list(SUITES)
    cfg = SuiteConfig(budget=args.budget)
    total_fail = 0
    print(f"{'example':<22}{'pass':>6}{'fail':>6}{'skip':>6}{'time':>9}")
    for name in VARIANTS:
        t0 = time.perf_counter()
        checks = run(resolve(name), suites, cfg)
        dt = time.perf_counter() - t0
        counts = {s: sum(c.status == s for c in checks) for s in ("pass", "fail", "skipped")}
        total_fail += counts["fail"]
        print(f"{name:<22}{counts['pass']:>6}{counts['fail']:>6}{counts['skipped']:>6}{dt:>8.2f}s")
        if args.verbose:
            for c in checks:
                if c.status != "pass":
                    print(f"    {c.status:<8}{c.id}  {c.witness}")
    return 1 if total_fail else 0


if __name__ == "__main__":
    sys.exit(main())
