"""Run acceptance criteria 1-10 and print one pass/fail line each.

    python3 scripts/run_acceptance.py            # full scale
    python3 scripts/run_acceptance.py --quick    # desk scale (same as `isospectra selftest`)
    python3 scripts/run_acceptance.py --only 7 9
"""

import argparse
import json
import sys

from isospectra import checks
from isospectra.cli import desk_checks


def full(seed):
    inst = checks.rigidity_instances((2, 3, 4), 50, 50, seed)
    return {
        1: lambda: checks.criterion_1(inst),
        2: lambda: checks.criterion_2(inst),
        3: checks.criterion_3,
        4: lambda: checks.criterion_4(4, 30, 8, seed),
        5: lambda: checks.criterion_5(6, 7),
        6: checks.criterion_6,
        7: lambda: checks.criterion_7((4, 5, 6, 7), 32),
        8: lambda: checks.criterion_8((4, 5, 6)),
        9: lambda: checks.criterion_9(10, 16, seed),
        10: lambda: checks.criterion_10(1800.0, seed),
    }


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--quick", action="store_true")
    ap.add_argument("--only", type=int, nargs="*")
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--json", help="write results here")
    args = ap.parse_args()
    if args.quick:
        results = [r for r in desk_checks(args.seed) if not args.only or r.criterion in args.only]
        for r in results:
            print(r.line(), flush=True)
    else:
        results = []
        for k, run in full(args.seed).items():
            if args.only and k not in args.only:
                continue
            r = run()
            print(r.line(), flush=True)
            results.append(r)
    if args.json:
        with open(args.json, "w") as fh:
            json.dump([{"criterion": r.criterion, "status": r.status, "detail": r.detail, "seconds": r.seconds}
                       for r in results], fh, indent=2)
    return 0 if all(r.passed for r in results) else 1


if __name__ == "__main__":
    sys.exit(main())
