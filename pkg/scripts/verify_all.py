"""Run the full verification over every rank <= 2 type and print a summary table.

    python3 scripts/verify_all.py [--window-cap 3] [--json results.json]
"""

import argparse
import json
import time

from koszulkt.cli import RunConfig, run_checks
from koszulkt.ktheory import CHECK_NAMES

TYPES = ["A1", "A2", "B2", "G2", "A1xA1"]


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--window-cap", type=int, default=3)
    parser.add_argument("--max-y-degree", type=int, default=4)
    parser.add_argument("--json", metavar="PATH")
    args = parser.parse_args()

    rows = []
    print(f"{'type':6s} " + " ".join(f"{c[:6]:>6s}" for c in CHECK_NAMES) + "   secs")
    for text in TYPES:
        start = time.perf_counter()
        report = run_checks(RunConfig(text, max_y_degree=args.max_y_degree, window_cap=args.window_cap))
        secs = time.perf_counter() - start
        marks = ["ok" if report.checks[c] else ("-" if report.checks[c] is None else "FAIL") for c in CHECK_NAMES]
        print(f"{text:6s} " + " ".join(f"{m:>6s}" for m in marks) + f"  {secs:5.2f}")
        rows.append({"type": text, "seconds": round(secs, 3), **report.to_dict()})

    if args.json:
        with open(args.json, "w") as fh:
            json.dump(rows, fh, indent=2, sort_keys=True)


if __name__ == "__main__":
    main()
