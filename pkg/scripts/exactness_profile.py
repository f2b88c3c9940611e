"""Time the truncated exactness check as the y-degree grows.

    python3 scripts/exactness_profile.py G2 --max-degree 8
"""

import argparse
import time

from koszulkt.cartan import build_cartan
from koszulkt.koszul import koszul_complex, truncated_exactness


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("type")
    parser.add_argument("--max-degree", type=int, default=6)
    args = parser.parse_args()
    cx = koszul_complex(build_cartan(args.type))
    for deg in range(args.max_degree + 1):
        start = time.perf_counter()
        report = truncated_exactness(cx, deg)
        print(f"y-degree <= {deg}: exact={report.exact} pieces={len(report.groups)} {time.perf_counter() - start:.3f}s")


if __name__ == "__main__":
    main()
