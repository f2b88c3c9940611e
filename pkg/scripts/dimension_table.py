"""Fundamental dimensions by Weyl's formula and by Freudenthal, side by side.

    python3 scripts/dimension_table.py A3 B3 G2 F4
"""

import sys

from koszulkt.cartan import build_cartan, fundamental_dimensions, weyl_order
from koszulkt.repring import character

DEFAULT = ["A1", "A2", "A3", "A4", "B2", "B3", "B4", "C3", "C4", "D4", "F4", "G2"]


def main(argv):
    for text in argv or DEFAULT:
        d = build_cartan(text)
        weyl = fundamental_dimensions(d)
        freud = tuple(character(d, d.fundamental_weight(j)).coefficient_sum() for j in range(1, d.N + 1))
        flag = "" if weyl == freud else "  MISMATCH"
        print(f"{d.name:8s} |W|={weyl_order(d):<10d} weyl={weyl} freudenthal={freud}{flag}")


if __name__ == "__main__":
    main(sys.argv[1:])
