"""Maximum violation of each inequality family for each correlation source.

    python3 scripts/violation_landscape.py --step 22.5
"""

import argparse
import sys

import numpy as np

from bellseq import inequalities as iq
from bellseq import scenarios as sc

SOURCES = {
    "singlet": sc.bell_correlation,
    "lhv_linear": iq.lhv_linear_corr,
    "product": sc.product_correlation,
    "product_anti": lambda a, b: -sc.product_correlation(a, b),
}


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--step", type=float, default=22.5, help="coarse grid step in degrees (<= 22.5)")
    ap.add_argument("--refine", type=int, default=10)
    args = ap.parse_args(argv)

    print("source,family,bound,max_value,violation,angles_deg")
    for name, corr in SOURCES.items():
        for family in iq.FAMILIES:
            m = iq.maximize_violation(family, corr, np.deg2rad(args.step), args.refine)
            angles = " ".join(f"{np.rad2deg(a):.6g}" for a in m.angles)
            print(f"{name},{family},{iq.BOUNDS[family]:g},{m.value:.12g},{m.violation:.12g},{angles}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
