"""Tabulate the constant-width bounds against the inradius/circumradius ratio."""

from __future__ import annotations

import argparse

import numpy as np

from crofton3d.measures import constant_width_bounds, lower_bound_positivity_root
from crofton3d.measures.constant_width import JUNG_MIN_RATIO


def main():
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--width", type=float, default=2.0)
    p.add_argument("--steps", type=int, default=9)
    args = p.parse_args()

    cols = ["ratio", "slice_l2_upper", "exterior_area2_lower", "exterior_area2_upper", "remark_lower", "remark_upper"]
    print(" ".join(f"{c:>21}" for c in cols))
    for c in np.linspace(JUNG_MIN_RATIO, 1.0, args.steps):
        b = constant_width_bounds(args.width, c).as_dict()
        print(" ".join(f"{b[k]:21.6f}" for k in cols))
    root = lower_bound_positivity_root()
    print(f"\nexterior lower bound is positive for ratio > {root:.9f}")
    print(f"ball (ratio 1) slice bound {constant_width_bounds(args.width, 1.0).slice_l2_upper:.6f} "
          f"= 4 pi^3 a^3 / 3 = {4 * np.pi**3 * args.width**3 / 3:.6f}")


if __name__ == "__main__":
    main()
