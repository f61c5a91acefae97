#!/usr/bin/env python3
"""How S_E, S_I and S move when the r and k grids are refined.

    python3 scripts/grid_convergence.py --system nucleus --n 20
"""
import argparse
import dataclasses

from infodens.measures import measure_set
from infodens.scaling import default_setup, system_density


def main():
    ap = argparse.ArgumentParser(description=__doc__.split("\n")[0])
    ap.add_argument("--system", default="nucleus", choices=("cluster", "nucleus", "harmonic",
                                                            "bosons"))
    ap.add_argument("--n", type=float, default=20)
    args = ap.parse_args()

    base = default_setup(args.system)
    variants = {
        "default": base,
        "2x r points": dataclasses.replace(base, n_points=2 * base.n_points),
        "2x k points": dataclasses.replace(base, k_points=2 * base.k_points),
        "2x k_max": dataclasses.replace(base, k_max=2 * base.k_max, k_points=2 * base.k_points),
    }
    ref = None
    print(f"{'grid':12s} {'S_E':>16s} {'S_I':>16s} {'S':>12s}  max rel. change")
    for name, setup in variants.items():
        m = measure_set(system_density(setup, args.n)[0])
        row = (m.S_E, m.S_I, m.S)
        ref = ref or row
        change = max(abs(a / b - 1) for a, b in zip(row, ref))
        print(f"{name:12s} {m.S_E:16.9g} {m.S_I:16.9g} {m.S:12.9g}  {change:.2e}")


if __name__ == "__main__":
    main()
