"""Theta-averaged fidelity over the (zeta, delta) error grid for each scheme."""

import argparse
import os
from pathlib import Path

import numpy as np

from geomgate import experiments as ex


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default="results/robustness")
    ap.add_argument("--count", type=int, default=21)
    ap.add_argument("--jobs", type=int, default=os.cpu_count() or 1)
    args = ap.parse_args()
    out = Path(args.out)
    grids = {}
    for scheme in ("nngqc", "ngqc", "dg"):
        res = ex.run_sweep(ex.error_sweep_spec(scheme, count=args.count), args.jobs)
        b = ex.Bundle(f"robustness_{scheme}")
        ex._add_sweep(b, res)
        ex.write_bundle(b, out)
        grids[scheme] = res.values
        print(f"{scheme:6s} min {res.values.min():.5f}  centre {res.values[args.count // 2, args.count // 2]:.8f}"
              f"  ({res.wall_time:.1f} s)")
    nn = grids["nngqc"]
    print(f"NNGQC >= NGQC on {100 * np.mean(nn >= grids['ngqc']):.1f}% of points,"
          f" >= DG on {100 * np.mean(nn >= grids['dg']):.1f}%")


if __name__ == "__main__":
    main()
