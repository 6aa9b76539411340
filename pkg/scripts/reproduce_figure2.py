"""Single-qubit open-system comparison of NNGQC and NGQC."""

import argparse
from pathlib import Path

from geomgate import experiments as ex


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default="results/figure2")
    ap.add_argument("--dephasing", choices=("sigma_z", "projector"), default="sigma_z")
    args = ap.parse_args()
    bundle = ex.figure2_experiment(ex.SingleQubitSettings(dephasing=args.dephasing))
    for p in ex.write_bundle(bundle, Path(args.out)):
        print("wrote", p)
    for k, v in bundle.scalars.items():
        print(f"{k:32s} {v:.6g}")


if __name__ == "__main__":
    main()
