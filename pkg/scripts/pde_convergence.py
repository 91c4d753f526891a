"""Grid refinement of the finite-difference Green function against log|z| on the unit disc."""
import argparse
import time

import numpy as np

from szdisc.acceptance import unit_disc
from szdisc.oracle import green_solve


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--grids", default="250,500,1000,2000")
    ap.add_argument("--R", type=float, default=8.0)
    ap.add_argument("--points", type=int, default=20)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    rng = np.random.default_rng(args.seed)
    r = rng.uniform(1.2, 3.5, args.points)
    z = r * np.exp(1j * rng.uniform(0, 2 * np.pi, args.points))
    prev = None
    print("n,max_error,mean_error,ratio,seconds")
    for n in (int(s) for s in args.grids.split(",")):
        t0 = time.monotonic()
        g = green_solve(unit_disc(), z, n, args.R)
        err = np.abs(np.asarray(g.value) - np.log(r))
        ratio = err.max() / prev if prev else float("nan")
        print(f"{n},{err.max():.6g},{err.mean():.6g},{ratio:.3f},{time.monotonic() - t0:.1f}")
        prev = err.max()


if __name__ == "__main__":
    main()
