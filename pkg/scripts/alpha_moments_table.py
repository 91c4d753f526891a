"""Moments of the boundary values of alpha on an arc, closed form against quadrature."""
import argparse

import numpy as np

from szdisc.boundary import Arc
from szdisc.glue import alpha_moments


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--fraction", type=float, default=0.5, help="arc length over 2 pi")
    ap.add_argument("--m", default="1,10,50,200")
    ap.add_argument("--k-max", type=int, default=5)
    args = ap.parse_args()
    A = Arc(0.0, 2 * np.pi * args.fraction)
    print("m,k,exact_abs,conjugate_abs,grid_abs")
    for m in (float(s) for s in args.m.split(",")):
        ex = alpha_moments(A, m, args.k_max, method="exact")
        cj = alpha_moments(A, m, args.k_max, method="conjugate")
        gr = alpha_moments(A, m, args.k_max, method="grid")
        for k in range(args.k_max + 1):
            print(f"{m:g},{k},{abs(ex[k]):.6e},{abs(cj[k]):.6e},{abs(gr[k]):.6e}")


if __name__ == "__main__":
    main()
