"""Upper and lower bounds for the extremal function of two unit discs along the real axis.

Columns: ball-disc bound, glued-disc bound, finite-difference Green function with
its error estimate, and the polynomial lower bound.
"""
import argparse

import numpy as np

from szdisc.acceptance import two_discs
from szdisc.envelope import envelope_ball, envelope_glued
from szdisc.oracle import pde_green, poly_lower


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--points", default="1.5,2.0,2.5,6.0")
    ap.add_argument("--budget", type=int, default=8)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--pde-grid", type=int, default=1000)
    ap.add_argument("--degree", type=int, default=6)
    args = ap.parse_args()
    X = two_discs()
    K, pieces = X.compact_samples(2048)
    print("x,ball,glued,pde,pde_error,poly_lower")
    for x in (float(s) for s in args.points.split(",")):
        ball = envelope_ball(X, x).value
        glued = envelope_glued(X, x, budget=args.budget, seed=args.seed).value
        g = pde_green(X, x, n=args.pde_grid)
        low = poly_lower(K, x, args.degree, budget=4, seed=args.seed, pieces=pieces).value
        print(f"{x:g},{ball:.6f},{glued:.6f},{g.value:.6f},{g.error_estimate:.6f},{low:.6f}")


if __name__ == "__main__":
    main()
