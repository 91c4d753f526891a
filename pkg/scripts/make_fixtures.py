"""Write the fixture sets and discs used in the README examples as sz/1 JSON."""
import argparse
import os

from szdisc.acceptance import counterexample_disc, two_discs, unit_disc
from szdisc.discs import Ball, SetGeometry, Shell
from szdisc.serialize import disc_to_json, dump, geometry_to_json


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default="fixtures")
    args = ap.parse_args()
    os.makedirs(args.out, exist_ok=True)
    sets = {
        "unit_disc": unit_disc(),
        "two_discs": two_discs(),
        "unit_circle": SetGeometry((Shell([0.0], 1.0, 0.0),)),
        "tiny_balls": SetGeometry((Ball([0.0], 1e-3), Ball([4.0], 1e-3))),
        "unit_ball_c2": SetGeometry((Ball([0.0, 0.0], 1.0),)),
    }
    for name, X in sets.items():
        dump(geometry_to_json(X), os.path.join(args.out, f"{name}.json"))
    dump(disc_to_json(counterexample_disc()), os.path.join(args.out, "counterexample_disc.json"))
    print(f"wrote {len(sets) + 1} files to {args.out}")


if __name__ == "__main__":
    main()
