#!/usr/bin/env python3
"""Print level-by-level eta sizes for the bundled tower fixtures.

Shows the split the stabilization certificate formalizes: members of K hold
a constant eta size once born, everything else keeps growing with the level.
"""

import argparse

from rootsets.constructions import heisenberg
from rootsets.kernel import center
from rootsets.towers import (
    PruferTower,
    QuaternionTower,
    QuotientTower,
    T1Tower,
    example_t2_tower,
    k_estimate,
)


def build_tower(name):
    if name == "prufer":
        return PruferTower(2)
    if name == "quaternion":
        return QuaternionTower()
    if name == "t1-heis":
        H = heisenberg(3)
        a_gen = next(g for g in center(H) if g != 0)
        return T1Tower(H, 3, a_gen, label="heis27")
    if name == "t2-example":
        return example_t2_tower()
    if name == "quotient":
        return QuotientTower(QuaternionTower(), ["1/2"])
    raise ValueError(name)


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--tower", default="quaternion",
                        choices=["prufer", "quaternion", "t1-heis",
                                 "t2-example", "quotient"])
    parser.add_argument("--max-level", type=int, default=6)
    parser.add_argument("--window", type=int, default=2)
    parser.add_argument("--limit", type=int, default=12,
                        help="how many elements of each class to print")
    args = parser.parse_args()

    tower = build_tower(args.tower)
    rep = k_estimate(tower, max_level=args.max_level, window=args.window)
    levels = sorted({pl.level for r in rep.eta_reports.values()
                     for pl in r.per_level})
    header = "element".ljust(14) + "".join(f"L{k}".rjust(8) for k in levels)
    print(f"tower={args.tower}  kind={rep.tower_kind}  "
          f"birth-level={rep.birth_level}  window={rep.window}")
    print(header)
    print("-" * len(header))

    def row(nm, mark):
        r = rep.eta_reports[nm]
        sizes = {pl.level: pl.size for pl in r.per_level}
        cells = "".join(str(sizes.get(k, "-")).rjust(8) for k in levels)
        print(f"{mark} {nm}".ljust(14) + cells)

    for nm in rep.members[: args.limit]:
        row(nm, "*")
    for nm in rep.growing[: args.limit]:
        row(nm, " ")
    print(f"\n* stabilized ({len(rep.members)} total); "
          f"growing: {len(rep.growing)}; undetermined: {len(rep.undetermined)}")
    if rep.theory is not None:
        verdict = "agrees" if rep.agrees else "DISAGREES"
        print(f"theory [{rep.theory_tag}]: {verdict}")


if __name__ == "__main__":
    main()
