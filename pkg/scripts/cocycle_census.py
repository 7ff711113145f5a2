#!/usr/bin/env python3
"""Enumerate normalized 2-cocycles over a small elementary abelian base and
tally the order profiles of the resulting central extensions.

With the default Klein base, 16 of the 512 normalized candidates satisfy the
cocycle identity, and their extensions split into the four order profiles of
the order-8 groups with a central fiber (quaternion, dihedral, Z4 x Z2, and
elementary abelian).
"""

import argparse
import itertools
from collections import Counter

from rootsets.catalog import cyclic
from rootsets.constructions import CocycleError, CocycleTable, central_extension
from rootsets.kernel import direct_product, order_profile


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--base", default="klein", choices=["klein", "z4"])
    args = parser.parse_args()

    base = (direct_product(cyclic(2), cyclic(2)) if args.base == "klein"
            else cyclic(4))
    n = base.order
    free = (n - 1) * (n - 1)  # normalization pins the first row and column
    profiles = Counter()
    valid = 0
    first_of = {}
    for bits in itertools.product((0, 1), repeat=free):
        rows = [[0] * n]
        it = iter(bits)
        for _ in range(n - 1):
            rows.append([0] + [next(it) for _ in range(n - 1)])
        try:
            c = CocycleTable.of(base, 2, rows)
        except CocycleError:
            continue
        valid += 1
        G = central_extension(c)
        key = tuple(sorted(order_profile(G).items()))
        profiles[key] += 1
        first_of.setdefault(key, c.w)

    print(f"base={base.label}  candidates={2 ** free}  valid cocycles={valid}")
    for key, count in sorted(profiles.items()):
        profile = dict(key)
        print(f"  profile {profile}: {count} cocycles, first = {first_of[key]}")


if __name__ == "__main__":
    main()
