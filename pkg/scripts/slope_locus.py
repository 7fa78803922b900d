#!/usr/bin/env python3
"""Show two n=3 slice points in different U-orbits that share every generator value.

With s[2][1] = 0 the slope of J_{3,1} on the slice vanishes, so s[3][1] no
longer enters any generator.  The canonical points (computed through the
limit along a random line) still tell the two orbits apart.
"""

import argparse

from uinvariants.orbits import canonicalize, invariant_fingerprint, orbit_equivalent
from uinvariants.slices import SlicePoint


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--s31", type=int, nargs=2, default=[1, 4], help="the two values of s[3][1]")
    args = ap.parse_args()

    base = {(1, 0): 5, (2, 0): 3, (3, 0): 2, (2, 1): 0, (3, 2): 7}
    p, q = (SlicePoint(3, {**base, (3, 1): v}) for v in args.s31)
    for name, pt in (("P", p), ("Q", q)):
        A = pt.to_matrix()
        print(f"{name} = {A}")
        print(f"  fingerprint {invariant_fingerprint(A).to_json_obj()['values']}")
        print(f"  canonical   {canonicalize(A).to_json_obj()['coords']}")
    print("same fingerprint:", invariant_fingerprint(p.to_matrix()) == invariant_fingerprint(q.to_matrix()))
    print("same orbit:", orbit_equivalent(p.to_matrix(), q.to_matrix()))


if __name__ == "__main__":
    main()
