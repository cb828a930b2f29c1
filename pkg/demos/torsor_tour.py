"""Act on a random blended extension by Ext(B, A) and compare the two twisted constructions.

Run: python demos/torsor_tour.py [seed]
"""

import random
import sys

from panache.blend import build_MU, build_MU_prime, canonical_iso, is_isomorphic, torsor_act, torsor_difference
from panache.ext import class_of, ext_space
from panache.generators import random_blend, random_class


def main(seed: str = "0") -> None:
    rng = random.Random(int(seed))
    M = random_blend(rng)
    space = ext_space(M.B, M.A)
    print(f"blend with graded dims {M.dims}; Ext(B, A) has dimension {space.dim}")

    U = random_class(rng, space)
    MU = torsor_act(M, U)
    print("acting by U =", [str(c) for c in U.coordinates])
    print("M_U isomorphic to M:", is_isomorphic(MU, M) is not None)
    print("difference recovered:", [str(c) for c in torsor_difference(M, MU).coordinates])

    a, b = build_MU(M, U), build_MU_prime(M, U)
    print("twists agree over M1:", class_of(a.over_m1()) == class_of(b.over_m1()))
    print("twists agree over M2:", class_of(a.over_m2()) == class_of(b.over_m2()))
    print("canonical isomorphism:")
    print(canonical_iso(M, U).matrix)


if __name__ == "__main__":
    main(*sys.argv[1:])
