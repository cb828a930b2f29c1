"""Walk one rotation fixture through obstruction, autodualization, pairing, frame and monodromy.

Run: python demos/rotation_pipeline.py [fixture-name]
"""

import sys

from panache.autodual import autodualize, datum_for, gamma_obstruction, isoaut_find
from panache.fixtures import load_fixture
from panache.monodromy import derived_and_eq4_check, standard_frame, theorem2_verify


def main(name: str = "rot4-sym-nonautodual") -> None:
    inst = load_fixture(name)
    M = inst.blends["M"]
    du = inst.duality
    d = datum_for(M, du["phi"], du["lambda"], du["epsilon"])
    print(f"fixture {name}: graded dims {M.dims}, epsilon {d.epsilon:+d}")

    g = gamma_obstruction(M, d)
    print("obstruction coordinates:", [str(c) for c in g.coordinates])

    res = autodualize(M, d)
    print("correction delta:", [str(c) for c in res.delta.coordinates])
    print("obstruction after correction is zero:", gamma_obstruction(res.blend, d).is_zero())

    p = isoaut_find(res.blend, d)
    print("pairing matrix:")
    print(p.matrix)
    print("pairing checks:", p.checks())

    f = standard_frame(p)
    r = derived_and_eq4_check(f)
    print(f"frame a={f.a} h={f.h}: derived dim {r['derived_dim']}, W-2 dim {r['w2_dim']}, abelianization {r['ab_dim']}")

    t = theorem2_verify(M, d, 8)
    print(f"monodromy: certified at length {t['certified_at_length']}, W-2 part of dimension {t['w2_dim']}"
          f" (autodual part {t['w2_autodual_dim']}, delta part {t['w2_delta_dim']}), {t['conclusion']}")


if __name__ == "__main__":
    main(*sys.argv[1:])
