"""Two 6-dimensional polytopes with 10 facets and equal h-vectors that the
real Buchstaber invariant and the Betti numbers tell apart.

Run: python3 demos/pq_pair.py
"""

from torcomb import (
    PolygonPresentation,
    h_polynomial,
    koszul_betti,
    one_skeleton_chromatic_number,
    polygon_complex,
    polygon_flip,
    s_int,
    s_real,
)
from torcomb.families import find_bistellar_move

P = PolygonPresentation((2, 1, 1, 1, 1, 1, 1, 1, 1))
Q = PolygonPresentation((2, 1, 2, 1, 1, 2, 1))

for name, p in (("P", P), ("Q", Q)):
    K = polygon_complex(p)
    rng = s_int(K)
    betti = koszul_betti(K)
    print(f"{name} = {p.weights}: m={K.m} n={K.n}")
    print(f"  h = {h_polynomial(K).coeffs}, gamma = {one_skeleton_chromatic_number(K)}")
    print(f"  s_R = {s_real(K)[0]}, s in [{rng.lower}, {rng.upper}]")
    print(f"  minimal non-faces: {betti.row_sum(-1)}")
    print(betti.grid())

rec = polygon_flip(P, 3)
move = find_bistellar_move(polygon_complex(P), polygon_complex(rec.after))
print(f"\nflip of P at vertex 3: type {rec.flip_type}, result {rec.after.weights}")
print(f"  bistellar move W={move.W} I={move.I} J={move.J}")
print(f"  h change (ascending coefficients): {rec.h_change()}")
