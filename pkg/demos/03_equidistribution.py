"""How evenly do the points (A, A^-1)/p fill the unit cube?

Counts image points in [0,1/2)^2 x [0,1)^(k-2) for growing p and prints the
exact error |count/N - area|.

    python3 demos/03_equidistribution.py
"""

from fractions import Fraction

from matrix_equidist import Embedding, count_image, g_p, order
from matrix_equidist.fp import FpMatrix
from matrix_equidist.region import slab

print("g_5 of (1,2;3,4):", g_p(FpMatrix(((1, 2), (3, 4)), 5)).coords)

for name in ("g", "h", "s"):
    emb = Embedding.parse(name)
    k = emb.dim(2)
    region = slab(k, (0, 0), (Fraction(1, 2), Fraction(1, 2)))
    for p in (5, 7, 11, 13):
        kind = emb.default_kind()
        c = count_image(kind, 2, p, emb, region)
        err = abs(Fraction(c, order(kind, 2, p)) - region.area())
        print(f"{name} p={p:2d} count={c:6d} error={err}")
