"""Exact character sums from integer histograms.

Every sum is first an integer histogram of a linear form mod p; the complex
value is taken at the end.

    python3 demos/02_character_sums.py
"""

import math

from matrix_equidist import FpMatrix, hyper_kloosterman, k_gl, k_sl, kloosterman, s_freq

p = 7
print("classical Kloosterman sums mod", p)
for b in range(1, p):
    k = kloosterman(1, b, p)
    print(f"  K(1,{b}) = {k.real:+.6f}   |K|/2sqrt(p) = {abs(k) / (2 * math.sqrt(p)):.4f}")

u = FpMatrix(((1, 2), (0, 3)), p)
v = FpMatrix(((0, 1), (1, 1)), p)
fv = k_gl(u, v)
print("K(GL_2, U, V) histogram:", fv.counts.tolist(), "value", fv.to_complex())
print("K(SL_2, U, V) value:", k_sl(u, v).to_complex())

# singular and invertible matrices split every residue class evenly
z, gl = s_freq("z", u), s_freq("gl", u)
print("S(Z)+S(GL) counts:", (z.counts + gl.counts).tolist(), "= p^3 =", p**3)

print("Kl_3(1,1,1; 11) =", hyper_kloosterman([1, 1, 1], 11))
