"""Points (A, A^-1)/p for A in SL_2 are not equidistributed.

For A in SL_2 the inverse is (d,-b;-c,a), so the frequency
h = (1,0,0,0, 0,0,0,-1) sees a - a = 0 for every A: the exponential sum is
as large as it can be, while the integral of e(h.x) over the cube is 0.

    python3 demos/05_sl2_counterexample.py
"""

from matrix_equidist.experiments import sl2_counterexample

for p in (3, 5, 7, 11, 13):
    rep = sl2_counterexample(p)
    rec = rep["records"][0]
    print(f"p={p:2d} |SL_2|={rec['order']:5d} histogram={rec['counts'][:3]}... "
          f"sum={rec['sum']['re']:.0f} passed={rep['passed']}")
