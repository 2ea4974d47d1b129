"""The Erdos-Turan-Koksma bound next to actual box errors.

    python3 demos/04_etk_bound.py
"""

from matrix_equidist import empirical_box_error, etk_report
from matrix_equidist.experiments import preset_boxes

boxes = preset_boxes(8)
for p in (5, 7):
    for H in (1, 2):
        rep = etk_report("gl", 2, p, "g", H)
        worst = max(e.value for e in empirical_box_error("gl", 2, p, "g", boxes))
        print(f"p={p} H={H}: {rep.n_frequencies} frequencies, bound={rep.bound:.3f}, "
              f"largest box error={worst:.5f}")
