"""Matrix groups over a prime field: orders, enumeration, inverses.

    python3 demos/01_matrix_groups.py
"""

from matrix_equidist import FpMatrix, GroupKind, enumerate_group, order
from matrix_equidist.groups import count_members

p = 5
m = FpMatrix(((1, 2), (3, 4)), p)
print("A =", m.entries, " det A =", int(m.det()), " A^-1 =", m.inverse().entries)
print("A @ A^-1 =", (m @ m.inverse()).entries)

# closed-form orders next to exhaustive counts
for n, q in [(1, 7), (2, 3), (2, 5), (3, 3)]:
    row = []
    for kind in GroupKind:
        row.append(f"{kind.value}={order(kind, n, q)}/{count_members(kind, n, q)}")
    print(f"n={n} p={q}:", "  ".join(row))

# the first few members of SL_2(F_3) in enumeration order
for i, x in zip(range(4), enumerate_group("sl", 2, 3)):
    print(i, x.entries)
