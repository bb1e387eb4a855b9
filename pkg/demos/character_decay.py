"""Normalized characters chi_lam(t) / dim V(lam) decay away from the center.

Run: python demos/character_decay.py
"""

import numpy as np

from howemoore.characters import character, character_singular, convergence_scan, first_shell_below, unit_shells
from howemoore.lie import angle_point, build_root_system, center_points, stabilizer_data

# SU(2) at a quarter turn: |chi_n(t)| / (n + 1) is 1/(n+1) for even n and 0 for odd n
rs = build_root_system("A", 1)
rows = convergence_scan(rs, angle_point(rs, ["1/4"]), unit_shells(1, 11))
print("A1, theta = 1/4")
print(f"{'shell':>10} {'weights':>8} {'max |chi|/dim':>14}")
for r in rows:
    shell = f"[{r.shell_lo:g}, {r.shell_hi:g})"
    print(f"{shell:>10} {r.num_weights:>8} {r.max_normalized_abs:>14.6f}")

# SU(3) at a generic point: the shell maxima fall below 0.05
rs = build_root_system("A", 2)
t = angle_point(rs, ["2/13", "5/17"])
rows = convergence_scan(rs, t, unit_shells(1, 31), workers=4)
k = first_shell_below(rows, 0.05)
print(f"\nA2, theta = (2/13, 5/17): first shell below 0.05 is [{rows[k].shell_lo:g}, {rows[k].shell_hi:g})")
print("last five shell maxima:", ", ".join(f"{r.max_normalized_abs:.4f}" for r in rows[-5:]))

# on the center the normalized character has modulus one
z = center_points(rs)[1]
print("\ncenter point of A2: |chi/dim| =",
      [round(float(abs(character(rs, lam, z))) / d, 12) for lam, d in [((1, 0), 3), ((1, 1), 8), ((2, 1), 15)]])

# a point fixed by one root: the exact limit replaces the 0/0 quotient
t0 = angle_point(rs, ["1/15", "2/15"])
stab = stabilizer_data(rs, t0)
print(f"\nsingular point (1/15, 2/15): {len(stab.delta0_plus)} root(s) fixed")
for lam in [(1, 0), (1, 1), (3, 2)]:
    print(f"  chi_{lam} = {np.round(character_singular(rs, lam, t0), 10)}")
