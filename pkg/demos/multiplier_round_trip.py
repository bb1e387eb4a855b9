"""From a measure on the torus to a multiplier and back.

A mixed measure on SU(3) (center atoms plus generic atoms) defines a multiplier.
The center coefficients are recovered blindly from its tail, and positivity of
the measure shows up as a positive semidefinite Gram matrix.

Run: python demos/multiplier_round_trip.py
"""

import json
from pathlib import Path

from howemoore.lie import root_system_from_descriptor
from howemoore.multipliers import cp_gram_check, hm_decompose, measure_from_json, multiplier_from_measure

DATA = Path(__file__).parent / "data"


def load(name):
    data = json.loads((DATA / name).read_text())
    rs = root_system_from_descriptor(data["group"])
    return rs, measure_from_json(rs, data)


rs, measure = load("mixed_measure_a2.json")
omega = multiplier_from_measure(rs, measure)
print("omega on the first weights:")
for lam in [(0, 0), (1, 0), (0, 1), (1, 1), (3, 0), (4, 4)]:
    print(f"  omega{lam} = {omega(lam):.6f}")

dec = hm_decompose(rs, omega, 40)
print("\ncenter coefficients: planted (0.4, 0.2, 0.1), recovered",
      tuple(round(float(c.real), 4) for c in dec.center_coefficients))
print("residual over the last shells:", ", ".join(f"{r:.4f}" for _, _, r in dec.residual_samples[-5:]))

basis = [(0, 0), (1, 0), (0, 1), (2, 0), (1, 1), (0, 2), (3, 0), (2, 1)]
report = cp_gram_check(rs, omega, basis)
print(f"\npositive measure: {report.message} (min eigenvalue {report.min_eigenvalue:.3g})")

rs1, signed = load("signed_measure.json")
report = cp_gram_check(rs1, multiplier_from_measure(rs1, signed), [(n,) for n in range(8)])
print(f"signed measure delta_0 - delta_(1/2): {report.message}")
