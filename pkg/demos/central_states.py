"""Central states of SU_q(3) split into components indexed by the center.

Run: python demos/central_states.py
"""

import json
from pathlib import Path

import numpy as np

from howemoore.qcentral import (
    central_state_from_json,
    decompose_central_state,
    phi_one,
    phi_q,
    relation_check,
    sl_context,
    zero_grid,
)

DATA = Path(__file__).parent / "data"

state = central_state_from_json(json.loads((DATA / "central_state_su3.json").read_text()))
print("atom classes:", state.classes)
print("center characters:", [chi.center_index for chi in state.characters])
dec = decompose_central_state(state, horizon=30)
print(f"||phi|| = {dec.norm:.4f}, sum of component norms = {sum(dec.component_norms.values()):.4f}, "
      f"C * ||phi|| = {dec.c_empirical * dec.norm:.4f}")
print(f"norm inequality holds: {dec.norm_inequality}; reconstruction residual {dec.max_residual:.2e}")

# the q-level function and the classical one are tied by a rescaling at q^(2 lam + 2 rho)
ctx = sl_context(3, 0.5)
nu = np.array([0.7 + 0.2j * ctx.kappa, -0.4 + 0.1j * ctx.kappa])
for lam in [(1, 0), (2, 1), (3, 3)]:
    print(f"phi_q(nu, {lam}) = {phi_q(ctx, nu, lam):.10f}   relation residual {relation_check(ctx, nu, lam):.1e}")

# zeros of phi_one(nu, 2 rho) sit on a lattice in the imaginary direction
ctx2 = sl_context(2, 0.5)
print(f"\nSU_q(2): phi_one(i kappa, 2 rho) = {abs(phi_one(ctx2, [1j * ctx2.kappa], [2.0])):.1e}")
rows = zero_grid(ctx2, 200, seed=1)
print(f"zero grid: {sum(r.predicate for r in rows)} of {len(rows)} points on the lattice, "
      f"{sum(not r.agrees for r in rows)} disagreements")
