"""Tensor product decompositions in the fusion ring.

Run: python demos/fusion_ring.py
"""

from howemoore.characters import dim_v
from howemoore.fusion import conjugate, fuse, fuse_linear
from howemoore.lie import build_root_system

rs = build_root_system("A", 1)
print("SU(2): V(3) x V(2) =", " + ".join(f"V({nu[0]})" for nu in fuse(rs, (3,), (2,)).terms))

rs = build_root_system("A", 2)
dec = fuse(rs, (1, 1), (1, 1))
print("SU(3): 8 x 8 =", " + ".join(f"{m if m > 1 else ''}[{dim_v(rs, nu)}]" for nu, m in dec.terms.items()))
print("conjugate of (2, 1):", conjugate(rs, (2, 1)))

rs = build_root_system("G", 2)
dec = fuse(rs, (1, 0), (1, 0))
print("G2: 7 x 7 =", " + ".join(f"[{dim_v(rs, nu)}]" for nu in dec.terms))

# associativity in the ring
rs = build_root_system("B", 2)
a, b, c = {(1, 0): 1}, {(0, 1): 1}, {(1, 1): 1}
left = fuse_linear(rs, fuse_linear(rs, a, b), c)
right = fuse_linear(rs, a, fuse_linear(rs, b, c))
print("B2: (V(1,0) x V(0,1)) x V(1,1) == V(1,0) x (V(0,1) x V(1,1)):", dict(left) == dict(right))

# the adjoint form only sees the root lattice, which is closed under products
adj = build_root_system("A", 2, "adjoint")
terms = fuse(adj, (1, 1), (3, 0)).terms
print("adjoint A2: (1,1) x (3,0) stays in the root lattice:", all(adj.in_root_lattice(nu) for nu in terms))
