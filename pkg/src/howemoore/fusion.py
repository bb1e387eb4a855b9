"""Fusion rules of the classical compact group on dominant weights."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass

import numpy as np

from .characters import dim_v, weight_multiplicities
from .errors import ResourceError
from .lie import as_coords, longest_element, weyl_group

FUSION_DIM_GUARD = 10**8
FUSION_CHUNK = 20000


@dataclass(frozen=True)
class FusionDecomposition:
    lhs: tuple
    rhs: tuple
    terms: dict   # dominant weight tuple -> positive multiplicity

    def mult(self, nu):
        return self.terms.get(tuple(int(x) for x in nu), 0)

    def total_dimension(self, rs):
        return sum(m * dim_v(rs, nu) for nu, m in self.terms.items())

    def to_json(self, rs):
        terms = [
            {"weight": list(nu), "mult": m, "dim": dim_v(rs, nu)}
            for nu, m in sorted(self.terms.items())
        ]
        return {
            "terms": terms,
            "dim_check": self.total_dimension(rs) == dim_v(rs, self.lhs) * dim_v(rs, self.rhs),
        }


def _reflect_batch(W, x):
    """Strictly dominant images of the rows of x and their signs; rows on a wall get sign 0."""
    images = np.einsum("wij,nj->nwi", W.mats, x)
    inside = np.all(images > 0, axis=2)          # at most one Weyl image is strictly dominant
    hit = inside.any(axis=1)
    widx = inside.argmax(axis=1)
    dom = images[np.arange(len(x)), widx]
    return dom, np.where(hit, W.signs[widx], 0)


def fusion_arrays(rs, lam, mu):
    """Irreducible constituents of V(lam) (x) V(mu) as (weights, multiplicities) integer arrays."""
    lam = tuple(int(x) for x in as_coords(lam, rs.rank))
    mu = tuple(int(x) for x in as_coords(mu, rs.rank))
    if min(lam + mu) < 0:
        raise ValueError("fusion arguments must be dominant")
    dl, dm = dim_v(rs, lam), dim_v(rs, mu)
    if dl * dm > FUSION_DIM_GUARD:
        raise ResourceError(f"dim product {dl * dm} exceeds the guard {FUSION_DIM_GUARD}")
    big, small = (lam, mu) if dl >= dm else (mu, lam)
    weights, mults = weight_multiplicities(rs, small).arrays()
    W = weyl_group(rs)
    shifted = np.array(big, dtype=np.int64) + 1
    doms, signed = [], []
    for start in range(0, len(weights), FUSION_CHUNK):
        dom, sign = _reflect_batch(W, weights[start:start + FUSION_CHUNK] + shifted)
        keep = sign != 0
        doms.append(dom[keep] - 1)
        signed.append(sign[keep] * mults[start:start + FUSION_CHUNK][keep])
    dom = np.concatenate(doms)
    keys, inv = np.unique(dom, axis=0, return_inverse=True)
    totals = np.zeros(len(keys), dtype=np.int64)
    np.add.at(totals, inv.ravel(), np.concatenate(signed).astype(np.int64))
    if totals.size and totals.min() < 0:
        bad = int(np.argmin(totals))
        raise ArithmeticError(f"negative fusion multiplicity {totals[bad]} at {tuple(keys[bad])}")
    nonzero = totals > 0
    return keys[nonzero].reshape(-1, rs.rank), totals[nonzero]


def fusion_row_terms(rs, lam, mus):
    """Unconsolidated signed terms of V(lam) (x) V(mu) for every mu in mus at once.

    Returns (pair, weights, signed) where row k contributes signed[k] copies of
    V(weights[k]) to the product with mus[pair[k]]; summing per pair and weight gives
    the multiplicities returned by fuse.
    """
    lam = tuple(int(x) for x in as_coords(lam, rs.rank))
    mus = np.asarray(as_coords(mus, rs.rank), dtype=np.int64).reshape(-1, rs.rank)
    if min(lam) < 0 or (mus.size and mus.min() < 0):
        raise ValueError("fusion arguments must be dominant")
    weights, mults = weight_multiplicities(rs, lam).arrays()
    W = weyl_group(rs)
    step = max(1, FUSION_CHUNK * 10 // max(len(weights), 1))
    pairs, doms, signed = [], [], []
    for start in range(0, len(mus), step):
        block = mus[start:start + step] + 1
        x = (block[:, None, :] + weights[None, :, :]).reshape(-1, rs.rank)
        dom, sign = _reflect_batch(W, x)
        keep = sign != 0
        pairs.append(np.repeat(np.arange(start, start + len(block)), len(weights))[keep])
        doms.append(dom[keep] - 1)
        signed.append((sign * np.tile(mults, len(block)))[keep])
    if not pairs:
        return np.zeros(0, dtype=np.int64), np.zeros((0, rs.rank), dtype=np.int64), np.zeros(0, dtype=np.int64)
    return np.concatenate(pairs), np.concatenate(doms), np.concatenate(signed)


def fuse(rs, lam, mu):
    """Decompose V(lam) (x) V(mu) by reflecting lam + rho + wt(V(mu)) into the dominant chamber."""
    keys, totals = fusion_arrays(rs, lam, mu)
    lam = tuple(int(x) for x in as_coords(lam, rs.rank))
    mu = tuple(int(x) for x in as_coords(mu, rs.rank))
    terms = {tuple(int(v) for v in key): int(m) for key, m in zip(keys, totals)}
    return FusionDecomposition(lam, mu, terms)


def fuse_linear(rs, left, right):
    """Product of two formal combinations {weight: coefficient} in the fusion ring."""
    out = Counter()
    for a, ca in left.items():
        for b, cb in right.items():
            for nu, m in fuse(rs, a, b).terms.items():
                out[nu] += ca * cb * m
    return {k: v for k, v in sorted(out.items()) if v}


def conjugate(rs, lam):
    """The dual highest weight -w0 lam."""
    lam = as_coords(lam, rs.rank)
    if np.any(lam < 0):
        raise ValueError("conjugate expects a dominant weight")
    w0 = longest_element(rs)
    return tuple(int(x) for x in -(w0.wmatrix @ lam))
