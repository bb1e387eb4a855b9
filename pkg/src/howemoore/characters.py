"""Weyl characters, dimensions, singular-point limits and weight multiplicities."""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import PrecisionError, RangeError, ResourceError
from .lie import (
    DEFAULT_TOL,
    as_coords,
    dominant_weights_in_ball,
    is_central,
    stabilizer_data,
    weyl_group,
)

EXP_GUARD = 700.0
MULTIPLICITY_DIM_GUARD = 10**6
NEAR_SINGULAR_COND = 1e4          # cancellation in A_rho(t) beyond which the quotient loses too many digits
WEIGHT_SUM_DIM_LIMIT = 5000       # largest dimension evaluated by the weight sum in that regime


def _check_dominant(lam):
    if np.any(lam < 0):
        raise ValueError(f"weight {tuple(int(x) for x in lam)} is not dominant")


def dim_v(rs, lam):
    """Weyl dimension formula in exact integer arithmetic."""
    lam = as_coords(lam, rs.rank)
    _check_dominant(lam)
    num = 1
    den = 1
    for p in rs.root_pair:
        num *= int(p @ (lam + 1))
        den *= int(p.sum())
    q, rem = divmod(num, den)
    if rem:
        raise ArithmeticError(f"Weyl dimension of {tuple(lam)} is not integral ({num}/{den})")
    return q


def dims(rs, lams):
    lams = as_coords(lams, rs.rank)
    pairs = (lams + 1) @ rs.root_pair.T
    return np.array([math.prod(int(x) for x in row) for row in pairs], dtype=object) // math.prod(
        int(x) for x in rs.rho_pairings
    )


def _exp_checked(z):
    re = np.real(z)
    if re.size and np.max(np.abs(re)) > EXP_GUARD:
        raise RangeError(float(np.max(np.abs(re))))
    return np.exp(z)


def alt_sum(rs, nu, t):
    """sum_w sign(w) t**(w nu) for an arbitrary complex parameter ``nu``."""
    return alt_sums(rs, np.asarray(nu)[None, :], t)[0]


def alt_sums(rs, nus, t):
    """Batched alternating sums; ``nus`` has shape (n, rank)."""
    W = weyl_group(rs)
    nus = np.asarray(nus)
    if t.angles is not None and nus.dtype.kind in "iu":
        # exact phases for integral weights at rational angles
        images = np.einsum("wij,nj->nwi", W.mats, nus)
        return (t.powers(images) * W.signs[None, :]).sum(axis=1)
    expo = np.einsum("wij,nj,i->nw", W.mats, nus.astype(complex), t.h)
    return (_exp_checked(expo) * W.signs[None, :]).sum(axis=1)


def singular_threshold(rs):
    return 1e-8 * len(weyl_group(rs))


def character(rs, lam, t, tol=DEFAULT_TOL):
    """Character of V(lam) at t, switching to the exact limit formula near singular t."""
    lam = as_coords(lam, rs.rank)
    _check_dominant(lam)
    return characters(rs, lam[None, :], t, tol)[0]


def characters(rs, lams, t, tol=DEFAULT_TOL):
    lams = as_coords(lams, rs.rank)
    if lams.ndim == 1:
        lams = lams[None, :]
    rho = rs.rho_w
    denom = alt_sum(rs, rho, t)
    singular = abs(denom) < singular_threshold(rs)
    if singular and t.angles is not None:
        stab = stabilizer_data(rs, t, tol)
        return _singular_values(rs, lams + rho, t, stab, tol)
    if not singular:
        values = alt_sums(rs, lams + rho, t) / denom
        if _rho_cancellation(rs, t, denom) <= NEAR_SINGULAR_COND:
            return values
    else:
        values = np.zeros(len(lams), dtype=complex)
    # close to a wall: the weight sum has no cancellation between Weyl images
    small = dims(rs, lams) <= WEIGHT_SUM_DIM_LIMIT
    for k in np.nonzero(small)[0]:
        values[k] = weight_multiplicities(rs, lams[k]).character(t)
    if singular and not small.all():
        # an inexact point treated as singular: exact limit formula for the large weights
        big = np.nonzero(~small)[0]
        stab = stabilizer_data(rs, t, tol)
        values[big] = _singular_values(rs, lams[big] + rho, t, stab, tol)
    return values


def _rho_cancellation(rs, t, denom):
    W = weyl_group(rs)
    images = W.mats @ rs.rho_w
    if t.angles is not None:
        mag = float(len(W))
    else:
        mag = float(np.abs(_exp_checked(images @ t.h)).sum())
    return mag / abs(denom)


def character_singular(rs, lam, t0, stab=None, tol=DEFAULT_TOL):
    """Exact value of the character at a (possibly singular) point from its stabilizer data.

    Sum over W0\\W of sign(w') t0^(w'(lam+rho)) prod_{Delta0+} (w'(lam+rho), a) divided by
    t0^rho prod_{Delta+ \\ Delta0+} (1 - t0^-a) prod_{Delta0+} (rho0, a).
    """
    lam = as_coords(lam, rs.rank)
    _check_dominant(lam)
    if stab is None:
        stab = stabilizer_data(rs, t0, tol)
    return _singular_values(rs, (lam + rs.rho_w)[None, :], t0, stab, tol)[0]


def _singular_values(rs, shifted, t0, stab, tol):
    W = weyl_group(rs)
    d0 = list(stab.delta0_plus)
    outside = [k for k in range(rs.n_positive) if k not in set(d0)]
    neg_vals = t0.powers(-rs.roots_w[outside]) if outside else np.array([], dtype=complex)
    if outside and np.min(np.abs(1 - neg_vals)) < tol:
        raise PrecisionError("stabilizer data inconsistent with t0: a root outside Delta0 is trivial at t0")
    pref = t0.power(rs.rho_w) * np.prod(1 - neg_vals)
    pref *= np.prod(rs.root_pair[d0] @ stab.rho0) if d0 else 1.0
    reps = np.array(stab.coset_reps)
    images = np.einsum("wij,nj->nwi", W.mats[reps], shifted)
    if t0.angles is not None and images.dtype.kind in "iu":
        phases = t0.powers(images)
    else:
        phases = _exp_checked(images @ t0.h)
    if d0:
        poly = np.prod(images @ rs.root_pair[d0].T, axis=-1)
    else:
        poly = 1.0
    total = (W.signs[reps][None, :] * phases * poly).sum(axis=1)
    return total / pref


def normalized_character(rs, lam, t, tol=DEFAULT_TOL):
    return character(rs, lam, t, tol) / dim_v(rs, lam)


def normalized_characters(rs, lams, t, tol=DEFAULT_TOL):
    lams = as_coords(lams, rs.rank)
    return characters(rs, lams, t, tol) / dims(rs, lams).astype(float)


def normalized_decay_bound(rs, t, lams):
    """Upper bound |W| / (|A_rho(t)| dim V(lam)) on |chi_lam(t)| / dim V(lam) at regular angle t."""
    denom = abs(alt_sum(rs, rs.rho_w, t))
    return len(weyl_group(rs)) / (denom * dims(rs, lams).astype(float))


# ---------------------------------------------------------------------------
# Freudenthal multiplicities


@dataclass(frozen=True, eq=False)
class WeightMultiplicityTable:
    """Weight multiplicities of V(lam); ``entries`` maps coordinate tuples to multiplicities."""

    highest_weight: tuple
    entries: dict
    dominant: dict

    @property
    def dimension(self):
        return sum(self.entries.values())

    def arrays(self):
        keys = list(self.entries)
        return np.array(keys, dtype=np.int64).reshape(len(keys), -1), np.array(
            [self.entries[k] for k in keys], dtype=np.int64
        )

    def character(self, t):
        weights, mults = self.arrays()
        return complex((mults * t.powers(weights)).sum())


def _dominant_conjugate(B, mu):
    mu = list(mu)
    r = len(mu)
    while True:
        for i in range(r):
            c = mu[i]
            if c < 0:
                row = B[i]
                for j in range(r):
                    mu[j] -= c * row[j]
                break
        else:
            return tuple(mu)


def _orbit(B, mu):
    seen = {mu}
    frontier = [mu]
    r = len(mu)
    while frontier:
        nxt = []
        for v in frontier:
            for i in range(r):
                c = v[i]
                if c == 0:
                    continue
                w = tuple(v[j] - c * B[i][j] for j in range(r))
                if w not in seen:
                    seen.add(w)
                    nxt.append(w)
        frontier = nxt
    return seen


def weight_multiplicities(rs, lam):
    """Freudenthal recursion in exact integer arithmetic."""
    lam = tuple(int(x) for x in as_coords(lam, rs.rank))
    _check_dominant(np.array(lam))
    dimension = dim_v(rs, lam)
    if dimension > MULTIPLICITY_DIM_GUARD:
        raise ResourceError(f"dim V{lam} = {dimension} exceeds the guard {MULTIPLICITY_DIM_GUARD}")
    return _weight_multiplicities(rs, lam)


@lru_cache(maxsize=4096)
def _weight_multiplicities(rs, lam):
    r = rs.rank
    B = [[int(x) for x in row] for row in rs.B]
    G = rs.gram_int
    pos = [tuple(int(x) for x in v) for v in rs.roots_w]
    pairs = [tuple(int(x) for x in p) for p in rs.root_pair]
    hv = rs.height_vector
    hden = math.lcm(*[x.denominator for x in hv])
    hint = [int(x * hden) for x in hv]

    def height(mu):
        return sum(a * b for a, b in zip(mu, hint))

    # dominant weights below lam, by repeated subtraction of positive roots
    dom = {lam}
    frontier = [lam]
    while frontier:
        nxt = []
        for v in frontier:
            for a in pos:
                w = tuple(x - y for x, y in zip(v, a))
                if min(w) >= 0 and w not in dom:
                    dom.add(w)
                    nxt.append(w)
        frontier = nxt
    order = sorted(dom, key=lambda mu: (-height(mu), mu))

    Gl = [[int(x) for x in row] for row in G]

    def norm_shift(mu):
        v = [x + 1 for x in mu]
        return sum(v[i] * Gl[i][j] * v[j] for i in range(r) for j in range(r))

    top = norm_shift(lam)
    mult = {lam: 1}
    conj_cache = {}
    string_cache = {}

    def m_of(nu):
        d = conj_cache.get(nu)
        if d is None:
            d = _dominant_conjugate(B, nu)
            conj_cache[nu] = d
        return mult.get(d, 0)

    for mu in order[1:]:
        total = 0
        for k, (a, p) in enumerate(zip(pos, pairs)):
            # string_cache[(k, x)] = sum_{j>=0} m(x + j a)(x + j a, a); alpha-strings are unbroken
            chain = []
            nu = mu
            acc = 0
            while True:
                nu = tuple(x + y for x, y in zip(nu, a))
                cached = string_cache.get((k, nu))
                if cached is not None:
                    acc = cached
                    break
                m = m_of(nu)
                if m == 0:
                    break
                chain.append((nu, m))
            for nu_k, m in reversed(chain):
                acc += m * sum(x * y for x, y in zip(nu_k, p))
                string_cache[(k, nu_k)] = acc
            total += acc
        diff = top - norm_shift(mu)
        num = 2 * total * rs.gram_scale
        value, rem = divmod(num, diff)
        if rem:
            raise ArithmeticError(f"non-integral Freudenthal multiplicity at {mu}")
        mult[mu] = value

    entries = {}
    for mu, m in mult.items():
        if m:
            for nu in _orbit(B, mu):
                entries[nu] = m
    table = WeightMultiplicityTable(lam, entries, {k: v for k, v in mult.items() if v})
    if table.dimension != dim_v(rs, lam):
        raise ArithmeticError(f"Freudenthal total {table.dimension} != Weyl dimension for {lam}")
    return table


def freudenthal_character(rs, lam, t):
    return weight_multiplicities(rs, lam).character(t)


# ---------------------------------------------------------------------------
# Convergence scans


@dataclass(frozen=True)
class ShellRow:
    shell_lo: float
    shell_hi: float
    num_weights: int
    max_normalized_abs: float
    argmax_weight_coords: tuple


CSV_COLUMNS = ("shell_lo", "shell_hi", "num_weights", "max_normalized_abs", "argmax_weight_coords")


def unit_shells(lo, hi):
    return [(float(k), float(k + 1)) for k in range(int(math.floor(lo)), int(math.ceil(hi)))]


def convergence_scan(rs, t, shells, workers=1, tol=DEFAULT_TOL):
    """Per-shell maxima of |chi_lam(t)| / dim V(lam) over dominant lam with ||lam+rho|| in the shell."""
    if is_central(rs, t, tol):
        raise ValueError("normalized character has constant modulus 1 on the center")
    shells = [(float(a), float(b)) for a, b in shells]

    def one(shell):
        lo, hi = shell
        lams = dominant_weights_in_ball(rs, hi, lo=lo)
        if not lams:
            return ShellRow(lo, hi, 0, 0.0, ())
        vals = np.abs(normalized_characters(rs, np.array(lams), t, tol))
        best = float(vals.max())
        # ties resolved by lexicographic coordinates
        idx = min((i for i in range(len(lams)) if vals[i] == best), key=lambda i: lams[i])
        return ShellRow(lo, hi, len(lams), best, tuple(lams[idx]))

    if workers and workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(one, shells))
    return [one(s) for s in shells]


def scan_to_csv_rows(rows):
    out = [",".join(CSV_COLUMNS)]
    for row in rows:
        coords = " ".join(str(c) for c in row.argmax_weight_coords)
        out.append(f"{row.shell_lo:g},{row.shell_hi:g},{row.num_weights},{row.max_normalized_abs:.17g},{coords}")
    return out


def first_shell_below(rows, threshold):
    for k, row in enumerate(rows):
        if row.num_weights and row.max_normalized_abs < threshold:
            return k
    return None
