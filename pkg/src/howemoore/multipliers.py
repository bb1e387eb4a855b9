"""Multipliers on dominant weights: measure-backed construction, decay decomposition, Gram positivity."""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .characters import alt_sum, characters, dims
from .fusion import conjugate, fusion_row_terms
from .lie import (
    DEFAULT_TOL,
    TorusPoint,
    _center_angles,
    angle_point,
    as_coords,
    center_points,
    dominant_weights_in_ball,
    is_central,
    q_power_point,
    weyl_group,
)

TAIL_FRACTION = 0.2
MIN_SHELLS_PER_CLASS = 3
GRAM_TOL = 1e-8
HERMITIAN_TOL = 1e-9


# ---------------------------------------------------------------------------
# Measures


def _orbit_key(rs, t):
    """Canonical label of the W-orbit of an angle point (and of its center coset in adjoint form)."""
    W = weyl_group(rs)
    if t.angles is not None:
        zs = _center_angles(rs) if rs.adjoint else [tuple(Fraction(0) for _ in range(rs.rank))]
        den = math.lcm(*[a.denominator for a in t.angles], *[a.denominator for z in zs for a in z])
        num = np.array([int(a * den) for a in t.angles], dtype=np.int64)
        shifts = [np.array([int(a * den) for a in z], dtype=np.int64) for z in zs]
        best = None
        for s in shifts:
            # theta' = M_w^T theta for every w, reduced mod 1
            imgs = np.einsum("wij,i->wj", W.mats, num + s) % den
            cand = min(map(tuple, imgs.tolist()))
            best = cand if best is None else min(best, cand)
        return ("exact", tuple(Fraction(int(n), den) for n in best))
    theta = np.mod(t.h.imag / (2 * np.pi), 1.0)
    shifts = [np.zeros(rs.rank)]
    if rs.adjoint:
        shifts = [np.array([float(a) for a in z]) for z in _center_angles(rs)]
    best = None
    for s in shifts:
        imgs = np.round(np.mod(np.einsum("wij,i->wj", W.mats, theta + s), 1.0), 9) % 1.0
        cand = min(map(tuple, imgs.tolist()))
        best = cand if best is None else min(best, cand)
    return ("float", best)


def _point_from_key(rs, key):
    kind, theta = key
    if kind == "exact":
        return angle_point(rs, list(theta))
    return angle_point(rs, [float(x) for x in theta])


@dataclass(frozen=True, eq=False)
class AtomicMeasure:
    """Finite atomic complex measure on T/W; W-equivalent atoms are merged."""

    rs: object
    points: tuple
    weights: tuple

    @classmethod
    def from_atoms(cls, rs, atoms):
        merged = {}
        for t, c in atoms:
            if not isinstance(t, TorusPoint):
                t = angle_point(rs, t)
            if t.kind != "angle":
                raise ValueError("measure atoms must be angle-type torus points")
            key = _orbit_key(rs, t)
            merged[key] = merged.get(key, 0) + complex(c)
        keys = sorted(merged, key=lambda k: (k[0], k[1]))
        return cls(rs, tuple(_point_from_key(rs, k) for k in keys), tuple(merged[k] for k in keys))

    @property
    def total_variation(self):
        return float(sum(abs(c) for c in self.weights))

    @property
    def total_mass(self):
        return complex(sum(self.weights))

    @property
    def positive(self):
        return all(c.imag == 0 and c.real >= 0 for c in self.weights)

    def __len__(self):
        return len(self.points)

    def central_coefficients(self, tol=DEFAULT_TOL):
        """Mass sitting on each point of center_points(rs), in that order."""
        centers = center_points(self.rs)
        keys = [_orbit_key(self.rs, z) for z in centers]
        out = np.zeros(len(centers), dtype=complex)
        for t, c in zip(self.points, self.weights):
            k = _orbit_key(self.rs, t)
            if k in keys:
                out[keys.index(k)] += c
        return out

    def generic_atoms(self, tol=DEFAULT_TOL):
        return [(t, c) for t, c in zip(self.points, self.weights) if not is_central(self.rs, t, tol)]

    def to_json(self):
        atoms = []
        for t, c in zip(self.points, self.weights):
            if t.angles is not None:
                coords = [str(a) for a in t.angles]
            else:
                coords = [float(x) for x in np.mod(t.h.imag / (2 * np.pi), 1.0)]
            atoms.append({"point": {"kind": "angle", "coords_2pi": coords}, "weight": {"re": c.real, "im": c.imag}})
        return {"group": self.rs.descriptor(), "atoms": atoms}


def measure_from_json(rs, data):
    atoms = []
    for a in data["atoms"]:
        coords = a["point"]["coords_2pi"]
        coords = [Fraction(c) if isinstance(c, str) else c for c in coords]
        w = a["weight"]
        atoms.append((angle_point(rs, coords), complex(w.get("re", 0.0), w.get("im", 0.0))))
    return AtomicMeasure.from_atoms(rs, atoms)


# ---------------------------------------------------------------------------
# Multipliers


@dataclass(frozen=True, eq=False)
class Multiplier:
    """A function on dominant weights, backed by a measure or by an explicit rule."""

    rs: object
    measure: AtomicMeasure | None = None
    rule: object = None            # callable (n, rank) int array -> complex array
    dimension_function: str = "classical"

    @property
    def domain_form(self):
        return self.rs.form

    @classmethod
    def from_function(cls, rs, fn):
        """Table-backed multiplier from a scalar function of the coordinate tuple."""
        return cls(rs, rule=lambda lams: np.array([complex(fn(tuple(int(x) for x in l))) for l in lams]))

    @classmethod
    def from_table(cls, rs, table):
        table = {tuple(int(x) for x in k): complex(v) for k, v in table.items()}

        def rule(lams):
            try:
                return np.array([table[tuple(int(x) for x in l)] for l in lams], dtype=complex)
            except KeyError as exc:
                raise ValueError(f"multiplier table has no value at {exc.args[0]}") from None

        return cls(rs, rule=rule)

    def values(self, lams):
        lams = as_coords(lams, self.rs.rank)
        if lams.ndim == 1:
            lams = lams[None, :]
        if self.rs.adjoint and not all(self.rs.in_root_lattice(l) for l in lams):
            raise ValueError("adjoint-form multipliers are defined on the root lattice only")
        if self.measure is not None:
            d = dims(self.rs, lams).astype(float)
            total = np.zeros(len(lams), dtype=complex)
            for t, c in zip(self.measure.points, self.measure.weights):
                total += c * characters(self.rs, lams, t)
            return total / d
        return np.asarray(self.rule(lams), dtype=complex)

    def __call__(self, lam):
        return complex(self.values(np.asarray(as_coords(lam, self.rs.rank))[None, :])[0])

    def __add__(self, other):
        return _combine(self, other, 1.0, 1.0)

    def scaled(self, a):
        return Multiplier(self.rs, rule=lambda lams: a * self.values(lams))


def _combine(u, v, a, b):
    return Multiplier(u.rs, rule=lambda lams: a * u.values(lams) + b * v.values(lams))


def linear_combination(u, v, a, b):
    """The multiplier a*u + b*v."""
    return _combine(u, v, a, b)


def multiplier_from_measure(rs, m):
    """omega(lam) = sum_i c_i chi_lam(t_i) / dim V(lam); singular atoms use the exact limit formula."""
    if not isinstance(m, AtomicMeasure):
        m = AtomicMeasure.from_atoms(rs, m)
    for t in m.points:
        if t.kind != "angle":
            raise ValueError("characters grow without bound at non-angle points")
    return Multiplier(rs, measure=m)


def central_character(rs, t, lam, tol=DEFAULT_TOL):
    """t**lam for a central point t."""
    if not is_central(rs, t, tol):
        raise ValueError("central_character needs a point of the center")
    return t.power(as_coords(lam, rs.rank))


# ---------------------------------------------------------------------------
# Decay decomposition


@dataclass(frozen=True)
class HMDecomposition:
    center_points: tuple
    center_coefficients: np.ndarray
    residual_samples: tuple        # (shell_lo, shell_hi, max_abs) per nonempty shell
    horizon: float
    class_means: dict = field(default_factory=dict)

    def coefficient(self, k):
        return complex(self.center_coefficients[k])

    @property
    def final_residual(self):
        return self.residual_samples[-1][2]

    def to_json(self):
        return {
            "center": [
                {"point_index": k, "c": {"re": float(c.real), "im": float(c.imag)}}
                for k, c in enumerate(self.center_coefficients)
            ],
            "residual": [[lo, hi, r] for lo, hi, r in self.residual_samples],
            "horizon": self.horizon,
        }


def _nonempty_shells(rs, horizon):
    lams = dominant_weights_in_ball(rs, horizon)
    groups = {}
    for lam in lams:
        k = int(math.floor(math.sqrt(float(rs.norm2_exact(np.array(lam) + 1)))))
        # exact floor of the norm, guarding the float square root
        while Fraction(k + 1) ** 2 <= rs.norm2_exact(np.array(lam) + 1):
            k += 1
        while Fraction(k) ** 2 > rs.norm2_exact(np.array(lam) + 1):
            k -= 1
        groups.setdefault(k, []).append(lam)
    return [(float(k), float(k + 1), groups[k]) for k in sorted(groups)]


def hm_decompose(rs, omega, horizon, workers=1):
    """Blind extraction of the center coefficients of a multiplier from its tail behaviour."""
    shells = _nonempty_shells(rs, horizon)
    if not shells:
        raise ValueError(f"no dominant weights with norm below horizon {horizon}")

    def evaluate(shell):
        return omega.values(np.array(shell[2], dtype=np.int64))

    if workers and workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            values = list(pool.map(evaluate, shells))
    else:
        values = [evaluate(s) for s in shells]

    n_tail = max(1, math.ceil(TAIL_FRACTION * len(shells)))
    tail = range(len(shells) - n_tail, len(shells))
    classes = {}
    for s in tail:
        for lam, v in zip(shells[s][2], values[s]):
            x = rs.lattice_class(lam)
            entry = classes.setdefault(x, {"sum": 0j, "count": 0, "shells": set(), "rep": lam})
            entry["sum"] += v
            entry["count"] += 1
            entry["shells"].add(s)

    centers = center_points(rs)
    expected_classes = 1 if rs.adjoint else rs.index
    if len(classes) < expected_classes:
        raise ValueError(
            f"horizon {horizon} leaves only {len(classes)} of {expected_classes} weight classes in the tail window"
        )
    for x, entry in classes.items():
        if len(entry["shells"]) < MIN_SHELLS_PER_CLASS:
            raise ValueError(
                f"horizon {horizon} too small: class {tuple(str(c) for c in x)} meets only "
                f"{len(entry['shells'])} tail shells (need {MIN_SHELLS_PER_CLASS})"
            )

    means = {x: e["sum"] / e["count"] for x, e in classes.items()}
    coeffs = np.zeros(len(centers), dtype=complex)
    for k, z in enumerate(centers):
        acc = 0j
        for x, e in classes.items():
            acc += means[x] * np.conj(z.power(np.array(e["rep"], dtype=np.int64)))
        coeffs[k] = acc / len(classes)

    residual = []
    for s, (lo, hi, lams) in enumerate(shells):
        lams = np.array(lams, dtype=np.int64)
        approx = np.zeros(len(lams), dtype=complex)
        for z, c in zip(centers, coeffs):
            approx += c * z.powers(lams)
        residual.append((lo, hi, float(np.max(np.abs(values[s] - approx)))))
    return HMDecomposition(tuple(centers), coeffs, tuple(residual), float(horizon), means)


def single_atom_bound(rs, t, lams):
    """Largest value of |W| / (|A_rho(t)| dim V(lam)) over the given weights."""
    denom = abs(alt_sum(rs, rs.rho_w, t))
    d = dims(rs, np.array(lams, dtype=np.int64)).astype(float)
    return float(len(weyl_group(rs)) / (denom * d.min()))


# ---------------------------------------------------------------------------
# Gram positivity


@dataclass(frozen=True)
class GramReport:
    basis: tuple
    gram: np.ndarray
    min_eigenvalue: float
    norm: float
    hermitian: bool
    passed: bool
    message: str

    def to_json(self):
        return {
            "basis": [list(b) for b in self.basis],
            "min_eigenvalue": self.min_eigenvalue,
            "norm": self.norm,
            "hermitian": self.hermitian,
            "pass": self.passed,
            "message": self.message,
        }


def _dimension_values(rs, nus, dimension, q):
    if dimension == "classical":
        return dims(rs, nus).astype(float)
    if dimension == "quantum":
        if q is None or not 0 < q < 1:
            raise ValueError("quantum dimensions need q in (0, 1)")
        t = q_power_point(rs, q, 2 * rs.rho_w)
        return characters(rs, nus, t).real
    raise ValueError(f"dimension must be 'classical' or 'quantum', got {dimension!r}")


def cp_gram_check(rs, omega, basis_cut, dimension="classical", q=None):
    """Gram matrix sum_nu mult(conj(lam) x mu, nu) d(nu) omega(nu) over a finite basis cut.

    Passing (Hermitian and min eigenvalue >= -1e-8 ||G||) is necessary for complete positivity.
    """
    basis = [tuple(int(x) for x in as_coords(b, rs.rank)) for b in basis_cut]
    if len(set(basis)) != len(basis):
        raise ValueError("basis_cut must consist of distinct weights")
    if any(min(b) < 0 for b in basis):
        raise ValueError("basis_cut must consist of dominant weights")
    n = len(basis)
    G = np.zeros((n, n), dtype=complex)
    for i, lam in enumerate(basis):
        pair, keys, signed = fusion_row_terms(rs, conjugate(rs, lam), basis)
        if not len(keys):
            continue
        shape = tuple(int(v) + 1 for v in keys.max(axis=0))
        codes, inv = np.unique(np.ravel_multi_index(keys.T, shape), return_inverse=True)
        needed = np.stack(np.unravel_index(codes, shape), axis=1)
        terms = signed * (_dimension_values(rs, needed, dimension, q) * omega.values(needed))[inv.ravel()]
        G[i] = np.bincount(pair, weights=terms.real, minlength=n) + 1j * np.bincount(pair, weights=terms.imag, minlength=n)
    norm = float(np.linalg.norm(G, 2)) if n else 0.0
    skew = float(np.linalg.norm(G - G.conj().T, 2)) if n else 0.0
    hermitian = skew <= HERMITIAN_TOL * max(norm, 1.0)
    herm = (G + G.conj().T) / 2
    min_eig = float(np.linalg.eigvalsh(herm).min()) if n else 0.0
    passed = hermitian and min_eig >= -GRAM_TOL * norm
    if not hermitian:
        message = "Gram matrix is not Hermitian: omega(conjugate(lam)) != conj(omega(lam)), not a self-adjoint multiplier"
    elif passed:
        message = "positive semidefinite on the basis cut"
    else:
        message = f"negative eigenvalue {min_eig:.6g} on the basis cut"
    return GramReport(tuple(basis), G, min_eig, norm, hermitian, passed, message)
