"""Root systems, Weyl groups, lattices, centers and torus stabilizers.

Weights are handled in fundamental-weight coordinates throughout: an integer
vector ``lam`` stands for ``sum(lam[i] * fundamental_weights[i])``, so a weight
is dominant iff all its coordinates are non-negative.  The same coordinates are
used for complex parameters in the dual Cartan subalgebra.

Ambient vectors (standard orthonormal-coordinate models, with the bilinear form
scaled so that short roots have squared length 2) are kept as exact fractions.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, lru_cache

import numpy as np
import sympy as sp

from .errors import ConfigurationError, PrecisionError, ResourceError

SUPPORTED_RANKS = {"A": (1, 7), "B": (2, 4), "C": (2, 4), "D": (3, 4), "G": (2, 2)}
FORMS = ("simply_connected", "adjoint")
WEYL_ORDER_GUARD = 10**5
DEFAULT_TOL = 1e-10

_WEYL_ORDER = {
    "A": lambda n: math.factorial(n + 1),
    "B": lambda n: 2**n * math.factorial(n),
    "C": lambda n: 2**n * math.factorial(n),
    "D": lambda n: 2 ** (n - 1) * math.factorial(n),
    "G": lambda n: 12,
}
_POSITIVE_ROOT_COUNT = {
    "A": lambda n: n * (n + 1) // 2,
    "B": lambda n: n * n,
    "C": lambda n: n * n,
    "D": lambda n: n * (n - 1),
    "G": lambda n: 6,
}


def expected_weyl_order(series, rank):
    return _WEYL_ORDER[series](rank)


def expected_positive_root_count(series, rank):
    return _POSITIVE_ROOT_COUNT[series](rank)


def _unit(i, n):
    v = [Fraction(0)] * n
    v[i] = Fraction(1)
    return v


def _standard_model(series, n):
    """Return (ambient_dim, diagonal form entry, simple roots) of the standard model."""
    if series == "A":
        dim = n + 1
        simple = [[a - b for a, b in zip(_unit(i, dim), _unit(i + 1, dim))] for i in range(n)]
        return dim, 1, simple
    if series == "G":
        e = [_unit(i, 3) for i in range(3)]
        a1 = [x - y for x, y in zip(e[0], e[1])]
        a2 = [-2 * x + y + z for x, y, z in zip(*e)]
        return 3, 1, [a1, a2]
    dim = n
    chain = [[a - b for a, b in zip(_unit(i, dim), _unit(i + 1, dim))] for i in range(n - 1)]
    if series == "B":
        # e_i has squared length 2 once the form is doubled
        return dim, 2, chain + [_unit(n - 1, dim)]
    if series == "C":
        return dim, 1, chain + [[2 * x for x in _unit(n - 1, dim)]]
    if series == "D":
        last = [a + b for a, b in zip(_unit(n - 2, dim), _unit(n - 1, dim))]
        return dim, 1, chain + [last]
    raise ConfigurationError(f"unknown series {series!r}")


def _to_fraction(x):
    if isinstance(x, Fraction):
        return x
    if isinstance(x, sp.Rational):
        return Fraction(int(x.p), int(x.q))
    return Fraction(x)


class RootSystemData:
    """Exact data of a simple root system together with a group form.

    Instances are immutable by convention and cached by ``build_root_system``;
    equality and hashing use ``(series, rank, form)``.
    """

    def __init__(self, series, rank, form):
        self.series = series
        self.rank = rank
        self.form = form
        dim, scale, simple = _standard_model(series, rank)
        self.ambient_dim = dim
        self.bilinear_form = tuple(
            tuple(Fraction(scale) if i == j else Fraction(0) for j in range(dim)) for i in range(dim)
        )
        self.simple_roots = tuple(tuple(v) for v in simple)
        r = rank
        sgram = [[self.inner_ambient(a, b) for b in simple] for a in simple]
        self.d = tuple(int(sgram[i][i] / 2) for i in range(r))
        cartan = np.array([[int(2 * sgram[i][j] / sgram[i][i]) for j in range(r)] for i in range(r)])
        cartan.setflags(write=False)
        self.cartan_matrix = cartan
        # B[i, j] = (alpha_i, alpha_j^vee): row i is alpha_i in fundamental-weight coordinates
        self.B = np.ascontiguousarray(cartan.T)
        self.B.setflags(write=False)
        inv = sp.Matrix(self.B.tolist()).inv()
        self.inv_B = tuple(tuple(_to_fraction(inv[i, j]) for j in range(r)) for i in range(r))
        self.index = int(round(sp.Matrix(self.B.tolist()).det()))

        # (varpi_i, varpi_j) = inv_B[i][j] * d_j
        self.weight_gram = tuple(tuple(self.inv_B[i][j] * self.d[j] for j in range(r)) for i in range(r))
        self.gram = np.array([[float(x) for x in row] for row in self.weight_gram])
        scale_int = 1
        for row in self.weight_gram:
            for x in row:
                scale_int = math.lcm(scale_int, x.denominator)
        self.gram_scale = scale_int
        self.gram_int = np.array([[int(x * scale_int) for x in row] for row in self.weight_gram], dtype=np.int64)

        self.fundamental_weights = tuple(
            tuple(sum((self.inv_B[i][k] * simple[k][c] for k in range(r)), Fraction(0)) for c in range(dim))
            for i in range(r)
        )
        self._build_roots()
        self.rho = tuple(sum((w[c] for w in self.fundamental_weights), Fraction(0)) for c in range(dim))

    # -- construction helpers -------------------------------------------------

    def _build_roots(self):
        r = self.rank
        B = self.B
        seen = {tuple(int(x) for x in B[i]) for i in range(r)}
        frontier = list(seen)
        while frontier:
            nxt = []
            for v in frontier:
                for i in range(r):
                    if v[i] == 0:
                        continue
                    w = tuple(v[j] - v[i] * int(B[i, j]) for j in range(r))
                    if w not in seen:
                        seen.add(w)
                        nxt.append(w)
            frontier = nxt
        roots = []
        for v in seen:
            c = self.simple_root_coords(v)
            if all(x >= 0 for x in c):
                roots.append((sum(c), tuple(int(x) for x in c), v))
        roots.sort(key=lambda item: (item[0], tuple(-x for x in item[1])))
        self.roots_w = np.array([item[2] for item in roots], dtype=np.int64)
        self.roots_simple = np.array([item[1] for item in roots], dtype=np.int64)
        d = np.array(self.d, dtype=np.int64)
        # (lam, alpha) = root_pair @ lam  and  (lam, alpha^vee) = coroot_pair @ lam
        self.root_pair = self.roots_simple * d[None, :]
        self.root_len2 = np.sum(self.root_pair * self.roots_w, axis=1)
        self.coroot_pair = self.root_pair * 2 // self.root_len2[:, None]
        for a in (self.roots_w, self.roots_simple, self.root_pair, self.root_len2, self.coroot_pair):
            a.setflags(write=False)
        self.positive_roots = tuple(self.to_ambient(v) for v in self.roots_w)
        self._root_index = {tuple(int(x) for x in v): k for k, v in enumerate(self.roots_w)}

    # -- identity ---------------------------------------------------------------

    @property
    def key(self):
        return (self.series, self.rank, self.form)

    def __eq__(self, other):
        return isinstance(other, RootSystemData) and self.key == other.key

    def __hash__(self):
        return hash(self.key)

    def __repr__(self):
        return f"RootSystemData({self.series}{self.rank}, {self.form})"

    def descriptor(self):
        return {"series": self.series, "rank": self.rank, "form": self.form}

    @property
    def label(self):
        return f"{self.series}{self.rank}"

    @property
    def n_positive(self):
        return len(self.roots_w)

    @property
    def adjoint(self):
        return self.form == "adjoint"

    @property
    def rho_w(self):
        return np.ones(self.rank, dtype=np.int64)

    # -- arithmetic -------------------------------------------------------------

    def inner_ambient(self, u, v):
        F = self.bilinear_form
        return sum((u[i] * F[i][i] * v[i] for i in range(self.ambient_dim)), Fraction(0))

    def to_ambient(self, lam):
        lam = [_to_fraction(int(x)) if isinstance(x, (int, np.integer)) else _to_fraction(x) for x in lam]
        return tuple(
            sum((lam[i] * self.fundamental_weights[i][c] for i in range(self.rank)), Fraction(0))
            for c in range(self.ambient_dim)
        )

    def from_ambient(self, v):
        """Fundamental-weight coordinates of an ambient vector (its projection onto the span)."""
        out = []
        for a in self.simple_roots:
            out.append(2 * self.inner_ambient(v, a) / self.inner_ambient(a, a))
        return tuple(out)

    def simple_root_coords(self, lam):
        """Exact coordinates of ``lam`` in the basis of simple roots."""
        r = self.rank
        return tuple(sum((self.inv_B[k][i] * int(lam[k]) for k in range(r)), Fraction(0)) for i in range(r))

    def inner(self, u, v):
        """Bilinear form on fundamental-weight coordinates (complex allowed)."""
        return np.asarray(u) @ self.gram @ np.asarray(v)

    def norm2_exact(self, lam):
        lam = np.asarray(lam, dtype=np.int64)
        return Fraction(int(lam @ self.gram_int @ lam), self.gram_scale)

    def in_root_lattice(self, lam):
        return all(c.denominator == 1 for c in self.simple_root_coords(lam))

    def lattice_class(self, lam):
        """Class of ``lam`` in P/Q as a tuple of fractions in [0, 1)."""
        return tuple(c - math.floor(c) for c in self.simple_root_coords(lam))

    def root_index(self, root):
        """Index of a positive root given in fundamental-weight coordinates, else None."""
        return self._root_index.get(tuple(int(x) for x in root))

    def is_root(self, v):
        v = tuple(int(x) for x in v)
        return v in self._root_index or tuple(-x for x in v) in self._root_index

    def positive_pairings(self, x):
        """(x, alpha) for every positive root; ``x`` may be a batch of shape (n, rank)."""
        return np.asarray(x) @ self.root_pair.T

    def coroot_pairings(self, x):
        return np.asarray(x) @ self.coroot_pair.T

    @cached_property
    def rho_pairings(self):
        return self.root_pair.sum(axis=1)

    @cached_property
    def height_vector(self):
        return tuple(sum(self.inv_B[i][j] for j in range(self.rank)) for i in range(self.rank))


@lru_cache(maxsize=None)
def build_root_system(series, rank, form="simply_connected"):
    """Construct exact root-system data for a simple type at desk-scale rank."""
    series = str(series).upper()
    if series not in SUPPORTED_RANKS:
        raise ConfigurationError(f"series must be one of {sorted(SUPPORTED_RANKS)}, got {series!r}")
    lo, hi = SUPPORTED_RANKS[series]
    if not isinstance(rank, (int, np.integer)) or not lo <= rank <= hi:
        raise ConfigurationError(f"series {series} supports rank {lo}..{hi}, got {rank!r}")
    if form not in FORMS:
        raise ConfigurationError(f"form must be one of {FORMS}, got {form!r}")
    return RootSystemData(series, int(rank), form)


def root_system_from_descriptor(desc):
    return build_root_system(desc["series"], int(desc["rank"]), desc.get("form", "simply_connected"))


# ---------------------------------------------------------------------------
# Weights


@dataclass(frozen=True)
class Weight:
    """Integral weight in fundamental-weight coordinates."""

    coords: tuple

    def __post_init__(self):
        object.__setattr__(self, "coords", tuple(int(x) for x in self.coords))

    @property
    def dominant(self):
        return all(c >= 0 for c in self.coords)

    def ambient(self, rs):
        return rs.to_ambient(self.coords)

    def in_root_lattice(self, rs):
        return rs.in_root_lattice(self.coords)

    def __iter__(self):
        return iter(self.coords)

    def __len__(self):
        return len(self.coords)


def as_coords(lam, rank=None):
    """Integer coordinate array of a weight given as Weight, tuple or array."""
    arr = np.asarray(getattr(lam, "coords", lam))
    if arr.dtype.kind not in "iu":
        rounded = np.rint(arr.astype(float))
        if not np.array_equal(rounded, arr):
            raise ValueError(f"weight coordinates must be integers, got {lam!r}")
        arr = rounded
    arr = arr.astype(np.int64)
    if rank is not None and arr.shape[-1] != rank:
        raise ValueError(f"expected {rank} coordinates, got {arr.shape[-1]}")
    return arr


def dominant_weights_in_ball(rs, radius, lo=0.0, adjoint=None):
    """All dominant lam with lo <= ||lam + rho|| < radius, sorted by (norm, coords).

    In adjoint form only weights of the root lattice are returned.
    """
    if adjoint is None:
        adjoint = rs.adjoint
    r = rs.rank
    R2 = _as_fraction_sq(radius)
    lo2 = _as_fraction_sq(lo)
    bounds = [int(math.floor(float(radius) / math.sqrt(rs.gram[i, i]))) for i in range(r)]
    out = []
    for shifted in itertools.product(*[range(1, b + 1) for b in bounds]):
        v = np.array(shifted, dtype=np.int64)
        n2 = Fraction(int(v @ rs.gram_int @ v), rs.gram_scale)
        if lo2 <= n2 < R2:
            lam = tuple(x - 1 for x in shifted)
            if adjoint and not rs.in_root_lattice(lam):
                continue
            out.append((n2, lam))
    out.sort()
    return [lam for _, lam in out]


def _as_fraction_sq(x):
    f = Fraction(x) if not isinstance(x, Fraction) else x
    return f * f


# ---------------------------------------------------------------------------
# Weyl group


@dataclass(frozen=True, eq=False)
class WeylGroupElement:
    """Element of W acting on fundamental-weight coordinates by ``wmatrix @ lam``."""

    rs: RootSystemData
    wmatrix: np.ndarray
    length: int
    word: tuple

    @property
    def sign(self):
        return -1 if self.length % 2 else 1

    @cached_property
    def matrix(self):
        """Exact ambient matrix (product of simple reflections along ``word``)."""
        dim = self.rs.ambient_dim
        M = [[Fraction(int(i == j)) for j in range(dim)] for i in range(dim)]
        for i in reversed(self.word):
            M = _matmul(_ambient_reflection(self.rs, self.rs.simple_roots[i]), M)
        return tuple(tuple(row) for row in M)

    def act(self, lam):
        return self.wmatrix @ np.asarray(lam)


def _matmul(A, B):
    n, m, p = len(A), len(B), len(B[0])
    return [[sum((A[i][k] * B[k][j] for k in range(m)), Fraction(0)) for j in range(p)] for i in range(n)]


def _ambient_reflection(rs, alpha):
    dim = rs.ambient_dim
    F = rs.bilinear_form
    a2 = rs.inner_ambient(alpha, alpha)
    return [
        [Fraction(int(i == j)) - 2 * alpha[i] * F[j][j] * alpha[j] / a2 for j in range(dim)] for i in range(dim)
    ]


class WeylGroup:
    """Enumerated Weyl group with stacked integer matrices for vectorized use."""

    def __init__(self, rs):
        order = expected_weyl_order(rs.series, rs.rank)
        if order > WEYL_ORDER_GUARD:
            raise ResourceError(f"|W({rs.label})| = {order} exceeds the guard {WEYL_ORDER_GUARD}")
        self.rs = rs
        r = rs.rank
        gens = []
        for i in range(r):
            S = np.eye(r, dtype=np.int64)
            S[:, i] -= rs.B[i, :]
            gens.append(S)
        self.generators = gens
        ident = np.eye(r, dtype=np.int64)
        mats = [ident]
        words = [()]
        lengths = [0]
        index = {ident.tobytes(): 0}
        frontier = [0]
        depth = 0
        while frontier:
            depth += 1
            nxt = []
            for k in frontier:
                M = mats[k]
                for i, S in enumerate(gens):
                    N = S @ M
                    key = N.tobytes()
                    if key in index:
                        continue
                    index[key] = len(mats)
                    mats.append(N)
                    words.append((i,) + words[k])
                    lengths.append(depth)
                    nxt.append(len(mats) - 1)
                    if len(mats) > WEYL_ORDER_GUARD:
                        raise ResourceError(f"Weyl group enumeration exceeded {WEYL_ORDER_GUARD} elements")
            frontier = nxt
        self.mats = np.array(mats)
        self.mats.setflags(write=False)
        self.lengths = np.array(lengths, dtype=np.int64)
        self.signs = np.where(self.lengths % 2 == 0, 1, -1)
        self.words = words
        self._index = index
        inv = np.rint(np.linalg.inv(self.mats.astype(float))).astype(np.int64)
        self.inverse = np.array([index[m.tobytes()] for m in inv])
        self.longest = int(np.argmax(self.lengths))

    def __len__(self):
        return len(self.mats)

    def index_of(self, mat):
        return self._index.get(np.ascontiguousarray(mat, dtype=np.int64).tobytes())

    def compose(self, i, j):
        """Index of w_i w_j."""
        return self._index[(self.mats[i] @ self.mats[j]).tobytes()]

    def element(self, k):
        return WeylGroupElement(self.rs, self.mats[k], int(self.lengths[k]), self.words[k])

    @cached_property
    def elements(self):
        return [self.element(k) for k in range(len(self))]

    def inversion_count(self, k):
        """Number of positive roots sent to negative roots by w_k."""
        images = self.rs.roots_w @ self.mats[k].T
        heights = images @ _height_int(self.rs)
        return int(np.sum(heights < 0))


def _height_int(rs):
    hv = rs.height_vector
    den = math.lcm(*[x.denominator for x in hv])
    return np.array([int(x * den) for x in hv], dtype=np.int64)


@lru_cache(maxsize=None)
def weyl_group(rs):
    return WeylGroup(rs)


def enumerate_weyl_group(rs):
    """All elements of W with lengths from breadth-first search over simple reflections."""
    return weyl_group(rs).elements


def longest_element(rs):
    W = weyl_group(rs)
    return W.element(W.longest)


# ---------------------------------------------------------------------------
# Torus points


@dataclass(frozen=True, eq=False)
class TorusPoint:
    """Point t = exp(X) of the complexified maximal torus.

    ``h[k] = (fundamental_weight_k, X)`` so that ``t**lam = exp(lam @ h)`` for a
    weight in fundamental-weight coordinates.  ``angles`` holds exact fractions
    theta with ``t**varpi_k = exp(2*pi*i*theta_k)`` when the point was given by
    rational angles; these are also the coordinates of ``X / (2*pi*i)`` in the
    basis of simple coroots.
    """

    h: np.ndarray
    kind: str
    angles: tuple | None = None

    def power(self, lam):
        lam = np.asarray(getattr(lam, "coords", lam))
        if self.angles is not None and lam.dtype.kind in "iu":
            s = sum((int(a) * th for a, th in zip(lam, self.angles)), Fraction(0))
            s -= math.floor(s)
            return complex(np.exp(2j * np.pi * float(s)))
        return complex(np.exp(lam @ self.h))

    def powers(self, lams):
        lams = np.asarray(lams)
        if self.angles is not None and lams.dtype.kind in "iu":
            num, den = _angle_numerators(self.angles)
            phase = (lams @ num) % den
            return np.exp(2j * np.pi * phase / den)
        return np.exp(lams @ self.h)

    def ambient_X(self, rs):
        """X = sum_k h_k alpha_k^vee as a complex ambient vector."""
        out = np.zeros(rs.ambient_dim, dtype=complex)
        for k, a in enumerate(rs.simple_roots):
            a = np.array([float(x) for x in a])
            out += self.h[k] * 2 * a / (2 * rs.d[k])
        return out

    def inverse(self):
        angles = None if self.angles is None else tuple(-a - math.floor(-a) for a in self.angles)
        return TorusPoint(-self.h, self.kind, angles)

    def act(self, rs, k):
        """The point w_k t, where w_k is the k-th enumerated Weyl group element."""
        W = weyl_group(rs)
        Minv = W.mats[W.inverse[k]]
        # (w t)^lam = t^(w^-1 lam)
        h = Minv.T @ self.h
        angles = None
        if self.angles is not None:
            angles = tuple(
                _frac_mod1(sum((int(Minv[i, j]) * self.angles[i] for i in range(rs.rank)), Fraction(0)))
                for j in range(rs.rank)
            )
        return TorusPoint(h, self.kind, angles)


def _frac_mod1(x):
    return x - math.floor(x)


def _angle_numerators(angles):
    den = math.lcm(*[a.denominator for a in angles]) if angles else 1
    return np.array([int(a * den) for a in angles], dtype=np.int64), den


def angle_point(rs, coords_2pi):
    """Torus point X = 2*pi*i * sum_j theta_j alpha_j^vee (angles as fractions of 2*pi).

    Rational inputs (Fraction, int, or strings such as "1/4") are kept exact;
    floats produce an inexact point.
    """
    coords = list(coords_2pi)
    if len(coords) != rs.rank:
        raise ValueError(f"expected {rs.rank} angle coordinates, got {len(coords)}")
    exact = all(isinstance(c, (Fraction, int, np.integer, str)) for c in coords)
    if exact:
        theta = tuple(_frac_mod1(Fraction(c)) for c in coords)
        h = 2j * np.pi * np.array([float(t) for t in theta])
        return TorusPoint(h, "angle", theta)
    h = 2j * np.pi * np.array([float(c) for c in coords])
    return TorusPoint(h, "angle", None)


def identity_point(rs):
    return angle_point(rs, [0] * rs.rank)


def q_power_point(rs, q, mu):
    """The point q**mu, i.e. X = log(q) * mu with mu in fundamental-weight coordinates."""
    mu = np.asarray(mu, dtype=complex)
    h = np.log(q) * (rs.gram @ mu)
    return TorusPoint(h, "q_power" if np.all(mu.imag == 0) else "mixed", None)


def point_from_ambient(rs, X):
    X = np.asarray(X, dtype=complex)
    h = np.array([sum(float(w[c]) * float(rs.bilinear_form[c][c]) * X[c] for c in range(rs.ambient_dim))
                  for w in rs.fundamental_weights])
    if np.allclose(h.real, 0):
        kind = "angle"
    elif np.allclose(h.imag, 0):
        kind = "q_power"
    else:
        kind = "mixed"
    return TorusPoint(h, kind, None)


def root_values(rs, t, negative=False):
    """t**alpha (or t**-alpha) for every positive root."""
    roots = -rs.roots_w if negative else rs.roots_w
    return t.powers(roots)


def _root_is_trivial(rs, t, tol):
    """Boolean mask of positive roots with t**alpha == 1; raises on ambiguous values."""
    if t.angles is not None:
        num, den = _angle_numerators(t.angles)
        return (rs.roots_w @ num) % den == 0
    dev = np.abs(t.powers(-rs.roots_w) - 1)
    ambiguous = (dev >= tol) & (dev <= 10 * tol)
    if np.any(ambiguous):
        raise PrecisionError(
            f"root value within [tol, 10*tol] of 1 (deviation {dev[ambiguous].min():.3g}); "
            "use a smaller tol or exact angles"
        )
    return dev < tol


def is_central(rs, t, tol=DEFAULT_TOL):
    """True iff t**alpha == 1 for every root (a point of the simply connected center)."""
    return bool(np.all(_root_is_trivial(rs, t, tol)))


@lru_cache(maxsize=None)
def _center_angles(rs):
    r = rs.rank
    gens = [tuple(_frac_mod1(rs.inv_B[i][j]) for i in range(r)) for j in range(r)]
    zero = tuple(Fraction(0) for _ in range(r))
    seen = {zero}
    frontier = [zero]
    while frontier:
        nxt = []
        for v in frontier:
            for g in gens:
                w = tuple(_frac_mod1(a + b) for a, b in zip(v, g))
                if w not in seen:
                    seen.add(w)
                    nxt.append(w)
        frontier = nxt
    return sorted(seen)


def center_points(rs):
    """Central torus points (t**alpha = 1 for every root), identity first.

    In adjoint form the center is trivial and only the identity is returned.
    """
    if rs.adjoint:
        return [identity_point(rs)]
    return [angle_point(rs, list(theta)) for theta in _center_angles(rs)]


# ---------------------------------------------------------------------------
# Stabilizers


@dataclass(frozen=True, eq=False)
class StabilizerData:
    """Root subsystem and Weyl subgroup fixing a torus point."""

    delta0_plus: tuple            # indices into the positive roots
    w0: tuple                     # indices into the enumerated Weyl group
    rho0: np.ndarray              # half-sum of delta0_plus, fundamental-weight coordinates
    coset_reps: tuple             # representatives of W0\W (minimal length)
    delta_plus_w0: tuple          # per representative, indices of beta with +-beta in w'^-1 Delta0+
    n_positive: int

    @property
    def central(self):
        return self.n_positive == len(self.delta0_plus)

    @property
    def regular(self):
        return len(self.delta0_plus) == 0


def _reflection_w(rs, k):
    """Matrix of the reflection in the k-th positive root on fundamental-weight coordinates."""
    return np.eye(rs.rank, dtype=np.int64) - np.outer(rs.roots_w[k], rs.coroot_pair[k])


def reflection_subgroup(rs, root_indices):
    """Indices of the subgroup of W generated by reflections in the given positive roots."""
    W = weyl_group(rs)
    gens = [W.index_of(_reflection_w(rs, k)) for k in root_indices]
    seen = {0}
    frontier = [0]
    while frontier:
        nxt = []
        for a in frontier:
            for g in gens:
                b = W.compose(g, a)
                if b not in seen:
                    seen.add(b)
                    nxt.append(b)
        frontier = nxt
    return sorted(seen)


def coset_representatives(rs, subgroup):
    """Minimal-length representatives of the right cosets subgroup\\W."""
    W = weyl_group(rs)
    order = np.argsort(W.lengths, kind="stable")
    covered = np.zeros(len(W), dtype=bool)
    reps = []
    for k in order:
        if covered[k]:
            continue
        reps.append(int(k))
        for u in subgroup:
            covered[W.compose(u, int(k))] = True
    return reps


def stabilizer_data(rs, t0, tol=DEFAULT_TOL):
    """Stabilizer structure of t0: Delta0, W0, rho0, coset representatives of W0\\W."""
    W = weyl_group(rs)
    mask = _root_is_trivial(rs, t0, tol)
    delta0 = tuple(int(k) for k in np.nonzero(mask)[0])

    # direct stabilizer: t0^(w^-1 varpi_k - varpi_k) == 1 for all k
    Minv = W.mats[W.inverse]
    diffs = np.transpose(Minv, (0, 2, 1)) - np.eye(rs.rank, dtype=np.int64)[None]
    if t0.angles is not None:
        num, den = _angle_numerators(t0.angles)
        fixed = np.all((diffs @ num) % den == 0, axis=1)
    else:
        dev = np.abs(np.exp(diffs @ t0.h) - 1)
        amb = (dev >= tol) & (dev <= 10 * tol)
        if np.any(amb):
            raise PrecisionError("Weyl stabilizer membership is ambiguous at this tolerance")
        fixed = np.all(dev < tol, axis=1)
    w0 = tuple(int(k) for k in np.nonzero(fixed)[0])
    generated = tuple(reflection_subgroup(rs, delta0))
    if set(w0) != set(generated):
        raise PrecisionError(
            f"stabilizer of order {len(w0)} differs from the reflection group of Delta0 "
            f"(order {len(generated)}); tolerance too coarse for this point"
        )
    rho0 = rs.roots_w[list(delta0)].sum(axis=0) / 2 if delta0 else np.zeros(rs.rank)

    reps = coset_representatives(rs, w0)

    pos_index = rs._root_index
    per_rep = []
    for k in reps:
        Mi = W.mats[W.inverse[k]]
        found = set()
        for a in delta0:
            img = tuple(int(x) for x in Mi @ rs.roots_w[a])
            j = pos_index.get(img)
            if j is None:
                j = pos_index[tuple(-x for x in img)]
            found.add(j)
        per_rep.append(tuple(sorted(found)))
    return StabilizerData(delta0, w0, rho0, tuple(reps), tuple(per_rep), rs.n_positive)


# ---------------------------------------------------------------------------
# Root subsystems


@dataclass(frozen=True)
class SpanComplementReport:
    """Outcome of the span-of-complement check for a root subsystem."""

    subsystem_size: int
    per_root: tuple               # (root, has_nonorthogonal_outside, in_span) for every root
    implication_holds: bool
    complement_rank: int
    full_rank_required: bool
    full_rank_holds: bool

    @property
    def ok(self):
        return self.implication_holds and (self.full_rank_holds or not self.full_rank_required)


def all_roots(rs):
    return np.concatenate([rs.roots_w, -rs.roots_w])


def _normalize_subsystem(rs, delta0):
    out = set()
    for v in delta0:
        v = tuple(int(x) for x in v)
        if not rs.is_root(v):
            raise ValueError(f"{v} is not a root of {rs.label}")
        out.add(v)
        out.add(tuple(-x for x in v))
    return out


def is_closed_subsystem(rs, roots):
    """Closure of a set of roots (given with both signs) under its own reflections."""
    for a in roots:
        k = rs.root_index(a)
        if k is None:
            k = rs.root_index(tuple(-x for x in a))
        S = _reflection_w(rs, k)
        for b in roots:
            if tuple(int(x) for x in S @ np.array(b)) not in roots:
                return False
    return True


def _rank(vectors):
    if not vectors:
        return 0
    return sp.Matrix([list(v) for v in vectors]).rank()


def span_complement_check(rs, delta0):
    """Check that roots meeting the complement non-orthogonally lie in its span."""
    sub = _normalize_subsystem(rs, delta0)
    if not is_closed_subsystem(rs, sub):
        raise ValueError("delta0 is not closed under its own reflections")
    roots = [tuple(int(x) for x in v) for v in all_roots(rs)]
    outside = [v for v in roots if v not in sub]
    base_rank = _rank(outside)
    per_root = []
    holds = True
    for a in roots:
        av = np.array(a)
        touches = any(int(av @ rs.gram_int @ np.array(b)) != 0 for b in outside)
        in_span = _rank(outside + [a]) == base_rank if outside else False
        if touches and not in_span:
            holds = False
        per_root.append((a, touches, in_span))
    proper = len(sub) < len(roots)
    return SpanComplementReport(
        subsystem_size=len(sub),
        per_root=tuple(per_root),
        implication_holds=holds,
        complement_rank=base_rank,
        full_rank_required=proper,
        full_rank_holds=base_rank == rs.rank,
    )


def root_subsystems(rs):
    """All root subsystems (closed under own reflections), as sets of roots with both signs."""
    pos = [tuple(int(x) for x in v) for v in rs.roots_w]
    out = []
    for mask in itertools.product((0, 1), repeat=len(pos)):
        chosen = [v for v, m in zip(pos, mask) if m]
        sub = set(chosen) | {tuple(-x for x in v) for v in chosen}
        if is_closed_subsystem(rs, sub):
            out.append(sub)
    return out
