"""Normalized q-characters, classical spherical functions and central states of SU_q(N)."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .characters import _exp_checked, characters
from .errors import BoundaryError, ConfigurationError, PrecisionError, ZeroDenominatorError
from .lie import (
    _center_angles,
    as_coords,
    build_root_system,
    center_points,
    coset_representatives,
    dominant_weights_in_ball,
    q_power_point,
    reflection_subgroup,
    weyl_group,
)

SINGULAR_REL = 1e-8          # relative size of a root pairing treated as a wall
RICHARDSON_STEP = 1e-2
RICHARDSON_TOL = 1e-6
EPS = np.finfo(float).eps
COND_TOL = 1e-10             # accepted eps * cancellation ratio of a closed form
CIRCLE_NODES = 16
CIRCLE_TOL = 1e-11
ZERO_TOL = 1e-8
GENERIC_MARGIN = 1e-3        # in units of kappa
BOUNDARY_TOL = 1e-10
CLASS_TOL = 1e-10
BASE_POSITIVITY = 1e-6


@dataclass(frozen=True, eq=False)
class QContext:
    """Deformation parameter q in (0, 1) together with a root system."""

    rs: object
    q: float

    def __post_init__(self):
        q = float(self.q)
        if not 0.0 < q < 1.0:
            raise ValueError(f"q must lie strictly between 0 and 1, got {self.q!r}")
        object.__setattr__(self, "q", q)

    @property
    def log_q(self):
        return math.log(self.q)

    @property
    def kappa(self):
        return 2 * math.pi / abs(self.log_q)

    @property
    def q_alpha(self):
        """q**((alpha, alpha)/2) for every positive root."""
        return self.q ** (self.rs.root_len2 / 2)

    @property
    def kappa_alpha(self):
        return 2 * math.pi / np.abs(np.log(self.q_alpha))

    @property
    def N(self):
        return self.rs.rank + 1 if self.rs.series == "A" else None

    def descriptor(self):
        return {"group": self.rs.descriptor(), "q": self.q}


def sl_context(N, q):
    """Context for SU_q(N)."""
    if int(N) < 2:
        raise ConfigurationError(f"N must be at least 2, got {N!r}")
    return QContext(build_root_system("A", int(N) - 1), q)


def _as_nu(ctx, nu):
    arr = np.asarray(getattr(nu, "nu", nu), dtype=complex)
    if arr.shape != (ctx.rs.rank,):
        raise ValueError(f"spherical parameter needs {ctx.rs.rank} coordinates, got shape {arr.shape}")
    return arr


@dataclass(frozen=True, eq=False)
class SphericalParameter:
    """Complex parameter nu in fundamental-weight coordinates: nu = sum_k nu_k varpi_k."""

    nu: np.ndarray
    ctx: QContext

    def __post_init__(self):
        object.__setattr__(self, "nu", _as_nu(self.ctx, self.nu))

    @property
    def pairings(self):
        return self.ctx.rs.root_pair @ self.nu

    @property
    def coroot_pairings(self):
        return self.ctx.rs.coroot_pair @ self.nu

    @property
    def almost_real(self):
        return bool(np.all(np.abs(self.pairings.imag) < self.ctx.kappa))

    def shifted(self, p):
        """nu - i kappa p for a coweight p."""
        return SphericalParameter(self.nu - 1j * self.ctx.kappa * np.asarray(p, dtype=float), self.ctx)

    def canonical(self):
        """Representative modulo i kappa Q^vee and W: imaginary part in the fundamental alcove."""
        rs = self.ctx.rs
        B = rs.B.astype(float)
        top = rs.roots_w[-1].astype(float)
        top_dual = top * 2 / rs.root_len2[-1]
        top_pair = rs.root_pair[-1].astype(float)
        y = self.nu.imag / self.ctx.kappa
        x = self.nu.real.copy()
        for _ in range(10000):
            neg = np.nonzero(y < -1e-12)[0]
            if neg.size:
                i = neg[0]
                y = y - y[i] * B[i]
                x = x - x[i] * B[i]
                continue
            level = top_pair @ y
            if level > 1 + 1e-12:
                y = y - (level - 1) * top_dual
                x = x - (top_pair @ x) * top_dual
                continue
            break
        else:
            raise PrecisionError("alcove reduction did not terminate")
        W = weyl_group(rs)
        coroot_basis = (B / np.array(rs.d, dtype=float)[:, None]).T
        best = None
        for k in range(len(W)):
            h = y - W.mats[k] @ y
            c = np.linalg.solve(coroot_basis, h)
            if np.max(np.abs(c - np.rint(c))) > 1e-9:
                continue
            cand = W.mats[k] @ x
            key = tuple(np.round(cand, 9))
            if best is None or key > best[0]:
                best = (key, cand)
        return SphericalParameter(best[1] + 1j * self.ctx.kappa * y, self.ctx)


# ---------------------------------------------------------------------------
# The entire function E(x, y) = A_x(q^y) / (prod (x, a) prod (y, a))


def _wall_mask(rs, v, rel=SINGULAR_REL):
    p = rs.root_pair @ v
    scale = max(1.0, float(np.max(np.abs(p))))
    return np.abs(p) <= rel * scale


def _alt_terms_sum(terms):
    """Sum of signed terms and its cancellation ratio sum|t| / |sum t|."""
    total = terms.sum()
    mag = float(np.abs(terms).sum())
    cond = mag / abs(total) if total != 0 else (0.0 if mag == 0 else math.inf)
    return total, cond


def _E_generic(rs, L, x, y):
    W = weyl_group(rs)
    expo = L * ((W.mats @ x) @ (rs.gram @ y))
    A, cond = _alt_terms_sum(W.signs * _exp_checked(expo))
    return A / (np.prod(rs.root_pair @ x) * np.prod(rs.root_pair @ y)), cond


def _E_wall(rs, L, x, y, d0):
    """E(x, y) for y on the walls d0 (indices of positive roots), x off every wall."""
    W = weyl_group(rs)
    d0 = [int(k) for k in d0]
    sub = reflection_subgroup(rs, d0)
    # averaging over the reflection subgroup projects y onto its fixed space
    yp = (W.mats[sub] @ y).mean(axis=0)
    reps = coset_representatives(rs, sub)
    imgs = W.mats[reps] @ x
    expo = L * (imgs @ (rs.gram @ yp))
    poly = np.prod(imgs @ rs.root_pair[d0].T, axis=1)
    outside = [k for k in range(rs.n_positive) if k not in set(d0)]
    rho0 = rs.roots_w[d0].sum(axis=0) / 2
    total, cond = _alt_terms_sum(W.signs[reps] * _exp_checked(expo) * poly)
    num = total * L ** len(d0)
    den = np.prod(rs.root_pair[d0] @ rho0) * np.prod(rs.root_pair[outside] @ yp) * np.prod(rs.root_pair @ x)
    return num / den, cond


def _E_at_zero(rs, L):
    return L ** rs.n_positive / float(np.prod(rs.rho_pairings))


def _wall_loss(rs, L, x, y, sx, sy):
    """Digits lost to near-wall pairs in the alternating sum, as a factor (1 when far from walls).

    Terms paired by a reflection s_alpha differ by about |L (x, alpha)| max|(y, beta)|, so
    each root close to a wall of x (or of y) costs the reciprocal of that product.
    Pairings flagged as exactly on a wall are handled by the wall formula and skipped.
    """
    px = np.abs(rs.root_pair @ x)
    py = np.abs(rs.root_pair @ y)
    lx = np.minimum(1.0, abs(L) * px[~sx] * max(float(py.max()), 1e-300))
    ly = np.minimum(1.0, abs(L) * py[~sy] * max(float(px.max()), 1e-300))
    return float(1.0 / (np.prod(lx) * np.prod(ly)))


def _E_direct(rs, L, x, y):
    """Closed-form evaluation and its effective cancellation ratio; None when both arguments sit on walls.

    A large measured cancellation far from every wall means E is close to one of its
    zeros; the absolute error is still small there, so the ratio is capped by the
    wall-proximity estimate.
    """
    sx = _wall_mask(rs, x)
    sy = _wall_mask(rs, y)
    if sx.all() or sy.all():
        # an argument on every wall is zero, and E(0, y) = E(x, 0) is constant
        return complex(_E_at_zero(rs, L)), 1.0
    if sx.any() and sy.any():
        return None, math.inf
    if not sx.any() and not sy.any():
        value, cond = _E_generic(rs, L, x, y)
    elif not sx.any():
        value, cond = _E_wall(rs, L, x, y, np.nonzero(sy)[0])
    else:
        value, cond = _E_wall(rs, L, y, x, np.nonzero(sx)[0])
    loss = _wall_loss(rs, L, x, y, sx, sy)
    return value, min(cond, len(weyl_group(rs).signs) * loss)


def entire_alt_quotient(rs, L, x, y, _depth=0):
    """E(x, y), including its values on and near root walls.

    Closed forms are used when they are well conditioned; otherwise the value is the
    mean of E over a small complex circle along rho (exact for entire functions up to
    the truncated Taylor tail, checked by doubling the number of nodes).
    """
    x = np.asarray(x, dtype=complex)
    y = np.asarray(y, dtype=complex)
    value, cond = _E_direct(rs, L, x, y)
    if value is not None and cond * EPS <= COND_TOL:
        return complex(value)
    if _depth >= 2:
        raise PrecisionError(f"E is ill conditioned at this point (cancellation ratio {cond:.3g})")
    # perturb the argument closer to its walls
    px = np.min(np.abs(rs.coroot_pair @ x)) * max(1.0, float(np.max(np.abs(rs.coroot_pair @ y))))
    py = np.min(np.abs(rs.coroot_pair @ y)) * max(1.0, float(np.max(np.abs(rs.coroot_pair @ x))))
    if px <= py:
        return _E_circle(rs, L, x, y, _depth)
    return _E_circle(rs, L, y, x, _depth)


def _E_circle(rs, L, x, y, depth):
    W = weyl_group(rs)
    rho = rs.rho_w.astype(float)
    growth = abs(L) * float(np.max(np.abs((W.mats @ rho) @ (rs.gram @ y))))
    r = 1.0 / max(growth, 1.0)
    # every wall is either well inside the circle (distance < r/4) or well outside (>= 2r)
    reach = np.abs(rs.root_pair @ x) / rs.rho_pairings
    while True:
        mid = reach[(reach >= 0.25 * r) & (reach < 2 * r)]
        if not mid.size:
            break
        r = 0.5 * float(mid.min())
    f = {}

    def mean(m):
        vals = []
        for k in range(m):
            key = (k * (CIRCLE_NODES * 2 // m)) % (CIRCLE_NODES * 2)
            if key not in f:
                z = r * np.exp(2j * np.pi * key / (CIRCLE_NODES * 2))
                f[key] = entire_alt_quotient(rs, L, x + z * rho, y, depth + 1)
            vals.append(f[key])
        return complex(np.mean(vals))

    coarse = mean(CIRCLE_NODES)
    fine = mean(2 * CIRCLE_NODES)
    scale = max(abs(v) for v in f.values())
    if abs(coarse - fine) > CIRCLE_TOL * scale:
        raise PrecisionError(f"circle mean did not converge (node levels differ by {abs(coarse - fine):.3g})")
    return fine


def richardson_limit(rs, L, x, y, direction=None, step=RICHARDSON_STEP):
    """Three-level Richardson extrapolation of E(x + e d, y) as e -> 0 (validation oracle)."""
    d = rs.rho_w.astype(float) if direction is None else np.asarray(direction, dtype=float)
    x = np.asarray(x, dtype=complex)
    y = np.asarray(y, dtype=complex)

    def f(e):
        return _E_generic(rs, L, x + e * d, y)[0]

    def level(h):
        return (8 * f(h / 4) - 6 * f(h / 2) + f(h)) / 3

    coarse, fine = level(step), level(step / 2)
    if abs(coarse - fine) > RICHARDSON_TOL * max(abs(fine), abs(f(step))):
        raise PrecisionError(f"extrapolated limit did not converge (levels differ by {abs(coarse - fine):.3g})")
    return complex(fine)


# ---------------------------------------------------------------------------
# Spherical functions


def phi_one(ctx, nu, mu):
    """Classical spherical function at q^mu: E(nu/2, mu) / E(rho, mu); equals 1 at mu = 0."""
    rs = ctx.rs
    nu = _as_nu(ctx, nu)
    mu = np.asarray(mu, dtype=complex)
    if not np.any(mu):
        return 1.0 + 0j
    L = ctx.log_q
    return entire_alt_quotient(rs, L, nu / 2, mu) / entire_alt_quotient(rs, L, rs.rho_w.astype(float), mu)


def phi_one_many(ctx, nu, mus):
    return np.array([phi_one(ctx, nu, m) for m in np.asarray(mus)], dtype=complex)


def phi_q(ctx, nu, lam):
    """chi_lam(q^nu) / chi_lam(q^{2 rho})."""
    lam = as_coords(lam, ctx.rs.rank)
    return complex(phi_q_many(ctx, nu, lam[None, :])[0])


def phi_q_many(ctx, nu, lams):
    rs = ctx.rs
    nu = _as_nu(ctx, nu)
    lams = as_coords(lams, rs.rank)
    t = q_power_point(rs, ctx.q, nu)
    base = q_power_point(rs, ctx.q, 2 * rs.rho_w)
    return characters(rs, lams, t) / characters(rs, lams, base)


def _lattice_distance(values, spacing):
    """Box distance from each value to the nearest nonzero point of i * spacing * Z."""
    k = np.rint(values.imag / spacing)
    k = np.where(k == 0, np.sign(values.imag) + (values.imag == 0), k)
    return np.maximum(np.abs(values.real), np.abs(values.imag - k * spacing))


def zero_lattice_distance(ctx, nu):
    nu = _as_nu(ctx, nu)
    return float(np.min(_lattice_distance(ctx.rs.coroot_pair @ nu, ctx.kappa_alpha)))


def zero_locus_predicate(ctx, nu):
    """True iff some (nu, a^vee) is (within 1e-8) a nonzero point of (2 pi / |log q_a|) i Z."""
    return zero_lattice_distance(ctx, nu) <= ZERO_TOL


def is_generic(ctx, nu):
    nu = _as_nu(ctx, nu)
    if zero_lattice_distance(ctx, nu) <= GENERIC_MARGIN * ctx.kappa:
        return False
    return not _wall_mask(ctx.rs, nu / 2).any()


def relation_check(ctx, nu, lam):
    """|phi_q(nu, lam) - phi_one(nu, 2 lam + 2 rho) / phi_one(nu, 2 rho)| for generic nu."""
    nu = _as_nu(ctx, nu)
    if not is_generic(ctx, nu):
        raise ValueError("nu is not generic; evaluate phi_one directly, which handles the limit")
    rs = ctx.rs
    lam = as_coords(lam, rs.rank)
    lhs = phi_q(ctx, nu, lam)
    rho2 = 2 * rs.rho_w
    rhs = phi_one(ctx, nu, 2 * lam + rho2) / phi_one(ctx, nu, rho2)
    return float(abs(lhs - rhs))


# ---------------------------------------------------------------------------
# Almost-real reduction (type A)


@dataclass(frozen=True)
class CenterCharacter:
    """Character lam -> exp(-2 pi i (lam, p)) of P/Q given by a coweight p."""

    p: tuple                  # fundamental-coweight coordinates
    center_index: int
    theta: tuple              # angles of the matching center point

    @property
    def trivial(self):
        return all(a == 0 for a in self.theta)

    def value(self, rs, lam):
        return center_points(rs)[self.center_index].power(as_coords(lam, rs.rank))

    def values(self, rs, lams):
        return center_points(rs)[self.center_index].powers(as_coords(lams, rs.rank))


def _character_of_coweight(rs, p):
    theta = tuple(
        (-sum((rs.weight_gram[i][j] * int(p[j]) for j in range(rs.rank)), Fraction(0))) % 1 for i in range(rs.rank)
    )
    angles = _center_angles(rs)
    return CenterCharacter(tuple(int(x) for x in p), angles.index(theta), theta)


def reduce_almost_real(ctx, nu):
    """Split nu = nu' + i kappa p with nu' almost real and p a coweight; returns (nu', character of p)."""
    rs = ctx.rs
    if rs.series != "A":
        raise ConfigurationError("almost-real reduction is only available for type A")
    nu = _as_nu(ctx, nu)
    kappa = ctx.kappa
    fw = np.array([[float(c) for c in w] for w in rs.fundamental_weights])
    u = (nu.imag @ fw) / kappa          # ambient imaginary part in units of kappa
    spread = float(u.max() - u.min())
    if spread < 1 - BOUNDARY_TOL:
        n = np.zeros(rs.rank + 1, dtype=np.int64)
    else:
        base = np.floor(u)
        frac = u - base
        order = np.argsort(frac, kind="stable")
        sorted_f = frac[order]
        gaps = np.append(np.diff(sorted_f), 1 - sorted_f[-1] + sorted_f[0])
        cut = int(np.argmax(gaps))
        n = base.astype(np.int64)
        if cut != len(gaps) - 1:
            # values at or below the widest gap move up by one period
            n[order[: cut + 1]] -= 1
        reduced = u - n
        if abs(float(reduced.max() - reduced.min()) - 1) <= BOUNDARY_TOL:
            raise BoundaryError("reduced parameter lies on the boundary of the almost-real region")
    p = n[:-1] - n[1:]
    reduced_nu = SphericalParameter(nu - 1j * kappa * p.astype(float), ctx)
    if not reduced_nu.almost_real:
        raise PrecisionError("almost-real reduction failed")
    return reduced_nu, _character_of_coweight(rs, p)


# ---------------------------------------------------------------------------
# Central states


ATOM_CLASSES = ("tempered", "trivial", "asserted")


@dataclass(frozen=True, eq=False)
class CentralAtom:
    nu: SphericalParameter
    mass: float
    assert_positive_definite: bool = False


def atom_class(ctx, nu_reduced, asserted=False):
    """Which accepted parameter class the reduced parameter belongs to, or None."""
    rs = ctx.rs
    nu = nu_reduced.nu
    scale = 1.0 + float(np.max(np.abs(nu)))
    if np.max(np.abs(nu.real)) <= CLASS_TOL * scale:
        return "tempered"
    W = weyl_group(rs)
    if np.min(np.max(np.abs(W.mats @ nu - 2 * rs.rho_w), axis=1)) <= CLASS_TOL * scale:
        return "trivial"
    return "asserted" if asserted else None


@dataclass(frozen=True, eq=False)
class CentralState:
    ctx: QContext
    atoms: tuple
    reduced: tuple = field(default=(), repr=False)
    characters: tuple = field(default=(), repr=False)
    classes: tuple = field(default=(), repr=False)

    @classmethod
    def build(cls, ctx, atoms):
        atoms = tuple(
            a if isinstance(a, CentralAtom) else CentralAtom(SphericalParameter(a[0], ctx), float(a[1]), *a[2:])
            for a in atoms
        )
        if not atoms:
            raise ValueError("a central state needs at least one atom")
        reduced, chars, classes = [], [], []
        for i, a in enumerate(atoms):
            if not a.mass > 0:
                raise ValueError(f"atom {i} has non-positive mass {a.mass}")
            nu_r, chi = reduce_almost_real(ctx, a.nu)
            kind = atom_class(ctx, nu_r, a.assert_positive_definite)
            if kind is None:
                raise ValueError(
                    f"atom {i} is neither tempered nor trivial up to a coweight shift; "
                    "set assert_positive_definite to accept it"
                )
            reduced.append(nu_r)
            chars.append(chi)
            classes.append(kind)
        return cls(ctx, atoms, tuple(reduced), tuple(chars), tuple(classes))

    @property
    def components(self):
        out = {}
        for i, chi in enumerate(self.characters):
            out.setdefault(chi.center_index, []).append(i)
        return out

    @property
    def total_mass(self):
        return math.fsum(a.mass for a in self.atoms)

    def values(self, lams):
        """phi(lam) = sum_i m_i phi_q(nu_i, lam) from the unreduced parameters."""
        out = 0j
        for a in self.atoms:
            out = out + a.mass * phi_q_many(self.ctx, a.nu, lams)
        return out


def central_state_from_json(data):
    ctx = sl_context(int(data["N"]), float(data["q"]))
    atoms = []
    for a in data["atoms"]:
        nu = np.asarray(a["nu_re"], dtype=float) + 1j * np.asarray(a.get("nu_im", [0.0] * len(a["nu_re"])), dtype=float)
        atoms.append(CentralAtom(SphericalParameter(nu, ctx), float(a["mass"]), bool(a.get("assert_positive_definite", False))))
    return CentralState.build(ctx, atoms)


@dataclass(frozen=True)
class CentralDecomposition:
    components: dict            # center index -> list of atom indices
    base_values: tuple          # phi_one(nu_i', 2 rho)
    norm: float
    component_norms: dict
    c_empirical: float
    norm_inequality: bool
    residual_by_shell: tuple    # (shell_lo, shell_hi, max relative residual)
    max_residual: float

    def to_json(self):
        return {
            "components": [
                {"center_index": k, "atoms": v, "norm": self.component_norms[k]}
                for k, v in sorted(self.components.items())
            ],
            "base_values": [float(b) for b in self.base_values],
            "norm": self.norm,
            "sum_component_norms": math.fsum(self.component_norms.values()),
            "C_empirical": self.c_empirical,
            "norm_inequality": self.norm_inequality,
            "max_residual": self.max_residual,
            "residual": [list(r) for r in self.residual_by_shell],
        }


def decompose_central_state(state, horizon=30.0):
    """Split a central state into character components and verify pointwise reconstruction."""
    ctx = state.ctx
    rs = ctx.rs
    rho2 = 2 * rs.rho_w
    base = []
    for i, nu_r in enumerate(state.reduced):
        b = phi_one(ctx, nu_r, rho2)
        if not (b.real > BASE_POSITIVITY and abs(b.imag) <= 1e-9 * max(1.0, abs(b))):
            raise ZeroDenominatorError(
                f"atom {i}: phi_one at 2 rho is {b:.6g}, not safely positive", atom_index=i
            )
        base.append(float(b.real))

    comps = state.components
    masses = [a.mass for a in state.atoms]
    norm = state.total_mass
    comp_norms = {k: math.fsum(masses[i] / base[i] for i in idx) for k, idx in comps.items()}
    c_emp = max(1.0 / b for b in base)
    # the inequality is checked in exact rational arithmetic on the computed floats
    f_norm = sum((Fraction(m) for m in masses), Fraction(0))
    f_sum = sum((Fraction(m) / Fraction(b) for m, b in zip(masses, base)), Fraction(0))
    f_c = max(Fraction(1) / Fraction(b) for b in base)
    inequality = f_norm <= f_sum <= f_c * f_norm

    lams = dominant_weights_in_ball(rs, horizon)
    arr = np.array(lams, dtype=np.int64).reshape(len(lams), rs.rank)
    direct = state.values(arr)
    recon = np.zeros(len(lams), dtype=complex)
    for k, idx in comps.items():
        chi_vals = state.characters[idx[0]].values(rs, arr)
        part = np.zeros(len(lams), dtype=complex)
        for i in idx:
            part += masses[i] * phi_one_many(ctx, state.reduced[i], 2 * arr + rho2) / base[i]
        recon += chi_vals * part
    rel = np.abs(direct - recon) / norm

    shells = {}
    for lam, r in zip(lams, rel):
        k = int(math.floor(math.sqrt(float(rs.norm2_exact(np.array(lam) + 1)))))
        shells[k] = max(shells.get(k, 0.0), float(r))
    table = tuple((float(k), float(k + 1), shells[k]) for k in sorted(shells))
    return CentralDecomposition(
        {k: list(v) for k, v in comps.items()},
        tuple(base),
        norm,
        comp_norms,
        c_emp,
        bool(inequality),
        table,
        float(rel.max()) if rel.size else 0.0,
    )


# ---------------------------------------------------------------------------
# Zero-locus grid


@dataclass(frozen=True)
class ZeroGridRow:
    nu: tuple
    abs_phi: float
    predicate: bool
    distance: float
    in_band: bool

    @property
    def agrees(self):
        return self.in_band or self.predicate == (self.abs_phi < BASE_POSITIVITY)


ZERO_GRID_COLUMNS = ("nu_re", "nu_im", "abs_phi_one_2rho", "predicate", "lattice_distance", "in_margin_band")


def zero_grid(ctx, n_points=1000, seed=0, periods=3):
    """Parameters straddling the zero lattice of the first simple coroot, with |phi_one(nu, 2 rho)|."""
    rs = ctx.rs
    rng = np.random.default_rng(seed)
    kap = float(ctx.kappa_alpha[0])
    rows = []
    for j in range(n_points):
        nu = np.zeros(rs.rank, dtype=complex)
        if rs.rank > 1:
            nu[1:] = rng.uniform(0.3, 1.5, size=rs.rank - 1)
        k = int(rng.integers(1, periods + 1)) * (1 if rng.random() < 0.5 else -1)
        mode = j % 4
        if mode == 0:
            z = 1j * k * kap
        elif mode == 1:
            r = kap * 10.0 ** rng.uniform(-12, -1)
            z = 1j * k * kap + r * np.exp(2j * np.pi * rng.random())
        elif mode == 2:
            z = 1j * rng.uniform(-(periods + 0.5), periods + 0.5) * kap
        else:
            z = rng.uniform(-0.5, 0.5) + 1j * rng.uniform(-(periods + 0.5), periods + 0.5) * kap
        nu[0] = z
        value = abs(phi_one(ctx, nu, 2 * rs.rho_w))
        dist = zero_lattice_distance(ctx, nu)
        rows.append(
            ZeroGridRow(
                tuple(complex(x) for x in nu),
                float(value),
                dist <= ZERO_TOL,
                dist,
                ZERO_TOL < dist < GENERIC_MARGIN * ctx.kappa,
            )
        )
    return rows
