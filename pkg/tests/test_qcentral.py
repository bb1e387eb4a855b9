"""q-spherical functions, the classical spherical function, reduction and central states."""

import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from howemoore.errors import ConfigurationError, ZeroDenominatorError
from howemoore.lie import build_root_system, dominant_weights_in_ball, weyl_group
from howemoore.qcentral import (
    CentralAtom,
    CentralState,
    QContext,
    SphericalParameter,
    central_state_from_json,
    decompose_central_state,
    entire_alt_quotient,
    is_generic,
    phi_one,
    phi_q,
    reduce_almost_real,
    relation_check,
    richardson_limit,
    sl_context,
    zero_grid,
    zero_locus_predicate,
)


def mp_phi_one(ctx, nu, mu, dps=60):
    """Independent high-precision evaluation of the generic quotient formula."""
    rs = ctx.rs
    with mp.workdps(dps):
        L = mp.log(mp.mpf(repr(ctx.q)))
        G = [[mp.mpf(g.numerator) / g.denominator for g in row] for row in rs.weight_gram]
        r = rs.rank

        def E(x, y):
            total = mp.mpc(0)
            for M, s in zip(weyl_group(rs).mats, weyl_group(rs).signs):
                wx = [sum(int(M[i, j]) * x[j] for j in range(r)) for i in range(r)]
                total += int(s) * mp.exp(L * sum(wx[i] * G[i][j] * y[j] for i in range(r) for j in range(r)))
            den = mp.mpf(1)
            for a in rs.root_pair:
                den *= sum(int(a[i]) * x[i] for i in range(r)) * sum(int(a[i]) * y[i] for i in range(r))
            return total / den

        x = [mp.mpc(complex(v).real, complex(v).imag) / 2 for v in nu]
        y = [mp.mpc(complex(v).real, complex(v).imag) for v in mu]
        rho = [mp.mpf(1)] * r
        return complex(E(x, y) / E(rho, y))


def q_int(n, q):
    return (q**n - q**-n) / (q - 1 / q)


# ---------------------------------------------------------------------------
# Context and parameters


@pytest.mark.parametrize("q", [0.0, 1.0, -0.3, 1.5])
def test_q_range(q):
    with pytest.raises(ValueError):
        sl_context(2, q)


def test_context_scales():
    ctx = sl_context(3, 0.5)
    assert ctx.kappa == pytest.approx(2 * math.pi / math.log(2))
    assert np.allclose(ctx.q_alpha, 0.5)
    assert ctx.N == 3
    b2 = QContext(build_root_system("B", 2), 0.5)
    assert sorted(set(np.round(b2.q_alpha, 12))) == [0.25, 0.5]


def test_almost_real_uses_absolute_value():
    ctx = sl_context(2, 0.5)
    k = ctx.kappa
    # (Im nu, alpha) = Im nu_1 for A1 with short roots of length^2 2
    assert SphericalParameter([0.4j * k], ctx).almost_real
    assert SphericalParameter([-0.9j * k], ctx).almost_real
    assert not SphericalParameter([1.1j * k], ctx).almost_real


# ---------------------------------------------------------------------------
# phi_q


@pytest.mark.parametrize("N", [2, 3, 4])
def test_phi_q_normalizations(N, rng):
    ctx = sl_context(N, 0.6)
    rs = ctx.rs
    nu = rng.normal(size=rs.rank) + 1j * rng.normal(size=rs.rank)
    assert phi_q(ctx, nu, (0,) * rs.rank) == pytest.approx(1)
    for lam in dominant_weights_in_ball(rs, 5.0):
        assert phi_q(ctx, 2 * rs.rho_w, lam) == pytest.approx(1)


@pytest.mark.parametrize("n", range(0, 15))
def test_phi_q_a1_at_zero(n):
    ctx = sl_context(2, 0.5)
    assert phi_q(ctx, [0.0], (n,)) == pytest.approx((n + 1) / q_int(n + 1, 0.5), rel=1e-12)


def test_phi_q_periodic_and_weyl_invariant(rng):
    ctx = sl_context(3, 0.45)
    rs = ctx.rs
    nu = rng.normal(size=2) + 1j * rng.normal(size=2)
    lams = dominant_weights_in_ball(rs, 6.0)
    base = [phi_q(ctx, nu, l) for l in lams]
    for coroot in rs.roots_w:   # simply laced: coroots have the same coordinates as roots
        shifted = nu + 1j * ctx.kappa * coroot
        assert np.allclose([phi_q(ctx, shifted, l) for l in lams], base, rtol=1e-9, atol=1e-9)
    for M in weyl_group(rs).mats:
        assert np.allclose([phi_q(ctx, M @ nu, l) for l in lams], base, rtol=1e-9, atol=1e-9)


# ---------------------------------------------------------------------------
# phi_one and the entire quotient


@pytest.mark.parametrize("N", [2, 3, 4])
def test_phi_one_normalizations(N, rng):
    ctx = sl_context(N, 0.5)
    rs = ctx.rs
    nu = rng.normal(size=rs.rank) + 1j * rng.normal(size=rs.rank)
    assert phi_one(ctx, nu, np.zeros(rs.rank)) == 1
    assert phi_one(ctx, 2 * rs.rho_w, 2 * rs.rho_w) == pytest.approx(1, abs=1e-12)


def test_phi_one_a1_closed_form():
    ctx = sl_context(2, 0.5)
    L = math.log(0.5)
    for c in [3.0, 1.0, 0.5, 1e-3, 1e-6, 0.0]:
        # nu = c varpi, mu = 2 rho: (nu/2, 2rho) = c/2 and (rho, 2rho) = 1
        expected = (math.sinh(c * L / 2) / (c / 2) if c else L) / math.sinh(L)
        assert phi_one(ctx, [c], [2.0]) == pytest.approx(expected, rel=1e-11)


@pytest.mark.parametrize("nu", [[2.0, 3.0], [0.7, 0.2], [4.0, 0.5]])
def test_phi_one_real_dominant_positive(nu):
    ctx = sl_context(3, 0.5)
    v = phi_one(ctx, nu, 2 * ctx.rs.rho_w)
    assert abs(v.imag) < 1e-12 and v.real > 0


@pytest.mark.parametrize("nu", [
    [1e-5, 2e-5], [1e-5, 0.4], [0.3, 1e-7 + 0.2j], [0.2j, 0.35j], [1.0, -1.0 + 1e-9], [0.6 + 0.1j, 1.1 - 0.3j],
])
@pytest.mark.parametrize("lam", [(0, 0), (3, 1), (7, 5)])
def test_phi_one_against_high_precision(nu, lam):
    ctx = sl_context(3, 0.5)
    mu = 2 * np.array(lam) + 2 * ctx.rs.rho_w
    nu = np.array(nu, dtype=complex)
    got = phi_one(ctx, nu, mu)
    ref = mp_phi_one(ctx, nu if np.all(np.abs(ctx.rs.root_pair @ nu) > 0) else nu + 1e-30, mu)
    assert abs(got - ref) <= 1e-10 * max(1.0, abs(ref))


def test_entire_quotient_symmetric_and_matches_extrapolation(rng):
    rs = build_root_system("A", 2)
    L = math.log(0.7)
    for _ in range(5):
        x = rng.normal(size=2) + 0.3j * rng.normal(size=2)
        y = rng.normal(size=2)
        assert entire_alt_quotient(rs, L, x, y) == pytest.approx(entire_alt_quotient(rs, L, y, x), rel=1e-10)
    # on a wall the exact formula agrees with the extrapolated limit
    x = np.array([0.0, 0.8])
    y = np.array([1.3, 0.4])
    assert entire_alt_quotient(rs, L, x, y) == pytest.approx(richardson_limit(rs, L, x, y), rel=1e-6)


@settings(max_examples=25, deadline=None)
@given(st.floats(0.05, 0.95), st.floats(0.05, 0.95), st.floats(0.2, 0.8))
def test_self_adjoint_base_value_positive(a, b, q):
    # imaginary nu is almost real and self-adjoint: nu = -conj(nu)
    ctx = sl_context(3, q)
    k = ctx.kappa
    nu = 1j * k * np.array([a, b]) / 2
    v = phi_one(ctx, nu, 2 * ctx.rs.rho_w)
    assert abs(v.imag) < 1e-9 and v.real > 0


# ---------------------------------------------------------------------------
# The relation between the two spherical functions


def test_relation_examples():
    ctx = sl_context(2, 0.5)
    assert relation_check(ctx, [2.6], (2,)) < 1e-9
    assert relation_check(ctx, [2.6], (0,)) < 1e-14
    ctx3 = sl_context(3, 0.7)
    rng = np.random.default_rng(7)
    nu = rng.uniform(-1, 1, 2) + 1j * rng.uniform(-0.3, 0.3, 2) * ctx3.kappa
    assert relation_check(ctx3, nu, (1, 0)) < 1e-9


@pytest.mark.parametrize("N,q", [(2, 0.3), (2, 0.9), (3, 0.5), (4, 0.6)])
def test_relation_random(N, q, rng):
    ctx = sl_context(N, q)
    checked = 0
    while checked < 15:
        nu = rng.uniform(-2, 2, N - 1) + 1j * rng.uniform(-0.5, 0.5, N - 1) * ctx.kappa
        if not is_generic(ctx, nu):
            continue
        lam = tuple(int(x) for x in rng.integers(0, 5, N - 1))
        assert relation_check(ctx, nu, lam) <= 1e-9 * (1 + abs(phi_q(ctx, nu, lam)))
        checked += 1


def test_relation_rejects_non_generic():
    ctx = sl_context(2, 0.5)
    with pytest.raises(ValueError):
        relation_check(ctx, [1j * ctx.kappa], (1,))
    with pytest.raises(ValueError):
        relation_check(ctx, [0.0], (1,))


# ---------------------------------------------------------------------------
# Zero locus


def test_zero_predicate_examples():
    ctx = sl_context(2, 0.5)
    assert not zero_locus_predicate(ctx, [1.7])
    nu = [1j * ctx.kappa]
    assert zero_locus_predicate(ctx, nu)
    assert abs(phi_one(ctx, nu, 2 * ctx.rs.rho_w)) < 1e-8
    assert not zero_locus_predicate(ctx, [2.0])
    assert phi_one(ctx, [2.0], [2.0]) == pytest.approx(1)


def test_zero_predicate_a2_on_lattice():
    ctx = sl_context(3, 0.4)
    # (nu, alpha_1^vee) = 2 i kappa and (nu, alpha_2^vee) = 0.9
    nu = np.array([2j * ctx.kappa, 0.9])
    assert zero_locus_predicate(ctx, nu)
    assert abs(phi_one(ctx, nu, 2 * ctx.rs.rho_w)) < 1e-8


@pytest.mark.parametrize("N,q,points", [(2, 0.5, 400), (3, 0.3, 120)])
def test_zero_grid_agrees(N, q, points):
    rows = zero_grid(sl_context(N, q), points, seed=11)
    assert all(r.agrees for r in rows)
    assert sum(r.predicate for r in rows) > points // 8


# ---------------------------------------------------------------------------
# Almost-real reduction


def test_reduce_trivial_when_almost_real():
    ctx = sl_context(3, 0.5)
    nu = np.array([0.4 + 0.3j * ctx.kappa, 1.0 - 0.2j * ctx.kappa])
    reduced, chi = reduce_almost_real(ctx, nu)
    assert chi.trivial
    assert np.allclose(reduced.nu, nu)


def test_reduce_a1_shift():
    ctx = sl_context(2, 0.5)
    r = 0.8
    nu = np.array([2 * r + 1j * ctx.kappa])   # r alpha plus i kappa varpi
    reduced, chi = reduce_almost_real(ctx, nu)
    assert reduced.nu == pytest.approx(np.array([2 * r]))
    assert [chi.value(ctx.rs, (n,)) for n in range(4)] == pytest.approx([1, -1, 1, -1])


def test_reduce_a2_shift_order_three():
    ctx = sl_context(3, 0.5)
    nu = np.array([0.5, 0.7]) + 1j * ctx.kappa * np.array([1.0, 0.0]) + 0.1j * np.array([1, 2])
    reduced, chi = reduce_almost_real(ctx, nu)
    assert reduced.almost_real
    value = chi.value(ctx.rs, (1, 0))
    assert value**3 == pytest.approx(1)
    assert value != pytest.approx(1)
    # the character only sees the class of lam in P/Q
    assert chi.value(ctx.rs, (1, 1)) == pytest.approx(1)


@settings(max_examples=40, deadline=None)
@given(st.lists(st.floats(-3, 3), min_size=3, max_size=3), st.lists(st.floats(-2.5, 2.5), min_size=3, max_size=3))
def test_reduction_reproduces_phi_q(re, im):
    ctx = sl_context(4, 0.5)
    nu = np.array(re) + 1j * ctx.kappa * np.array(im)
    reduced, chi = reduce_almost_real(ctx, nu)
    assert reduced.almost_real
    for lam in [(1, 0, 0), (0, 1, 0), (1, 1, 2)]:
        lhs = phi_q(ctx, nu, lam)
        rhs = chi.value(ctx.rs, lam) * phi_q(ctx, reduced.nu, lam)
        assert abs(lhs - rhs) <= 1e-9 * (1 + abs(lhs))


def test_reduce_requires_type_a():
    ctx = QContext(build_root_system("B", 2), 0.5)
    with pytest.raises(ConfigurationError):
        reduce_almost_real(ctx, [0.1, 0.2])


def test_canonical_form_preserves_phi_q(rng):
    ctx = sl_context(3, 0.5)
    for _ in range(5):
        nu = rng.normal(size=2) + 1j * ctx.kappa * rng.uniform(-3, 3, 2)
        can = SphericalParameter(nu, ctx).canonical()
        y = can.nu.imag / ctx.kappa
        assert np.all(y >= -1e-9) and ctx.rs.root_pair[-1] @ y <= 1 + 1e-9
        for lam in [(1, 0), (2, 1)]:
            assert phi_q(ctx, can.nu, lam) == pytest.approx(phi_q(ctx, nu, lam), rel=1e-9, abs=1e-12)


# ---------------------------------------------------------------------------
# Central states


def test_single_atom_state():
    ctx = sl_context(3, 0.5)
    nu = 1j * ctx.kappa * np.array([0.2, 0.3])
    state = CentralState.build(ctx, [(nu, 2.0)])
    dec = decompose_central_state(state, horizon=20)
    assert list(dec.components) == [0]
    b = phi_one(ctx, nu, 2 * ctx.rs.rho_w).real
    assert dec.component_norms[0] == pytest.approx(2.0 / b)
    assert dec.max_residual < 1e-9 and dec.norm_inequality


def test_trivial_atom_state_is_constant():
    ctx = sl_context(2, 0.5)
    state = CentralState.build(ctx, [(2 * ctx.rs.rho_w, 1.0)])
    assert state.classes == ("trivial",)
    lams = np.array(dominant_weights_in_ball(ctx.rs, 20.0))
    assert np.allclose(state.values(lams), 1)
    dec = decompose_central_state(state, horizon=20)
    assert dec.max_residual < 1e-9
    assert dec.base_values[0] == pytest.approx(1)


def test_two_component_state():
    ctx = sl_context(2, 0.5)
    k = ctx.kappa
    state = CentralState.build(ctx, [([0.3j * k], 0.6), ([0.4j * k + 1j * k], 0.4)])
    dec = decompose_central_state(state, horizon=25)
    assert sorted(dec.components) == [0, 1]
    assert dec.max_residual < 1e-9
    assert dec.norm <= sum(dec.component_norms.values()) <= dec.c_empirical * dec.norm


def test_state_rejects_unclassified_atom():
    ctx = sl_context(3, 0.5)
    with pytest.raises(ValueError):
        CentralState.build(ctx, [([0.5, 0.7], 1.0)])
    state = CentralState.build(ctx, [CentralAtom(SphericalParameter([0.5, 0.7], ctx), 1.0, True)])
    assert state.classes == ("asserted",)


def test_state_rejects_bad_masses():
    ctx = sl_context(2, 0.5)
    with pytest.raises(ValueError):
        CentralState.build(ctx, [([0.3j], -1.0)])
    with pytest.raises(ValueError):
        CentralState.build(ctx, [])


def test_zero_denominator_names_atom():
    ctx = sl_context(3, 0.5)
    data = {"N": 3, "q": 0.5, "atoms": [
        {"nu_re": [0, 0], "nu_im": [1.0, 0.5], "mass": 0.5},
        {"nu_re": [0.3, 0], "nu_im": [0.5 * ctx.kappa, 0], "mass": 0.5, "assert_positive_definite": True},
    ]}
    with pytest.raises(ZeroDenominatorError) as info:
        decompose_central_state(central_state_from_json(data))
    assert info.value.atom_index == 1


def test_decomposition_json_fields():
    ctx = sl_context(2, 0.5)
    dec = decompose_central_state(CentralState.build(ctx, [([0.2j * ctx.kappa], 1.0)]), horizon=10)
    data = dec.to_json()
    assert set(data) >= {"components", "norm", "C_empirical", "norm_inequality", "residual", "max_residual"}
